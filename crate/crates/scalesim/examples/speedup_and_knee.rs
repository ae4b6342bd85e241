//! Quantify speedups and find the point of diminishing returns.
//!
//! Run with: `cargo run --example speedup_and_knee`

use scalesim::{detect_knee, find_min_time, predicted_speedup, presets, speedup, ScalingCurve};

fn main() -> Result<(), scalesim::Error> {
    const THRESHOLD: f64 = 1.25;

    println!("Measured speedups, baseline 2 GPUs -> best grid point:\n");
    for preset in presets::all() {
        let curve = preset.sweep()?;
        let (n_best, _) = find_min_time(&curve);
        let s = speedup(&curve, 2, n_best)?;
        let knee = detect_knee(&curve, THRESHOLD)?;
        println!(
            "  {:<8} {:>6.2}x at {:>3} GPUs   knee@{THRESHOLD}: {}",
            preset.workload.name,
            s,
            n_best,
            knee.map(|n| n.to_string()).unwrap_or_else(|| "none".into()),
        );
    }
    println!("\n(A knee of `none` means per-doubling gains never sank below the");
    println!("threshold for the rest of the grid; the trailing step-count drop");
    println!("from 3 to 2 steps between 364 and 416 GPUs counts as a strong gain.)");

    // the classic shape: clean halving, then a wall
    let flattening = ScalingCurve::from_pairs(
        "halving-then-flat",
        &[
            (2, 100.0),
            (4, 50.0),
            (8, 25.0),
            (16, 12.5),
            (32, 6.25),
            (64, 5.9),
            (128, 5.7),
        ],
    )?;
    println!("\nSynthetic halving-then-flat curve:");
    for threshold in [1.1, 1.3, 1.9] {
        let knee = detect_knee(&flattening, threshold)?;
        println!(
            "  threshold {threshold:>4}: knee at {}",
            knee.map(|n| n.to_string()).unwrap_or_else(|| "none".into())
        );
    }

    // what a fitted law says you would gain by scaling further
    let fit = scalesim::fit_power_law(&presets::dimenet().sweep()?)?;
    println!(
        "\nDimeNet law (beta = {:.3}) predicts {:.1}x from 2 -> 416 GPUs and {:.2}x per doubling.",
        fit.beta,
        predicted_speedup(&fit, 2, 416),
        predicted_speedup(&fit, 1, 2),
    );
    Ok(())
}
