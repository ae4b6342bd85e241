//! Pick the smallest GPU allocation that meets a target epoch time, and see
//! what it costs in total GPU-seconds.
//!
//! Run with: `cargo run --example allocate_budget`

use scalesim::{allocate_for_target, fit_power_law, presets};

fn main() -> Result<(), scalesim::Error> {
    let preset = presets::dimenet();
    let curve = preset.sweep()?;
    let fit = fit_power_law(&curve)?;
    let n_max = *preset.gpu_counts.last().unwrap();

    println!(
        "DimeNet law: t(n) = {:.1} * n^(-{:.3}), planning within 1..={n_max} GPUs\n",
        fit.alpha, fit.beta
    );
    println!(
        "{:>10} {:>8} {:>12} {:>10} {:>12} {:>14}",
        "target (s)", "n_gpus", "pred. t (s)", "speedup", "efficiency", "gpu-s/epoch"
    );
    for target in [60.0, 20.0, 10.0, 5.0, 1.0] {
        let plan = allocate_for_target(&fit, target, n_max)?;
        println!(
            "{:>10} {:>8} {:>12.3} {:>9.1}x {:>11.1}% {:>14.0}{}",
            target,
            plan.n_gpus,
            plan.predicted_epoch_time,
            plan.speedup_vs_baseline,
            plan.efficiency * 100.0,
            plan.gpu_seconds_per_epoch,
            if plan.unreachable { "  (unreachable)" } else { "" },
        );
    }

    println!("\nHalving the target epoch time costs a factor {:.2} in GPUs", 2f64.powf(1.0 / fit.beta));
    println!("and a factor {:.2} in GPU-seconds: sublinear scaling is never free.", 2f64.powf(1.0 / fit.beta - 1.0));
    Ok(())
}
