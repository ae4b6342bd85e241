//! The full pipeline in one call: sweep every experiment, fit, analyze, and
//! write curves, report, plot and analysis summary to disk.
//!
//! Run with: `cargo run --example emit_artifacts`
//! Artifacts land in `target/scalesim-demo/`.

use scalesim::{presets, run};

fn main() -> Result<(), scalesim::Error> {
    let mut config = presets::paper_grid_config();
    config.output.dir = "target/scalesim-demo".into();

    let artifacts = run(&config)?;
    for w in &artifacts.warnings {
        eprintln!("warning: {w}");
    }

    println!("analysis summary:");
    for a in &artifacts.summary.experiments {
        println!(
            "  {:<8} beta = {:.3}  R2 = {:.3}  min {:.3} s at {} GPUs  speedup {}->{} = {:.2}x",
            a.label,
            a.fit.beta,
            a.fit.r_squared,
            a.min_epoch_time_s,
            a.min_n_gpus,
            a.speedup_from_n,
            a.speedup_to_n,
            a.speedup,
        );
        for alloc in &a.allocations {
            println!(
                "    target {:>5} s -> {:>3} GPUs, predicted {:.3} s{}",
                alloc.target_epoch_time_s,
                alloc.plan.n_gpus,
                alloc.plan.predicted_epoch_time,
                if alloc.plan.unreachable { " (unreachable)" } else { "" },
            );
        }
    }

    println!("\nfiles:");
    for p in artifacts
        .curve_paths
        .iter()
        .chain([&artifacts.report_path, &artifacts.plot_path, &artifacts.analysis_path])
    {
        println!("  {}", p.display());
    }
    println!("\nopen {} in a browser for the log-log plot", artifacts.plot_path.display());
    Ok(())
}
