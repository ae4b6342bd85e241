//! Fit t = alpha * n^(-beta) to simulated sweeps and to measured endpoint
//! data, and render the combined scaling report.
//!
//! Run with: `cargo run --example fit_scaling_law`

use scalesim::scaling::ReportEntry;
use scalesim::{fit_power_law, make_report, presets, r_squared_log, ScalingCurve};

fn main() -> Result<(), scalesim::Error> {
    println!("Full-grid fits of the calibrated presets:\n");
    let mut entries = Vec::new();
    for preset in presets::all() {
        let curve = preset.sweep()?;
        let fit = fit_power_law(&curve)?;
        println!(
            "  {:<8} alpha = {:8.2}  beta = {:.3}  R2 = {:.3}  ({} points)",
            preset.workload.name, fit.alpha, fit.beta, fit.r_squared, fit.n_points
        );
        entries.push(ReportEntry {
            model: preset.workload.name.clone(),
            param_count: preset.workload.param_count,
            fit,
        });
    }

    println!("\nScaling report (Markdown):\n");
    print!("{}", make_report(entries).to_markdown());

    // Two measured endpoints are enough to pin a line in log-log space;
    // r_squared_log can then score that line against richer data.
    println!("\nTwo-point fit from measured NNConv endpoints (27 s @ 2, 1.08 s @ 416):");
    let endpoints = ScalingCurve::from_pairs("nnconv-endpoints", &[(2, 27.0), (416, 1.08)])?;
    let endpoint_fit = fit_power_law(&endpoints)?;
    println!(
        "  beta = {:.4} (exact line, R2 = {} by construction)",
        endpoint_fit.beta, endpoint_fit.r_squared
    );

    let simulated = presets::nnconv().sweep()?;
    let scored = r_squared_log(&simulated, &endpoint_fit)?;
    println!(
        "  that line scores R2 = {:.3} against the full 10-point simulated curve",
        scored
    );
    Ok(())
}
