//! Measurement noise and how well the fitter shrugs it off.
//!
//! Noise is multiplicative log-normal, seeded per (label, n_gpus): re-running
//! a sweep reproduces it exactly, and adding grid points never changes the
//! noise at existing ones.
//!
//! Run with: `cargo run --example noisy_sweeps`

use scalesim::{fit_power_law, presets};

fn main() -> Result<(), scalesim::Error> {
    let mut experiment = presets::nnconv();
    experiment.noise_sigma = 0.05;

    let clean_fit = fit_power_law(&presets::nnconv().sweep()?)?;
    println!(
        "noise-free fit: beta = {:.4}, R2 = {:.4}\n",
        clean_fit.beta, clean_fit.r_squared
    );

    println!("{:>6} {:>10} {:>10}", "seed", "beta", "R2");
    let mut betas = Vec::new();
    for seed in 0..10 {
        experiment.seed = seed;
        let fit = fit_power_law(&experiment.sweep()?)?;
        println!("{seed:>6} {:>10.4} {:>10.4}", fit.beta, fit.r_squared);
        betas.push(fit.beta);
    }

    let mean = betas.iter().sum::<f64>() / betas.len() as f64;
    let spread = betas
        .iter()
        .map(|b| (b - mean).powi(2))
        .sum::<f64>()
        .sqrt()
        / (betas.len() as f64).sqrt();
    println!("\nbeta across seeds: mean {mean:.4}, rms spread {spread:.4}");

    experiment.seed = 3;
    let once = experiment.sweep()?;
    let twice = experiment.sweep()?;
    assert_eq!(once, twice);
    println!("re-sweeping seed 3 reproduced every point bit for bit");
    Ok(())
}
