//! Thin CLI over the scalesim library. Every experiment is driven by a JSON
//! config; no analysis step requires a code change.
//!
//! Exit codes: 0 success, 1 validation error, 2 I/O error, 3 analysis error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use scalesim::scaling::ReportEntry;
use scalesim::{
    allocate_for_target, detect_knee, fit_power_law, load_config, load_curve_csv, make_report,
    speedup, truncate_at_min, CurveFormat, Error, PowerLawFit, ReportFormat, RunConfig,
    ScalingCurve,
};

#[derive(Parser)]
#[command(
    name = "scalesim",
    version,
    about = "Simulate data-parallel multi-GPU training time and fit scaling laws"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveFormatArg {
    Csv,
    Json,
}

impl From<CurveFormatArg> for CurveFormat {
    fn from(f: CurveFormatArg) -> Self {
        match f {
            CurveFormatArg::Csv => CurveFormat::Csv,
            CurveFormatArg::Json => CurveFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormatArg {
    Md,
    Csv,
    Json,
}

impl From<ReportFormatArg> for ReportFormat {
    fn from(f: ReportFormatArg) -> Self {
        match f {
            ReportFormatArg::Md => ReportFormat::Md,
            ReportFormatArg::Csv => ReportFormat::Csv,
            ReportFormatArg::Json => ReportFormat::Json,
        }
    }
}

#[derive(Args)]
struct ConfigArgs {
    /// Experiment config (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to the config's output.dir
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override every experiment's noise seed
    #[arg(long)]
    seed: Option<u64>,
}

impl ConfigArgs {
    fn load(&self) -> Result<RunConfig, Error> {
        let mut config = load_config(&self.config)?;
        if let Some(dir) = &self.out {
            config.output.dir = dir.clone();
        }
        if let Some(seed) = self.seed {
            for e in &mut config.experiments {
                e.seed = seed;
            }
        }
        for w in config.warnings() {
            eprintln!("warning: {w}");
        }
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate every experiment in a config and write one curve file each
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        /// Curve file format
        #[arg(long, value_enum)]
        format: Option<CurveFormatArg>,
    },
    /// Fit t = alpha * n^(-beta) to a measured curve (CSV)
    Fit {
        /// Curve CSV file with header `n_gpus,epoch_time_s`
        #[arg(long)]
        curve: PathBuf,
        /// Output format for the fit parameters
        #[arg(long, value_enum, default_value = "md")]
        format: ReportFormatArg,
        /// Drop points after the curve's minimum before fitting
        #[arg(long)]
        truncate_at_min: bool,
    },
    /// Measured speedup t(from) / t(to) between two grid points of a curve
    Speedup {
        #[arg(long)]
        curve: PathBuf,
        /// Baseline GPU count
        #[arg(long)]
        from: u32,
        /// Comparison GPU count
        #[arg(long)]
        to: u32,
    },
    /// Smallest GPU count from which per-doubling speedup stays below a threshold
    Knee {
        #[arg(long)]
        curve: PathBuf,
        /// Minimum useful per-doubling speedup (> 1)
        #[arg(long, default_value_t = 1.25)]
        threshold: f64,
    },
    /// Recommend the smallest GPU count meeting a target epoch time
    Allocate {
        #[arg(long)]
        curve: PathBuf,
        /// Target epoch time in seconds
        #[arg(long)]
        target: f64,
        /// Largest allocation worth considering; defaults to the curve's last point
        #[arg(long)]
        max_gpus: Option<u32>,
        /// Drop points after the curve's minimum before fitting
        #[arg(long)]
        truncate_at_min: bool,
    },
    /// Sweep + fit every experiment and print the scaling report
    Report {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum)]
        format: Option<ReportFormatArg>,
    },
    /// Plot curves (from a config sweep or curve CSVs) with fitted lines
    Plot {
        /// Experiment config to sweep and plot
        #[arg(long, conflicts_with = "curve")]
        config: Option<PathBuf>,
        /// Measured curve CSV(s); repeat for several series
        #[arg(long = "curve")]
        curve: Vec<PathBuf>,
        /// Output directory for scaling.svg
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Full pipeline: sweep, fit, knee, allocate, report, plot, analysis
    Run {
        #[command(flatten)]
        config: ConfigArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            // usage mistakes are validation failures, exit 1 like any other
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // every variant inlines its source in Display, no chain walk needed
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<(), Error> {
    match command {
        Command::Sweep { config, format } => {
            let mut cfg = config.load()?;
            if let Some(f) = format {
                cfg.output.curve_format = f.into();
            }
            std::fs::create_dir_all(&cfg.output.dir).map_err(|source| Error::Write {
                path: cfg.output.dir.clone(),
                source,
            })?;
            for exp in &cfg.experiments {
                let curve = exp
                    .sweep()
                    .map_err(|e| Error::in_experiment(&exp.label, e))?;
                let path = cfg
                    .output
                    .dir
                    .join(format!("{}.{}", exp.label, cfg.output.curve_format.extension()));
                scalesim::emit_curve(&curve, &path, cfg.output.curve_format)?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Fit {
            curve,
            format,
            truncate_at_min: truncate,
        } => {
            let mut curve = load_curve_csv(&curve)?;
            if truncate {
                curve = truncate_at_min(&curve);
            }
            let fit = fit_power_law(&curve)?;
            print!("{}", render_fit(&curve, &fit, format.into()));
            Ok(())
        }
        Command::Speedup { curve, from, to } => {
            let curve = load_curve_csv(&curve)?;
            println!("{}", speedup(&curve, from, to)?);
            Ok(())
        }
        Command::Knee { curve, threshold } => {
            let curve = load_curve_csv(&curve)?;
            match detect_knee(&curve, threshold)? {
                Some(n) => println!("{n}"),
                None => println!("none"),
            }
            Ok(())
        }
        Command::Allocate {
            curve,
            target,
            max_gpus,
            truncate_at_min: truncate,
        } => {
            let mut curve = load_curve_csv(&curve)?;
            if truncate {
                curve = truncate_at_min(&curve);
            }
            let n_max =
                max_gpus.unwrap_or_else(|| curve.points()[curve.len() - 1].n_gpus);
            let fit = fit_power_law(&curve)?;
            let plan = allocate_for_target(&fit, target, n_max)?;
            println!("n_gpus = {}", plan.n_gpus);
            println!("predicted_epoch_time_s = {}", plan.predicted_epoch_time);
            println!("speedup_vs_1_gpu = {:.3}", plan.speedup_vs_baseline);
            println!("efficiency = {:.3}", plan.efficiency);
            println!("gpu_seconds_per_epoch = {:.3}", plan.gpu_seconds_per_epoch);
            if plan.unreachable {
                println!("unreachable: even {n_max} GPUs miss the target");
            }
            Ok(())
        }
        Command::Report { config, format } => {
            let mut cfg = config.load()?;
            if let Some(f) = format {
                cfg.output.report_format = f.into();
            }
            let mut entries = Vec::new();
            for exp in &cfg.experiments {
                let curve = exp
                    .sweep()
                    .map_err(|e| Error::in_experiment(&exp.label, e))?;
                let fit =
                    fit_power_law(&curve).map_err(|e| Error::in_experiment(&exp.label, e))?;
                entries.push(ReportEntry {
                    model: exp.workload.name.clone(),
                    param_count: exp.workload.param_count,
                    fit,
                });
            }
            let report = make_report(entries);
            let text = match cfg.output.report_format {
                ReportFormat::Md => report.to_markdown(),
                ReportFormat::Csv => report.to_csv(),
                ReportFormat::Json => report.to_json(),
            };
            print!("{text}");
            Ok(())
        }
        Command::Plot {
            config,
            curve,
            out,
            seed,
        } => {
            let (curves, fits, out_dir) = if let Some(config_path) = config {
                let args = ConfigArgs {
                    config: config_path,
                    out,
                    seed,
                };
                let cfg = args.load()?;
                let mut curves = Vec::new();
                let mut fits = Vec::new();
                for exp in &cfg.experiments {
                    let c = exp
                        .sweep()
                        .map_err(|e| Error::in_experiment(&exp.label, e))?;
                    fits.push(fit_power_law(&c).map_err(|e| Error::in_experiment(&exp.label, e))?);
                    curves.push(c);
                }
                (curves, fits, cfg.output.dir)
            } else {
                let mut curves = Vec::new();
                let mut fits = Vec::new();
                for path in &curve {
                    let c = load_curve_csv(path)?;
                    if c.len() >= 2 {
                        fits.push(fit_power_law(&c)?);
                    }
                    curves.push(c);
                }
                if fits.len() != curves.len() {
                    fits.clear(); // only draw fit lines when every curve has one
                }
                (curves, fits, out.unwrap_or_else(|| PathBuf::from(".")))
            };
            std::fs::create_dir_all(&out_dir).map_err(|source| Error::Write {
                path: out_dir.clone(),
                source,
            })?;
            let path = out_dir.join("scaling.svg");
            scalesim::emit_plot(&curves, &fits, &path)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Run { config } => {
            let cfg = config.load()?;
            let artifacts = scalesim::run(&cfg)?;
            for w in &artifacts.warnings {
                eprintln!("warning: {w}");
            }
            for a in &artifacts.summary.experiments {
                let knee = a
                    .knee_n_gpus
                    .map(|n| n.to_string())
                    .unwrap_or_else(|| "none".into());
                println!(
                    "{}: beta={:.2} r2={:.2} min={:.3}s@{} knee={} speedup {}->{} = {:.2}x",
                    a.label,
                    a.fit.beta,
                    a.fit.r_squared,
                    a.min_epoch_time_s,
                    a.min_n_gpus,
                    knee,
                    a.speedup_from_n,
                    a.speedup_to_n,
                    a.speedup,
                );
            }
            for p in artifacts
                .curve_paths
                .iter()
                .chain([&artifacts.report_path, &artifacts.plot_path, &artifacts.analysis_path])
            {
                println!("wrote {}", p.display());
            }
            Ok(())
        }
    }
}

fn render_fit(curve: &ScalingCurve, fit: &PowerLawFit, format: ReportFormat) -> String {
    match format {
        ReportFormat::Md => {
            let mut s = format!(
                "label = {}\nalpha = {}\nbeta = {}\nr_squared = {}\nn_points = {}\n",
                curve.label(),
                fit.alpha,
                fit.beta,
                fit.r_squared,
                fit.n_points
            );
            if fit.is_two_point() {
                s.push_str("note: two-point fit, the line is exact by construction\n");
            }
            s
        }
        ReportFormat::Csv => format!(
            "label,alpha,beta,r_squared,n_points\n{},{},{},{},{}\n",
            curve.label(),
            fit.alpha,
            fit.beta,
            fit.r_squared,
            fit.n_points
        ),
        ReportFormat::Json => {
            let v = serde_json::json!({
                "label": curve.label(),
                "alpha": fit.alpha,
                "beta": fit.beta,
                "r_squared": fit.r_squared,
                "n_points": fit.n_points,
            });
            let mut s = serde_json::to_string_pretty(&v).expect("fit serializes");
            s.push('\n');
            s
        }
    }
}
