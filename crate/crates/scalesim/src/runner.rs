//! End-to-end orchestration of a run config: sweep every experiment, fit,
//! analyze, and write all artifacts into the output directory.
//!
//! Artifacts for a config with experiments `a`, `b`:
//!   <out>/a.csv, <out>/b.csv   per-experiment curves (or .json)
//!   <out>/report.md            combined scaling report (or .csv/.json)
//!   <out>/scaling.svg          combined log-log plot with fitted lines
//!   <out>/analysis.json        fits, minima, knees, speedups, allocations
//!
//! Everything is derived deterministically from the config (noise included,
//! via per-point seeding), so repeated runs produce byte-identical files.

use std::path::PathBuf;

use serde::Serialize;

use crate::config::{ReportFormat, RunConfig};
use crate::curve_io::emit_curve;
use crate::error::{Error, Result};
use crate::plot::emit_plot;
use crate::scaling::{
    allocate_for_target, detect_knee, fit_power_law, make_report, speedup, AllocationPlan,
    PowerLawFit, ReportEntry,
};
use crate::simulator::find_min_time;

/// Paths of everything a run wrote, plus any non-fatal warnings.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub out_dir: PathBuf,
    pub curve_paths: Vec<PathBuf>,
    pub report_path: PathBuf,
    pub plot_path: PathBuf,
    pub analysis_path: PathBuf,
    pub warnings: Vec<String>,
    pub summary: RunSummary,
}

/// The analysis summary, serialized to `analysis.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub knee_threshold: f64,
    pub experiments: Vec<ExperimentAnalysis>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentAnalysis {
    pub label: String,
    pub model: String,
    pub fit: PowerLawFit,
    pub min_n_gpus: u32,
    pub min_epoch_time_s: f64,
    /// Smallest grid point from which scaling stays below the threshold;
    /// absent when the curve never degrades that far.
    pub knee_n_gpus: Option<u32>,
    pub speedup_from_n: u32,
    pub speedup_to_n: u32,
    pub speedup: f64,
    pub allocations: Vec<TargetPlan>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TargetPlan {
    pub target_epoch_time_s: f64,
    #[serde(flatten)]
    pub plan: AllocationPlan,
}

/// Validate, sweep, analyze and write every artifact. Fails fast with the
/// experiment label attached to any per-experiment error.
pub fn run(config: &RunConfig) -> Result<RunArtifacts> {
    config.validate()?;
    let out_dir = config.output.dir.clone();
    std::fs::create_dir_all(&out_dir).map_err(|source| Error::Write {
        path: out_dir.clone(),
        source,
    })?;

    let mut curve_paths = Vec::new();
    let mut curves = Vec::new();
    let mut fits = Vec::new();
    let mut entries = Vec::new();
    let mut analyses = Vec::new();

    for exp in &config.experiments {
        let in_exp = |e: Error| Error::in_experiment(&exp.label, e);

        let curve = exp.sweep().map_err(in_exp)?;
        let path = out_dir.join(format!(
            "{}.{}",
            exp.label,
            config.output.curve_format.extension()
        ));
        emit_curve(&curve, &path, config.output.curve_format).map_err(in_exp)?;
        curve_paths.push(path);

        let fit = fit_power_law(&curve).map_err(in_exp)?;
        let knee_n_gpus = detect_knee(&curve, config.analysis.knee_threshold).map_err(in_exp)?;
        let (min_n_gpus, min_epoch_time_s) = find_min_time(&curve);

        let baseline = config
            .analysis
            .baseline_n
            .filter(|&n| curve.time_at(n).is_some())
            .unwrap_or(curve.points()[0].n_gpus);
        let speedup_value = speedup(&curve, baseline, min_n_gpus).map_err(in_exp)?;

        let n_max = curve.points()[curve.len() - 1].n_gpus;
        let allocations = config
            .analysis
            .allocation_targets
            .iter()
            .map(|&target| {
                allocate_for_target(&fit, target, n_max).map(|plan| TargetPlan {
                    target_epoch_time_s: target,
                    plan,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map_err(in_exp)?;

        analyses.push(ExperimentAnalysis {
            label: exp.label.clone(),
            model: exp.workload.name.clone(),
            fit,
            min_n_gpus,
            min_epoch_time_s,
            knee_n_gpus,
            speedup_from_n: baseline,
            speedup_to_n: min_n_gpus,
            speedup: speedup_value,
            allocations,
        });
        entries.push(ReportEntry {
            model: exp.workload.name.clone(),
            param_count: exp.workload.param_count,
            fit,
        });
        curves.push(curve);
        fits.push(fit);
    }

    let report = make_report(entries);
    let report_path = out_dir.join(format!("report.{}", config.output.report_format.extension()));
    let report_text = match config.output.report_format {
        ReportFormat::Md => report.to_markdown(),
        ReportFormat::Csv => report.to_csv(),
        ReportFormat::Json => report.to_json(),
    };
    std::fs::write(&report_path, report_text).map_err(|source| Error::Write {
        path: report_path.clone(),
        source,
    })?;

    let plot_path = out_dir.join("scaling.svg");
    emit_plot(&curves, &fits, &plot_path)?;

    let summary = RunSummary {
        knee_threshold: config.analysis.knee_threshold,
        experiments: analyses,
    };
    let analysis_path = out_dir.join("analysis.json");
    let mut summary_json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    summary_json.push('\n');
    std::fs::write(&analysis_path, summary_json).map_err(|source| Error::Write {
        path: analysis_path.clone(),
        source,
    })?;

    Ok(RunArtifacts {
        out_dir,
        curve_paths,
        report_path,
        plot_path,
        analysis_path,
        warnings: config.warnings(),
        summary,
    })
}
