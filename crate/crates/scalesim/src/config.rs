//! Run configuration: a JSON file describing experiments, analysis knobs and
//! output layout, so new experiments need a config edit and never a code
//! change.
//!
//! Top-level keys: `experiments`, `analysis`, `output`. See the repository
//! README for the full schema.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulator::ExperimentSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiments: Vec<ExperimentSpec>,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Per-doubling speedup below which returns count as diminishing.
    #[serde(default = "default_knee_threshold")]
    pub knee_threshold: f64,
    /// Epoch-time targets to plan allocations for, in seconds.
    #[serde(default)]
    pub allocation_targets: Vec<f64>,
    /// Baseline GPU count for reported speedups. Falls back to each
    /// experiment's first grid point when unset or absent from its grid.
    #[serde(default)]
    pub baseline_n: Option<u32>,
}

fn default_knee_threshold() -> f64 {
    1.25
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            knee_threshold: default_knee_threshold(),
            allocation_targets: Vec::new(),
            baseline_n: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Directory all artifacts are written into.
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub curve_format: CurveFormat,
    #[serde(default)]
    pub report_format: ReportFormat,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: default_out_dir(),
            curve_format: CurveFormat::default(),
            report_format: ReportFormat::default(),
        }
    }
}

/// On-disk format for emitted curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveFormat {
    #[default]
    Csv,
    Json,
}

impl CurveFormat {
    pub fn extension(self) -> &'static str {
        match self {
            CurveFormat::Csv => "csv",
            CurveFormat::Json => "json",
        }
    }
}

impl fmt::Display for CurveFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for CurveFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(CurveFormat::Csv),
            "json" => Ok(CurveFormat::Json),
            other => Err(format!("unknown curve format `{other}` (expected csv or json)")),
        }
    }
}

/// On-disk format for the scaling report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Md,
    Csv,
    Json,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Md => "md",
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "md" => Ok(ReportFormat::Md),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!(
                "unknown report format `{other}` (expected md, csv or json)"
            )),
        }
    }
}

/// Load and fully validate a run config from a JSON file.
pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::ConfigRead {
        path: path.to_path_buf(),
        source,
    })?;
    let config: RunConfig =
        serde_json::from_str(&text).map_err(|e| Error::ConfigSyntax {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.experiments.is_empty() {
            return Err(Error::schema(
                "experiments",
                "must contain at least one experiment",
            ));
        }
        let mut seen = HashSet::new();
        for (i, e) in self.experiments.iter().enumerate() {
            e.validate_at(&format!("experiments[{i}]"))?;
            if !seen.insert(e.label.as_str()) {
                return Err(Error::schema(
                    format!("experiments[{i}].label"),
                    format!("duplicate label `{}`", e.label),
                ));
            }
        }
        if !(self.analysis.knee_threshold.is_finite() && self.analysis.knee_threshold > 1.0) {
            return Err(Error::schema(
                "analysis.knee_threshold",
                format!("must be > 1 (got {})", self.analysis.knee_threshold),
            ));
        }
        for (i, t) in self.analysis.allocation_targets.iter().enumerate() {
            if !(t.is_finite() && *t > 0.0) {
                return Err(Error::schema(
                    format!("analysis.allocation_targets[{i}]"),
                    format!("must be a finite value > 0 seconds (got {t})"),
                ));
            }
        }
        if let Some(n) = self.analysis.baseline_n {
            if n < 1 {
                return Err(Error::schema("analysis.baseline_n", "must be >= 1 (got 0)"));
            }
        }
        Ok(())
    }

    /// Cluster warnings across all experiments, prefixed with their labels.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for e in &self.experiments {
            for w in e.cluster.warnings() {
                out.push(format!("experiment `{}`: {w}", e.label));
            }
        }
        out
    }
}
