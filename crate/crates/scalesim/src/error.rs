//! Crate-wide error type with a coarse classification used for CLI exit codes.

use std::path::PathBuf;

use thiserror::Error;

/// Broad failure class. The CLI maps these onto exit codes:
/// validation -> 1, I/O -> 2, analysis -> 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Io,
    Analysis,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read config file `{path}`: {source}")]
    ConfigRead {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config file `{path}` is not valid JSON: {message}")]
    ConfigSyntax { path: PathBuf, message: String },

    /// A config value violates the schema. `key` is the JSON path of the
    /// offending field and `message` names the bad value.
    #[error("config schema error at `{key}`: {message}")]
    Schema { key: String, message: String },

    #[error("cannot read curve file `{path}`: {source}")]
    CurveRead {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("curve file `{path}`, row {row}: {message}")]
    CurveParse {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("cannot write `{path}`: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid curve `{label}`: {message}")]
    InvalidCurve { label: String, message: String },

    #[error("insufficient data: curve `{label}` has {points} point(s), fit needs at least 2")]
    InsufficientData { label: String, points: usize },

    #[error("degenerate curve `{label}`: zero variance in log epoch times but nonzero residuals")]
    DegenerateCurve { label: String },

    #[error("GPU count {n_gpus} not in curve `{label}`")]
    CountNotInCurve { label: String, n_gpus: u32 },

    #[error("invalid knee threshold {threshold}: must be a finite value > 1")]
    InvalidThreshold { threshold: f64 },

    #[error("non-scaling law: fitted beta = {beta}, adding GPUs does not reduce epoch time")]
    NonScalingLaw { beta: f64 },

    #[error("invalid target epoch time {target}: must be a finite value > 0")]
    InvalidTarget { target: f64 },

    #[error("plot needs at least one curve")]
    EmptyPlot,

    #[error("plot got {fits} fit(s) for {curves} curve(s); pass none or one per curve")]
    FitCountMismatch { curves: usize, fits: usize },

    /// Wraps a failure with the experiment label it occurred in.
    #[error("experiment `{label}`: {source}")]
    InExperiment {
        label: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ConfigRead { .. } | Error::CurveRead { .. } | Error::Write { .. } => {
                ErrorKind::Io
            }
            Error::ConfigSyntax { .. }
            | Error::Schema { .. }
            | Error::CurveParse { .. }
            | Error::InvalidCurve { .. }
            | Error::InvalidThreshold { .. }
            | Error::InvalidTarget { .. }
            | Error::EmptyPlot
            | Error::FitCountMismatch { .. } => ErrorKind::Validation,
            Error::InsufficientData { .. }
            | Error::DegenerateCurve { .. }
            | Error::CountNotInCurve { .. }
            | Error::NonScalingLaw { .. } => ErrorKind::Analysis,
            Error::InExperiment { source, .. } => source.kind(),
        }
    }

    /// Exit code for the CLI: 0 is reserved for success.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::Validation => 1,
            ErrorKind::Io => 2,
            ErrorKind::Analysis => 3,
        }
    }

    /// Attach an experiment label to a downstream failure.
    pub fn in_experiment(label: &str, source: Error) -> Error {
        Error::InExperiment {
            label: label.to_string(),
            source: Box::new(source),
        }
    }

    pub(crate) fn schema(key: impl Into<String>, message: impl Into<String>) -> Error {
        Error::Schema {
            key: key.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
