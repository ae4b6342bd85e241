//! Training workload description and the per-step quantities derived from it.
//!
//! A workload is deliberately coarse: one scalar compute cost per sample, one
//! gradient payload derived from the parameter count. Model internals
//! (message passing, attention, basis functions) are out of scope; they only
//! show up through `compute_time_per_sample`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A data-parallel training workload.
///
/// `batch_size_per_device` is interpreted per device, so the global batch at
/// `n` GPUs is `batch_size_per_device * n`. This is the standard convention
/// for data-parallel accelerators; with fixed per-device batches each device
/// does constant work per step and epochs shrink as 1/n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadSpec {
    pub name: String,
    /// Trainable parameter count (P).
    pub param_count: u64,
    /// Width of one gradient element in bytes; 2, 4 or 8.
    #[serde(default = "default_bytes_per_param")]
    pub bytes_per_param: u32,
    /// Samples per epoch (D).
    pub dataset_size: u64,
    /// Per-device batch size (b).
    pub batch_size_per_device: u64,
    /// Seconds of forward+backward compute per sample on one device (c).
    pub compute_time_per_sample: f64,
    /// Number of epochs the workload trains for.
    #[serde(default = "default_epochs")]
    pub epochs: u32,
}

fn default_bytes_per_param() -> u32 {
    4
}

fn default_epochs() -> u32 {
    1
}

/// Step count for one epoch, with a flag for the floor-to-zero edge case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpochSteps {
    pub count: u64,
    /// True when `drop_last` floored the count to 0 and it was clamped to 1.
    pub clamped: bool,
}

impl WorkloadSpec {
    /// Bytes synchronized per step under data-parallel training:
    /// `param_count * bytes_per_param`.
    pub fn gradient_message_size(&self) -> u64 {
        self.param_count * self.bytes_per_param as u64
    }

    /// Steps needed to consume the dataset at a global batch of
    /// `batch_size_per_device * n_gpus`. `drop_last = false` rounds up
    /// (partial final batch still runs); `true` rounds down, clamped to 1.
    pub fn steps_per_epoch(&self, n_gpus: u32, drop_last: bool) -> EpochSteps {
        debug_assert!(n_gpus >= 1);
        let global_batch = self.batch_size_per_device.saturating_mul(n_gpus as u64);
        if drop_last {
            let floored = self.dataset_size / global_batch;
            EpochSteps {
                count: floored.max(1),
                clamped: floored == 0,
            }
        } else {
            EpochSteps {
                count: self.dataset_size.div_ceil(global_batch),
                clamped: false,
            }
        }
    }

    /// Seconds of compute per step on one device: `b * c`. Independent of the
    /// GPU count because each device always processes its own `b` samples.
    pub fn compute_time_per_step(&self) -> f64 {
        self.batch_size_per_device as f64 * self.compute_time_per_sample
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_at("workload")
    }

    pub(crate) fn validate_at(&self, prefix: &str) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::schema(format!("{prefix}.name"), "must not be empty"));
        }
        if self.param_count < 1 {
            return Err(Error::schema(
                format!("{prefix}.param_count"),
                "must be >= 1 (got 0)",
            ));
        }
        if !matches!(self.bytes_per_param, 2 | 4 | 8) {
            return Err(Error::schema(
                format!("{prefix}.bytes_per_param"),
                format!("must be one of 2, 4, 8 (got {})", self.bytes_per_param),
            ));
        }
        if self.dataset_size < 1 {
            return Err(Error::schema(
                format!("{prefix}.dataset_size"),
                "must be >= 1 (got 0)",
            ));
        }
        if self.batch_size_per_device < 1 {
            return Err(Error::schema(
                format!("{prefix}.batch_size_per_device"),
                "must be >= 1 (got 0)",
            ));
        }
        if !(self.compute_time_per_sample.is_finite() && self.compute_time_per_sample > 0.0) {
            return Err(Error::schema(
                format!("{prefix}.compute_time_per_sample"),
                format!(
                    "must be a finite value > 0 (got {})",
                    self.compute_time_per_sample
                ),
            ));
        }
        if self.epochs < 1 {
            return Err(Error::schema(
                format!("{prefix}.epochs"),
                "must be >= 1 (got 0)",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm9_like(param_count: u64, c: f64) -> WorkloadSpec {
        WorkloadSpec {
            name: "test".into(),
            param_count,
            bytes_per_param: 4,
            dataset_size: 100_000,
            batch_size_per_device: 128,
            compute_time_per_sample: c,
            epochs: 1,
        }
    }

    #[test]
    fn gradient_message_size_multiplies_width() {
        assert_eq!(qm9_like(2_100_000, 1e-3).gradient_message_size(), 8_400_000);
        assert_eq!(qm9_like(620_000, 1e-3).gradient_message_size(), 2_480_000);
        let mut w = qm9_like(1, 1e-3);
        assert_eq!(w.gradient_message_size(), 4);
        w.bytes_per_param = 2;
        assert_eq!(w.gradient_message_size(), 2);
    }

    #[test]
    fn steps_per_epoch_rounds_up_by_default() {
        let w = qm9_like(1, 1e-3);
        assert_eq!(w.steps_per_epoch(2, false).count, 391); // ceil(100000/256)

        let mut small = w.clone();
        small.dataset_size = 256;
        assert_eq!(small.steps_per_epoch(2, false).count, 1); // exact division

        let mut zinc = w;
        zinc.dataset_size = 250_000;
        assert_eq!(zinc.steps_per_epoch(416, false).count, 5); // ceil(250000/53248)
    }

    #[test]
    fn drop_last_floors_and_clamps() {
        let mut w = qm9_like(1, 1e-3);
        w.dataset_size = 300;
        let kept = w.steps_per_epoch(2, false);
        let dropped = w.steps_per_epoch(2, true);
        assert_eq!(kept.count, 2);
        assert_eq!(dropped.count, 1);
        assert!(!dropped.clamped);

        w.dataset_size = 100; // smaller than one global batch
        let dropped = w.steps_per_epoch(2, true);
        assert_eq!(dropped.count, 1);
        assert!(dropped.clamped);
        assert!(!w.steps_per_epoch(2, false).clamped);
    }

    #[test]
    fn compute_time_per_step_is_batch_times_per_sample() {
        let w = qm9_like(1, 1e-3);
        assert!((w.compute_time_per_step() - 0.128).abs() < 1e-12);

        let mut unit = w.clone();
        unit.batch_size_per_device = 1;
        unit.compute_time_per_sample = 0.5;
        assert!((unit.compute_time_per_step() - 0.5).abs() < 1e-12);

        let mut heavy = w;
        heavy.compute_time_per_sample = 1.65;
        assert!((heavy.compute_time_per_step() - 211.2).abs() < 1e-9);
    }

    #[test]
    fn validate_rejects_bad_fields() {
        let mut w = qm9_like(1, 1e-3);
        w.bytes_per_param = 3;
        let err = w.validate().unwrap_err().to_string();
        assert!(err.contains("bytes_per_param"), "{err}");
        assert!(err.contains('3'), "{err}");

        let mut w = qm9_like(1, 0.0);
        w.compute_time_per_sample = 0.0;
        assert!(w.validate().is_err());
        w.compute_time_per_sample = f64::NAN;
        assert!(w.validate().is_err());
    }
}
