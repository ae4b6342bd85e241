//! Epoch-time simulation across a grid of GPU counts.
//!
//! One step costs local compute + gradient all-reduce + fixed overhead; an
//! epoch is that times the step count. Optional multiplicative log-normal
//! noise is seeded per (label, n_gpus), so extending the GPU grid never
//! changes the noise drawn for existing points and sweeps are reproducible
//! bit for bit.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cluster::ClusterSpec;
use crate::error::{Error, Result};
use crate::workload::WorkloadSpec;

/// One experiment: a workload on a cluster, swept over `gpu_counts`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub label: String,
    pub workload: WorkloadSpec,
    pub cluster: ClusterSpec,
    /// Strictly increasing GPU counts, all >= 1.
    pub gpu_counts: Vec<u32>,
    /// Log-space noise level; 0 (the default) keeps the sweep deterministic
    /// in the strictest sense, any value keeps it reproducible.
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub seed: u64,
}

/// One measured or simulated point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n_gpus: u32,
    pub epoch_time_s: f64,
}

/// Ordered (n_gpus, epoch_time) samples. Construction enforces the
/// invariants every consumer relies on: at least one point, strictly
/// increasing GPU counts, positive finite times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingCurve {
    label: String,
    points: Vec<CurvePoint>,
}

impl ScalingCurve {
    pub fn new(label: impl Into<String>, points: Vec<CurvePoint>) -> Result<Self> {
        let label = label.into();
        if points.is_empty() {
            return Err(Error::InvalidCurve {
                label,
                message: "curve must contain at least one point".into(),
            });
        }
        for (i, p) in points.iter().enumerate() {
            if p.n_gpus < 1 {
                return Err(Error::InvalidCurve {
                    label,
                    message: format!("point {i}: n_gpus must be >= 1"),
                });
            }
            if !(p.epoch_time_s.is_finite() && p.epoch_time_s > 0.0) {
                return Err(Error::InvalidCurve {
                    label,
                    message: format!(
                        "point {i}: epoch_time_s must be a finite value > 0 (got {})",
                        p.epoch_time_s
                    ),
                });
            }
            if i > 0 && p.n_gpus <= points[i - 1].n_gpus {
                return Err(Error::InvalidCurve {
                    label,
                    message: format!(
                        "point {i}: n_gpus {} not greater than previous {}",
                        p.n_gpus,
                        points[i - 1].n_gpus
                    ),
                });
            }
        }
        Ok(ScalingCurve { label, points })
    }

    pub fn from_pairs(label: impl Into<String>, pairs: &[(u32, f64)]) -> Result<Self> {
        Self::new(
            label,
            pairs
                .iter()
                .map(|&(n_gpus, epoch_time_s)| CurvePoint {
                    n_gpus,
                    epoch_time_s,
                })
                .collect(),
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a constructed curve always has at least one point
    }

    /// Epoch time at an exact grid value, if present.
    pub fn time_at(&self, n_gpus: u32) -> Option<f64> {
        self.points
            .iter()
            .find(|p| p.n_gpus == n_gpus)
            .map(|p| p.epoch_time_s)
    }
}

/// Simulated training time for one epoch on `n_gpus`:
/// `steps * (compute_per_step + allreduce + step_overhead)`.
pub fn simulate_epoch_time(workload: &WorkloadSpec, cluster: &ClusterSpec, n_gpus: u32) -> f64 {
    let steps = workload.steps_per_epoch(n_gpus, false).count;
    let per_step = workload.compute_time_per_step()
        + cluster.allreduce_time(workload.gradient_message_size(), n_gpus)
        + cluster.step_overhead;
    steps as f64 * per_step
}

impl ExperimentSpec {
    /// Simulate the epoch time at every configured GPU count.
    ///
    /// With `noise_sigma > 0` each point is multiplied by `exp(eps)`, where
    /// `eps ~ N(0, sigma)` is drawn from a stream derived from
    /// (seed, label, n_gpus). Two sweeps of identical specs are bit-identical.
    pub fn sweep(&self) -> Result<ScalingCurve> {
        let points = self
            .gpu_counts
            .iter()
            .map(|&n| {
                let mut t = simulate_epoch_time(&self.workload, &self.cluster, n);
                if self.noise_sigma > 0.0 {
                    t *= noise_factor(self.seed, &self.label, n, self.noise_sigma);
                }
                CurvePoint {
                    n_gpus: n,
                    epoch_time_s: t,
                }
            })
            .collect();
        ScalingCurve::new(self.label.clone(), points)
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_at("experiment")
    }

    pub(crate) fn validate_at(&self, prefix: &str) -> Result<()> {
        if self.label.is_empty() {
            return Err(Error::schema(format!("{prefix}.label"), "must not be empty"));
        }
        self.workload.validate_at(&format!("{prefix}.workload"))?;
        self.cluster.validate_at(&format!("{prefix}.cluster"))?;
        if self.gpu_counts.is_empty() {
            return Err(Error::schema(
                format!("{prefix}.gpu_counts"),
                "must contain at least one GPU count",
            ));
        }
        for (i, &n) in self.gpu_counts.iter().enumerate() {
            if n < 1 {
                return Err(Error::schema(
                    format!("{prefix}.gpu_counts[{i}]"),
                    "must be >= 1 (got 0)",
                ));
            }
            if i > 0 && n <= self.gpu_counts[i - 1] {
                return Err(Error::schema(
                    format!("{prefix}.gpu_counts[{i}]"),
                    format!(
                        "must be strictly increasing ({} after {})",
                        n,
                        self.gpu_counts[i - 1]
                    ),
                ));
            }
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::schema(
                format!("{prefix}.noise_sigma"),
                format!("must be a finite value >= 0 (got {})", self.noise_sigma),
            ));
        }
        Ok(())
    }
}

/// Multiplicative log-normal factor for one sweep point. The RNG stream is
/// keyed by (seed, label, n_gpus) so points are independent of grid order
/// and membership.
fn noise_factor(seed: u64, label: &str, n_gpus: u32, sigma: f64) -> f64 {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    hasher.update(n_gpus.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(hasher.finalize().into());
    let z: f64 = rng.sample(rand_distr::StandardNormal);
    (z * sigma).exp()
}

/// The point with the smallest epoch time; ties break toward the smallest
/// GPU count (the cheaper configuration).
pub fn find_min_time(curve: &ScalingCurve) -> (u32, f64) {
    let mut best = &curve.points()[0];
    for p in &curve.points()[1..] {
        if p.epoch_time_s < best.epoch_time_s {
            best = p;
        }
    }
    (best.n_gpus, best.epoch_time_s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_cluster() -> ClusterSpec {
        ClusterSpec {
            gpus_per_node: 2,
            intra_bandwidth: f64::INFINITY,
            inter_bandwidth: f64::INFINITY,
            intra_latency: 0.0,
            inter_latency: 0.0,
            step_overhead: 0.0,
        }
    }

    fn workload(dataset_size: u64) -> WorkloadSpec {
        WorkloadSpec {
            name: "w".into(),
            param_count: 1_000_000,
            bytes_per_param: 4,
            dataset_size,
            batch_size_per_device: 128,
            compute_time_per_sample: 1e-3,
            epochs: 1,
        }
    }

    #[test]
    fn communication_free_limit_scales_perfectly() {
        let w = workload(128 * 64); // divisible at every power-of-two count
        let c = free_cluster();
        let t2 = simulate_epoch_time(&w, &c, 2);
        let t4 = simulate_epoch_time(&w, &c, 4);
        let t8 = simulate_epoch_time(&w, &c, 8);
        assert!((t2 / t4 - 2.0).abs() < 1e-12);
        assert!((t4 / t8 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_device_single_step_is_compute_plus_overhead() {
        let mut w = workload(128);
        w.compute_time_per_sample = 2e-3;
        let mut c = free_cluster();
        c.step_overhead = 0.25;
        let t = simulate_epoch_time(&w, &c, 1);
        assert!((t - (0.256 + 0.25)).abs() < 1e-12, "{t}");
    }

    #[test]
    fn sweep_returns_one_point_per_count_in_order() {
        let e = ExperimentSpec {
            label: "halving".into(),
            workload: workload(128 * 4),
            cluster: free_cluster(),
            gpu_counts: vec![2, 4],
            noise_sigma: 0.0,
            seed: 0,
        };
        let curve = e.sweep().unwrap();
        let pts = curve.points();
        assert_eq!(pts.len(), 2);
        assert_eq!((pts[0].n_gpus, pts[1].n_gpus), (2, 4));
        assert!((pts[0].epoch_time_s / pts[1].epoch_time_s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn noisy_sweeps_are_reproducible_and_grid_stable() {
        let mut e = ExperimentSpec {
            label: "noisy".into(),
            workload: workload(100_000),
            cluster: free_cluster(),
            gpu_counts: vec![2, 8, 32],
            noise_sigma: 0.05,
            seed: 7,
        };
        let a = e.sweep().unwrap();
        let b = e.sweep().unwrap();
        assert_eq!(a, b);

        // Inserting a grid point must not disturb the noise at other points.
        e.gpu_counts = vec![2, 4, 8, 32];
        let c = e.sweep().unwrap();
        assert_eq!(c.time_at(2), a.time_at(2));
        assert_eq!(c.time_at(8), a.time_at(8));
        assert_eq!(c.time_at(32), a.time_at(32));

        // A different seed moves every point.
        e.seed = 8;
        let d = e.sweep().unwrap();
        assert_ne!(d.time_at(2), c.time_at(2));
    }

    #[test]
    fn find_min_prefers_smallest_count_on_ties() {
        let c = ScalingCurve::from_pairs("m", &[(2, 2.8), (128, 0.76), (256, 0.9)]).unwrap();
        assert_eq!(find_min_time(&c), (128, 0.76));

        let mono = ScalingCurve::from_pairs("d", &[(2, 4.0), (4, 2.0), (8, 1.0)]).unwrap();
        assert_eq!(find_min_time(&mono), (8, 1.0));

        let tie = ScalingCurve::from_pairs("t", &[(2, 1.0), (4, 1.0)]).unwrap();
        assert_eq!(find_min_time(&tie), (2, 1.0));
    }

    #[test]
    fn curve_invariants_are_enforced() {
        assert!(ScalingCurve::from_pairs("x", &[]).is_err());
        assert!(ScalingCurve::from_pairs("x", &[(2, 1.0), (2, 0.5)]).is_err());
        assert!(ScalingCurve::from_pairs("x", &[(4, 1.0), (2, 0.5)]).is_err());
        assert!(ScalingCurve::from_pairs("x", &[(2, 0.0)]).is_err());
        assert!(ScalingCurve::from_pairs("x", &[(2, f64::NAN)]).is_err());
        assert!(ScalingCurve::from_pairs("x", &[(0, 1.0)]).is_err());
    }
}
