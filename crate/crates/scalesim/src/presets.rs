//! Calibrated experiment presets for four well-known molecular GNN workloads.
//!
//! Each preset pairs a workload with effective cluster parameters tuned so
//! the simulated curve lands within 10% of reference epoch times reported
//! for that model: DimeNet ~205 s at 2 GPUs falling below 4 s at 416,
//! NNConv 27 s -> 1.08 s, SchNet 9.9 s -> 0.91 s, and PNA 2.8 s at 2 GPUs
//! with a saturating tail around its 0.76 s floor near 128 GPUs.
//!
//! The calibration constants are data, not physics: per-sample compute cost
//! and the inter-node terms absorb everything the additive model leaves out
//! (comm/compute overlap, gradient bucketing, kernel granularity, stragglers),
//! so the effective bandwidths and latencies differ per preset even though
//! the reference measurements came from one machine. PNA's grid stops at 364
//! because that study skipped PNA's 416-GPU run.

use crate::cluster::ClusterSpec;
use crate::config::{AnalysisConfig, OutputConfig, RunConfig};
use crate::simulator::ExperimentSpec;
use crate::workload::WorkloadSpec;

/// The reference study's GPU grid.
pub const PAPER_GPU_COUNTS: [u32; 10] = [2, 4, 8, 16, 32, 64, 128, 256, 364, 416];

/// Same grid without the final point; PNA was never measured at 416 GPUs.
pub const PNA_GPU_COUNTS: [u32; 9] = [2, 4, 8, 16, 32, 64, 128, 256, 364];

const GPUS_PER_NODE: u32 = 2;
const INTRA_BANDWIDTH: f64 = 4e10;
const INTRA_LATENCY: f64 = 5e-6;

fn cluster(inter_bandwidth: f64, inter_latency: f64, step_overhead: f64) -> ClusterSpec {
    ClusterSpec {
        gpus_per_node: GPUS_PER_NODE,
        intra_bandwidth: INTRA_BANDWIDTH,
        inter_bandwidth,
        intra_latency: INTRA_LATENCY,
        inter_latency,
        step_overhead,
    }
}

/// Compute-dominated preset: near power-law scaling (beta ~ 0.75) with a
/// 200+ second epoch at 2 GPUs.
pub fn dimenet() -> ExperimentSpec {
    ExperimentSpec {
        label: "dimenet".into(),
        workload: WorkloadSpec {
            name: "DimeNet".into(),
            param_count: 2_100_000,
            bytes_per_param: 4,
            dataset_size: 100_000,
            batch_size_per_device: 128,
            compute_time_per_sample: 4.08e-3,
            epochs: 200,
        },
        cluster: cluster(3.2e7, 2.29e-3, 2.0e-3),
        gpu_counts: PAPER_GPU_COUNTS.to_vec(),
        noise_sigma: 0.0,
        seed: 0,
    }
}

pub fn nnconv() -> ExperimentSpec {
    ExperimentSpec {
        label: "nnconv".into(),
        workload: WorkloadSpec {
            name: "NNConv".into(),
            param_count: 620_000,
            bytes_per_param: 4,
            dataset_size: 100_000,
            batch_size_per_device: 128,
            compute_time_per_sample: 5.31e-4,
            epochs: 1000,
        },
        cluster: cluster(4.5e7, 8.7e-4, 1.0e-3),
        gpu_counts: PAPER_GPU_COUNTS.to_vec(),
        noise_sigma: 0.0,
        seed: 0,
    }
}

pub fn schnet() -> ExperimentSpec {
    ExperimentSpec {
        label: "schnet".into(),
        workload: WorkloadSpec {
            name: "SchNet".into(),
            param_count: 460_000,
            bytes_per_param: 4,
            dataset_size: 100_000,
            batch_size_per_device: 128,
            compute_time_per_sample: 2.0e-4,
            epochs: 1000,
        },
        cluster: cluster(7.5e7, 8.2e-4, 1.0e-3),
        gpu_counts: PAPER_GPU_COUNTS.to_vec(),
        noise_sigma: 0.0,
        seed: 0,
    }
}

/// Communication/overhead-dominated preset: the curve bottoms out at an
/// interior GPU count and rises again, unlike the other three.
pub fn pna() -> ExperimentSpec {
    ExperimentSpec {
        label: "pna".into(),
        workload: WorkloadSpec {
            name: "PNA".into(),
            param_count: 680_000,
            bytes_per_param: 4,
            dataset_size: 250_000,
            batch_size_per_device: 128,
            compute_time_per_sample: 1.79e-5,
            epochs: 1000,
        },
        cluster: cluster(1.0e10, 3.5e-4, 5.0e-4),
        gpu_counts: PNA_GPU_COUNTS.to_vec(),
        noise_sigma: 0.0,
        seed: 0,
    }
}

/// All four presets in report order.
pub fn all() -> Vec<ExperimentSpec> {
    vec![dimenet(), nnconv(), schnet(), pna()]
}

/// The shipped "paper-grid" run config: all four presets, knee threshold
/// 1.25, speedup baseline at 2 GPUs, and one easy plus one aggressive
/// allocation target.
pub fn paper_grid_config() -> RunConfig {
    RunConfig {
        experiments: all(),
        analysis: AnalysisConfig {
            knee_threshold: 1.25,
            allocation_targets: vec![10.0, 1.0],
            baseline_n: Some(2),
        },
        output: OutputConfig::default(),
    }
}
