//! Two-level GPU cluster model and the gradient all-reduce cost at each scale.
//!
//! The topology has exactly two tiers: GPUs inside a node share a fast
//! interconnect, nodes talk over a slower fabric. All-reduce across nodes is
//! modeled as two sequential full ring stages on the full message (one ring
//! inside the node, one ring across nodes). That is an upper bound; real
//! collectives overlap and bucket, but no published timings exist to
//! calibrate overlap against, so the model stays strictly additive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-level cluster: `gpus_per_node` GPUs per node, per-link intra-node
/// bandwidth/latency, per-node inter-node bandwidth/latency, and a fixed
/// per-step framework overhead. Bandwidths are bytes/second, latencies are
/// seconds per communication hop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterSpec {
    pub gpus_per_node: u32,
    pub intra_bandwidth: f64,
    pub inter_bandwidth: f64,
    pub intra_latency: f64,
    pub inter_latency: f64,
    /// Seconds of fixed per-step overhead (optimizer step, hooks, dataloader).
    #[serde(default)]
    pub step_overhead: f64,
}

/// Ring all-reduce time for `message` bytes over `participants` peers:
/// `2(p-1)/p * M/B + 2(p-1) * latency`, and 0 for a single participant.
///
/// The latency term counts `2(p-1)` hops: `p-1` for reduce-scatter plus
/// `p-1` for all-gather.
pub fn ring_allreduce_time(message: u64, participants: u32, bandwidth: f64, latency: f64) -> f64 {
    if participants <= 1 {
        return 0.0;
    }
    let p = participants as f64;
    2.0 * (p - 1.0) / p * message as f64 / bandwidth + 2.0 * (p - 1.0) * latency
}

impl ClusterSpec {
    /// Number of nodes needed to host `n_gpus`.
    pub fn nodes_for(&self, n_gpus: u32) -> u32 {
        n_gpus.div_ceil(self.gpus_per_node)
    }

    /// All-reduce time for `message` bytes across `n_gpus`.
    ///
    /// Inside a single node this is one intra-node ring. Beyond that it is an
    /// intra-node ring over `gpus_per_node` followed by an inter-node ring
    /// over `ceil(n_gpus / gpus_per_node)` nodes, both on the full message.
    /// Non-decreasing in `n_gpus` for a fixed message.
    pub fn allreduce_time(&self, message: u64, n_gpus: u32) -> f64 {
        if n_gpus <= self.gpus_per_node {
            return ring_allreduce_time(message, n_gpus, self.intra_bandwidth, self.intra_latency);
        }
        let intra = ring_allreduce_time(
            message,
            self.gpus_per_node,
            self.intra_bandwidth,
            self.intra_latency,
        );
        let inter = ring_allreduce_time(
            message,
            self.nodes_for(n_gpus),
            self.inter_bandwidth,
            self.inter_latency,
        );
        intra + inter
    }

    /// Non-fatal oddities worth surfacing (exotic clusters exist, so these
    /// are not errors).
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.intra_bandwidth < self.inter_bandwidth {
            out.push(format!(
                "cluster: intra_bandwidth {} is slower than inter_bandwidth {}; \
                 intra-node links are usually the faster tier",
                self.intra_bandwidth, self.inter_bandwidth
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_at("cluster")
    }

    pub(crate) fn validate_at(&self, prefix: &str) -> Result<()> {
        if self.gpus_per_node < 1 {
            return Err(Error::schema(
                format!("{prefix}.gpus_per_node"),
                "must be >= 1 (got 0)",
            ));
        }
        for (field, v) in [
            ("intra_bandwidth", self.intra_bandwidth),
            ("inter_bandwidth", self.inter_bandwidth),
        ] {
            // Infinity is allowed: it models a communication-free limit.
            if v.is_nan() || v <= 0.0 {
                return Err(Error::schema(
                    format!("{prefix}.{field}"),
                    format!("must be > 0 bytes/s (got {v})"),
                ));
            }
        }
        for (field, v) in [
            ("intra_latency", self.intra_latency),
            ("inter_latency", self.inter_latency),
            ("step_overhead", self.step_overhead),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::schema(
                    format!("{prefix}.{field}"),
                    format!("must be a finite value >= 0 seconds (got {v})"),
                ));
            }
        }
        Ok(())
    }
}
