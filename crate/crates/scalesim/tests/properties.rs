//! Property tests for the simulator and the scaling toolkit invariants.

use proptest::prelude::*;

use scalesim::presets::PAPER_GPU_COUNTS;
use scalesim::{
    allocate_for_target, detect_knee, find_min_time, fit_power_law, predicted_speedup,
    ring_allreduce_time, simulate_epoch_time, speedup, ClusterSpec, ExperimentSpec, ScalingCurve,
    WorkloadSpec,
};

fn workload_strategy() -> impl Strategy<Value = WorkloadSpec> {
    (
        1u64..=10_000_000,
        prop_oneof![Just(2u32), Just(4), Just(8)],
        1u64..=1_000_000,
        1u64..=512,
        1e-6f64..=1.0,
    )
        .prop_map(
            |(param_count, bytes_per_param, dataset_size, batch, c)| WorkloadSpec {
                name: "prop".into(),
                param_count,
                bytes_per_param,
                dataset_size,
                batch_size_per_device: batch,
                compute_time_per_sample: c,
                epochs: 1,
            },
        )
}

fn cluster_strategy() -> impl Strategy<Value = ClusterSpec> {
    (
        1u32..=8,
        1e8f64..=1e12,
        1e6f64..=1e11,
        0.0f64..=1e-3,
        0.0f64..=1e-2,
        0.0f64..=0.1,
    )
        .prop_map(|(g, bi, be, li, le, o)| ClusterSpec {
            gpus_per_node: g,
            intra_bandwidth: bi,
            inter_bandwidth: be,
            intra_latency: li,
            inter_latency: le,
            step_overhead: o,
        })
}

fn law_curve(alpha: f64, beta: f64, grid: &[u32]) -> ScalingCurve {
    let pairs: Vec<(u32, f64)> = grid
        .iter()
        .map(|&n| (n, alpha * (n as f64).powf(-beta)))
        .collect();
    ScalingCurve::from_pairs("law", &pairs).unwrap()
}

proptest! {
    #[test]
    fn steps_monotone_in_gpus_and_dataset(w in workload_strategy(), n in 1u32..2048, drop_last in any::<bool>()) {
        let s_n = w.steps_per_epoch(n, drop_last).count;
        let s_2n = w.steps_per_epoch(2 * n, drop_last).count;
        prop_assert!(s_2n <= s_n);
        prop_assert!(s_n >= 1);

        let mut bigger = w.clone();
        bigger.dataset_size = w.dataset_size.saturating_mul(2);
        prop_assert!(bigger.steps_per_epoch(n, drop_last).count >= s_n);
    }

    #[test]
    fn drop_last_differs_by_at_most_one_step(w in workload_strategy(), n in 1u32..2048) {
        let keep = w.steps_per_epoch(n, false).count;
        let drop = w.steps_per_epoch(n, true).count;
        // equal when the dataset divides evenly (or flooring hit the clamp)
        prop_assert!(keep == drop || keep == drop + 1);
    }

    #[test]
    fn message_size_is_linear_in_param_count(w in workload_strategy()) {
        let mut doubled = w.clone();
        doubled.param_count *= 2;
        prop_assert_eq!(doubled.gradient_message_size(), 2 * w.gradient_message_size());
    }

    #[test]
    fn ring_time_is_monotone_and_bounded(
        m in 0u64..=1_000_000_000,
        p in 2u32..=4096,
        b in 1e6f64..=1e12,
        lat in 0.0f64..=1e-2,
    ) {
        let t = ring_allreduce_time(m, p, b, lat);
        prop_assert!(t >= ring_allreduce_time(m / 2, p, b, lat));
        prop_assert!(t >= ring_allreduce_time(m, p, b, lat / 2.0));
        // bandwidth term is bounded by a full round trip of the message
        prop_assert!(t <= 2.0 * m as f64 / b + 2.0 * (p - 1) as f64 * lat + 1e-12);
    }

    #[test]
    fn allreduce_is_monotone_in_gpus(c in cluster_strategy(), m in 1u64..=100_000_000, n in 1u32..1024) {
        prop_assert!(c.allreduce_time(m, n + 1) >= c.allreduce_time(m, n) - 1e-15);
    }

    #[test]
    fn allreduce_is_affine_in_message(c in cluster_strategy(), m1 in 0u64..=50_000_000, m2 in 0u64..=50_000_000, n in 1u32..1024) {
        // t(m) = slope * m + latency-constant, so t(m1+m2) = t(m1)+t(m2)-t(0)
        let lhs = c.allreduce_time(m1 + m2, n);
        let rhs = c.allreduce_time(m1, n) + c.allreduce_time(m2, n) - c.allreduce_time(0, n);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn allreduce_matches_flat_ring_when_one_node_holds_everything(
        m in 1u64..=100_000_000,
        n in 1u32..=64,
        b in 1e7f64..=1e12,
        lat in 0.0f64..=1e-3,
    ) {
        let c = ClusterSpec {
            gpus_per_node: 64,
            intra_bandwidth: b,
            inter_bandwidth: b,
            intra_latency: lat,
            inter_latency: lat,
            step_overhead: 0.0,
        };
        prop_assert_eq!(c.allreduce_time(m, n), ring_allreduce_time(m, n, b, lat));
    }

    #[test]
    fn epoch_time_is_monotone_in_costs(w in workload_strategy(), c in cluster_strategy(), n in 1u32..=512) {
        let base = simulate_epoch_time(&w, &c, n);
        prop_assert!(base > 0.0);

        let mut fast = c.clone();
        fast.inter_bandwidth *= 2.0;
        fast.intra_bandwidth *= 2.0;
        prop_assert!(simulate_epoch_time(&w, &fast, n) <= base + 1e-12);

        let mut laggy = c.clone();
        laggy.inter_latency += 1e-3;
        prop_assert!(simulate_epoch_time(&w, &laggy, n) >= base - 1e-12);

        let mut heavy = c.clone();
        heavy.step_overhead += 0.5;
        prop_assert!(simulate_epoch_time(&w, &heavy, n) > base);

        let mut more_data = w.clone();
        more_data.dataset_size = w.dataset_size.saturating_mul(3);
        prop_assert!(simulate_epoch_time(&more_data, &c, n) >= base - 1e-12);

        let mut slower = w.clone();
        slower.compute_time_per_sample *= 2.0;
        prop_assert!(simulate_epoch_time(&slower, &c, n) > base);
    }

    #[test]
    fn epoch_time_eventually_rises_once_steps_saturate(
        c in cluster_strategy(),
        comp in 1e-6f64..=1e-2,
    ) {
        // a dataset no bigger than one device batch pins steps at 1, so any
        // positive latency or overhead makes more GPUs strictly not faster
        let w = WorkloadSpec {
            name: "tiny".into(),
            param_count: 1_000_000,
            bytes_per_param: 4,
            dataset_size: 64,
            batch_size_per_device: 64,
            compute_time_per_sample: comp,
            epochs: 1,
        };
        prop_assert_eq!(w.steps_per_epoch(1, false).count, 1);
        let mut prev = simulate_epoch_time(&w, &c, 1);
        for n in [2u32, 4, 16, 64, 256, 1024] {
            let t = simulate_epoch_time(&w, &c, n);
            prop_assert!(t >= prev - 1e-15);
            prev = t;
        }
    }

    #[test]
    fn perfect_scaling_fits_beta_one(k in 1u64..=64, c in 1e-5f64..=0.1) {
        // dataset divisible at every grid count keeps steps exact
        let w = WorkloadSpec {
            name: "ideal".into(),
            param_count: 1000,
            bytes_per_param: 4,
            dataset_size: 128 * 23_296 * k,
            batch_size_per_device: 128,
            compute_time_per_sample: c,
            epochs: 1,
        };
        let cl = ClusterSpec {
            gpus_per_node: 2,
            intra_bandwidth: f64::INFINITY,
            inter_bandwidth: f64::INFINITY,
            intra_latency: 0.0,
            inter_latency: 0.0,
            step_overhead: 0.0,
        };
        let pairs: Vec<(u32, f64)> = PAPER_GPU_COUNTS.iter()
            .map(|&n| (n, simulate_epoch_time(&w, &cl, n)))
            .collect();
        for window in pairs.windows(2) {
            let gpu_seconds_a = window[0].0 as f64 * window[0].1;
            let gpu_seconds_b = window[1].0 as f64 * window[1].1;
            prop_assert!((gpu_seconds_a / gpu_seconds_b - 1.0).abs() < 1e-12);
        }
        let fit = fit_power_law(&ScalingCurve::from_pairs("ideal", &pairs).unwrap()).unwrap();
        prop_assert!((fit.beta - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sweeps_are_deterministic_and_grid_stable(seed in any::<u64>(), sigma in 0.0f64..=0.3) {
        let exp = ExperimentSpec {
            label: "prop".into(),
            workload: WorkloadSpec {
                name: "prop".into(),
                param_count: 500_000,
                bytes_per_param: 4,
                dataset_size: 50_000,
                batch_size_per_device: 128,
                compute_time_per_sample: 1e-4,
                epochs: 1,
            },
            cluster: ClusterSpec {
                gpus_per_node: 2,
                intra_bandwidth: 1e10,
                inter_bandwidth: 1e9,
                intra_latency: 1e-6,
                inter_latency: 1e-4,
                step_overhead: 1e-3,
            },
            gpu_counts: vec![2, 8, 32, 128],
            noise_sigma: sigma,
            seed,
        };
        let a = exp.sweep().unwrap();
        let b = exp.sweep().unwrap();
        prop_assert_eq!(&a, &b);

        let mut denser = exp.clone();
        denser.gpu_counts = vec![2, 4, 8, 16, 32, 64, 128];
        let d = denser.sweep().unwrap();
        for n in [2u32, 8, 32, 128] {
            prop_assert_eq!(d.time_at(n), a.time_at(n));
        }
    }

    #[test]
    fn fit_is_scale_and_grid_invariant(
        alpha in 1e-2f64..=1e2,
        beta in -1.5f64..=1.5,
        k in 1e-3f64..=1e3,
        grid_scale in 2u32..=5,
    ) {
        let base = law_curve(alpha, beta, &[2, 4, 8, 16, 32, 64]);
        let fit = fit_power_law(&base).unwrap();

        // time scale: alpha scales by k, beta and R^2 unchanged
        let scaled_pairs: Vec<(u32, f64)> = base.points().iter()
            .map(|p| (p.n_gpus, p.epoch_time_s * k))
            .collect();
        let scaled = fit_power_law(&ScalingCurve::from_pairs("s", &scaled_pairs).unwrap()).unwrap();
        prop_assert!((scaled.beta - fit.beta).abs() <= 1e-12 * fit.beta.abs().max(1.0));
        prop_assert!((scaled.alpha - fit.alpha * k).abs() <= 1e-12 * (fit.alpha * k).abs());
        prop_assert!((scaled.r_squared - fit.r_squared).abs() <= 1e-12);

        // grid scale: beta unchanged, alpha scales by scale^beta
        let grid_pairs: Vec<(u32, f64)> = base.points().iter()
            .map(|p| (p.n_gpus * grid_scale, p.epoch_time_s))
            .collect();
        let shifted = fit_power_law(&ScalingCurve::from_pairs("g", &grid_pairs).unwrap()).unwrap();
        prop_assert!((shifted.beta - fit.beta).abs() <= 1e-9 * fit.beta.abs().max(1.0));
        let expected_alpha = fit.alpha * (grid_scale as f64).powf(fit.beta);
        prop_assert!((shifted.alpha - expected_alpha).abs() <= 1e-9 * expected_alpha.abs());
    }

    #[test]
    fn exact_recovery_on_arbitrary_grids(
        alpha in 1e-3f64..=1e3,
        beta in -2.0f64..=2.0,
        mut grid in proptest::collection::btree_set(1u32..=4096, 2..=12),
    ) {
        let grid: Vec<u32> = std::mem::take(&mut grid).into_iter().collect();
        let fit = fit_power_law(&law_curve(alpha, beta, &grid)).unwrap();
        prop_assert!((fit.alpha - alpha).abs() <= 1e-9 * alpha);
        prop_assert!((fit.beta - beta).abs() <= 1e-9 * beta.abs().max(1e-9));
        prop_assert!((fit.r_squared - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn predicted_speedup_is_transitive(beta in -2.0f64..=2.0, a in 1u32..=500, b in 1u32..=500, c in 1u32..=500) {
        let fit = scalesim::PowerLawFit { alpha: 1.0, beta, r_squared: 1.0, n_points: 10 };
        let lhs = predicted_speedup(&fit, a, b) * predicted_speedup(&fit, b, c);
        let rhs = predicted_speedup(&fit, a, c);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn measured_speedup_is_reciprocal(times in proptest::collection::vec(1e-3f64..=1e3, 2..=8)) {
        let pairs: Vec<(u32, f64)> = times.iter().enumerate()
            .map(|(i, &t)| (2u32.pow(i as u32 + 1), t))
            .collect();
        let curve = ScalingCurve::from_pairs("r", &pairs).unwrap();
        let a = pairs[0].0;
        let b = pairs[pairs.len() - 1].0;
        let forward = speedup(&curve, a, b).unwrap();
        let backward = speedup(&curve, b, a).unwrap();
        prop_assert!((forward * backward - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn allocation_meets_target_unless_unreachable(
        alpha in 1e-2f64..=1e3,
        beta in 0.05f64..=1.5,
        target in 1e-3f64..=1e2,
        n_max in 1u32..=4096,
    ) {
        let fit = scalesim::PowerLawFit { alpha, beta, r_squared: 1.0, n_points: 10 };
        let plan = allocate_for_target(&fit, target, n_max).unwrap();
        prop_assert!(plan.n_gpus >= 1 && plan.n_gpus <= n_max);
        if !plan.unreachable {
            prop_assert!(plan.predicted_epoch_time <= target * (1.0 + 1e-12));
        } else {
            prop_assert_eq!(plan.n_gpus, n_max);
        }
        if beta <= 1.0 {
            prop_assert!(plan.efficiency > 0.0 && plan.efficiency <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn knee_is_always_a_grid_value(times in proptest::collection::vec(1e-2f64..=1e2, 2..=10), threshold in 1.01f64..=3.0) {
        let pairs: Vec<(u32, f64)> = times.iter().enumerate()
            .map(|(i, &t)| (3u32.pow(i as u32), t.max(1e-2)))
            .collect();
        let curve = ScalingCurve::from_pairs("k", &pairs).unwrap();
        if let Some(n) = detect_knee(&curve, threshold).unwrap() {
            prop_assert!(curve.time_at(n).is_some());
        }
    }

    #[test]
    fn min_time_is_a_lower_bound(times in proptest::collection::vec(1e-3f64..=1e3, 1..=10)) {
        let pairs: Vec<(u32, f64)> = times.iter().enumerate()
            .map(|(i, &t)| (i as u32 + 1, t))
            .collect();
        let curve = ScalingCurve::from_pairs("m", &pairs).unwrap();
        let (n_min, t_min) = find_min_time(&curve);
        for p in curve.points() {
            prop_assert!(t_min <= p.epoch_time_s);
            // tie-break: anything equal must come at or after the reported n
            if p.epoch_time_s == t_min {
                prop_assert!(p.n_gpus >= n_min);
            }
        }
    }

    #[test]
    fn curve_csv_roundtrip_is_identity(times in proptest::collection::vec(1e-6f64..=1e6, 1..=12)) {
        let pairs: Vec<(u32, f64)> = times.iter().enumerate()
            .map(|(i, &t)| (5 * i as u32 + 2, t))
            .collect();
        let curve = ScalingCurve::from_pairs("rt", &pairs).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.csv");
        scalesim::emit_curve(&curve, &path, scalesim::CurveFormat::Csv).unwrap();
        prop_assert_eq!(scalesim::load_curve_csv(&path).unwrap(), curve);
    }
}
