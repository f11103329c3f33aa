use grover_core::*;
use proptest::prelude::*;

fn instance_strategy(max_n: usize) -> impl Strategy<Value = SearchInstance> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), 1..=n, any::<u64>()))
        .prop_map(|(n, ell, seed)| SearchInstance::random(n, ell, seed).unwrap())
}

proptest! {
    #[test]
    fn random_instance_is_pure(n in 2usize..5000, frac in 0.0f64..1.0, seed: u64) {
        let ell = 1 + ((n - 1) as f64 * frac) as usize;
        let a = SearchInstance::random(n, ell, seed).unwrap();
        let b = SearchInstance::random(n, ell, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.ell(), ell);
        prop_assert!(a.marked().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(a.marked().iter().all(|&i| i < n));
    }

    #[test]
    fn oracle_agrees_with_membership(inst in instance_strategy(3000)) {
        let total: usize = (0..inst.n()).map(|a| inst.oracle(a).unwrap() as usize).sum();
        prop_assert_eq!(total, inst.ell());
        for &m in inst.marked() {
            prop_assert_eq!(inst.oracle(m).unwrap(), 1);
        }
    }

    #[test]
    fn instance_json_round_trip(inst in instance_strategy(500)) {
        let text = serde_json::to_string(&inst).unwrap();
        let back: SearchInstance = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn norm_is_preserved(inst in instance_strategy(4096)) {
        let a = SpectralAngles64::new(inst.n(), inst.ell()).unwrap();
        let steps = 10 * ((std::f64::consts::FRAC_PI_4 * (a.n as f64 / a.ell as f64).sqrt()).ceil() as usize);
        let mut s = StateVector64::uniform(inst.n()).unwrap();
        for _ in 0..steps {
            s.grover_step(&inst).unwrap();
        }
        prop_assert!((s.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn reflections_are_involutions(inst in instance_strategy(2048), seed: u64) {
        let mut s = StateVector64::uniform(inst.n()).unwrap();
        // move away from |s> so the test is not trivial
        s.grover_step(&inst).unwrap();
        let draws = s.sample_measurement(seed, 1);
        let mut t = StateVector64::basis(inst.n(), draws[0]).unwrap();
        t.apply_average_inversion();
        for state in [s, t] {
            let mut x = state.clone();
            x.apply_oracle_reflection(&inst).unwrap();
            x.apply_oracle_reflection(&inst).unwrap();
            prop_assert_eq!(&x, &state);
            let mut y = state.clone();
            y.apply_average_inversion();
            y.apply_average_inversion();
            for (u, v) in y.amplitudes().iter().zip(state.amplitudes()) {
                prop_assert!((u - v).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn two_amplitude_structure(inst in instance_strategy(2048), steps in 0usize..40) {
        let a = SpectralAngles64::new(inst.n(), inst.ell()).unwrap();
        let s = evolve_state::<f64>(&inst, steps, &SimConfig::default()).unwrap();
        let x = steps as f64 * a.theta - a.alpha;
        let marked_amp = x.cos() / (inst.ell() as f64).sqrt();
        let rest = inst.n() - inst.ell();
        let unmarked_amp = if rest > 0 { -x.sin() / (rest as f64).sqrt() } else { 0.0 };
        for (i, &amp) in s.amplitudes().iter().enumerate() {
            let expected = if inst.is_marked(i) { marked_amp } else { unmarked_amp };
            prop_assert!((amp - expected).abs() <= 1e-12, "i={} amp={} expected={}", i, amp, expected);
        }
    }

    #[test]
    fn angle_identity(n in 2usize..=(1 << 20), frac in 0.0f64..=1.0) {
        let ell = 1 + ((n - 1) as f64 * frac) as usize;
        let a = SpectralAngles64::new(n, ell).unwrap();
        prop_assert!(a.theta > 0.0 && a.theta <= std::f64::consts::PI);
        prop_assert!((a.alpha - (std::f64::consts::FRAC_PI_2 - a.theta / 2.0)).abs() <= 1e-12);
    }

    #[test]
    fn optimum_is_near_certain(n in 2usize..=(1 << 20), frac in 0.0f64..=1.0) {
        let ell = 1 + ((n - 1) as f64 * frac) as usize;
        let a = SpectralAngles64::new(n, ell).unwrap();
        let (m, p) = optimal_iterations(&a);
        prop_assert!(p >= (a.theta / 2.0).cos().powi(2) - 1e-12);
        prop_assert!(p >= success_probability(&a, m.saturating_sub(1)) - 1e-12);
        prop_assert!(p >= success_probability(&a, m + 1) - 1e-12);
    }

    #[test]
    fn matrix_consistency(n in 2usize..=(1 << 16), ell_raw in 1usize..=64) {
        let ell = ell_raw.min(n);
        let d = restricted_diffusion_matrix::<f64>(n, ell, DEFAULT_DENSE_CAP).unwrap();
        let u = restricted_grover_matrix::<f64>(n, ell, DEFAULT_DENSE_CAP).unwrap();
        prop_assert!(d.orthogonality_defect() <= 1e-12);
        prop_assert!(u.orthogonality_defect() <= 1e-12);
        prop_assert!(d.symmetry_defect() <= 1e-12);
        prop_assert!((u.determinant() - 1.0).abs() <= 1e-10);
        let mut diag = vec![-1.0; ell + 1];
        diag[ell] = 1.0;
        let composed = d.scale_columns(&diag);
        for (x, y) in u.entries.iter().zip(&composed.entries) {
            prop_assert!((x + y).abs() <= 1e-12);
        }
        let plane = u.compress_to_plane();
        let rot = reduced_step_matrix(&SpectralAngles64::new(n, ell).unwrap());
        prop_assert!(plane.max_abs_diff(&rot) <= 1e-12);
    }

    #[test]
    fn sampling_is_deterministic(inst in instance_strategy(512), seed: u64) {
        let s = evolve_state::<f64>(&inst, 1, &SimConfig::default()).unwrap();
        let a = s.sample_measurement(seed, 64);
        prop_assert_eq!(&a, &s.sample_measurement(seed, 64));
        prop_assert!(a.iter().all(|&i| i < inst.n()));
    }

    #[test]
    fn restart_plan_invariants(n in 60usize..=(1 << 22), ell_raw in 1usize..=1000) {
        let ell = ell_raw.min(n / 50).max(1);
        let a = SpectralAngles64::new(n, ell).unwrap();
        let plan = integer_stop_point(&a).unwrap();
        prop_assert_eq!(plan.method, PlanMethod::FixedPoint);
        prop_assert!(plan.residual.unwrap().abs() <= 1e-9);
        let identity = plan.j_integer as f64 / plan.success_probability_per_trial;
        prop_assert!((plan.expected_cost - identity).abs() <= 1e-12 * identity);
        let (m_opt, _) = optimal_iterations(&a);
        if m_opt >= 1 {
            prop_assert!(plan.expected_cost <= expected_cost(&a, m_opt as f64).unwrap() + 1e-9);
        }
    }
}
