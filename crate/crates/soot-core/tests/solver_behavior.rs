//! End-to-end behavior of the block-alternating solver on small problems:
//! descent, stopping, determinism, feasibility, and the strategy registry.

use soot_core::{
    objective_f, phi, solve_problem, BoxConstraint, KernelConstraint, Problem, SolverConfig,
    SolverError, SolverRegistry, SolverSettings, SootParams, Termination,
};
use testkit::{conv_same_brute, exact_sum_sq, SplitMix64};

fn small_problem(rng: &mut SplitMix64, n: usize, s: usize) -> Problem {
    let x_true: Vec<f64> = (0..n)
        .map(|i| if i % 3 == 0 { rng.next_in(-1.0, 1.0) } else { 0.0 })
        .collect();
    let h_true = rng.next_vec(s, -0.8, 0.8);
    let y = conv_same_brute(&h_true, &x_true);
    let params = SootParams::new(0.05, 7e-3, 1e-2, 1e-2).unwrap();
    let box_x = BoxConstraint::new(-2.0, 2.0).unwrap();
    let radius = 1.05 * exact_sum_sq(&h_true).sqrt();
    let lo = h_true.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = h_true.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let set_h = KernelConstraint::new(lo.min(0.0), hi.max(0.0), radius).unwrap();
    let init_x = vec![0.1; n];
    let init_h = {
        let mut h = vec![0.0; s];
        h[s / 2] = 0.5 * radius.min(hi.max(0.0));
        h
    };
    Problem::new(y, init_x, init_h, params, box_x, set_h).unwrap()
}

#[test]
fn objective_matches_brute_force_on_feasible_points() {
    let mut rng = SplitMix64(301);
    for _ in 0..50 {
        let n = 4 + (rng.next_u64() % 10) as usize;
        let s = 1 + (rng.next_u64() % 4) as usize;
        let x = rng.next_vec(n, -1.0, 1.0);
        let h = rng.next_vec(s, -0.3, 0.3);
        let y = rng.next_vec(n, -1.0, 1.0);
        let p = SootParams::new(0.4, 0.1, 0.1, 0.1).unwrap();
        let bx = BoxConstraint::new(-1.0, 1.0).unwrap();
        let sh = KernelConstraint::new(-1.0, 1.0, 2.0).unwrap();
        let got = objective_f(&x, &h, &y, &p, &bx, &sh);
        let hx = conv_same_brute(&h, &x);
        let r: Vec<f64> = hx.iter().zip(&y).map(|(a, b)| a - b).collect();
        let want = 0.5 * exact_sum_sq(&r) + phi(&x, &p);
        assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
    }
}

#[test]
fn objective_is_infinite_off_the_feasible_set() {
    let p = SootParams::new(0.4, 0.1, 0.1, 0.1).unwrap();
    let bx = BoxConstraint::new(-1.0, 1.0).unwrap();
    let sh = KernelConstraint::new(-1.0, 1.0, 0.5).unwrap();
    let y = vec![0.0; 4];
    // x violates its box
    let v = objective_f(&[2.0, 0.0, 0.0, 0.0], &[0.1], &y, &p, &bx, &sh);
    assert!(v.is_infinite() && v > 0.0);
    // h violates the ball (box ok)
    let v = objective_f(&[0.1; 4], &[0.9, 0.9], &y, &p, &bx, &sh);
    assert!(v.is_infinite() && v > 0.0);
}

#[test]
fn objective_never_increases_along_the_iterations() {
    let mut rng = SplitMix64(307);
    for trial in 0..8 {
        let prob = small_problem(&mut rng, 8, 3);
        for (j, i) in [(1, 1), (3, 2), (5, 1)] {
            let cfg = SolverConfig {
                inner_x: j,
                inner_h: i,
                stop_tol: 0.0,
                max_outer: 200,
                ..SolverConfig::default()
            };
            let out = solve_problem(&prob, &cfg).unwrap();
            assert!(
                out.trace.is_nonincreasing(1e-9),
                "trial {trial} J={j} I={i}: objective increased"
            );
            assert_eq!(out.trace.rows.len(), 201); // init row + 200 outer rows
            assert!(matches!(out.termination, Termination::MaxOuter));
        }
    }
}

#[test]
fn outputs_are_always_feasible() {
    let mut rng = SplitMix64(311);
    for _ in 0..10 {
        let prob = small_problem(&mut rng, 10, 4);
        let cfg = SolverConfig {
            max_outer: 50,
            ..SolverConfig::default()
        };
        let out = solve_problem(&prob, &cfg).unwrap();
        assert!(prob.box_x.contains_all(&out.x_hat, 0.0));
        assert!(prob.set_h.contains(&out.h_hat, 1e-8));
        assert!(out.trace.final_f().is_finite());
    }
}

#[test]
fn truth_start_with_vanishing_penalty_converges_immediately() {
    // at the exact factorization the data term's gradient is zero, so with a
    // tiny penalty weight the iterates barely move and the stop rule fires
    // within a few outer iterations
    let mut rng = SplitMix64(313);
    let n = 16;
    let x_true: Vec<f64> = (0..n)
        .map(|i| if i % 4 == 1 { rng.next_in(0.3, 1.0) } else { 0.0 })
        .collect();
    let h_true: Vec<f64> = vec![0.1, -0.4, 0.9, -0.4, 0.1];
    let y = conv_same_brute(&h_true, &x_true);
    let params = SootParams::new(1e-8, 7e-3, 1e-2, 1e-2).unwrap();
    let box_x = BoxConstraint::new(-2.0, 2.0).unwrap();
    let radius = 1.05 * exact_sum_sq(&h_true).sqrt();
    let set_h = KernelConstraint::new(-0.4, 0.9, radius).unwrap();
    let prob = Problem::new(
        y,
        x_true.clone(),
        h_true.clone(),
        params,
        box_x,
        set_h,
    )
    .unwrap();
    let out = solve_problem(&prob, &SolverConfig::default()).unwrap();
    assert!(matches!(out.termination, Termination::Converged));
    let outer_count = out.trace.rows.len() - 1;
    assert!(outer_count <= 10, "took {outer_count} outer iterations");
    for i in 0..n {
        assert!((out.x_hat[i] - x_true[i]).abs() <= 1e-4);
    }
}

#[test]
fn infeasible_initial_points_are_rejected() {
    let params = SootParams::new(0.1, 0.1, 0.1, 0.1).unwrap();
    let box_x = BoxConstraint::new(-1.0, 1.0).unwrap();
    let set_h = KernelConstraint::new(-1.0, 1.0, 0.5).unwrap();
    let y = vec![0.3; 6];
    let cfg = SolverConfig::default();

    // kernel outside the ball
    let bad_h = Problem::new(
        y.clone(),
        vec![0.0; 6],
        vec![0.6, 0.6],
        params,
        box_x,
        set_h,
    )
    .unwrap();
    match solve_problem(&bad_h, &cfg) {
        Err(SolverError::InfeasibleInit(msg)) => assert!(msg.contains("kernel"), "{msg}"),
        other => panic!("expected InfeasibleInit, got {other:?}"),
    }

    // signal outside its box
    let bad_x =
        Problem::new(y, vec![3.0; 6], vec![0.1, 0.1], params, box_x, set_h).unwrap();
    match solve_problem(&bad_x, &cfg) {
        Err(SolverError::InfeasibleInit(msg)) => assert!(msg.contains("signal"), "{msg}"),
        other => panic!("expected InfeasibleInit, got {other:?}"),
    }
}

#[test]
fn invalid_configurations_are_rejected() {
    let bad_step = SolverConfig {
        step_x: 2.5,
        ..SolverConfig::default()
    };
    assert!(matches!(bad_step.validate(), Err(SolverError::Config(_))));
    let bad_inner = SolverConfig {
        inner_x: 0,
        ..SolverConfig::default()
    };
    assert!(matches!(bad_inner.validate(), Err(SolverError::Config(_))));
    let bad_tol = SolverConfig {
        stop_tol: -1.0,
        ..SolverConfig::default()
    };
    assert!(matches!(bad_tol.validate(), Err(SolverError::Config(_))));
}

#[test]
fn repeated_runs_are_bitwise_identical_modulo_wall_time() {
    let mut rng = SplitMix64(317);
    let prob = small_problem(&mut rng, 12, 3);
    let cfg = SolverConfig {
        max_outer: 40,
        stop_tol: 0.0,
        ..SolverConfig::default()
    };
    let a = solve_problem(&prob, &cfg).unwrap();
    let b = solve_problem(&prob, &cfg).unwrap();
    assert_eq!(a.x_hat, b.x_hat);
    assert_eq!(a.h_hat, b.h_hat);
    assert_eq!(a.trace.rows.len(), b.trace.rows.len());
    for (ra, rb) in a.trace.rows.iter().zip(&b.trace.rows) {
        assert_eq!(ra.k, rb.k);
        assert_eq!(ra.f.to_bits(), rb.f.to_bits());
        assert_eq!(ra.x_delta.to_bits(), rb.x_delta.to_bits());
        assert_eq!(ra.h_delta.to_bits(), rb.h_delta.to_bits());
        assert_eq!(ra.nu_low.to_bits(), rb.nu_low.to_bits());
        assert_eq!(ra.nu_high.to_bits(), rb.nu_high.to_bits());
    }
}

#[test]
fn disabling_the_descent_check_changes_nothing_on_wellposed_runs() {
    let mut rng = SplitMix64(331);
    let prob = small_problem(&mut rng, 10, 3);
    let on = SolverConfig {
        max_outer: 60,
        ..SolverConfig::default()
    };
    let off = SolverConfig {
        check_descent: false,
        ..on
    };
    let a = solve_problem(&prob, &on).unwrap();
    let b = solve_problem(&prob, &off).unwrap();
    assert_eq!(a.x_hat, b.x_hat);
    assert_eq!(a.h_hat, b.h_hat);
}

#[test]
fn trace_csv_round_trips_the_header_and_rows() {
    let mut rng = SplitMix64(337);
    let prob = small_problem(&mut rng, 8, 3);
    let cfg = SolverConfig {
        max_outer: 5,
        stop_tol: 0.0,
        ..SolverConfig::default()
    };
    let out = solve_problem(&prob, &cfg).unwrap();
    let mut buf = Vec::new();
    out.trace.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,F,x_delta,h_delta,wall_time_s,nu_low,nu_high"
    );
    let mut count = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 7);
        assert_eq!(fields[0], count.to_string());
        for v in &fields[1..] {
            v.parse::<f64>().unwrap();
        }
        count += 1;
    }
    assert_eq!(count, 6);
}

#[test]
fn registry_knows_every_builtin_and_rejects_strangers() {
    let reg = SolverRegistry::default();
    assert_eq!(reg.names(), ["l1l2", "palm", "soot"]);
    let settings = SolverSettings::default();
    for name in reg.names() {
        let solver = reg.create(&name, &settings).unwrap();
        assert_eq!(solver.name(), name);
    }
    let err = reg
        .create("newton", &settings)
        .err()
        .expect("strangers must be rejected");
    match err {
        SolverError::UnknownMethod(name, known) => {
            assert_eq!(name, "newton");
            for k in ["l1l2", "palm", "soot"] {
                assert!(known.contains(k), "{known} missing {k}");
            }
        }
        other => panic!("expected UnknownMethod, got {other:?}"),
    }
}

#[test]
fn every_registered_strategy_solves_a_small_instance() {
    let mut rng = SplitMix64(347);
    let prob = small_problem(&mut rng, 12, 3);
    let reg = SolverRegistry::default();
    let mut settings = SolverSettings::default();
    settings.soot.max_outer = 30;
    settings.baseline.outer_iters = 30;
    for name in reg.names() {
        let solver = reg.create(&name, &settings).unwrap();
        let out = solver.solve(&prob).expect(&name);
        assert!(prob.box_x.contains_all(&out.x_hat, 0.0), "{name}");
        assert!(prob.set_h.contains(&out.h_hat, 1e-8), "{name}");
        assert!(out.trace.final_f().is_finite(), "{name}");
    }
}
