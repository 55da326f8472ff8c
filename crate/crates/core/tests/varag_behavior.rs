use minmin_core::oracle::full_gradient;
use minmin_core::problems::LeastSquaresSum;
use minmin_core::varag::{
    build_schedule, variance_reduced_gradient, varag_run, varag_run_with, ThetaRegime, VaragOptions, VaragTermination,
};
use minmin_core::{FeasibleSet, FiniteSumOracle, Matrix, OracleLedger, Vector};
use proptest::prelude::*;

fn big_ball(n: usize) -> FeasibleSet {
    FeasibleSet::centered_ball(n, 1e6).unwrap()
}

#[test]
fn control_variate_is_unbiased_by_enumeration() {
    for (m, seed) in [(1, 0), (3, 1), (7, 2), (10, 3)] {
        // unequal smoothness constants give non-uniform sampling weights
        let mut ls = LeastSquaresSum::random(m, 4, 0.1, 20.0, seed).unwrap();
        for i in 0..m {
            let mut row = ls.a.row_mut(i);
            row *= 1.0 + i as f64;
        }
        let lips: Vec<f64> = (0..m).map(|i| ls.component_lipschitz(i)).collect();
        let mean = lips.iter().sum::<f64>() / m as f64;
        let sched = build_schedule(m, mean, ls.mu, &lips).unwrap();
        let anchor = Vector::from_fn(4, |i, _| 0.3 * i as f64 - 0.2);
        let point = Vector::from_fn(4, |i, _| 1.0 - 0.5 * i as f64);
        let g_anchor = full_gradient(&ls, &anchor);
        let mut expectation = Vector::zeros(4);
        for i in 0..m {
            let q = sched.probabilities[i];
            let g = variance_reduced_gradient(
                &ls.component_gradient(i, &point),
                &ls.component_gradient(i, &anchor),
                q,
                m,
                &g_anchor,
            );
            expectation += g * q;
        }
        let exact = full_gradient(&ls, &point);
        assert!((expectation - &exact).amax() <= 1e-12 * (1.0 + exact.amax()), "m = {m}");
    }
}

#[test]
fn single_component_estimate_is_the_gradient() {
    let ls = LeastSquaresSum::random(1, 3, 0.2, 5.0, 4).unwrap();
    let (anchor, point) = (Vector::from_element(3, 0.4), Vector::from_element(3, -1.0));
    let g = variance_reduced_gradient(
        &ls.component_gradient(0, &point),
        &ls.component_gradient(0, &anchor),
        1.0,
        1,
        &full_gradient(&ls, &anchor),
    );
    assert!((g - ls.component_gradient(0, &point)).amax() <= 1e-14);
}

#[test]
fn fixed_seed_runs_are_bitwise_identical() {
    let ls = LeastSquaresSum::random(30, 8, 0.05, 50.0, 5).unwrap();
    let run = |seed| {
        let mut trace = Vec::new();
        let mut ledger = OracleLedger::new();
        let out = varag_run_with(&ls, &big_ball(8), &Vector::zeros(8), &VaragOptions::epochs(25), seed, &mut ledger, |_, y| {
            trace.extend(y.iter().map(|v| v.to_bits()));
        })
        .unwrap();
        (trace, out.y.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), ledger)
    };
    assert_eq!(run(11), run(11));
    assert_ne!(run(11).1, run(12).1);
}

#[test]
fn strongly_convex_sum_reaches_the_direct_solve_optimum() {
    let ls = LeastSquaresSum::random(100, 20, 0.01, 100.0, 6).unwrap();
    let y_star = ls.minimizer().unwrap();
    let f_star = ls.value(&y_star);
    let y = varag_run(&ls, &big_ball(20), &Vector::zeros(20), 60, 3, &mut OracleLedger::new()).unwrap();
    assert!(ls.value(&y) - f_star <= 1e-6, "{}", ls.value(&y) - f_star);
}

#[test]
fn ledger_counts_full_passes_and_inner_steps() {
    let ls = LeastSquaresSum::random(8, 3, 0.1, 10.0, 7).unwrap();
    let mut ledger = OracleLedger::new();
    let out = varag_run_with(&ls, &big_ball(3), &Vector::zeros(3), &VaragOptions::epochs(6), 0, &mut ledger, |_, _| {}).unwrap();
    // T_s = 1, 2, 4, 8, 8, 8 for m = 8
    assert_eq!(ledger.grad_y_calls(), 6 * 8 + 31);
    assert_eq!(out.gradient_calls, ledger.grad_y_calls());
    assert_eq!(ledger.grad_x_calls(), 0);
    assert_eq!(out.epochs.len(), 6);
    assert!(out.epochs[..4].iter().all(|e| e.regime == ThetaRegime::Accelerated));
}

#[test]
fn budget_overshoot_is_below_one_full_pass() {
    let ls = LeastSquaresSum::random(50, 5, 0.1, 10.0, 8).unwrap();
    for budget in [1, 49, 50, 51, 130, 777] {
        let opts = VaragOptions { max_epochs: 1000, max_gradient_calls: Some(budget), target_gap: None };
        let out = varag_run_with(&ls, &big_ball(5), &Vector::zeros(5), &opts, 1, &mut OracleLedger::new(), |_, _| {}).unwrap();
        assert_eq!(out.termination, VaragTermination::Budget);
        assert!(out.gradient_calls >= budget && out.gradient_calls < budget + 50, "{budget}: {}", out.gradient_calls);
    }
}

#[test]
fn target_gap_is_certified() {
    let ls = LeastSquaresSum::random(40, 6, 0.05, 30.0, 9).unwrap();
    let f_star = ls.value(&ls.minimizer().unwrap());
    let opts = VaragOptions { max_epochs: 10_000, max_gradient_calls: None, target_gap: Some(1e-9) };
    let out = varag_run_with(&ls, &big_ball(6), &Vector::zeros(6), &opts, 2, &mut OracleLedger::new(), |_, _| {}).unwrap();
    assert_eq!(out.termination, VaragTermination::Target);
    assert!(ls.value(&out.y) - f_star <= 1e-9);
}

#[test]
fn zero_mu_run_decreases_a_convex_sum_on_a_ball() {
    // rank-deficient least squares without regularization
    let a = Matrix::from_fn(12, 4, |i, j| if j < 2 { ((i * 7 + j * 3) % 5) as f64 - 2.0 } else { 0.0 });
    let b = Vector::from_fn(12, |i, _| (i % 3) as f64);
    let ls = LeastSquaresSum::new(a, b, 0.0).unwrap();
    let set = FeasibleSet::centered_ball(4, 2.0).unwrap();
    let start = Vector::from_element(4, 0.5);
    let y = varag_run(&ls, &set, &start, 200, 4, &mut OracleLedger::new()).unwrap();
    assert!(ls.value(&y) < ls.value(&start));
    assert!(y.norm() <= 2.0 + 1e-12);
}

proptest! {
    #[test]
    fn schedule_identities(m in 1usize..300, l in 0.1f64..100.0, kappa in 1.0f64..1e4, s in 1usize..60) {
        let mu = l / kappa;
        let sched = build_schedule(m, l, mu, &vec![l; m]).unwrap();
        let e = sched.epoch(s);
        prop_assert!((e.gamma * e.alpha * 3.0 * l - 1.0).abs() <= 1e-12);
        prop_assert_eq!(e.theta.len(), e.inner_steps);
        prop_assert!(e.theta.iter().all(|&t| t > 0.0));
        if s <= sched.s0 {
            prop_assert_eq!(e.inner_steps, 1usize << (s - 1));
            prop_assert_eq!(e.regime, ThetaRegime::Accelerated);
            for (t, &th) in e.theta.iter().enumerate() {
                let expected = if t + 1 < e.inner_steps { e.gamma / e.alpha * (e.alpha + e.p) } else { e.gamma / e.alpha };
                prop_assert!((th - expected).abs() <= 1e-12 * expected);
            }
        } else {
            prop_assert_eq!(e.inner_steps, 1usize << (sched.s0 - 1));
            prop_assert!(e.alpha <= 0.5 && e.alpha > 0.0);
        }
    }
}
