use minmin_core::vaidya::{vaidya_minimize, OracleResponse, Termination, VaidyaAction, VaidyaConfig};
use minmin_core::{FeasibleSet, OracleLedger, Vector};

fn squared_distance(target: Vector) -> impl FnMut(&Vector, &mut OracleLedger) -> minmin_core::Result<OracleResponse> {
    move |x, ledger| {
        ledger.add_grad_x(1);
        let r = x - &target;
        Ok(OracleResponse::Cut { value: r.norm_squared(), subgradient: r * 2.0 })
    }
}

#[test]
fn finds_the_minimizer_of_a_shifted_paraboloid() {
    let target = Vector::from_column_slice(&[0.3, -0.45]);
    let cfg = VaidyaConfig { max_oracle_calls: Some(400), max_iterations: 100_000, ..VaidyaConfig::default() };
    let mut ledger = OracleLedger::new();
    let out = vaidya_minimize(squared_distance(target.clone()), &FeasibleSet::cube(2, -1.0, 1.0).unwrap(), &cfg, &mut ledger).unwrap();
    assert!(out.f_best <= 1e-6, "{}", out.f_best);
    assert_eq!(out.termination, Termination::OracleBudget);
    assert_eq!(ledger.grad_x_calls(), 400);
    assert_eq!(ledger.matrix_inversions(), out.barrier_evaluations);
    for it in &out.iterations {
        assert!((it.sigma_sum - 2.0).abs() <= 1e-10, "sum of leverage scores {}", it.sigma_sum);
    }
    assert!(out.iterations.iter().any(|it| it.action == VaidyaAction::Drop));
}

#[test]
fn nonsmooth_one_dimensional_objective() {
    let oracle = |x: &Vector, _: &mut OracleLedger| {
        let r = x[0] - 0.3;
        Ok(OracleResponse::Cut { value: r.abs(), subgradient: Vector::from_element(1, r.signum()) })
    };
    let cfg = VaidyaConfig { max_oracle_calls: Some(130), max_iterations: 100_000, ..VaidyaConfig::default() };
    let out = vaidya_minimize(oracle, &FeasibleSet::cube(1, -1.0, 1.0).unwrap(), &cfg, &mut OracleLedger::new()).unwrap();
    assert!(out.f_best <= 1e-4, "{}", out.f_best);
}

#[test]
fn ball_domain_uses_feasibility_cuts() {
    // minimizer of the linear function over the unit disc is -(1, 1)/sqrt(2);
    // parallel cuts make this a slow case
    let oracle = |x: &Vector, _: &mut OracleLedger| {
        Ok(OracleResponse::Cut { value: x[0] + x[1], subgradient: Vector::from_element(2, 1.0) })
    };
    let cfg = VaidyaConfig { max_oracle_calls: Some(1000), max_iterations: 100_000, ..VaidyaConfig::default() };
    let q_x = FeasibleSet::centered_ball(2, 1.0).unwrap();
    let out = vaidya_minimize(oracle, &q_x, &cfg, &mut OracleLedger::new()).unwrap();
    assert!(out.f_best + 2f64.sqrt() <= 1e-5, "{}", out.f_best);
    assert!(out.iterations.iter().any(|it| it.action == VaidyaAction::Feasibility));
    assert!(out.x_best.unwrap().norm() <= 1.0 + 1e-12);
}

#[test]
fn oracle_stop_and_csv_dump() {
    let mut calls = 0;
    let oracle = |x: &Vector, _: &mut OracleLedger| {
        calls += 1;
        if calls > 5 {
            return Ok(OracleResponse::Stop);
        }
        Ok(OracleResponse::Cut { value: x.norm_squared(), subgradient: x * 2.0 + Vector::from_element(3, 0.1) })
    };
    let out = vaidya_minimize(oracle, &FeasibleSet::cube(3, -1.0, 1.0).unwrap(), &VaidyaConfig::default(), &mut OracleLedger::new()).unwrap();
    assert_eq!(out.termination, Termination::OracleStop);
    assert_eq!(out.oracle_calls, 6);
    let mut buf = Vec::new();
    out.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,m_rows,min_sigma,action,f_best"));
    assert_eq!(lines.count(), out.iterations.len());
}
