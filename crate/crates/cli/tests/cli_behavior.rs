use std::fs;
use std::path::Path;
use std::process::Command;

use minmin_cli::{compare, run_experiment, CliError, ExperimentConfig, Method, ProblemSource};
use minmin_core::problems::{synthetic_dataset, write_libsvm};
use minmin_core::RunHistory;

fn config(spec: &str, d: usize, method: Method, budget: u64, out: &Path) -> ExperimentConfig {
    ExperimentConfig {
        source: ProblemSource::Synthetic(spec.parse().unwrap()),
        d,
        sigma2_inv: 0.005,
        radius: None,
        method,
        budget,
        target_epsilon: 1e-6,
        seed: 3,
        out_dir: out.to_path_buf(),
        wall_time: false,
    }
}

fn read_history(dir: &Path) -> RunHistory {
    RunHistory::parse_csv(&fs::read_to_string(dir.join("history.csv")).unwrap()).unwrap()
}

#[test]
fn approach1_on_a_quadratic_reaches_the_target() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("quadratic:n=20,seed=4", 3, Method::Approach1, 50_000_000, dir.path());
    let report = run_experiment(&cfg).unwrap();
    let f_star = report.f_star.unwrap();
    let history = read_history(dir.path());
    let last = history.last().unwrap().objective;
    assert!(last - f_star <= 1e-6, "{}", last - f_star);
    assert_eq!(last, report.final_objective());
    assert!(fs::read_to_string(dir.path().join("summary.txt")).unwrap().starts_with("target_eps,outer_iters"));
}

#[test]
fn varag_joint_respects_the_budget_up_to_one_pass() {
    let dir = tempfile::tempdir().unwrap();
    for budget in [150, 1000, 4321] {
        let cfg = config("logreg:m=40,features=8", 3, Method::VaragJoint, budget, dir.path());
        let report = run_experiment(&cfg).unwrap();
        let last = read_history(dir.path()).last().unwrap().ledger;
        assert!(last.grad_y_calls() <= budget + 40, "{budget}: {}", last.grad_y_calls());
        assert_eq!(last.grad_x_calls(), last.grad_y_calls());
        assert_eq!(report.summary.inversions, 0);
    }
}

#[test]
fn fixed_seed_runs_write_identical_histories() {
    for method in [Method::Approach2, Method::VaragJoint] {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        run_experiment(&config("logreg:m=30,features=6", 2, method, 20_000, a.path())).unwrap();
        run_experiment(&config("logreg:m=30,features=6", 2, method, 20_000, b.path())).unwrap();
        let read = |d: &Path| fs::read(d.join("history.csv")).unwrap();
        assert_eq!(read(a.path()), read(b.path()), "{method}");
    }
}

#[test]
fn histories_parse_and_are_monotone() {
    for method in [Method::Approach1, Method::Approach2, Method::VaragJoint] {
        let dir = tempfile::tempdir().unwrap();
        run_experiment(&config("logreg:m=25,features=5", 2, method, 30_000, dir.path())).unwrap();
        let h = read_history(dir.path());
        assert_eq!(h.records()[0].step, 0);
        for w in h.records().windows(2) {
            assert!(w[1].ledger.dominates(&w[0].ledger));
            assert!(w[1].objective <= w[0].objective, "{method}");
        }
    }
}

#[test]
fn identical_runs_compare_equal() {
    let dir = tempfile::tempdir().unwrap();
    let a = config("logreg:m=20,features=5", 2, Method::Approach2, 10_000, &dir.path().join("a"));
    let b = ExperimentConfig { out_dir: dir.path().join("b"), ..a.clone() };
    let report = compare(&a, &b, dir.path()).unwrap();
    assert!(report.rows.iter().all(|(_, x, y)| x == y));
    let text = fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    assert!(text.starts_with("grad_y,obj_a,obj_b\n"));
    assert_eq!(text.lines().count(), report.rows.len() + 1);
}

#[test]
fn budget_below_one_epoch_still_compares() {
    let dir = tempfile::tempdir().unwrap();
    let a = config("logreg:m=50,features=6", 2, Method::Approach2, 20, &dir.path().join("a"));
    let b = ExperimentConfig { method: Method::VaragJoint, out_dir: dir.path().join("b"), ..a.clone() };
    let report = compare(&a, &b, dir.path()).unwrap();
    assert!(report.rows.iter().all(|(_, x, y)| x.is_some() && y.is_some()));
    // each objective column is carried forward, so it never increases
    for w in report.rows.windows(2) {
        assert!(w[1].1 <= w[0].1 && w[1].2 <= w[0].2);
    }
}

#[test]
fn mismatched_problems_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let a = config("logreg:m=20,features=5", 2, Method::Approach2, 1000, dir.path());
    let other_data = ExperimentConfig { source: ProblemSource::Synthetic("logreg:m=21,features=5".parse().unwrap()), ..a.clone() };
    let other_budget = ExperimentConfig { budget: 999, ..a.clone() };
    let other_seed = ExperimentConfig { seed: 4, ..a.clone() };
    for b in [other_data, other_budget, other_seed] {
        assert!(matches!(compare(&a, &b, dir.path()), Err(CliError::Config(_))));
    }
}

#[test]
fn approach2_and_varag_joint_need_a_finite_sum() {
    let dir = tempfile::tempdir().unwrap();
    for method in [Method::Approach2, Method::VaragJoint] {
        let cfg = config("quadratic:n=5", 2, method, 1000, dir.path());
        assert!(matches!(run_experiment(&cfg), Err(CliError::Config(_))));
    }
    let cfg = config("quadratic:n=5,m=10", 2, Method::Approach2, 100_000, dir.path());
    assert!(run_experiment(&cfg).is_ok());
}

fn minmin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_minmin"))
}

#[test]
fn binary_runs_a_libsvm_file() {
    let dir = tempfile::tempdir().unwrap();
    let data_path = dir.path().join("train.svm");
    write_libsvm(&synthetic_dataset(60, 7, 0.1, 1).unwrap(), fs::File::create(&data_path).unwrap()).unwrap();
    let out = dir.path().join("run");
    let status = minmin()
        .args(["--data", data_path.to_str().unwrap(), "--standardize", "--rows", "40", "--d", "3", "--reg", "0.005"])
        .args(["--method", "approach2", "--budget", "20000", "--seed", "1", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    assert!(String::from_utf8_lossy(&status.stdout).starts_with("target_eps,outer_iters"));
    assert!(read_history(&out).len() > 1);
}

#[test]
fn binary_compare_mode_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let status = minmin()
        .args(["--synthetic", "logreg:m=30,features=6", "--d", "2", "--budget", "5000"])
        .args(["--method", "approach2", "--compare-with", "varag-joint", "--out", dir.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(status.status.success());
    assert!(String::from_utf8_lossy(&status.stdout).contains("lower: "));
    for f in ["compare.csv", "approach2/history.csv", "approach2/summary.txt", "varag-joint/history.csv"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
}

#[test]
fn binary_exits_with_one_on_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cases: [&[&str]; 4] = [
        &["--data", "/nonexistent/file.svm", "--d", "2", "--budget", "10", "--out", out],
        &["--synthetic", "cubic:n=3", "--d", "2", "--budget", "10", "--out", out],
        &["--synthetic", "logreg:m=10,features=4", "--d", "2", "--budget", "0", "--out", out],
        &["--synthetic", "logreg:m=10,features=4", "--d", "2", "--budget", "10", "--method", "sgd", "--out", out],
    ];
    for args in cases {
        let o = minmin().args(args).output().unwrap();
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    }
}
