//! Single runs and two-run comparisons, written as CSV under an output directory.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::info;
use minmin_core::minmin::{solve_minmin, InnerSolver, JointComponents, MinMinConfig, MinMinProblem, MinMinSummary, Objective};
use minmin_core::problems::{
    default_radius, load_libsvm, make_conditioned_quadratic_minmin, make_finite_sum_quadratic_minmin,
    make_logreg_minmin, make_quadratic_minmin, random_coupling, synthetic_dataset, Dataset,
};
use minmin_core::varag::{varag_run_with, VaragOptions};
use minmin_core::{FiniteSumOracle, HistoryRecord, OracleLedger, RunHistory};

use crate::synthetic::SyntheticSpec;
use crate::CliError;

pub const HISTORY_FILE: &str = "history.csv";
pub const SUMMARY_FILE: &str = "summary.txt";
pub const COMPARE_FILE: &str = "compare.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Vaidya outside, restarted FGM on the full `grad_y F` inside.
    Approach1,
    /// Vaidya outside, Varag on the components `F_i(x, .)` inside.
    Approach2,
    /// Varag on `F(x, y)` as one problem in `(x, y)` with `mu = 0`.
    VaragJoint,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Approach1 => "approach1",
            Method::Approach2 => "approach2",
            Method::VaragJoint => "varag-joint",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "approach1" => Ok(Method::Approach1),
            "approach2" => Ok(Method::Approach2),
            "varag-joint" => Ok(Method::VaragJoint),
            other => Err(CliError::Config(format!(
                "unknown method {other:?}; use approach1, approach2 or varag-joint"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    /// A LIBSVM file, optionally standardized and cut to its first `rows` objects.
    Libsvm { path: PathBuf, standardize: bool, rows: Option<usize> },
    Synthetic(SyntheticSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub source: ProblemSource,
    /// Size of the `x` block: the first `d` features for logistic regression.
    pub d: usize,
    /// `1 / sigma^2` for logistic regression.
    pub sigma2_inv: f64,
    /// Radius of the centered balls `Q_x` and `Q_y` for logistic regression;
    /// `10 (1 + max row norm)` when unset.
    pub radius: Option<f64>,
    pub method: Method,
    /// Limit on `grad_y` calls, counted per component for finite sums.
    pub budget: u64,
    pub target_epsilon: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Stamp history rows with wall time; off keeps the CSV reproducible byte for byte.
    pub wall_time: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.budget == 0 {
            return Err(CliError::Config("budget must be positive".into()));
        }
        if self.d == 0 {
            return Err(CliError::Config("d must be positive".into()));
        }
        if !(self.target_epsilon > 0.0) {
            return Err(CliError::Config(format!("target accuracy must be positive, got {}", self.target_epsilon)));
        }
        if self.radius.is_some_and(|r| !(r > 0.0) || !r.is_finite()) {
            return Err(CliError::Config("radius must be positive".into()));
        }
        if !(self.sigma2_inv > 0.0) || !self.sigma2_inv.is_finite() {
            return Err(CliError::Config(format!("regularization must be positive, got {}", self.sigma2_inv)));
        }
        Ok(())
    }

    fn same_problem(&self, other: &Self) -> bool {
        let seeds_agree = match &self.source {
            ProblemSource::Synthetic(s) => s.data_seed(self.seed) == s.data_seed(other.seed),
            ProblemSource::Libsvm { .. } => true,
        };
        self.source == other.source
            && self.d == other.d
            && self.sigma2_inv == other.sigma2_inv
            && self.radius == other.radius
            && seeds_agree
    }
}

/// A problem ready to solve, with its optimal value when known in closed form.
#[derive(Debug, Clone)]
pub struct BuiltProblem {
    pub problem: MinMinProblem,
    pub f_star: Option<f64>,
}

fn logreg_problem(data: Dataset, cfg: &ExperimentConfig) -> Result<BuiltProblem, CliError> {
    let radius = cfg.radius.unwrap_or_else(|| default_radius(&data));
    let problem = make_logreg_minmin(data, cfg.d, cfg.sigma2_inv, radius, radius)?;
    Ok(BuiltProblem { problem, f_star: None })
}

pub fn build_problem(cfg: &ExperimentConfig) -> Result<BuiltProblem, CliError> {
    match &cfg.source {
        ProblemSource::Libsvm { path, standardize, rows } => {
            let mut data = load_libsvm(path, *standardize)?;
            if let Some(r) = rows {
                data = data.head(*r);
            }
            info!("loaded {} objects with {} features from {}", data.len(), data.num_features(), path.display());
            logreg_problem(data, cfg)
        }
        ProblemSource::Synthetic(spec) => {
            let seed = spec.data_seed(cfg.seed);
            match *spec {
                SyntheticSpec::LogReg { m, features, noise, .. } => {
                    logreg_problem(synthetic_dataset(m, features, noise, seed)?, cfg)
                }
                SyntheticSpec::Quadratic { n, mu, lipschitz, m, .. } => {
                    let (problem, sol) = match (lipschitz, m) {
                        (Some(_), Some(_)) => {
                            return Err(CliError::Config("quadratic: give lipschitz or m, not both".into()))
                        }
                        (None, Some(m)) => make_finite_sum_quadratic_minmin(m, cfg.d, n, mu, seed)?,
                        (Some(l), None) => make_conditioned_quadratic_minmin(random_coupling(cfg.d, n, seed), l, mu, seed)?,
                        (None, None) => make_quadratic_minmin(random_coupling(cfg.d, n, seed), mu, seed)?,
                    };
                    Ok(BuiltProblem { problem, f_star: Some(sol.f_star) })
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub method: Method,
    /// Starts with the objective at the initial point and an empty ledger;
    /// later rows hold the best objective so far.
    pub history: RunHistory,
    pub summary: MinMinSummary,
    pub f_star: Option<f64>,
    pub num_components: usize,
}

impl ExperimentReport {
    pub fn final_objective(&self) -> f64 {
        self.summary.best_value
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(io_err(path))
}

fn starting_history(problem: &MinMinProblem, wall_time: bool) -> Result<RunHistory, CliError> {
    let mut history = if wall_time { RunHistory::new() } else { RunHistory::without_timing() };
    let value = problem.value(&problem.q_x.center(), &problem.q_y.center());
    history.push(HistoryRecord { step: 0, objective: value, ledger: OracleLedger::new(), time_s: 0.0 })?;
    Ok(history)
}

/// Appends `rest` to `head`, keeping `head`'s first row.
fn prepend(mut head: RunHistory, rest: &RunHistory) -> Result<RunHistory, CliError> {
    for r in rest.records() {
        head.push(*r)?;
    }
    Ok(head)
}

type RunResult = Result<(RunHistory, MinMinSummary), (RunHistory, minmin_core::Error)>;

fn run_vaidya(problem: &MinMinProblem, cfg: &ExperimentConfig, inner: InnerSolver) -> Result<RunResult, CliError> {
    let head = starting_history(problem, cfg.wall_time)?;
    let mut mcfg = MinMinConfig::new(cfg.target_epsilon, inner);
    mcfg.seed = cfg.seed;
    mcfg.grad_y_budget = Some(cfg.budget);
    mcfg.record_wall_time = cfg.wall_time;
    Ok(match solve_minmin(problem, &mcfg, &mut OracleLedger::new()) {
        Ok(sol) => Ok((prepend(head, &sol.history)?, sol.summary)),
        Err(failure) => Err((prepend(head, &failure.history)?, failure.error)),
    })
}

fn run_varag_joint(problem: &MinMinProblem, cfg: &ExperimentConfig) -> Result<RunResult, CliError> {
    let Objective::FiniteSum(sum) = &problem.objective else {
        return Err(CliError::Config("varag-joint needs a finite-sum problem".into()));
    };
    let joint = JointComponents::new(sum.as_ref());
    let set = JointComponents::feasible_set(problem)?;
    let w0 = JointComponents::join(&problem.q_x.center(), &problem.q_y.center());
    let opts = VaragOptions {
        max_epochs: usize::MAX,
        max_gradient_calls: Some(cfg.budget),
        target_gap: Some(cfg.target_epsilon),
    };
    let mut history = starting_history(problem, cfg.wall_time)?;
    let mut best = history.records()[0].objective;
    let mut record_error = None;
    let mut ledger = OracleLedger::new();
    let outcome = varag_run_with(&joint, &set, &w0, &opts, cfg.seed, &mut ledger, |report, w| {
        best = best.min(joint.value(w));
        let mut snapshot = OracleLedger::new();
        snapshot.add_grad_x(report.gradient_calls);
        snapshot.add_grad_y(report.gradient_calls);
        if let Err(e) = history.record(report.s as u64, best, snapshot) {
            record_error.get_or_insert(e);
        }
    });
    if let Some(e) = record_error {
        return Ok(Err((history, e)));
    }
    Ok(match outcome {
        Ok(out) => {
            let summary = MinMinSummary {
                target_eps: cfg.target_epsilon,
                outer_iters: out.epochs.len(),
                grad_x: ledger.grad_x_calls(),
                grad_y: ledger.grad_y_calls(),
                inversions: ledger.matrix_inversions(),
                best_value: best,
            };
            Ok((history, summary))
        }
        Err(e) => Err((history, e)),
    })
}

/// Runs one method and writes `history.csv` and `summary.txt` under
/// `cfg.out_dir`. A solver failure still writes the history gathered so far.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, CliError> {
    cfg.validate()?;
    let built = build_problem(cfg)?;
    let problem = &built.problem;
    let m = problem.objective.num_components();
    if cfg.method == Method::Approach2 && !matches!(problem.objective, Objective::FiniteSum(_)) {
        return Err(CliError::Config("approach2 needs a finite-sum problem".into()));
    }
    fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;
    info!(
        "{}: d = {}, n = {}, m = {m}, L = {:.4e}, mu = {:.4e}, budget = {}",
        cfg.method,
        problem.dim_x(),
        problem.dim_y(),
        problem.lipschitz_y,
        problem.mu,
        cfg.budget
    );
    let result = match cfg.method {
        Method::Approach1 => run_vaidya(problem, cfg, InnerSolver::RestartedFgm)?,
        Method::Approach2 => run_vaidya(problem, cfg, InnerSolver::Varag)?,
        Method::VaragJoint => run_varag_joint(problem, cfg)?,
    };
    let history_path = cfg.out_dir.join(HISTORY_FILE);
    match result {
        Ok((history, summary)) => {
            write_file(&history_path, &history.to_csv_string())?;
            write_file(&cfg.out_dir.join(SUMMARY_FILE), &summary.to_csv())?;
            info!("{}: best objective {:.10e} after {} grad_y calls", cfg.method, summary.best_value, summary.grad_y);
            Ok(ExperimentReport { method: cfg.method, history, summary, f_star: built.f_star, num_components: m })
        }
        Err((history, source)) => {
            write_file(&history_path, &history.to_csv_string())?;
            Err(CliError::Solver { source, rows: history.len(), history: history_path })
        }
    }
}

/// Objective of each history on the union of their `grad_y` values, each
/// taken from the last row at or below that value.
pub fn align_histories(a: &RunHistory, b: &RunHistory) -> Vec<(u64, Option<f64>, Option<f64>)> {
    let mut grid: Vec<u64> = a.records().iter().chain(b.records()).map(|r| r.ledger.grad_y_calls()).collect();
    grid.sort_unstable();
    grid.dedup();
    let at = |h: &RunHistory, g: u64| {
        let recs = h.records();
        let k = recs.partition_point(|r| r.ledger.grad_y_calls() <= g);
        k.checked_sub(1).map(|i| recs[i].objective)
    };
    grid.into_iter().map(|g| (g, at(a, g), at(b, g))).collect()
}

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub a: ExperimentReport,
    pub b: ExperimentReport,
    pub rows: Vec<(u64, Option<f64>, Option<f64>)>,
}

impl CompareReport {
    /// Whether the first run ends with an objective no worse than the second.
    pub fn a_wins(&self) -> bool {
        self.a.final_objective() <= self.b.final_objective()
    }
}

fn compare_csv(rows: &[(u64, Option<f64>, Option<f64>)]) -> String {
    let cell = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:e}"));
    let mut s = String::from("grad_y,obj_a,obj_b\n");
    for &(g, a, b) in rows {
        s.push_str(&format!("{g},{},{}\n", cell(a), cell(b)));
    }
    s
}

/// Runs both configurations and writes `compare.csv` to `out`. The two must
/// describe the same problem and budget.
pub fn compare(cfg_a: &ExperimentConfig, cfg_b: &ExperimentConfig, out: &Path) -> Result<CompareReport, CliError> {
    if !cfg_a.same_problem(cfg_b) || cfg_a.budget != cfg_b.budget {
        return Err(CliError::Config("compared runs must share the problem and the budget".into()));
    }
    let a = run_experiment(cfg_a)?;
    let b = run_experiment(cfg_b)?;
    let rows = align_histories(&a.history, &b.history);
    fs::create_dir_all(out).map_err(io_err(out))?;
    write_file(&out.join(COMPARE_FILE), &compare_csv(&rows))?;
    let report = CompareReport { a, b, rows };
    info!(
        "{} final {:.10e}, {} final {:.10e}: {} is lower",
        cfg_a.method,
        report.a.final_objective(),
        cfg_b.method,
        report.b.final_objective(),
        if report.a_wins() { cfg_a.method } else { cfg_b.method }
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn history(points: &[(u64, f64)]) -> RunHistory {
        let mut h = RunHistory::without_timing();
        for (step, &(g, v)) in points.iter().enumerate() {
            let mut l = OracleLedger::new();
            l.add_grad_y(g);
            h.record(step as u64, v, l).unwrap();
        }
        h
    }

    #[test]
    fn alignment_carries_values_forward() {
        let a = history(&[(0, 5.0), (10, 3.0), (30, 1.0)]);
        let b = history(&[(0, 6.0), (20, 2.0)]);
        let rows = align_histories(&a, &b);
        assert_eq!(
            rows,
            vec![
                (0, Some(5.0), Some(6.0)),
                (10, Some(3.0), Some(6.0)),
                (20, Some(3.0), Some(2.0)),
                (30, Some(1.0), Some(2.0)),
            ]
        );
    }

    #[test]
    fn alignment_leaves_gaps_before_the_first_row() {
        let rows = align_histories(&history(&[(5, 1.0)]), &history(&[(0, 2.0)]));
        assert_eq!(rows, vec![(0, None, Some(2.0)), (5, Some(1.0), Some(2.0))]);
        assert_eq!(compare_csv(&rows), "grad_y,obj_a,obj_b\n0,,2e0\n5,1e0,2e0\n");
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Approach1, Method::Approach2, Method::VaragJoint] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("vaidya".parse::<Method>().is_err());
    }

    #[test]
    fn starting_row_is_the_center_value() {
        let cfg = ExperimentConfig {
            source: ProblemSource::Synthetic("logreg:m=10,features=4".parse().unwrap()),
            d: 2,
            sigma2_inv: 0.005,
            radius: None,
            method: Method::VaragJoint,
            budget: 10,
            target_epsilon: 1e-6,
            seed: 0,
            out_dir: PathBuf::new(),
            wall_time: false,
        };
        let built = build_problem(&cfg).unwrap();
        let h = starting_history(&built.problem, false).unwrap();
        assert_eq!(h.records()[0].objective, 2f64.ln());
        assert_eq!(h.records()[0].ledger, OracleLedger::new());
    }
}
