//! Min-min composition: Vaidya's method on `f(x) = min_{y in Q_y} F(x, y)`,
//! with cuts from inexact inner solves.
//!
//! If `y~` solves the inner problem at `x` to accuracy `eps` then
//! `g = d_x F(x, y~)` is a `delta`-subgradient of `f` at `x` with
//! `delta = (L D + G) sqrt(2 eps / mu)`, where `D` is the diameter of `Q_y`
//! and `G` bounds `|grad_y F(x, y(x))|`.

use std::sync::Arc;

use log::{debug, info};

use crate::error::{check_dim, Error, Result};
use crate::fgm::{fgm_restarted, fgm_run, RestartConfig};
use crate::history::RunHistory;
use crate::oracle::{FiniteSumOracle, OracleLedger, SmoothOracle};
use crate::rng::derive_seed;
use crate::sets::{ConvexSet, FeasibleSet, ProductSet};
use crate::vaidya::{vaidya_minimize, OracleResponse, VaidyaConfig, VaidyaOutcome};
use crate::varag::{strong_convexity_gap, varag_run_with, VaragOptions, VaragTermination};
use crate::Vector;

/// A coupled objective `F(x, y)` evaluated as a whole.
pub trait CoupledObjective: Send + Sync {
    fn dim_x(&self) -> usize;
    fn dim_y(&self) -> usize;
    fn value(&self, x: &Vector, y: &Vector) -> f64;
    fn grad_y(&self, x: &Vector, y: &Vector) -> Vector;
    /// Any subgradient of `F(., y)` at `x`.
    fn subgrad_x(&self, x: &Vector, y: &Vector) -> Vector;
}

/// `F(x, y) = (1/m) sum_i F_i(x, y)`.
pub trait FiniteSumCoupled: Send + Sync {
    fn dim_x(&self) -> usize;
    fn dim_y(&self) -> usize;
    fn num_components(&self) -> usize;
    fn component_value(&self, i: usize, x: &Vector, y: &Vector) -> f64;
    fn component_grad_y(&self, i: usize, x: &Vector, y: &Vector) -> Vector;
    fn component_subgrad_x(&self, i: usize, x: &Vector, y: &Vector) -> Vector;
    /// Smoothness constant of `F_i(x, .)`.
    fn component_lipschitz_y(&self, i: usize) -> f64;
    /// Smoothness constant of `F_i` in the joint variable `(x, y)`.
    fn component_lipschitz_joint(&self, i: usize) -> f64;
}

#[derive(Clone)]
pub enum Objective {
    Simple(Arc<dyn CoupledObjective>),
    FiniteSum(Arc<dyn FiniteSumCoupled>),
}

impl std::fmt::Debug for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Objective::Simple(_) => f.write_str("Objective::Simple"),
            Objective::FiniteSum(fs) => write!(f, "Objective::FiniteSum(m = {})", fs.num_components()),
        }
    }
}

impl Objective {
    pub fn dim_x(&self) -> usize {
        match self {
            Objective::Simple(o) => o.dim_x(),
            Objective::FiniteSum(o) => o.dim_x(),
        }
    }

    pub fn dim_y(&self) -> usize {
        match self {
            Objective::Simple(o) => o.dim_y(),
            Objective::FiniteSum(o) => o.dim_y(),
        }
    }

    /// Oracle calls charged for one full gradient: 1, or `m` for a finite sum.
    pub fn num_components(&self) -> usize {
        match self {
            Objective::Simple(_) => 1,
            Objective::FiniteSum(o) => o.num_components(),
        }
    }

    pub fn value(&self, x: &Vector, y: &Vector) -> f64 {
        match self {
            Objective::Simple(o) => o.value(x, y),
            Objective::FiniteSum(o) => {
                let m = o.num_components();
                (0..m).map(|i| o.component_value(i, x, y)).sum::<f64>() / m as f64
            }
        }
    }

    /// Full `grad_y F`, summed in index order. Not charged to any ledger.
    pub fn grad_y(&self, x: &Vector, y: &Vector) -> Vector {
        match self {
            Objective::Simple(o) => o.grad_y(x, y),
            Objective::FiniteSum(o) => {
                let m = o.num_components();
                let mut g = Vector::zeros(o.dim_y());
                for i in 0..m {
                    g += o.component_grad_y(i, x, y);
                }
                g / m as f64
            }
        }
    }

    /// Full `d_x F`, summed in index order. Not charged to any ledger.
    pub fn subgrad_x(&self, x: &Vector, y: &Vector) -> Vector {
        match self {
            Objective::Simple(o) => o.subgrad_x(x, y),
            Objective::FiniteSum(o) => {
                let m = o.num_components();
                let mut g = Vector::zeros(o.dim_x());
                for i in 0..m {
                    g += o.component_subgrad_x(i, x, y);
                }
                g / m as f64
            }
        }
    }
}

/// `min_{x in Q_x} min_{y in Q_y} F(x, y)` with the constants the analysis needs.
#[derive(Debug, Clone)]
pub struct MinMinProblem {
    pub objective: Objective,
    pub q_x: FeasibleSet,
    pub q_y: FeasibleSet,
    /// Smoothness of `F(x, .)`; the mean of the component constants for finite sums.
    pub lipschitz_y: f64,
    pub mu: f64,
    /// Bound on `|grad_y F(x, y(x))|` over `Q_x`.
    pub grad_bound: f64,
}

impl MinMinProblem {
    pub fn new(
        objective: Objective,
        q_x: FeasibleSet,
        q_y: FeasibleSet,
        lipschitz_y: f64,
        mu: f64,
        grad_bound: f64,
    ) -> Result<Self> {
        check_dim(objective.dim_x(), q_x.dim())?;
        check_dim(objective.dim_y(), q_y.dim())?;
        if !(mu > 0.0) || !(lipschitz_y >= mu) || !lipschitz_y.is_finite() {
            return Err(Error::Contract(format!("need L >= mu > 0, got L={lipschitz_y} mu={mu}")));
        }
        if !(grad_bound >= 0.0) || !grad_bound.is_finite() {
            return Err(Error::Contract(format!("gradient bound must be finite and nonnegative, got {grad_bound}")));
        }
        if let Objective::FiniteSum(o) = &objective {
            let m = o.num_components();
            if m == 0 {
                return Err(Error::Contract("finite sum needs at least one component".into()));
            }
            let mean = (0..m).map(|i| o.component_lipschitz_y(i)).sum::<f64>() / m as f64;
            if (mean - lipschitz_y).abs() > 1e-9 * mean {
                return Err(Error::Contract(format!("L = {lipschitz_y} is not the mean {mean} of the component constants")));
            }
        }
        Ok(Self { objective, q_x, q_y, lipschitz_y, mu, grad_bound })
    }

    pub fn dim_x(&self) -> usize {
        self.objective.dim_x()
    }

    pub fn dim_y(&self) -> usize {
        self.objective.dim_y()
    }

    pub fn diameter_y(&self) -> f64 {
        self.q_y.diameter()
    }

    pub fn value(&self, x: &Vector, y: &Vector) -> f64 {
        self.objective.value(x, y)
    }
}

/// `y -> F(x, y)` at a fixed `x`, charging one full gradient per call.
pub struct InnerOracle<'a> {
    objective: &'a Objective,
    x: &'a Vector,
}

impl<'a> InnerOracle<'a> {
    pub fn new(objective: &'a Objective, x: &'a Vector) -> Self {
        Self { objective, x }
    }
}

impl SmoothOracle for InnerOracle<'_> {
    fn dim(&self) -> usize {
        self.objective.dim_y()
    }

    fn value(&self, y: &Vector) -> f64 {
        self.objective.value(self.x, y)
    }

    fn gradient(&self, y: &Vector) -> Vector {
        self.objective.grad_y(self.x, y)
    }

    fn record_gradient(&self, ledger: &mut OracleLedger) {
        ledger.add_grad_y(self.objective.num_components() as u64);
    }
}

/// Components `y -> F_i(x, y)` at a fixed `x`.
pub struct InnerComponents<'a> {
    sum: &'a dyn FiniteSumCoupled,
    x: &'a Vector,
    mu: f64,
}

impl<'a> InnerComponents<'a> {
    pub fn new(sum: &'a dyn FiniteSumCoupled, x: &'a Vector, mu: f64) -> Self {
        Self { sum, x, mu }
    }
}

impl FiniteSumOracle for InnerComponents<'_> {
    fn dim(&self) -> usize {
        self.sum.dim_y()
    }

    fn num_components(&self) -> usize {
        self.sum.num_components()
    }

    fn component_value(&self, i: usize, y: &Vector) -> f64 {
        self.sum.component_value(i, self.x, y)
    }

    fn component_gradient(&self, i: usize, y: &Vector) -> Vector {
        self.sum.component_grad_y(i, self.x, y)
    }

    fn component_lipschitz(&self, i: usize) -> f64 {
        self.sum.component_lipschitz_y(i)
    }

    fn strong_convexity(&self) -> f64 {
        self.mu
    }
}

/// Components `F_i` as functions of `w = (x, y)` with `mu = 0`. One component
/// gradient counts as one `d_x F_i` call and one `grad_y F_i` call.
pub struct JointComponents<'a> {
    sum: &'a dyn FiniteSumCoupled,
}

impl<'a> JointComponents<'a> {
    pub fn new(sum: &'a dyn FiniteSumCoupled) -> Self {
        Self { sum }
    }

    pub fn split(&self, w: &Vector) -> (Vector, Vector) {
        let d = self.sum.dim_x();
        (w.rows(0, d).into_owned(), w.rows(d, self.sum.dim_y()).into_owned())
    }

    pub fn join(x: &Vector, y: &Vector) -> Vector {
        Vector::from_iterator(x.len() + y.len(), x.iter().chain(y.iter()).copied())
    }

    pub fn feasible_set(problem: &MinMinProblem) -> Result<ProductSet> {
        ProductSet::new(vec![problem.q_x.clone(), problem.q_y.clone()])
    }
}

impl FiniteSumOracle for JointComponents<'_> {
    fn dim(&self) -> usize {
        self.sum.dim_x() + self.sum.dim_y()
    }

    fn num_components(&self) -> usize {
        self.sum.num_components()
    }

    fn component_value(&self, i: usize, w: &Vector) -> f64 {
        let (x, y) = self.split(w);
        self.sum.component_value(i, &x, &y)
    }

    fn component_gradient(&self, i: usize, w: &Vector) -> Vector {
        let (x, y) = self.split(w);
        Self::join(&self.sum.component_subgrad_x(i, &x, &y), &self.sum.component_grad_y(i, &x, &y))
    }

    fn component_lipschitz(&self, i: usize) -> f64 {
        self.sum.component_lipschitz_joint(i)
    }

    fn strong_convexity(&self) -> f64 {
        0.0
    }

    fn record_component_gradients(&self, ledger: &mut OracleLedger, n: u64) {
        ledger.add_grad_x(n);
        ledger.add_grad_y(n);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerSolver {
    /// Restarted fast gradient method on the full `grad_y F`.
    RestartedFgm,
    /// Varag on the components `F_i(x, .)`; finite sums only.
    Varag,
}

#[derive(Debug, Clone)]
pub struct InnerSolution {
    pub y: Vector,
    /// `F(x, y)`.
    pub value: f64,
    /// Certified upper bound on `F(x, y) - f(x)`.
    pub gap_bound: f64,
}

/// Extra restart blocks allowed when the scheduled ones leave the certified
/// gap above the target.
const MAX_EXTRA_BLOCKS: usize = 500;

/// Solves `min_{y in Q_y} F(x, y)` to a certified accuracy `eps_inner`.
///
/// The certificate is `max_{z in Q_y} <g, y - z> - mu/2 |y - z|^2 >= F(x, y) - f(x)`
/// with `g` the full gradient at the returned point; computing it is charged
/// to the ledger like any other gradient.
pub fn inner_solve(
    problem: &MinMinProblem,
    x: &Vector,
    eps_inner: f64,
    solver: InnerSolver,
    seed: u64,
    warm_start: Option<&Vector>,
    ledger: &mut OracleLedger,
) -> Result<InnerSolution> {
    let sol = inner_solve_capped(problem, x, eps_inner, solver, seed, warm_start, None, ledger)?;
    if sol.gap_bound > eps_inner {
        return Err(Error::NotConverged { work: ledger.grad_y_calls(), gap: sol.gap_bound, target: eps_inner });
    }
    Ok(sol)
}

/// Like [`inner_solve`] but stops early, uncertified, once `cap` gradient calls
/// (in `grad_y` units) have been spent by this solve.
#[allow(clippy::too_many_arguments)]
fn inner_solve_capped(
    problem: &MinMinProblem,
    x: &Vector,
    eps_inner: f64,
    solver: InnerSolver,
    seed: u64,
    warm_start: Option<&Vector>,
    cap: Option<u64>,
    ledger: &mut OracleLedger,
) -> Result<InnerSolution> {
    check_dim(problem.dim_x(), x.len())?;
    if !(eps_inner > 0.0) {
        return Err(Error::Contract(format!("inner accuracy must be positive, got {eps_inner}")));
    }
    if !problem.q_x.contains(x, 1e-9) {
        return Err(Error::Contract("outer point lies outside Q_x".into()));
    }
    let y0 = match warm_start {
        Some(w) => problem.q_y.project(w)?,
        None => problem.q_y.center(),
    };
    let mu = problem.mu;
    match solver {
        InnerSolver::RestartedFgm => {
            let oracle = InnerOracle::new(&problem.objective, x);
            let start = ledger.grad_y_calls();
            let out_of_budget = |l: &OracleLedger, next: u64| cap.is_some_and(|c| l.grad_y_calls() - start + next > c);
            let per_call = problem.objective.num_components() as u64;
            let certify = |y: &Vector, ledger: &mut OracleLedger| -> Result<f64> {
                let g = oracle.gradient(y);
                oracle.record_gradient(ledger);
                if g.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NumericFailure { step: 0, what: "inner gradient" });
                }
                strong_convexity_gap(&problem.q_y, y, &g, mu)
            };
            let gap0 = certify(&y0, ledger)?;
            if gap0 <= eps_inner {
                return Ok(InnerSolution { value: oracle.value(&y0), y: y0, gap_bound: gap0 });
            }
            // |y0 - y*|^2 <= 2 gap0 / mu, so R^2 = |y0 - y*|^2 / 2 <= gap0 / mu.
            let r2 = (gap0 / mu).min(0.5 * problem.diameter_y().powi(2));
            let cfg = RestartConfig::new(problem.lipschitz_y, mu, eps_inner, r2.sqrt())?;
            let block = cfg.block_length();
            let mut y = if out_of_budget(ledger, (cfg.total_iterations() as u64 + 1) * per_call) {
                y0
            } else {
                fgm_restarted(&oracle, &problem.q_y, &y0, &cfg, ledger)?
            };
            let mut gap = certify(&y, ledger)?;
            let mut extra = 0;
            while gap > eps_inner {
                if out_of_budget(ledger, (block as u64 + 1) * per_call) {
                    break;
                }
                if extra == MAX_EXTRA_BLOCKS {
                    return Err(Error::NotConverged { work: ledger.grad_y_calls() - start, gap, target: eps_inner });
                }
                y = fgm_run(&oracle, &problem.q_y, &y, cfg.lipschitz, block, ledger)?;
                gap = certify(&y, ledger)?;
                extra += 1;
            }
            if extra > 0 {
                debug!("inner fgm used {extra} blocks beyond the {} scheduled", cfg.restarts());
            }
            Ok(InnerSolution { value: oracle.value(&y), y, gap_bound: gap })
        }
        InnerSolver::Varag => {
            let Objective::FiniteSum(sum) = &problem.objective else {
                return Err(Error::Contract("varag inner solver needs a finite-sum objective".into()));
            };
            let oracle = InnerComponents::new(sum.as_ref(), x, mu);
            let opts = VaragOptions { max_epochs: 100_000, max_gradient_calls: cap, target_gap: Some(eps_inner) };
            let out = varag_run_with(&oracle, &problem.q_y, &y0, &opts, seed, ledger, |_, _| {})?;
            let gap = match out.termination {
                VaragTermination::Target => out.last_gap_bound.unwrap_or(0.0),
                VaragTermination::Budget => f64::INFINITY,
                VaragTermination::Epochs => {
                    return Err(Error::NotConverged {
                        work: out.gradient_calls,
                        gap: out.last_gap_bound.unwrap_or(f64::INFINITY),
                        target: eps_inner,
                    })
                }
            };
            let value = problem.value(x, &out.y);
            Ok(InnerSolution { y: out.y, value, gap_bound: gap })
        }
    }
}

/// `delta = (L D + G) sqrt(2 eps / mu)`.
pub fn delta_from_eps(problem: &MinMinProblem, eps_inner: f64) -> f64 {
    let d = problem.diameter_y();
    (problem.lipschitz_y * d + problem.grad_bound) * (2.0 * eps_inner.max(0.0) / problem.mu).sqrt()
}

/// The variant with the squared gradient norm, `(L D + G^2) sqrt(2 eps / mu)`;
/// logged alongside [`delta_from_eps`] for comparison.
pub fn delta_from_eps_squared_gradient(problem: &MinMinProblem, eps_inner: f64) -> f64 {
    let d = problem.diameter_y();
    (problem.lipschitz_y * d + problem.grad_bound.powi(2)) * (2.0 * eps_inner.max(0.0) / problem.mu).sqrt()
}

/// `d_x F(x, y~)`: one `d_x F` call, or `m` component calls for a finite sum.
pub fn delta_subgradient(problem: &MinMinProblem, x: &Vector, y_tilde: &Vector, ledger: &mut OracleLedger) -> Vector {
    ledger.add_grad_x(problem.objective.num_components() as u64);
    problem.objective.subgrad_x(x, y_tilde)
}

#[derive(Debug, Clone)]
pub struct MinMinConfig {
    pub target_epsilon: f64,
    pub inner: InnerSolver,
    /// First inner accuracy; `mu D^2 / 8` when unset.
    pub eps0: Option<f64>,
    /// Ratio between consecutive inner accuracies.
    pub halving: f64,
    pub vaidya: VaidyaConfig,
    pub seed: u64,
    /// Outer oracle calls (inner solves); unset means `vaidya.max_oracle_calls`
    /// or, failing that, [`default_outer_calls`].
    pub max_outer_calls: Option<usize>,
    /// Stop before an outer call once this many `grad_y` calls have been spent.
    /// The inner solve that reaches the budget is cut short, uncertified; FGM
    /// stops below it, Varag may pass it by less than one full gradient.
    pub grad_y_budget: Option<u64>,
    pub record_wall_time: bool,
}

impl MinMinConfig {
    pub fn new(target_epsilon: f64, inner: InnerSolver) -> Self {
        Self {
            target_epsilon,
            inner,
            eps0: None,
            halving: 0.5,
            vaidya: VaidyaConfig { max_iterations: usize::MAX, ..VaidyaConfig::default() },
            seed: 0,
            max_outer_calls: None,
            grad_y_budget: None,
            record_wall_time: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_epsilon > 0.0) {
            return Err(Error::Contract(format!("target accuracy must be positive, got {}", self.target_epsilon)));
        }
        if !(self.halving > 0.0 && self.halving < 1.0) {
            return Err(Error::Contract(format!("halving factor must lie in (0, 1), got {}", self.halving)));
        }
        if self.eps0.is_some_and(|e| !(e > 0.0)) {
            return Err(Error::Contract("initial inner accuracy must be positive".into()));
        }
        if self.grad_y_budget == Some(0) {
            return Err(Error::Contract("grad_y budget must be positive".into()));
        }
        self.vaidya.validate()
    }
}

/// Outer-call cap used when none is configured:
/// `ceil(60 d ln(d R_x / sqrt(eps)))`, `R_x` the diameter of `Q_x`.
pub fn default_outer_calls(d: usize, diameter_x: f64, target_epsilon: f64) -> usize {
    let d = d as f64;
    let ratio = (d * diameter_x / target_epsilon.sqrt()).max(std::f64::consts::E);
    (60.0 * d * ratio.ln()).ceil() as usize
}

/// Inner accuracy for outer call `k` (from 0): `eps0 rho^k`, floored where
/// `delta` reaches half the target.
pub fn inner_accuracy(problem: &MinMinProblem, cfg: &MinMinConfig, k: usize) -> f64 {
    let eps0 = cfg.eps0.unwrap_or(problem.mu * problem.diameter_y().powi(2) / 8.0);
    let scale = problem.lipschitz_y * problem.diameter_y() + problem.grad_bound;
    let floor = 0.5 * problem.mu * (cfg.target_epsilon / (2.0 * scale)).powi(2);
    (eps0 * cfg.halving.powi(k.min(i32::MAX as usize) as i32)).max(floor)
}

/// One outer oracle call.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterRecord {
    pub x: Vector,
    /// `F(x, y~)`.
    pub value: f64,
    pub eps_inner: f64,
    /// Certified inner gap; infinite when the call was cut short by the budget.
    pub inner_gap_bound: f64,
    pub delta: f64,
    pub delta_squared_gradient: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinMinSummary {
    pub target_eps: f64,
    pub outer_iters: usize,
    pub grad_x: u64,
    pub grad_y: u64,
    pub inversions: u64,
    pub best_value: f64,
}

impl MinMinSummary {
    pub const HEADER: &'static str = "target_eps,outer_iters,grad_x,grad_y,inversions,best_value";

    /// Header line plus one data line.
    pub fn to_csv(&self) -> String {
        format!(
            "{}\n{:e},{},{},{},{},{:e}\n",
            Self::HEADER,
            self.target_eps,
            self.outer_iters,
            self.grad_x,
            self.grad_y,
            self.inversions,
            self.best_value
        )
    }
}

#[derive(Debug, Clone)]
pub struct MinMinSolution {
    pub x: Vector,
    pub y: Vector,
    pub value: f64,
    /// One row per outer call; the objective column is the best value so far.
    pub history: RunHistory,
    pub outer: Vec<OuterRecord>,
    pub vaidya: VaidyaOutcome,
    pub summary: MinMinSummary,
}

/// A failed solve, with whatever history was recorded before the failure.
#[derive(Debug, thiserror::Error)]
#[error("{error}")]
pub struct SolveFailure {
    #[source]
    pub error: Error,
    pub history: RunHistory,
    pub outer: Vec<OuterRecord>,
}

/// Minimizes `F` over `Q_x x Q_y`: Vaidya on `x`, inner solves on `y`, warm
/// started from the previous inner solution.
pub fn solve_minmin(
    problem: &MinMinProblem,
    cfg: &MinMinConfig,
    ledger: &mut OracleLedger,
) -> std::result::Result<MinMinSolution, SolveFailure> {
    let mut history = if cfg.record_wall_time { RunHistory::new() } else { RunHistory::without_timing() };
    let mut outer: Vec<OuterRecord> = Vec::new();
    if let Err(error) = cfg.validate() {
        return Err(SolveFailure { error, history, outer });
    }
    let start = *ledger;
    let max_calls = cfg
        .max_outer_calls
        .or(cfg.vaidya.max_oracle_calls)
        .unwrap_or_else(|| default_outer_calls(problem.dim_x(), problem.q_x.diameter(), cfg.target_epsilon));
    let vaidya_cfg = VaidyaConfig { max_oracle_calls: Some(max_calls), ..cfg.vaidya };

    let mut best: Option<(Vector, Vector, f64)> = None;
    let mut warm: Option<Vector> = None;
    let mut budget_hit = false;

    let result = {
        let oracle = |x: &Vector, ledger: &mut OracleLedger| -> Result<OracleResponse> {
            let k = outer.len();
            let spent = ledger.grad_y_calls() - start.grad_y_calls();
            let remaining = match cfg.grad_y_budget {
                Some(b) if spent >= b || budget_hit => return Ok(OracleResponse::Stop),
                Some(b) => Some(b - spent),
                None => None,
            };
            let eps = inner_accuracy(problem, cfg, k);
            let seed = derive_seed(cfg.seed, k as u64);
            let inner = inner_solve_capped(problem, x, eps, cfg.inner, seed, warm.as_ref(), remaining, ledger)
                .map_err(|e| Error::Inner { outer: k, source: Box::new(e) })?;
            if inner.gap_bound > eps {
                if remaining.is_none() {
                    return Err(Error::Inner {
                        outer: k,
                        source: Box::new(Error::NotConverged { work: 0, gap: inner.gap_bound, target: eps }),
                    });
                }
                budget_hit = true;
            }
            let g = delta_subgradient(problem, x, &inner.y, ledger);
            let record = OuterRecord {
                x: x.clone(),
                value: inner.value,
                eps_inner: eps,
                inner_gap_bound: inner.gap_bound,
                delta: delta_from_eps(problem, eps),
                delta_squared_gradient: delta_from_eps_squared_gradient(problem, eps),
            };
            debug!(
                "outer {k}: F = {:.10e}, eps = {eps:.3e}, delta = {:.3e} (squared-gradient form {:.3e}), grad_y = {}",
                record.value,
                record.delta,
                record.delta_squared_gradient,
                ledger.grad_y_calls()
            );
            if best.as_ref().is_none_or(|b| inner.value < b.2) {
                best = Some((x.clone(), inner.y.clone(), inner.value));
            }
            let best_value = best.as_ref().map_or(f64::INFINITY, |b| b.2);
            history.record(k as u64 + 1, best_value, *ledger)?;
            outer.push(record);
            warm = Some(inner.y);
            Ok(OracleResponse::Cut { value: inner.value, subgradient: g })
        };
        vaidya_minimize(oracle, &problem.q_x, &vaidya_cfg, ledger)
    };

    let vaidya = match result {
        Ok(v) => v,
        Err(error) => return Err(SolveFailure { error, history, outer }),
    };
    let Some((x, y, value)) = best else {
        let error = Error::Contract("no outer oracle call was made".into());
        return Err(SolveFailure { error, history, outer });
    };
    let summary = MinMinSummary {
        target_eps: cfg.target_epsilon,
        outer_iters: outer.len(),
        grad_x: ledger.grad_x_calls() - start.grad_x_calls(),
        grad_y: ledger.grad_y_calls() - start.grad_y_calls(),
        inversions: ledger.matrix_inversions() - start.matrix_inversions(),
        best_value: value,
    };
    info!(
        "min-min finished: {} outer calls, {} grad_x, {} grad_y, {} inversions, best F = {:.10e}",
        summary.outer_iters, summary.grad_x, summary.grad_y, summary.inversions, value
    );
    Ok(MinMinSolution { x, y, value, history, outer, vaidya, summary })
}
