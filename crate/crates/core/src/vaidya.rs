//! Vaidya's cutting-plane method with volumetric-barrier recentering.
//!
//! The method keeps a polytope `P = {x : A x >= b}` known to contain a
//! solution. At the volumetric center `x_k` of `P` (the minimizer of
//! `V(x) = 0.5 log det H(x)`, `H` the log-barrier Hessian) it either drops the
//! row with the smallest leverage score `sigma_i` when that score is below
//! `gamma`, or queries the oracle and adds a cut `c^T z >= beta` with
//! `c = -g` placed so that `c^T H^{-1} c / (x_k^T c - beta)^2 = sqrt(gamma) / 5`.

use std::io::{self, Write};

use log::trace;
use nalgebra::Cholesky;
use nalgebra::Dyn;

use crate::error::{check_dim, Error, Result};
use crate::oracle::OracleLedger;
use crate::sets::FeasibleSet;
use crate::{Matrix, Vector};

/// Halvings allowed in one Newton line search.
const MAX_HALVINGS: usize = 60;

/// Newton decrement accepted as converged when round-off stops further progress:
/// the full step fails to decrease `V`, or the decrement has not halved for
/// [`PLATEAU_STEPS`] steps.
const ROUND_OFF_DECREMENT: f64 = 1e-4;
const PLATEAU_STEPS: usize = 5;

/// At or above this `gamma` a fresh cut has leverage `sqrt(gamma)/5 < gamma`
/// and is dropped right after being added, so the method cycles.
pub const GAMMA_CEILING: f64 = 0.04;

/// Polytope `{x : a_i^T x >= b_i}` with insertable and removable rows.
///
/// Rows are stored relative to a movable origin `o` as `a_i^T (x - o) >= r_i`,
/// so slacks near `o` are computed without cancellation once the polytope is
/// small compared to `|o|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    rows: Vec<Vector>,
    rhs: Vec<f64>,
    origin: Vector,
}

impl Polytope {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new(), rhs: Vec::new(), origin: Vector::zeros(dim) }
    }

    /// The `2d` rows of the box `lower <= x <= upper`.
    pub fn from_box(lower: &Vector, upper: &Vector) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        let d = lower.len();
        let mut p = Self::new(d);
        for i in 0..d {
            let mut e = Vector::zeros(d);
            e[i] = 1.0;
            p.push(e.clone(), lower[i])?;
            p.push(-e, -upper[i])?;
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `(a_i, b_i)`.
    pub fn row(&self, i: usize) -> (&Vector, f64) {
        (&self.rows[i], self.rhs[i] + self.rows[i].dot(&self.origin))
    }

    /// Adds `a^T x >= b`.
    pub fn push(&mut self, a: Vector, b: f64) -> Result<()> {
        check_dim(self.dim, a.len())?;
        self.rhs.push(b - a.dot(&self.origin));
        self.rows.push(a);
        Ok(())
    }

    /// Adds `a^T (x - point) >= -depth`, the row with slack `depth` at `point`.
    pub fn push_at(&mut self, a: Vector, point: &Vector, depth: f64) -> Result<()> {
        check_dim(self.dim, a.len())?;
        check_dim(self.dim, point.len())?;
        self.rhs.push(a.dot(&(point - &self.origin)) - depth);
        self.rows.push(a);
        Ok(())
    }

    /// Removes row `i`, returning `(a_i, b_i)`.
    pub fn remove(&mut self, i: usize) -> (Vector, f64) {
        let a = self.rows.remove(i);
        let b = self.rhs.remove(i) + a.dot(&self.origin);
        (a, b)
    }

    /// Moves the reference point of the stored rows to `o`.
    pub fn set_origin(&mut self, o: &Vector) {
        let shift = o - &self.origin;
        for (a, r) in self.rows.iter().zip(self.rhs.iter_mut()) {
            *r -= a.dot(&shift);
        }
        self.origin.copy_from(o);
    }

    /// `s_i = a_i^T x - b_i`.
    pub fn slacks(&self, x: &Vector) -> Vector {
        let offset = x - &self.origin;
        Vector::from_iterator(self.len(), self.rows.iter().zip(&self.rhs).map(|(a, r)| a.dot(&offset) - r))
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_fn(self.len(), self.dim, |i, j| self.rows[i][j])
    }
}

/// Barrier quantities at a strictly interior point.
#[derive(Debug, Clone)]
pub struct BarrierState {
    pub x: Vector,
    pub slacks: Vector,
    /// `H(x) = sum_i a_i a_i^T / s_i^2`.
    pub hessian: Matrix,
    /// Leverage scores `sigma_i = a_i^T H^{-1} a_i / s_i^2`.
    pub sigma: Vector,
    /// `Q(x) = sum_i sigma_i a_i a_i^T / s_i^2`.
    pub q: Matrix,
    /// `grad V(x) = -sum_i sigma_i a_i / s_i`.
    pub gradient: Vector,
    /// `V(x) = 0.5 log det H(x)`.
    pub volumetric: f64,
    factor: Cholesky<f64, Dyn>,
}

impl BarrierState {
    /// Exact Hessian of `V`: `A_x^T (3 Sigma - 2 P∘P) A_x` with `A_x = S^{-1} A`
    /// and `P = A_x H^{-1} A_x^T`.
    pub fn volumetric_hessian(&self, p: &Polytope) -> Matrix {
        let m = p.len();
        let d = p.dim();
        let scaled = Matrix::from_fn(m, d, |i, c| p.rows[i][c] / self.slacks[i]);
        let solved = self.factor.solve(&scaled.transpose());
        let proj = &scaled * &solved;
        let weights = Matrix::from_fn(m, m, |i, j| {
            let pij = proj[(i, j)];
            let diag = if i == j { 3.0 * self.sigma[i] } else { 0.0 };
            diag - 2.0 * pij * pij
        });
        scaled.transpose() * weights * scaled
    }

    /// `c^T H^{-1} c`.
    pub fn h_inv_quad(&self, c: &Vector) -> f64 {
        c.dot(&self.factor.solve(c))
    }

    pub fn min_sigma(&self) -> (usize, f64) {
        // first index on ties
        let mut best = (0, f64::INFINITY);
        for (i, &s) in self.sigma.iter().enumerate() {
            if s < best.1 {
                best = (i, s);
            }
        }
        best
    }
}

/// Computes `H`, `sigma`, `Q`, `grad V` and `V` at `x`, charging one
/// `d x d` factorization to the ledger.
pub fn barrier_quantities(p: &Polytope, x: &Vector, ledger: &mut OracleLedger) -> Result<BarrierState> {
    check_dim(p.dim(), x.len())?;
    let d = p.dim();
    let m = p.len();
    let slacks = p.slacks(x);
    let min_slack = slacks.min();
    if !(min_slack > 0.0) {
        return Err(Error::InfeasiblePoint { min_slack });
    }
    // columns a_i / s_i
    let scaled = Matrix::from_fn(d, m, |r, i| p.rows[i][r] / slacks[i]);
    let hessian = &scaled * scaled.transpose();
    ledger.add_inversions(1);
    let factor = Cholesky::new(hessian.clone()).ok_or(Error::DegeneratePolytope)?;
    let solved = factor.solve(&scaled);
    let sigma = Vector::from_iterator(m, (0..m).map(|i| scaled.column(i).dot(&solved.column(i))));
    let weighted = Matrix::from_fn(d, m, |r, i| scaled[(r, i)] * sigma[i]);
    let q = &weighted * scaled.transpose();
    let gradient = -(&weighted * Vector::from_element(m, 1.0));
    let volumetric = factor.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    if !volumetric.is_finite() {
        return Err(Error::DegeneratePolytope);
    }
    Ok(BarrierState { x: x.clone(), slacks, hessian, sigma, q, gradient, volumetric, factor })
}

/// Cut placement: returns `beta` with `c^T H^{-1} c / (x^T c - beta)^2 = sqrt(gamma) / 5`
/// and `x^T c > beta`, or `None` for a zero direction.
pub fn place_cut(h_inv_quad: f64, x: &Vector, c: &Vector, gamma: f64) -> Option<f64> {
    cut_depth(h_inv_quad, c, gamma).map(|depth| x.dot(c) - depth)
}

/// `x^T c - beta` for the cut of [`place_cut`]: `sqrt(5 c^T H^{-1} c / sqrt(gamma))`.
pub fn cut_depth(h_inv_quad: f64, c: &Vector, gamma: f64) -> Option<f64> {
    if c.iter().all(|&v| v == 0.0) || !(h_inv_quad > 0.0) {
        return None;
    }
    Some((5.0 * h_inv_quad / gamma.sqrt()).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VaidyaConfig {
    pub gamma: f64,
    pub newton_tolerance: f64,
    pub max_newton_steps: usize,
    pub max_iterations: usize,
    /// Stop once this many oracle calls have been made.
    pub max_oracle_calls: Option<usize>,
}

impl Default for VaidyaConfig {
    fn default() -> Self {
        Self {
            gamma: 0.006,
            newton_tolerance: 1e-8,
            max_newton_steps: 200,
            max_iterations: 1000,
            max_oracle_calls: None,
        }
    }
}

impl VaidyaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.006 && self.gamma < GAMMA_CEILING) {
            return Err(Error::Contract(format!(
                "gamma must lie in [0.006, {GAMMA_CEILING}), got {}",
                self.gamma
            )));
        }
        if !(self.newton_tolerance > 0.0) {
            return Err(Error::Contract("Newton tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Damped Newton iterations on `V`, backtracking on feasibility and decrease
/// of `V`, until `|grad V|_{Q^{-1}} <= newton_tolerance` or the decrement
/// plateaus at round-off level. The step uses the
/// exact Hessian of `V` and falls back to `Q(x)` if that fails to factor.
/// Returns the barrier state at the final point.
pub fn newton_recenter(
    p: &Polytope,
    x_start: &Vector,
    cfg: &VaidyaConfig,
    ledger: &mut OracleLedger,
) -> Result<BarrierState> {
    let mut state = barrier_quantities(p, x_start, ledger)?;
    let mut best_decrement = f64::INFINITY;
    let mut stalled = 0;
    for step in 0..cfg.max_newton_steps {
        let q_factor = Cholesky::new(state.q.clone()).ok_or(Error::DegeneratePolytope)?;
        let q_direction = q_factor.solve(&state.gradient);
        let decrement = state.gradient.dot(&q_direction).max(0.0).sqrt();
        if decrement <= cfg.newton_tolerance {
            return Ok(state);
        }
        if decrement <= 0.5 * best_decrement {
            best_decrement = decrement;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= PLATEAU_STEPS && best_decrement <= ROUND_OFF_DECREMENT {
                return Ok(state);
            }
        }
        let direction = match Cholesky::new(state.volumetric_hessian(p)) {
            Some(f) => f.solve(&state.gradient),
            None => q_direction,
        };
        let slack_allowance = 16.0 * f64::EPSILON * (1.0 + state.volumetric.abs());
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            if t < 1.0 && decrement <= ROUND_OFF_DECREMENT {
                return Ok(state);
            }
            let candidate = &state.x - &direction * t;
            if p.slacks(&candidate).min() > 0.0 {
                let next = barrier_quantities(p, &candidate, ledger)?;
                if next.volumetric <= state.volumetric + slack_allowance {
                    accepted = Some(next);
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some(next) => state = next,
            // no representable decrease left: the center is as accurate as round-off allows
            None if decrement <= ROUND_OFF_DECREMENT => return Ok(state),
            None => return Err(Error::Stagnation { steps: step, x: state.x }),
        }
    }
    Ok(state)
}

/// Answer of a first-order oracle queried by [`vaidya_minimize`].
#[derive(Debug, Clone, PartialEq)]
pub enum OracleResponse {
    /// Objective estimate and a (delta-)subgradient at the query point.
    Cut { value: f64, subgradient: Vector },
    /// Ends the run; the best point so far is returned.
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VaidyaAction {
    /// Oracle cut.
    Add,
    /// Separating cut for `Q_x`.
    Feasibility,
    Drop,
}

impl VaidyaAction {
    pub fn label(&self) -> &'static str {
        match self {
            VaidyaAction::Add | VaidyaAction::Feasibility => "add",
            VaidyaAction::Drop => "drop",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    MaxIterations,
    OracleBudget,
    ZeroSubgradient,
    OracleStop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VaidyaIteration {
    pub k: usize,
    /// Rows before the action.
    pub rows: usize,
    pub min_sigma: f64,
    pub sigma_sum: f64,
    pub action: VaidyaAction,
    pub f_best: f64,
    pub oracle_calls: usize,
}

#[derive(Debug, Clone)]
pub struct VaidyaOutcome {
    pub x_best: Option<Vector>,
    pub f_best: f64,
    pub iterations: Vec<VaidyaIteration>,
    pub oracle_calls: usize,
    /// Calls of [`barrier_quantities`], equal to the factorizations charged.
    pub barrier_evaluations: u64,
    pub termination: Termination,
    pub polytope: Polytope,
}

impl VaidyaOutcome {
    /// Per-iteration dump: `k,m_rows,min_sigma,action,f_best`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,m_rows,min_sigma,action,f_best")?;
        for it in &self.iterations {
            writeln!(out, "{},{},{:e},{},{:e}", it.k, it.rows, it.min_sigma, it.action.label(), it.f_best)?;
        }
        Ok(())
    }
}

/// Minimizes a convex function over `q_x` given a (delta-)subgradient oracle.
///
/// The oracle receives points of `q_x` only; centers outside `q_x` produce
/// analytic separating cuts instead. The best query point by reported value
/// is returned.
pub fn vaidya_minimize<F>(
    mut oracle: F,
    q_x: &FeasibleSet,
    cfg: &VaidyaConfig,
    ledger: &mut OracleLedger,
) -> Result<VaidyaOutcome>
where
    F: FnMut(&Vector, &mut OracleLedger) -> Result<OracleResponse>,
{
    cfg.validate()?;
    let (lower, upper) = q_x.bounding_box();
    let d = lower.len();
    let mut poly = Polytope::from_box(&lower, &upper)?;
    let mut x = q_x.center();
    let mut x_best: Option<Vector> = None;
    let mut f_best = f64::INFINITY;
    let mut iterations = Vec::new();
    let mut oracle_calls = 0usize;
    let inversions_before = ledger.matrix_inversions();
    let mut termination = Termination::MaxIterations;

    for k in 0..cfg.max_iterations {
        let state = newton_recenter(&poly, &x, cfg, ledger)?;
        x = state.x.clone();
        poly.set_origin(&x);
        let (imin, smin) = state.min_sigma();
        let sigma_sum = state.sigma.sum();
        let rows = poly.len();

        let action = if smin < cfg.gamma {
            if rows - 1 < d + 1 {
                return Err(Error::Structural { rows: rows - 1, required: d + 1 });
            }
            poly.remove(imin);
            VaidyaAction::Drop
        } else if let Some(c) = q_x.separating_direction(&x) {
            let depth = cut_depth(state.h_inv_quad(&c), &c, cfg.gamma).ok_or(Error::DegeneratePolytope)?;
            poly.push_at(c, &x, depth)?;
            VaidyaAction::Feasibility
        } else {
            if cfg.max_oracle_calls.is_some_and(|cap| oracle_calls >= cap) {
                termination = Termination::OracleBudget;
                break;
            }
            let response = oracle(&x, ledger)?;
            oracle_calls += 1;
            let (value, g) = match response {
                OracleResponse::Stop => {
                    termination = Termination::OracleStop;
                    break;
                }
                OracleResponse::Cut { value, subgradient } => (value, subgradient),
            };
            check_dim(d, g.len())?;
            if value < f_best || x_best.is_none() {
                f_best = value;
                x_best = Some(x.clone());
            }
            let c = -g;
            match cut_depth(state.h_inv_quad(&c), &c, cfg.gamma) {
                Some(depth) => poly.push_at(c, &x, depth)?,
                None => {
                    termination = Termination::ZeroSubgradient;
                    iterations.push(VaidyaIteration {
                        k,
                        rows,
                        min_sigma: smin,
                        sigma_sum,
                        action: VaidyaAction::Add,
                        f_best,
                        oracle_calls,
                    });
                    break;
                }
            }
            VaidyaAction::Add
        };
        trace!("vaidya k={k} rows={rows} min_sigma={smin:.3e} action={action:?} f_best={f_best:.6e}");
        iterations.push(VaidyaIteration { k, rows, min_sigma: smin, sigma_sum, action, f_best, oracle_calls });
    }

    Ok(VaidyaOutcome {
        x_best,
        f_best,
        iterations,
        oracle_calls,
        barrier_evaluations: ledger.matrix_inversions() - inversions_before,
        termination,
        polytope: poly,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn unit_box(d: usize) -> Polytope {
        Polytope::from_box(&Vector::from_element(d, -1.0), &Vector::from_element(d, 1.0)).unwrap()
    }

    #[test]
    fn moving_the_origin_keeps_the_polytope() {
        let mut p = unit_box(2);
        p.push(v(&[1.0, 2.0]), -0.5).unwrap();
        let x = v(&[0.1, -0.2]);
        let before = p.slacks(&x);
        p.set_origin(&v(&[0.7, 0.3]));
        assert_relative_eq!(p.slacks(&x), before, epsilon = 1e-15);
        assert_relative_eq!(p.row(4).1, -0.5, epsilon = 1e-15);
        p.push_at(v(&[0.0, 1.0]), &x, 0.25).unwrap();
        assert_relative_eq!(p.slacks(&x)[5], 0.25, epsilon = 1e-15);
        assert_relative_eq!(p.row(5).1, -0.45, epsilon = 1e-15);
    }

    #[test]
    fn symmetric_box_at_center() {
        let mut ledger = OracleLedger::new();
        let s = barrier_quantities(&unit_box(2), &v(&[0.0, 0.0]), &mut ledger).unwrap();
        assert_relative_eq!(s.hessian, Matrix::identity(2, 2) * 2.0, epsilon = 1e-15);
        for &sig in s.sigma.iter() {
            assert_relative_eq!(sig, 0.5, epsilon = 1e-15);
        }
        assert_relative_eq!(s.sigma.sum(), 2.0, epsilon = 1e-15);
        assert_eq!(ledger.matrix_inversions(), 1);
    }

    #[test]
    fn infeasible_point_is_rejected() {
        let mut ledger = OracleLedger::new();
        assert!(matches!(
            barrier_quantities(&unit_box(2), &v(&[1.0, 0.0]), &mut ledger),
            Err(Error::InfeasiblePoint { .. })
        ));
    }

    #[test]
    fn singular_hessian_is_degenerate() {
        // only constraints on the first coordinate
        let mut p = Polytope::new(2);
        p.push(v(&[1.0, 0.0]), -1.0).unwrap();
        p.push(v(&[-1.0, 0.0]), -1.0).unwrap();
        p.push(v(&[1.0, 0.0]), -2.0).unwrap();
        let mut ledger = OracleLedger::new();
        assert!(matches!(
            barrier_quantities(&p, &v(&[0.0, 0.0]), &mut ledger),
            Err(Error::DegeneratePolytope)
        ));
    }

    fn volumetric(p: &Polytope, x: &Vector) -> f64 {
        let mut ledger = OracleLedger::new();
        barrier_quantities(p, x, &mut ledger).unwrap().volumetric
    }

    fn skewed_polytope() -> Polytope {
        let mut p = unit_box(2);
        p.push(v(&[-1.0, -1.0]), -1.2).unwrap();
        p.push(v(&[0.3, 1.0]), -0.7).unwrap();
        p
    }

    #[test]
    fn gradient_and_hessian_match_finite_differences() {
        let p = skewed_polytope();
        let x = v(&[0.1, -0.25]);
        let mut ledger = OracleLedger::new();
        let s = barrier_quantities(&p, &x, &mut ledger).unwrap();
        let h = 1e-5;
        let hess = s.volumetric_hessian(&p);
        for i in 0..2 {
            let mut e = Vector::zeros(2);
            e[i] = h;
            let fd = (volumetric(&p, &(&x + &e)) - volumetric(&p, &(&x - &e))) / (2.0 * h);
            assert!((fd - s.gradient[i]).abs() < 1e-8, "grad {i}: {fd} vs {}", s.gradient[i]);
            let gp = barrier_quantities(&p, &(&x + &e), &mut ledger).unwrap().gradient;
            let gm = barrier_quantities(&p, &(&x - &e), &mut ledger).unwrap().gradient;
            let col = (gp - gm) / (2.0 * h);
            for j in 0..2 {
                assert!((col[j] - hess[(j, i)]).abs() < 1e-6, "hess ({j},{i}): {} vs {}", col[j], hess[(j, i)]);
            }
        }
    }

    #[test]
    fn recentering_symmetric_box() {
        let mut ledger = OracleLedger::new();
        let cfg = VaidyaConfig::default();
        let s = newton_recenter(&unit_box(2), &v(&[0.5, 0.3]), &cfg, &mut ledger).unwrap();
        assert!(s.x.norm() < 1e-6, "{}", s.x);
        let s0 = newton_recenter(&unit_box(3), &Vector::zeros(3), &cfg, &mut ledger).unwrap();
        assert_eq!(s0.x, Vector::zeros(3));
    }

    #[test]
    fn cut_placement_examples() {
        let x = v(&[0.0, 0.0]);
        let c = v(&[1.0, 0.0]);
        assert_relative_eq!(place_cut(1.0, &x, &c, 0.25).unwrap(), -10f64.sqrt(), epsilon = 1e-14);
        let beta = place_cut(1.0, &x, &c, 0.006).unwrap();
        assert_relative_eq!(beta, -(5.0 / 0.006f64.sqrt()).sqrt(), epsilon = 1e-14);
        assert!((beta + 8.034284).abs() < 1e-6);
        let residual = 1.0 / (x.dot(&c) - beta).powi(2) - 0.006f64.sqrt() / 5.0;
        assert!(residual.abs() < 1e-12);
        assert!(place_cut(1.0, &x, &Vector::zeros(2), 0.25).is_none());
    }

    #[test]
    fn cut_scales_with_direction() {
        let x = v(&[0.3, -0.2]);
        let c = v(&[1.0, 2.0]);
        let h = Matrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let h_inv = h.try_inverse().unwrap();
        let quad = |c: &Vector| c.dot(&(&h_inv * c));
        for &lambda in &[0.5, 3.0, 10.0] {
            let cs = &c * lambda;
            let gap = x.dot(&c) - place_cut(quad(&c), &x, &c, 0.01).unwrap();
            let gap_s = x.dot(&cs) - place_cut(quad(&cs), &x, &cs, 0.01).unwrap();
            assert_relative_eq!(gap_s, lambda * gap, max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_subgradient_returns_first_center() {
        let q = FeasibleSet::cube(2, -1.0, 1.0).unwrap();
        let mut ledger = OracleLedger::new();
        let out = vaidya_minimize(
            |x, _| Ok(OracleResponse::Cut { value: x.norm_squared(), subgradient: x * 2.0 }),
            &q,
            &VaidyaConfig::default(),
            &mut ledger,
        )
        .unwrap();
        assert_eq!(out.termination, Termination::ZeroSubgradient);
        assert_eq!(out.oracle_calls, 1);
        assert_eq!(out.x_best.unwrap(), Vector::zeros(2));
    }

    #[test]
    fn gamma_below_minimum_is_rejected() {
        let cfg = VaidyaConfig { gamma: 0.001, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = VaidyaConfig { gamma: 0.05, ..Default::default() };
        assert!(cfg.validate().is_err());
        assert!(VaidyaConfig { gamma: 0.02, ..Default::default() }.validate().is_ok());
    }
}
