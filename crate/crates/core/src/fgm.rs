//! Fast gradient method for `L`-smooth convex problems over a simple set,
//! and its restarted form for strongly convex problems.

use crate::error::{check_dim, Error, Result};
use crate::oracle::{OracleLedger, SmoothOracle};
use crate::sets::ConvexSet;
use crate::Vector;

/// Membership tolerance for starting points.
const START_TOL: f64 = 1e-9;

/// Larger root of `L a^2 - a - A = 0`.
pub fn next_alpha(a_sum: f64, lipschitz: f64) -> Result<f64> {
    if !(lipschitz > 0.0) || !lipschitz.is_finite() {
        return Err(Error::Contract(format!("smoothness constant must be positive, got {lipschitz}")));
    }
    if !(a_sum >= 0.0) {
        return Err(Error::Contract(format!("accumulated weight must be nonnegative, got {a_sum}")));
    }
    Ok((1.0 + (1.0 + 4.0 * lipschitz * a_sum).sqrt()) / (2.0 * lipschitz))
}

/// Iterates of the fast gradient method after `k` steps.
#[derive(Debug, Clone, PartialEq)]
pub struct FgmState {
    pub y: Vector,
    pub z: Vector,
    pub u: Vector,
    pub alpha: f64,
    pub a_sum: f64,
    pub k: usize,
}

impl FgmState {
    pub fn new(y0: Vector) -> Self {
        Self { z: y0.clone(), u: y0.clone(), y: y0, alpha: 0.0, a_sum: 0.0, k: 0 }
    }

    /// One iteration; the prox step is `project(u - alpha * grad f(z))`.
    pub fn step<O, S>(&mut self, oracle: &O, set: &S, lipschitz: f64, ledger: &mut OracleLedger) -> Result<()>
    where
        O: SmoothOracle + ?Sized,
        S: ConvexSet + ?Sized,
    {
        let alpha = next_alpha(self.a_sum, lipschitz)?;
        let a_prev = self.a_sum;
        let a_next = a_prev + alpha;
        let z = (&self.u * alpha + &self.y * a_prev) / a_next;
        let grad = oracle.gradient(&z);
        oracle.record_gradient(ledger);
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NumericFailure { step: self.k + 1, what: "gradient" });
        }
        let u = set.project(&(&self.u - &grad * alpha))?;
        self.y = (&u * alpha + &self.y * a_prev) / a_next;
        self.u = u;
        self.z = z;
        self.alpha = alpha;
        self.a_sum = a_next;
        self.k += 1;
        Ok(())
    }
}

fn check_start<O, S>(oracle: &O, set: &S, y0: &Vector) -> Result<()>
where
    O: SmoothOracle + ?Sized,
    S: ConvexSet + ?Sized,
{
    check_dim(oracle.dim(), y0.len())?;
    check_dim(set.dim(), y0.len())?;
    if !set.contains(y0, START_TOL) {
        return Err(Error::Contract("starting point lies outside the feasible set".into()));
    }
    Ok(())
}

/// Runs `steps` iterations from `y0` and returns `y^N`.
pub fn fgm_run<O, S>(
    oracle: &O,
    set: &S,
    y0: &Vector,
    lipschitz: f64,
    steps: usize,
    ledger: &mut OracleLedger,
) -> Result<Vector>
where
    O: SmoothOracle + ?Sized,
    S: ConvexSet + ?Sized,
{
    fgm_run_observed(oracle, set, y0, lipschitz, steps, ledger, |_| {})
}

/// [`fgm_run`] with a callback after every iteration.
pub fn fgm_run_observed<O, S, F>(
    oracle: &O,
    set: &S,
    y0: &Vector,
    lipschitz: f64,
    steps: usize,
    ledger: &mut OracleLedger,
    mut observe: F,
) -> Result<Vector>
where
    O: SmoothOracle + ?Sized,
    S: ConvexSet + ?Sized,
    F: FnMut(&FgmState),
{
    if steps == 0 {
        return Err(Error::Contract("number of steps must be at least 1".into()));
    }
    check_start(oracle, set, y0)?;
    let mut state = FgmState::new(y0.clone());
    for _ in 0..steps {
        state.step(oracle, set, lipschitz, ledger)?;
        observe(&state);
    }
    Ok(state.y)
}

/// Parameters of the restart scheme. `radius` is `R` with `R^2 >= 0.5 * |y0 - y*|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestartConfig {
    pub lipschitz: f64,
    pub mu: f64,
    pub epsilon: f64,
    pub radius: f64,
}

/// `ceil` that ignores round-off just above an integer.
fn robust_ceil(v: f64) -> f64 {
    (v - 1e-9 * v.abs().max(1.0)).ceil()
}

impl RestartConfig {
    pub fn new(lipschitz: f64, mu: f64, epsilon: f64, radius: f64) -> Result<Self> {
        let cfg = Self { lipschitz, mu, epsilon, radius };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0) {
            return Err(Error::Contract(format!(
                "restarts need a positive strong convexity modulus, got {}; use fgm_run",
                self.mu
            )));
        }
        if !(self.lipschitz >= self.mu) || !self.lipschitz.is_finite() {
            return Err(Error::Contract(format!("need L >= mu, got L={} mu={}", self.lipschitz, self.mu)));
        }
        if !(self.epsilon > 0.0) || !(self.radius > 0.0) {
            return Err(Error::Contract("epsilon and R must be positive".into()));
        }
        Ok(())
    }

    /// Iterations per block, `ceil(4 sqrt(L / mu))`.
    pub fn block_length(&self) -> usize {
        robust_ceil(4.0 * (self.lipschitz / self.mu).sqrt()) as usize
    }

    /// Number of blocks, `ceil(0.5 ln(mu R^2 / eps))`, at least one.
    pub fn restarts(&self) -> usize {
        let p = robust_ceil(0.5 * (self.mu * self.radius * self.radius / self.epsilon).ln());
        if p.is_finite() && p >= 1.0 {
            p as usize
        } else {
            1
        }
    }

    pub fn total_iterations(&self) -> usize {
        self.restarts() * self.block_length()
    }
}

/// Restarted fast gradient method: `p` blocks of `N_1` iterations, each
/// block started from the previous block's output.
pub fn fgm_restarted<O, S>(
    oracle: &O,
    set: &S,
    y0: &Vector,
    cfg: &RestartConfig,
    ledger: &mut OracleLedger,
) -> Result<Vector>
where
    O: SmoothOracle + ?Sized,
    S: ConvexSet + ?Sized,
{
    fgm_restarted_observed(oracle, set, y0, cfg, ledger, |_, _| {})
}

/// [`fgm_restarted`] with a callback `(block index, block output)` after every block.
pub fn fgm_restarted_observed<O, S, F>(
    oracle: &O,
    set: &S,
    y0: &Vector,
    cfg: &RestartConfig,
    ledger: &mut OracleLedger,
    mut observe: F,
) -> Result<Vector>
where
    O: SmoothOracle + ?Sized,
    S: ConvexSet + ?Sized,
    F: FnMut(usize, &Vector),
{
    cfg.validate()?;
    check_start(oracle, set, y0)?;
    let block = cfg.block_length();
    let mut y = y0.clone();
    for j in 0..cfg.restarts() {
        y = fgm_run(oracle, set, &y, cfg.lipschitz, block, ledger)?;
        observe(j, &y);
    }
    Ok(y)
}
