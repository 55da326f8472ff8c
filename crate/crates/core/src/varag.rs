//! Accelerated variance-reduced gradient method (Varag) for finite sums
//! `f(y) = (1/m) sum_i f_i(y)` over a simple set.
//!
//! Each epoch computes the full gradient at an anchor `y~`, then takes `T_s`
//! inner steps with the control-variate estimate
//! `G_t = (grad f_i(y_t^lo) - grad f_i(y~)) / (q_i m) + grad f(y~)`,
//! `i ~ q`, `q_i = L_i / sum_j L_j`. Component gradients at the anchor are
//! kept from the full pass, so an inner step costs one component call.

use log::debug;

use crate::error::{check_dim, Error, Result};
use crate::oracle::{OracleLedger, FiniteSumOracle};
use crate::rng::{seeded_rng, Categorical};
use crate::sets::ConvexSet;
use crate::Vector;

/// Which weight formula an epoch uses for its output average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaRegime {
    /// `theta_t = (gamma/alpha)(alpha + p)` for `t < T`, `gamma/alpha` at `t = T`.
    Accelerated,
    /// `theta_t = Gamma_{t-1} - (1 - alpha - p) Gamma_t` for `t < T`,
    /// `Gamma_{t-1}` at `t = T`, with `Gamma_t = (1 + mu gamma)^t`.
    Geometric,
}

/// Parameters of epoch `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochParams {
    pub s: usize,
    pub inner_steps: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub p: f64,
    pub theta: Vec<f64>,
    pub regime: ThetaRegime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VaragSchedule {
    pub m: usize,
    pub lipschitz: f64,
    pub mu: f64,
    /// `floor(log2 m) + 1`.
    pub s0: usize,
    pub probabilities: Vec<f64>,
}

/// Builds the parameter schedule. `lipschitz` must be the mean of `component_lipschitz`.
pub fn build_schedule(m: usize, lipschitz: f64, mu: f64, component_lipschitz: &[f64]) -> Result<VaragSchedule> {
    if m == 0 {
        return Err(Error::Contract("finite sum needs at least one component".into()));
    }
    check_dim(m, component_lipschitz.len())?;
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::Contract(format!("strong convexity modulus must be nonnegative, got {mu}")));
    }
    if let Some(i) = component_lipschitz.iter().position(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::Contract(format!("component {i} has non-positive smoothness constant")));
    }
    let total: f64 = component_lipschitz.iter().sum();
    let mean = total / m as f64;
    if !(lipschitz > 0.0) || (lipschitz - mean).abs() > 1e-9 * mean {
        return Err(Error::Contract(format!("L = {lipschitz} is not the mean {mean} of the component constants")));
    }
    Ok(VaragSchedule {
        m,
        lipschitz,
        mu,
        s0: m.ilog2() as usize + 1,
        probabilities: component_lipschitz.iter().map(|l| l / total).collect(),
    })
}

impl VaragSchedule {
    pub fn inner_steps(&self, s: usize) -> usize {
        1usize << (s.min(self.s0) - 1)
    }

    pub fn alpha(&self, s: usize) -> f64 {
        if s <= self.s0 {
            0.5
        } else {
            let decay = 2.0 / ((s - self.s0) as f64 + 4.0);
            let floor = (self.m as f64 * self.mu / (3.0 * self.lipschitz)).sqrt().min(0.5);
            decay.max(floor)
        }
    }

    pub fn regime(&self, s: usize) -> ThetaRegime {
        if s <= self.s0 || self.mu == 0.0 {
            return ThetaRegime::Accelerated;
        }
        let (l, mu, m) = (self.lipschitz, self.mu, self.m as f64);
        let horizon = self.s0 as f64 + (12.0 * l / (m * mu)).sqrt() - 4.0;
        if (s as f64) <= horizon && m < 3.0 * l / (4.0 * mu) {
            ThetaRegime::Accelerated
        } else {
            ThetaRegime::Geometric
        }
    }

    pub fn epoch(&self, s: usize) -> EpochParams {
        assert!(s >= 1, "epochs are numbered from 1");
        let t_len = self.inner_steps(s);
        let alpha = self.alpha(s);
        let gamma = 1.0 / (3.0 * self.lipschitz * alpha);
        let p = 0.5;
        let regime = self.regime(s);
        let theta = match regime {
            ThetaRegime::Accelerated => (1..=t_len)
                .map(|t| if t < t_len { gamma / alpha * (alpha + p) } else { gamma / alpha })
                .collect(),
            ThetaRegime::Geometric => {
                let growth = 1.0 + self.mu * gamma;
                (1..=t_len)
                    .map(|t| {
                        let prev = growth.powi(t as i32 - 1);
                        if t < t_len {
                            prev - (1.0 - alpha - p) * growth.powi(t as i32)
                        } else {
                            prev
                        }
                    })
                    .collect()
            }
        };
        EpochParams { s, inner_steps: t_len, alpha, gamma, p, theta, regime }
    }
}

/// `argmin_{y in set} gamma (<G, y> + mu/2 |y_lo - y|^2) + 1/2 |y_prev - y|^2`.
pub fn varag_inner_prox<S: ConvexSet + ?Sized>(
    y_prev: &Vector,
    y_under: &Vector,
    grad: &Vector,
    gamma: f64,
    mu: f64,
    set: &S,
) -> Result<Vector> {
    check_dim(y_prev.len(), y_under.len())?;
    check_dim(y_prev.len(), grad.len())?;
    let gm = gamma * mu;
    set.project(&((y_prev + y_under * gm - grad * gamma) / (1.0 + gm)))
}

/// Control-variate gradient estimate for sampled component `i` with probability `q_i`.
pub fn variance_reduced_gradient(
    component_at_point: &Vector,
    component_at_anchor: &Vector,
    q_i: f64,
    m: usize,
    full_at_anchor: &Vector,
) -> Vector {
    (component_at_point - component_at_anchor) / (q_i * m as f64) + full_at_anchor
}

/// Certified bound on `f(y) - min f` from a full gradient `g` at `y`:
/// `max_{z in set} <g, y - z> - mu/2 |y - z|^2`.
pub fn strong_convexity_gap<S: ConvexSet + ?Sized>(set: &S, y: &Vector, g: &Vector, mu: f64) -> Result<f64> {
    if mu > 0.0 {
        let z = set.project(&(y - g / mu))?;
        let diff = y - &z;
        Ok((g.dot(&diff) - 0.5 * mu * diff.norm_squared()).max(0.0))
    } else {
        Ok((g.dot(y) - set.min_linear(g)).max(0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VaragOptions {
    pub max_epochs: usize,
    /// Cap on component-gradient calls made by this run; checked before every call
    /// except inside a full-gradient pass.
    pub max_gradient_calls: Option<u64>,
    /// Stop at an epoch start whose certified gap bound is at most this value.
    pub target_gap: Option<f64>,
}

impl VaragOptions {
    pub fn epochs(max_epochs: usize) -> Self {
        Self { max_epochs, max_gradient_calls: None, target_gap: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VaragTermination {
    Epochs,
    Budget,
    Target,
}

/// Summary of a completed epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochReport {
    pub s: usize,
    pub regime: ThetaRegime,
    pub inner_steps_done: usize,
    /// Component-gradient calls made by this run so far.
    pub gradient_calls: u64,
    /// Gap bound at the epoch's anchor.
    pub anchor_gap_bound: f64,
}

#[derive(Debug, Clone)]
pub struct VaragOutcome {
    pub y: Vector,
    pub epochs: Vec<EpochReport>,
    pub gradient_calls: u64,
    pub termination: VaragTermination,
    /// Certified gap bound at `y` when the run stopped on target; otherwise the
    /// last anchor bound.
    pub last_gap_bound: Option<f64>,
}

/// Runs Varag from `y0` for `epochs` epochs.
pub fn varag_run<O, S>(
    oracle: &O,
    set: &S,
    y0: &Vector,
    epochs: usize,
    seed: u64,
    ledger: &mut OracleLedger,
) -> Result<Vector>
where
    O: FiniteSumOracle + ?Sized,
    S: ConvexSet + ?Sized,
{
    varag_run_with(oracle, set, y0, &VaragOptions::epochs(epochs), seed, ledger, |_, _| {}).map(|o| o.y)
}

/// Varag with budgets, a gap target, and a callback `(report, y~^s)` per epoch.
pub fn varag_run_with<O, S, F>(
    oracle: &O,
    set: &S,
    y0: &Vector,
    opts: &VaragOptions,
    seed: u64,
    ledger: &mut OracleLedger,
    mut observe: F,
) -> Result<VaragOutcome>
where
    O: FiniteSumOracle + ?Sized,
    S: ConvexSet + ?Sized,
    F: FnMut(&EpochReport, &Vector),
{
    let n = oracle.dim();
    let m = oracle.num_components();
    check_dim(n, y0.len())?;
    check_dim(set.dim(), n)?;
    if !set.contains(y0, 1e-9) {
        return Err(Error::Contract("starting point lies outside the feasible set".into()));
    }
    let lips: Vec<f64> = (0..m).map(|i| oracle.component_lipschitz(i)).collect();
    let mu = oracle.strong_convexity();
    let schedule = build_schedule(m, lips.iter().sum::<f64>() / m as f64, mu, &lips)?;
    let sampler = Categorical::new(&schedule.probabilities)?;
    let mut rng = seeded_rng(seed);

    let budget_left = |calls: u64| opts.max_gradient_calls.is_none_or(|cap| calls < cap);
    let mut calls = 0u64;
    let mut anchor = y0.clone();
    let mut y_last = y0.clone();
    let mut reports = Vec::new();
    let mut termination = VaragTermination::Epochs;
    let mut last_gap = None;
    let mut anchor_grads: Vec<Vector> = Vec::with_capacity(m);

    for s in 1..=opts.max_epochs {
        if !budget_left(calls) {
            termination = VaragTermination::Budget;
            break;
        }
        anchor_grads.clear();
        let mut full = Vector::zeros(n);
        for i in 0..m {
            let g = oracle.component_gradient(i, &anchor);
            full += &g;
            anchor_grads.push(g);
        }
        full /= m as f64;
        oracle.record_component_gradients(ledger, m as u64);
        calls += m as u64;
        if full.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericFailure { step: s, what: "full gradient" });
        }
        let gap = strong_convexity_gap(set, &anchor, &full, mu)?;
        last_gap = Some(gap);
        if opts.target_gap.is_some_and(|t| gap <= t) {
            termination = VaragTermination::Target;
            break;
        }

        let params = schedule.epoch(s);
        let (alpha, gamma, p) = (params.alpha, params.gamma, params.p);
        let gm = mu * gamma;
        let mut y_prev = y_last.clone();
        let mut y_bar = anchor.clone();
        let mut weighted = Vector::zeros(n);
        let mut weight_sum = 0.0;
        let mut done = 0;
        for t in 1..=params.inner_steps {
            if !budget_left(calls) {
                break;
            }
            let i = sampler.sample(&mut rng);
            let y_under = (&y_bar * ((1.0 + gm) * (1.0 - alpha - p)) + &y_prev * alpha + &anchor * ((1.0 + gm) * p))
                / (1.0 + gm * (1.0 - alpha));
            let gi = oracle.component_gradient(i, &y_under);
            oracle.record_component_gradients(ledger, 1);
            calls += 1;
            let g_est = variance_reduced_gradient(&gi, &anchor_grads[i], schedule.probabilities[i], m, &full);
            if g_est.iter().any(|v| !v.is_finite()) {
                return Err(Error::NumericFailure { step: s, what: "gradient estimate" });
            }
            let y_t = varag_inner_prox(&y_prev, &y_under, &g_est, gamma, mu, set)?;
            y_bar = &y_bar * (1.0 - alpha - p) + &y_t * alpha + &anchor * p;
            let theta = params.theta[t - 1];
            weighted += &y_bar * theta;
            weight_sum += theta;
            y_prev = y_t;
            done = t;
        }
        if done == 0 {
            termination = VaragTermination::Budget;
            break;
        }
        y_last = y_prev;
        anchor = weighted / weight_sum;
        let report = EpochReport {
            s,
            regime: params.regime,
            inner_steps_done: done,
            gradient_calls: calls,
            anchor_gap_bound: gap,
        };
        debug!("varag epoch {s}: T={done} regime={:?} calls={calls} gap<={gap:.3e}", params.regime);
        observe(&report, &anchor);
        reports.push(report);
    }

    Ok(VaragOutcome { y: anchor, epochs: reports, gradient_calls: calls, termination, last_gap_bound: last_gap })
}
