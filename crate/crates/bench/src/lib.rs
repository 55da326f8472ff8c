//! Fixtures shared by the solver benchmarks.

use minmin_core::minmin::MinMinProblem;
use minmin_core::problems::{make_conditioned_quadratic_minmin, random_coupling, LeastSquaresSum, Quadratic};
use minmin_core::FeasibleSet;

/// Strongly convex quadratic with condition number `kappa`.
pub fn quadratic(n: usize, kappa: f64, seed: u64) -> Quadratic {
    Quadratic::random(n, kappa, 1.0, seed).expect("valid quadratic")
}

pub fn least_squares(m: usize, n: usize, kappa: f64, seed: u64) -> LeastSquaresSum {
    LeastSquaresSum::random(m, n, 0.01, kappa, seed).expect("valid least squares")
}

/// Coupled quadratic min-min problem on the unit box with `L / mu = kappa`.
pub fn coupled(d: usize, n: usize, kappa: f64, seed: u64) -> MinMinProblem {
    make_conditioned_quadratic_minmin(random_coupling(d, n, seed), 1.0, 1.0 / kappa, seed).expect("valid problem").0
}

pub fn ball(n: usize) -> FeasibleSet {
    FeasibleSet::centered_ball(n, 1e6).expect("positive radius")
}
