//! Quadratic test problems with closed-form solutions.

use std::sync::Arc;

use nalgebra::{Cholesky, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dim, Error, Result};
use crate::fgm::{fgm_restarted, RestartConfig};
use crate::minmin::{CoupledObjective, FiniteSumCoupled, MinMinProblem, Objective};
use crate::oracle::{FiniteSumOracle, OracleLedger, SmoothOracle};
use crate::rng::{seeded_rng, SolverRng};
use crate::sets::{ConvexSet, FeasibleSet};
use crate::{Matrix, Vector};

/// Weight of the `x`-regularizer `nu/2 |x - x0|^2` in the generated families.
pub const DEFAULT_NU: f64 = 0.1;

fn gaussian_matrix(rng: &mut SolverRng, rows: usize, cols: usize, scale: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal) * scale)
}

fn solve_spd(h: Matrix, rhs: &Vector) -> Result<Vector> {
    Cholesky::new(h).map(|c| c.solve(rhs)).ok_or(Error::DegeneratePolytope)
}

/// `f(y) = 1/2 y^T Q y - b^T y` with `Q` symmetric positive semidefinite.
#[derive(Debug, Clone)]
pub struct Quadratic {
    pub q: Matrix,
    pub b: Vector,
    lipschitz: f64,
    mu: f64,
}

impl Quadratic {
    pub fn new(q: Matrix, b: Vector) -> Result<Self> {
        check_dim(q.nrows(), q.ncols())?;
        check_dim(q.nrows(), b.len())?;
        let eig = SymmetricEigen::new(q.clone()).eigenvalues;
        let lipschitz = eig.max();
        let mu = eig.min();
        if mu < -1e-12 * lipschitz.abs().max(1.0) {
            return Err(Error::Contract(format!("quadratic form is not positive semidefinite (min eigenvalue {mu})")));
        }
        Ok(Self { q, b, lipschitz, mu: mu.max(0.0) })
    }

    /// Random rotation of the spectrum `eigenvalues`, with a Gaussian linear term.
    pub fn with_spectrum(eigenvalues: &[f64], seed: u64) -> Result<Self> {
        let n = eigenvalues.len();
        let mut rng = seeded_rng(seed);
        let qr = gaussian_matrix(&mut rng, n, n, 1.0).qr();
        let u = qr.q();
        let q = &u * Matrix::from_diagonal(&Vector::from_column_slice(eigenvalues)) * u.transpose();
        let q = (&q + q.transpose()) * 0.5;
        let b = Vector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        Self::new(q, b)
    }

    /// Spectrum with largest eigenvalue `lipschitz`, smallest `mu`, the rest uniform in between.
    pub fn random(n: usize, lipschitz: f64, mu: f64, seed: u64) -> Result<Self> {
        if n == 0 || !(lipschitz >= mu) || !(mu >= 0.0) {
            return Err(Error::Contract(format!("need n >= 1 and L >= mu >= 0, got n={n} L={lipschitz} mu={mu}")));
        }
        let mut rng = seeded_rng(seed ^ 0x5eed);
        let mut eig: Vec<f64> = (0..n).map(|_| rng.random_range(mu..=lipschitz)).collect();
        eig[0] = lipschitz;
        if n > 1 {
            eig[n - 1] = mu;
        }
        Self::with_spectrum(&eig, seed)
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn strong_convexity(&self) -> f64 {
        self.mu
    }

    /// Unconstrained minimizer `Q^{-1} b`; needs `Q` positive definite.
    pub fn minimizer(&self) -> Result<Vector> {
        solve_spd(self.q.clone(), &self.b)
    }
}

impl SmoothOracle for Quadratic {
    fn dim(&self) -> usize {
        self.b.len()
    }

    fn value(&self, y: &Vector) -> f64 {
        0.5 * y.dot(&(&self.q * y)) - self.b.dot(y)
    }

    fn gradient(&self, y: &Vector) -> Vector {
        &self.q * y - &self.b
    }
}

/// `f(y) = (1/m) sum_i f_i(y)`, `f_i(y) = 1/2 (a_i^T y - b_i)^2 + mu/2 |y|^2`.
#[derive(Debug, Clone)]
pub struct LeastSquaresSum {
    /// Rows are `a_i`.
    pub a: Matrix,
    pub b: Vector,
    pub mu: f64,
}

impl LeastSquaresSum {
    pub fn new(a: Matrix, b: Vector, mu: f64) -> Result<Self> {
        check_dim(a.nrows(), b.len())?;
        if !(mu >= 0.0) {
            return Err(Error::Contract(format!("mu must be nonnegative, got {mu}")));
        }
        Ok(Self { a, b, mu })
    }

    /// `m` Gaussian rows rescaled so that `L / mu = condition` exactly, with `L`
    /// the mean of the component constants.
    pub fn random(m: usize, n: usize, mu: f64, condition: f64, seed: u64) -> Result<Self> {
        if !(mu > 0.0) || !(condition >= 1.0) {
            return Err(Error::Contract(format!("need mu > 0 and L/mu >= 1, got mu={mu} L/mu={condition}")));
        }
        let mut rng = seeded_rng(seed);
        let mut a = gaussian_matrix(&mut rng, m, n, 1.0);
        let mean_sq = a.row_iter().map(|r| r.norm_squared()).sum::<f64>() / m as f64;
        a *= ((condition - 1.0) * mu / mean_sq).sqrt();
        let b = Vector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        Self::new(a, b, mu)
    }

    pub fn minimizer(&self) -> Result<Vector> {
        let m = self.a.nrows() as f64;
        let n = self.a.ncols();
        let h = self.a.transpose() * &self.a / m + Matrix::identity(n, n) * self.mu;
        solve_spd(h, &(self.a.transpose() * &self.b / m))
    }
}

impl FiniteSumOracle for LeastSquaresSum {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn num_components(&self) -> usize {
        self.a.nrows()
    }

    fn component_value(&self, i: usize, y: &Vector) -> f64 {
        let r = self.a.row(i).dot(&y.transpose()) - self.b[i];
        0.5 * r * r + 0.5 * self.mu * y.norm_squared()
    }

    fn component_gradient(&self, i: usize, y: &Vector) -> Vector {
        let row = self.a.row(i);
        let r = row.dot(&y.transpose()) - self.b[i];
        row.transpose() * r + y * self.mu
    }

    fn component_lipschitz(&self, i: usize) -> f64 {
        self.a.row(i).norm_squared() + self.mu
    }

    fn strong_convexity(&self) -> f64 {
        self.mu
    }
}

/// Closed-form optimum of a generated min-min problem.
#[derive(Debug, Clone)]
pub struct QuadraticSolution {
    pub x_star: Vector,
    pub y_star: Vector,
    pub f_star: f64,
}

/// `F(x, y) = 1/2 (y - Bx)^T diag(a) (y - Bx) + mu/2 |y - Ex|^2 + nu/2 |x - x0|^2`.
#[derive(Debug, Clone)]
pub struct QuadraticMinMin {
    /// `B`, `n x d`.
    pub coupling: Matrix,
    pub curvature: Vector,
    /// `E`, `n x d`; zero gives the plain `mu/2 |y|^2` regularizer.
    pub shift: Matrix,
    pub mu: f64,
    pub nu: f64,
    pub x0: Vector,
}

impl QuadraticMinMin {
    pub fn new(coupling: Matrix, curvature: Vector, shift: Matrix, mu: f64, nu: f64, x0: Vector) -> Result<Self> {
        check_dim(coupling.nrows(), curvature.len())?;
        check_dim(coupling.ncols(), x0.len())?;
        check_dim(coupling.nrows(), shift.nrows())?;
        check_dim(coupling.ncols(), shift.ncols())?;
        if !(mu > 0.0) || !(nu >= 0.0) || curvature.iter().any(|&a| !(a >= 0.0)) {
            return Err(Error::Contract("need mu > 0, nu >= 0 and nonnegative curvature".into()));
        }
        Ok(Self { coupling, curvature, shift, mu, nu, x0 })
    }

    pub fn lipschitz_y(&self) -> f64 {
        self.curvature.max() + self.mu
    }

    /// `K` with `y(x) = K x`: `(diag(a) + mu I)^{-1} (diag(a) B + mu E)`.
    pub fn inner_map(&self) -> Matrix {
        let mut k = &self.shift * self.mu;
        for (j, mut row) in k.row_iter_mut().enumerate() {
            let a = self.curvature[j];
            row += self.coupling.row(j) * a;
            row /= a + self.mu;
        }
        k
    }

    pub fn inner_minimizer(&self, x: &Vector) -> Vector {
        self.inner_map() * x
    }

    /// Hessian of `f(x) = min_y F(x, y)`, the Schur complement of the joint Hessian.
    pub fn outer_hessian(&self) -> Matrix {
        let d = self.x0.len();
        let ab = Matrix::from_diagonal(&self.curvature) * &self.coupling;
        let hxx = self.coupling.transpose() * &ab
            + self.shift.transpose() * &self.shift * self.mu
            + Matrix::identity(d, d) * self.nu;
        let hyx = ab + &self.shift * self.mu;
        let h = hxx - hyx.transpose() * self.inner_map();
        (&h + h.transpose()) * 0.5
    }

    /// `f(x)` in closed form.
    pub fn outer_value(&self, x: &Vector) -> f64 {
        self.value(x, &self.inner_minimizer(x))
    }

    pub fn outer_gradient(&self, x: &Vector) -> Vector {
        self.outer_hessian() * x - &self.x0 * self.nu
    }

    fn residual(&self, x: &Vector, y: &Vector) -> Vector {
        self.curvature.component_mul(&(y - &self.coupling * x))
    }
}

impl CoupledObjective for QuadraticMinMin {
    fn dim_x(&self) -> usize {
        self.x0.len()
    }

    fn dim_y(&self) -> usize {
        self.curvature.len()
    }

    fn value(&self, x: &Vector, y: &Vector) -> f64 {
        let r = y - &self.coupling * x;
        0.5 * r.dot(&self.curvature.component_mul(&r))
            + 0.5 * self.mu * (y - &self.shift * x).norm_squared()
            + 0.5 * self.nu * (x - &self.x0).norm_squared()
    }

    fn grad_y(&self, x: &Vector, y: &Vector) -> Vector {
        self.residual(x, y) + (y - &self.shift * x) * self.mu
    }

    fn subgrad_x(&self, x: &Vector, y: &Vector) -> Vector {
        (x - &self.x0) * self.nu
            - self.coupling.transpose() * self.residual(x, y)
            - self.shift.transpose() * (y - &self.shift * x) * self.mu
    }
}

/// Minimizes `1/2 x^T H x - c^T x` over `set`: the linear solve if the answer is
/// inside, else a restarted projected fast gradient run to round-off.
fn constrained_quadratic_min(h: &Matrix, c: &Vector, set: &FeasibleSet) -> Result<Vector> {
    let x = solve_spd(h.clone(), c)?;
    if set.contains(&x, 0.0) {
        return Ok(x);
    }
    let oracle = Quadratic::new(h.clone(), c.clone())?;
    let radius = set.diameter().max(f64::MIN_POSITIVE);
    let cfg = RestartConfig::new(oracle.lipschitz(), oracle.strong_convexity(), 1e-30, radius)?;
    fgm_restarted(&oracle, set, &set.center(), &cfg, &mut OracleLedger::new())
}

/// Gaussian coupling `B` (`n x d`) with entries of variance `1/d`.
pub fn random_coupling(d: usize, n: usize, seed: u64) -> Matrix {
    gaussian_matrix(&mut seeded_rng(seed), n, d, 1.0 / (d as f64).sqrt())
}

/// `F(x, y) = 1/2 |y - Bx|^2 + mu/2 |y|^2 + nu/2 |x - x0|^2` on `Q_x = [-1, 1]^d`,
/// `Q_y` a centered ball containing every `y(x)`. `x0` is drawn from `[-1/2, 1/2]^d`.
pub fn make_quadratic_minmin(coupling: Matrix, mu: f64, seed: u64) -> Result<(MinMinProblem, QuadraticSolution)> {
    let (n, d) = coupling.shape();
    build_quadratic_minmin(coupling, Vector::from_element(n, 1.0), Matrix::zeros(n, d), mu, seed)
}

/// `diag(a)` spread linearly over `[0, L - mu]`, so that `F(x, .)` has
/// smoothness `L` and strong convexity exactly `mu`, and `E = B`. Then
/// `y(x) = Bx` and `f(x) = nu/2 |x - x0|^2` whatever `L / mu` is, which isolates
/// the effect of conditioning on the inner solves.
pub fn make_conditioned_quadratic_minmin(
    coupling: Matrix,
    lipschitz: f64,
    mu: f64,
    seed: u64,
) -> Result<(MinMinProblem, QuadraticSolution)> {
    if !(lipschitz >= mu) {
        return Err(Error::Contract(format!("need L >= mu, got L={lipschitz} mu={mu}")));
    }
    let n = coupling.nrows();
    let top = lipschitz - mu;
    let curvature = if n == 1 {
        Vector::from_element(1, top)
    } else {
        Vector::from_fn(n, |j, _| top * j as f64 / (n - 1) as f64)
    };
    let shift = coupling.clone();
    build_quadratic_minmin(coupling, curvature, shift, mu, seed)
}

fn build_quadratic_minmin(
    coupling: Matrix,
    curvature: Vector,
    shift: Matrix,
    mu: f64,
    seed: u64,
) -> Result<(MinMinProblem, QuadraticSolution)> {
    let d = coupling.ncols();
    let mut rng = seeded_rng(seed);
    let x0 = Vector::from_fn(d, |_, _| rng.random_range(-0.5..0.5));
    let f = QuadraticMinMin::new(coupling, curvature, shift, mu, DEFAULT_NU, x0)?;
    let q_x = FeasibleSet::cube(d, -1.0, 1.0)?;
    let radius = f.inner_map().norm() * (d as f64).sqrt() + 1.0;
    let q_y = FeasibleSet::centered_ball(f.dim_y(), radius)?;
    let x_star = constrained_quadratic_min(&f.outer_hessian(), &(&f.x0 * f.nu), &q_x)?;
    let y_star = f.inner_minimizer(&x_star);
    let f_star = f.value(&x_star, &y_star);
    let lipschitz = f.lipschitz_y();
    // y(x) is interior for every x in Q_x, so grad_y F(x, y(x)) = 0.
    let problem = MinMinProblem::new(Objective::Simple(Arc::new(f)), q_x, q_y, lipschitz, mu, 0.0)?;
    Ok((problem, QuadraticSolution { x_star, y_star, f_star }))
}

/// `F_i(x, y) = 1/2 (a_i^T y - c_i^T x)^2 + mu/2 |y|^2 + nu/2 |x - x0|^2`.
#[derive(Debug, Clone)]
pub struct FiniteSumQuadraticMinMin {
    /// Rows `a_i`, `m x n`.
    pub a: Matrix,
    /// Rows `c_i`, `m x d`.
    pub c: Matrix,
    pub mu: f64,
    pub nu: f64,
    pub x0: Vector,
}

impl FiniteSumQuadraticMinMin {
    fn residual(&self, i: usize, x: &Vector, y: &Vector) -> f64 {
        self.a.row(i).dot(&y.transpose()) - self.c.row(i).dot(&x.transpose())
    }

    pub fn lipschitz_y(&self) -> f64 {
        let m = self.a.nrows();
        (0..m).map(|i| self.component_lipschitz_y(i)).sum::<f64>() / m as f64
    }

    /// `(A^T A / m + mu I)^{-1} A^T C / m`, so that `y(x) = K x`.
    pub fn inner_map(&self) -> Result<Matrix> {
        let m = self.a.nrows() as f64;
        let n = self.a.ncols();
        let h = self.a.transpose() * &self.a / m + Matrix::identity(n, n) * self.mu;
        let chol = Cholesky::new(h).ok_or(Error::DegeneratePolytope)?;
        Ok(chol.solve(&(self.a.transpose() * &self.c / m)))
    }

    pub fn inner_minimizer(&self, x: &Vector) -> Result<Vector> {
        Ok(self.inner_map()? * x)
    }

    /// Hessian of `f(x) = min_y F(x, y)`.
    pub fn outer_hessian(&self) -> Result<Matrix> {
        let m = self.a.nrows() as f64;
        let d = self.c.ncols();
        let cross = self.c.transpose() * &self.a / m;
        Ok(self.c.transpose() * &self.c / m - cross * self.inner_map()? + Matrix::identity(d, d) * self.nu)
    }
}

impl FiniteSumCoupled for FiniteSumQuadraticMinMin {
    fn dim_x(&self) -> usize {
        self.c.ncols()
    }

    fn dim_y(&self) -> usize {
        self.a.ncols()
    }

    fn num_components(&self) -> usize {
        self.a.nrows()
    }

    fn component_value(&self, i: usize, x: &Vector, y: &Vector) -> f64 {
        let r = self.residual(i, x, y);
        0.5 * r * r + 0.5 * self.mu * y.norm_squared() + 0.5 * self.nu * (x - &self.x0).norm_squared()
    }

    fn component_grad_y(&self, i: usize, x: &Vector, y: &Vector) -> Vector {
        self.a.row(i).transpose() * self.residual(i, x, y) + y * self.mu
    }

    fn component_subgrad_x(&self, i: usize, x: &Vector, y: &Vector) -> Vector {
        (x - &self.x0) * self.nu - self.c.row(i).transpose() * self.residual(i, x, y)
    }

    fn component_lipschitz_y(&self, i: usize) -> f64 {
        self.a.row(i).norm_squared() + self.mu
    }

    fn component_lipschitz_joint(&self, i: usize) -> f64 {
        self.a.row(i).norm_squared() + self.c.row(i).norm_squared() + self.mu.max(self.nu)
    }
}

/// Finite-sum coupled quadratic with `m` Gaussian components, `Q_x = [-1, 1]^d`
/// and a centered ball `Q_y` containing every `y(x)`.
pub fn make_finite_sum_quadratic_minmin(
    m: usize,
    d: usize,
    n: usize,
    mu: f64,
    seed: u64,
) -> Result<(MinMinProblem, QuadraticSolution)> {
    if m == 0 || d == 0 || n == 0 {
        return Err(Error::Contract("dimensions must be positive".into()));
    }
    let mut rng = seeded_rng(seed);
    let a = gaussian_matrix(&mut rng, m, n, 1.0 / (n as f64).sqrt());
    let c = gaussian_matrix(&mut rng, m, d, 1.0 / (d as f64).sqrt());
    let x0 = Vector::from_fn(d, |_, _| rng.random_range(-0.5..0.5));
    let f = FiniteSumQuadraticMinMin { a, c, mu, nu: DEFAULT_NU, x0 };
    let q_x = FeasibleSet::cube(d, -1.0, 1.0)?;
    let k = f.inner_map()?;
    let radius = k.norm() * (d as f64).sqrt() + 1.0;
    let q_y = FeasibleSet::centered_ball(n, radius)?;
    let x_star = constrained_quadratic_min(&f.outer_hessian()?, &(&f.x0 * f.nu), &q_x)?;
    let y_star = &k * &x_star;
    let lipschitz = f.lipschitz_y();
    let problem = MinMinProblem::new(Objective::FiniteSum(Arc::new(f)), q_x, q_y, lipschitz, mu, 0.0)?;
    let f_star = problem.value(&x_star, &y_star);
    Ok((problem, QuadraticSolution { x_star, y_star, f_star }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn decoupled_blocks() {
        let (p, sol) = make_quadratic_minmin(Matrix::zeros(4, 3), 0.5, 1).unwrap();
        let Objective::Simple(_) = &p.objective else { panic!() };
        assert_relative_eq!(sol.y_star, Vector::zeros(4));
        // x0 lies inside the cube, so no clipping
        assert!(sol.x_star.iter().all(|v| v.abs() <= 0.5));
        assert_relative_eq!(sol.f_star, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn decoupled_blocks_clip_to_the_cube() {
        let x0 = Vector::from_column_slice(&[3.0, -0.25]);
        let f = QuadraticMinMin::new(Matrix::zeros(2, 2), Vector::from_element(2, 1.0), Matrix::zeros(2, 2), 1.0, 1.0, x0).unwrap();
        let x = constrained_quadratic_min(&f.outer_hessian(), &(&f.x0 * f.nu), &FeasibleSet::cube(2, -1.0, 1.0).unwrap()).unwrap();
        assert_relative_eq!(x, Vector::from_column_slice(&[1.0, -0.25]), epsilon = 1e-9);
    }

    #[test]
    fn optimality_residual_at_seed_seven() {
        let b = random_coupling(2, 3, 7);
        let (p, sol) = make_quadratic_minmin(b, 0.3, 7).unwrap();
        let gy = p.objective.grad_y(&sol.x_star, &sol.y_star);
        let gx = p.objective.subgrad_x(&sol.x_star, &sol.y_star);
        assert!(gy.amax() <= 1e-10, "{gy}");
        assert!(gx.amax() <= 1e-10, "{gx}");
    }

    #[test]
    fn conditioned_family_has_requested_constants() {
        let (p, _) = make_conditioned_quadratic_minmin(random_coupling(3, 10, 2), 50.0, 0.5, 2).unwrap();
        assert_eq!(p.lipschitz_y, 50.0);
        assert_eq!(p.mu, 0.5);
    }

    #[test]
    fn conditioned_family_keeps_the_outer_problem() {
        let b = random_coupling(3, 10, 2);
        let (p1, s1) = make_conditioned_quadratic_minmin(b.clone(), 1.0, 0.1, 5).unwrap();
        let (p2, s2) = make_conditioned_quadratic_minmin(b.clone(), 1.0, 0.001, 5).unwrap();
        assert_relative_eq!(s1.x_star, s2.x_star, epsilon = 1e-12);
        assert_relative_eq!(&b * &s1.x_star, s2.y_star, epsilon = 1e-12);
        for (p, s) in [(p1, s1), (p2, s2)] {
            assert!(p.objective.grad_y(&s.x_star, &s.y_star).amax() <= 1e-12);
            assert!(p.objective.subgrad_x(&s.x_star, &s.y_star).amax() <= 1e-12);
        }
    }

    #[test]
    fn finite_sum_optimum_is_stationary() {
        let (p, sol) = make_finite_sum_quadratic_minmin(30, 3, 8, 0.1, 4).unwrap();
        assert!(p.objective.grad_y(&sol.x_star, &sol.y_star).amax() <= 1e-10);
        assert!(p.objective.subgrad_x(&sol.x_star, &sol.y_star).amax() <= 1e-10);
    }

    #[test]
    fn least_squares_condition_number() {
        let ls = LeastSquaresSum::random(20, 5, 0.01, 100.0, 3).unwrap();
        assert_relative_eq!(ls.lipschitz() / ls.strong_convexity(), 100.0, epsilon = 1e-9);
    }

    #[test]
    fn random_quadratic_spectrum() {
        let q = Quadratic::random(6, 10.0, 0.5, 9).unwrap();
        assert_relative_eq!(q.lipschitz(), 10.0, epsilon = 1e-9);
        assert_relative_eq!(q.strong_convexity(), 0.5, epsilon = 1e-9);
    }
}
