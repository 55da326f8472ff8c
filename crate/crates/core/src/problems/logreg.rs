//! Two-block L2-regularized logistic regression
//! `F(x, y) = (1/m) sum_i log(1 + exp(-t_i <(x, y), z_i>)) + s |y|^2`, `s = 1/sigma^2`.

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dim, Error, Result};
use crate::minmin::{FiniteSumCoupled, MinMinProblem, Objective};
use crate::rng::seeded_rng;
use crate::sets::FeasibleSet;
use crate::{Matrix, Vector};

/// Numerically stable `log(1 + e^u)`.
pub fn softplus(u: f64) -> f64 {
    if u > 30.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

/// Numerically stable `1 / (1 + e^{-u})`.
pub fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(-t <w, z>))` and its gradient in `w`.
pub fn logistic_loss(w: &Vector, z: &Vector, t: f64) -> (f64, Vector) {
    let u = -t * w.dot(z);
    (softplus(u), z * (-t * sigmoid(u)))
}

/// Dense features with labels in `{-1, +1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// One row per object.
    pub features: Matrix,
    pub labels: Vec<f64>,
}

impl Dataset {
    pub fn new(features: Matrix, labels: Vec<f64>) -> Result<Self> {
        check_dim(features.nrows(), labels.len())?;
        if let Some(i) = labels.iter().position(|&t| t != 1.0 && t != -1.0) {
            return Err(Error::Contract(format!("label {} of row {i} is not +1 or -1", labels[i])));
        }
        Ok(Self { features, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_features(&self) -> usize {
        self.features.ncols()
    }

    /// Rescales every column to zero mean and unit variance; constant columns become zero.
    pub fn standardize(&mut self) {
        let m = self.features.nrows() as f64;
        for mut col in self.features.column_iter_mut() {
            let mean = col.sum() / m;
            col.add_scalar_mut(-mean);
            let sd = (col.norm_squared() / m).sqrt();
            if sd > 0.0 {
                col /= sd;
            }
        }
    }

    /// The first `rows` objects.
    pub fn head(&self, rows: usize) -> Self {
        let rows = rows.min(self.len());
        Self { features: self.features.rows(0, rows).into_owned(), labels: self.labels[..rows].to_vec() }
    }

    /// Largest row norm.
    pub fn max_row_norm(&self) -> f64 {
        self.features.row_iter().map(|r| r.norm()).fold(0.0, f64::max)
    }
}

/// Gaussian features, labels from a random linear model with a fraction
/// `label_noise` of them flipped.
pub fn synthetic_dataset(m: usize, features: usize, label_noise: f64, seed: u64) -> Result<Dataset> {
    if m == 0 || features == 0 || !(0.0..=0.5).contains(&label_noise) {
        return Err(Error::Contract("need m, features >= 1 and label noise in [0, 1/2]".into()));
    }
    let mut rng = seeded_rng(seed);
    let z = Matrix::from_fn(m, features, |_, _| rng.sample::<f64, _>(StandardNormal));
    let scale = 1.0 / (features as f64).sqrt();
    let w = Vector::from_fn(features, |_, _| rng.sample::<f64, _>(StandardNormal) * scale * 3.0);
    let labels = (0..m)
        .map(|i| {
            let t = if z.row(i).dot(&w.transpose()) >= 0.0 { 1.0 } else { -1.0 };
            if rng.random::<f64>() < label_noise {
                -t
            } else {
                t
            }
        })
        .collect();
    Dataset::new(z, labels)
}

/// Components `F_i(x, y) = l_{z_i}(x, y) + s |y|^2`; `x` takes the first `d`
/// features and `y` the rest.
#[derive(Debug, Clone)]
pub struct LogRegMinMin {
    pub data: Dataset,
    pub d: usize,
    pub sigma2_inv: f64,
}

impl LogRegMinMin {
    pub fn new(data: Dataset, d: usize, sigma2_inv: f64) -> Result<Self> {
        if d == 0 || d >= data.num_features() {
            return Err(Error::Contract(format!(
                "split index must lie in [1, {}), got {d}",
                data.num_features()
            )));
        }
        if data.is_empty() {
            return Err(Error::Contract("dataset is empty".into()));
        }
        if !(sigma2_inv > 0.0) {
            return Err(Error::Contract(format!("regularization weight must be positive, got {sigma2_inv}")));
        }
        Ok(Self { data, d, sigma2_inv })
    }

    pub fn mu(&self) -> f64 {
        2.0 * self.sigma2_inv
    }

    fn margin(&self, i: usize, x: &Vector, y: &Vector) -> f64 {
        let row = self.data.features.row(i);
        let n = self.dim_y();
        -self.data.labels[i] * (row.columns(0, self.d).dot(&x.transpose()) + row.columns(self.d, n).dot(&y.transpose()))
    }

    /// `-t_i sigmoid(-t_i <w, z_i>)`, the derivative of the loss in `<w, z_i>`.
    fn slope(&self, i: usize, x: &Vector, y: &Vector) -> f64 {
        -self.data.labels[i] * sigmoid(self.margin(i, x, y))
    }

    /// Joint weights `w = (x, y)`.
    pub fn joint_value(&self, w: &Vector) -> f64 {
        let (x, y) = (w.rows(0, self.d).into_owned(), w.rows(self.d, self.dim_y()).into_owned());
        let m = self.num_components();
        (0..m).map(|i| self.component_value(i, &x, &y)).sum::<f64>() / m as f64
    }
}

impl FiniteSumCoupled for LogRegMinMin {
    fn dim_x(&self) -> usize {
        self.d
    }

    fn dim_y(&self) -> usize {
        self.data.num_features() - self.d
    }

    fn num_components(&self) -> usize {
        self.data.len()
    }

    fn component_value(&self, i: usize, x: &Vector, y: &Vector) -> f64 {
        softplus(self.margin(i, x, y)) + self.sigma2_inv * y.norm_squared()
    }

    fn component_grad_y(&self, i: usize, x: &Vector, y: &Vector) -> Vector {
        let zy = self.data.features.row(i).columns(self.d, self.dim_y()).transpose();
        zy * self.slope(i, x, y) + y * (2.0 * self.sigma2_inv)
    }

    fn component_subgrad_x(&self, i: usize, x: &Vector, y: &Vector) -> Vector {
        self.data.features.row(i).columns(0, self.d).transpose() * self.slope(i, x, y)
    }

    fn component_lipschitz_y(&self, i: usize) -> f64 {
        0.25 * self.data.features.row(i).columns(self.d, self.dim_y()).norm_squared() + 2.0 * self.sigma2_inv
    }

    fn component_lipschitz_joint(&self, i: usize) -> f64 {
        0.25 * self.data.features.row(i).norm_squared() + 2.0 * self.sigma2_inv
    }
}

/// Ball radius used when none is given: `10 (1 + max row norm)`.
pub fn default_radius(data: &Dataset) -> f64 {
    10.0 * (1.0 + data.max_row_norm())
}

/// Logistic min-min problem on centered balls of radii `radius_x`, `radius_y`.
pub fn make_logreg_minmin(
    data: Dataset,
    d: usize,
    sigma2_inv: f64,
    radius_x: f64,
    radius_y: f64,
) -> Result<MinMinProblem> {
    let f = LogRegMinMin::new(data, d, sigma2_inv)?;
    let n = f.dim_y();
    let m = f.num_components();
    let lipschitz = (0..m).map(|i| f.component_lipschitz_y(i)).sum::<f64>() / m as f64;
    let max_zy = f.data.features.columns(d, n).row_iter().map(|r| r.norm()).fold(0.0, f64::max);
    // |sigmoid| <= 1 and |y| <= radius_y bound every gradient in Q_y.
    let grad_bound = max_zy + 2.0 * sigma2_inv * radius_y;
    let mu = f.mu();
    MinMinProblem::new(
        Objective::FiniteSum(Arc::new(f)),
        FeasibleSet::centered_ball(d, radius_x)?,
        FeasibleSet::centered_ball(n, radius_y)?,
        lipschitz,
        mu,
        grad_bound,
    )
}
