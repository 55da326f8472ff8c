//! Closed convex sets with exact Euclidean projections.

use crate::error::{check_dim, Error, Result};
use crate::Vector;

/// A set that admits an exact Euclidean projection.
pub trait ConvexSet {
    fn dim(&self) -> usize;

    /// Euclidean projection of `point` onto the set.
    fn project(&self, point: &Vector) -> Result<Vector>;

    /// Membership test with an absolute tolerance scaled by the set size.
    fn contains(&self, point: &Vector, tol: f64) -> bool;

    /// Support value `min_{y in set} <g, y>`.
    fn min_linear(&self, g: &Vector) -> f64;
}

/// Euclidean ball or axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    Ball { center: Vector, radius: f64 },
    Box { lower: Vector, upper: Vector },
}

impl FeasibleSet {
    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Contract(format!("ball radius must be positive, got {radius}")));
        }
        if center.is_empty() {
            return Err(Error::Contract("ball dimension must be at least 1".into()));
        }
        Ok(FeasibleSet::Ball { center, radius })
    }

    pub fn centered_ball(dim: usize, radius: f64) -> Result<Self> {
        Self::ball(Vector::zeros(dim), radius)
    }

    pub fn boxed(lower: Vector, upper: Vector) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        if lower.is_empty() {
            return Err(Error::Contract("box dimension must be at least 1".into()));
        }
        if let Some(i) = (0..lower.len()).find(|&i| !(lower[i] < upper[i])) {
            return Err(Error::Contract(format!(
                "box bounds must satisfy lower < upper (coordinate {i}: {} vs {})",
                lower[i], upper[i]
            )));
        }
        Ok(FeasibleSet::Box { lower, upper })
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::boxed(Vector::from_element(dim, lo), Vector::from_element(dim, hi))
    }

    /// Largest distance between two points of the set.
    pub fn diameter(&self) -> f64 {
        match self {
            FeasibleSet::Ball { radius, .. } => 2.0 * radius,
            FeasibleSet::Box { lower, upper } => (upper - lower).norm(),
        }
    }

    pub fn center(&self) -> Vector {
        match self {
            FeasibleSet::Ball { center, .. } => center.clone(),
            FeasibleSet::Box { lower, upper } => (lower + upper) * 0.5,
        }
    }

    /// Smallest axis-aligned box containing the set.
    pub fn bounding_box(&self) -> (Vector, Vector) {
        match self {
            FeasibleSet::Ball { center, radius } => (center.add_scalar(-radius), center.add_scalar(*radius)),
            FeasibleSet::Box { lower, upper } => (lower.clone(), upper.clone()),
        }
    }

    /// For `x` outside the set, a direction `c` with `c^T z > c^T x` for every `z`
    /// in the set. Returns `None` when `x` belongs to the set.
    pub fn separating_direction(&self, x: &Vector) -> Option<Vector> {
        match self {
            FeasibleSet::Ball { center, radius } => {
                let diff = center - x;
                let dist = diff.norm();
                (dist > *radius).then(|| diff / dist)
            }
            FeasibleSet::Box { lower, upper } => {
                // most violated coordinate
                let mut best: Option<(usize, f64, f64)> = None;
                for i in 0..x.len() {
                    let (viol, sign) = if x[i] < lower[i] {
                        (lower[i] - x[i], 1.0)
                    } else if x[i] > upper[i] {
                        (x[i] - upper[i], -1.0)
                    } else {
                        continue;
                    };
                    if best.is_none_or(|(_, v, _)| viol > v) {
                        best = Some((i, viol, sign));
                    }
                }
                best.map(|(i, _, sign)| {
                    let mut c = Vector::zeros(x.len());
                    c[i] = sign;
                    c
                })
            }
        }
    }

    fn scale(&self) -> f64 {
        self.diameter().max(1.0)
    }
}

impl ConvexSet for FeasibleSet {
    fn dim(&self) -> usize {
        match self {
            FeasibleSet::Ball { center, .. } => center.len(),
            FeasibleSet::Box { lower, .. } => lower.len(),
        }
    }

    fn project(&self, point: &Vector) -> Result<Vector> {
        check_dim(self.dim(), point.len())?;
        Ok(match self {
            FeasibleSet::Ball { center, radius } => {
                let diff = point - center;
                let dist = diff.norm();
                if dist <= *radius {
                    point.clone()
                } else {
                    center + diff * (radius / dist)
                }
            }
            FeasibleSet::Box { lower, upper } => {
                Vector::from_iterator(point.len(), (0..point.len()).map(|i| point[i].clamp(lower[i], upper[i])))
            }
        })
    }

    fn contains(&self, point: &Vector, tol: f64) -> bool {
        if point.len() != self.dim() {
            return false;
        }
        let slack = tol * self.scale();
        match self {
            FeasibleSet::Ball { center, radius } => (point - center).norm() <= radius + slack,
            FeasibleSet::Box { lower, upper } => {
                (0..point.len()).all(|i| point[i] >= lower[i] - slack && point[i] <= upper[i] + slack)
            }
        }
    }

    fn min_linear(&self, g: &Vector) -> f64 {
        match self {
            FeasibleSet::Ball { center, radius } => g.dot(center) - radius * g.norm(),
            FeasibleSet::Box { lower, upper } => g
                .iter()
                .zip(lower.iter().zip(upper.iter()))
                .map(|(gi, (l, u))| (gi * l).min(gi * u))
                .sum(),
        }
    }
}

/// Cartesian product of feasible sets; the projection acts blockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSet {
    blocks: Vec<FeasibleSet>,
}

impl ProductSet {
    pub fn new(blocks: Vec<FeasibleSet>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Contract("product set needs at least one block".into()));
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[FeasibleSet] {
        &self.blocks
    }

    pub fn diameter(&self) -> f64 {
        self.blocks.iter().map(|b| b.diameter().powi(2)).sum::<f64>().sqrt()
    }

    fn ranges(&self) -> impl Iterator<Item = (usize, &FeasibleSet)> + '_ {
        self.blocks.iter().scan(0usize, |offset, b| {
            let start = *offset;
            *offset += b.dim();
            Some((start, b))
        })
    }
}

impl ConvexSet for ProductSet {
    fn dim(&self) -> usize {
        self.blocks.iter().map(ConvexSet::dim).sum()
    }

    fn project(&self, point: &Vector) -> Result<Vector> {
        check_dim(self.dim(), point.len())?;
        let mut out = Vector::zeros(point.len());
        for (start, block) in self.ranges() {
            let n = block.dim();
            let part = block.project(&point.rows(start, n).into_owned())?;
            out.rows_mut(start, n).copy_from(&part);
        }
        Ok(out)
    }

    fn contains(&self, point: &Vector, tol: f64) -> bool {
        point.len() == self.dim()
            && self
                .ranges()
                .all(|(start, block)| block.contains(&point.rows(start, block.dim()).into_owned(), tol))
    }

    fn min_linear(&self, g: &Vector) -> f64 {
        self.ranges()
            .map(|(start, block)| block.min_linear(&g.rows(start, block.dim()).into_owned()))
            .sum()
    }
}
