//! Solvers for convex min-min problems
//!
//! ```text
//! min_{x in Q_x} min_{y in Q_y} F(x, y)
//! ```
//!
//! where `F` is jointly convex, `L`-smooth and `mu`-strongly convex in the
//! high-dimensional block `y`, and only convex in the low-dimensional block `x`.
//! The outer problem `f(x) = min_y F(x, y)` is minimized by Vaidya's
//! cutting-plane method; each cut comes from an inexact inner solve, either
//! the restarted fast gradient method or the variance-reduced Varag method
//! for finite sums. Every solver charges its oracle work to an
//! [`OracleLedger`] so iteration complexities can be measured directly.

pub mod error;
pub mod fgm;
pub mod history;
pub mod minmin;
pub mod oracle;
pub mod problems;
pub mod rng;
pub mod sets;
pub mod vaidya;
pub mod varag;

pub type Vector = nalgebra::DVector<f64>;
pub type Matrix = nalgebra::DMatrix<f64>;

pub use error::{Error, Result};
pub use history::{HistoryRecord, RunHistory};
pub use oracle::{FiniteSumOracle, FullGradient, OracleLedger, SmoothOracle};
pub use sets::{ConvexSet, FeasibleSet, ProductSet};
