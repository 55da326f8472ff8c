//! Test problems with known solutions and the logistic-regression experiment.

pub mod libsvm;
pub mod logreg;
pub mod quadratic;

pub use libsvm::{load_libsvm, parse_libsvm, write_libsvm};
pub use logreg::{default_radius, logistic_loss, make_logreg_minmin, synthetic_dataset, Dataset, LogRegMinMin};
pub use quadratic::{
    make_conditioned_quadratic_minmin, make_finite_sum_quadratic_minmin, make_quadratic_minmin, random_coupling,
    FiniteSumQuadraticMinMin, LeastSquaresSum, Quadratic, QuadraticMinMin, QuadraticSolution,
};
