//! First-order oracle interfaces and the call ledger.

use crate::Vector;

/// Monotone counters of oracle work.
///
/// `grad_y_calls` counts component gradients for finite sums and full
/// gradients otherwise; `matrix_inversions` counts `d x d` factorizations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleLedger {
    grad_x_calls: u64,
    grad_y_calls: u64,
    matrix_inversions: u64,
}

impl OracleLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn grad_x_calls(&self) -> u64 {
        self.grad_x_calls
    }

    pub fn grad_y_calls(&self) -> u64 {
        self.grad_y_calls
    }

    pub fn matrix_inversions(&self) -> u64 {
        self.matrix_inversions
    }

    pub fn add_grad_x(&mut self, n: u64) {
        self.grad_x_calls += n;
    }

    pub fn add_grad_y(&mut self, n: u64) {
        self.grad_y_calls += n;
    }

    pub fn add_inversions(&mut self, n: u64) {
        self.matrix_inversions += n;
    }

    /// True when no counter of `self` is below the matching counter of `earlier`.
    pub fn dominates(&self, earlier: &OracleLedger) -> bool {
        self.grad_x_calls >= earlier.grad_x_calls
            && self.grad_y_calls >= earlier.grad_y_calls
            && self.matrix_inversions >= earlier.matrix_inversions
    }
}

/// A smooth convex function `f: R^n -> R` with gradient access.
pub trait SmoothOracle {
    fn dim(&self) -> usize;

    fn value(&self, y: &Vector) -> f64;

    fn gradient(&self, y: &Vector) -> Vector;

    /// Charge one `gradient` call to the ledger.
    fn record_gradient(&self, ledger: &mut OracleLedger) {
        ledger.add_grad_y(1);
    }
}

/// `f(y) = (1/m) sum_i f_i(y)` with per-component smoothness constants.
pub trait FiniteSumOracle {
    fn dim(&self) -> usize;

    fn num_components(&self) -> usize;

    fn component_value(&self, i: usize, y: &Vector) -> f64;

    fn component_gradient(&self, i: usize, y: &Vector) -> Vector;

    /// Smoothness constant `L_i` of component `i`.
    fn component_lipschitz(&self, i: usize) -> f64;

    /// Strong convexity modulus of the average (may be zero).
    fn strong_convexity(&self) -> f64;

    fn value(&self, y: &Vector) -> f64 {
        let m = self.num_components();
        (0..m).map(|i| self.component_value(i, y)).sum::<f64>() / m as f64
    }

    /// `L = (1/m) sum_i L_i`.
    fn lipschitz(&self) -> f64 {
        let m = self.num_components();
        (0..m).map(|i| self.component_lipschitz(i)).sum::<f64>() / m as f64
    }

    /// Charge `n` component-gradient calls to the ledger.
    fn record_component_gradients(&self, ledger: &mut OracleLedger, n: u64) {
        ledger.add_grad_y(n);
    }
}

/// Views a finite sum as a smooth oracle whose gradient costs `m` component calls.
#[derive(Debug, Clone, Copy)]
pub struct FullGradient<'a, O: ?Sized>(pub &'a O);

impl<O: FiniteSumOracle + ?Sized> SmoothOracle for FullGradient<'_, O> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn value(&self, y: &Vector) -> f64 {
        self.0.value(y)
    }

    fn gradient(&self, y: &Vector) -> Vector {
        full_gradient(self.0, y)
    }

    fn record_gradient(&self, ledger: &mut OracleLedger) {
        self.0.record_component_gradients(ledger, self.0.num_components() as u64);
    }
}

/// Average of all component gradients, accumulated in index order.
pub fn full_gradient<O: FiniteSumOracle + ?Sized>(oracle: &O, y: &Vector) -> Vector {
    let m = oracle.num_components();
    let mut acc = Vector::zeros(oracle.dim());
    for i in 0..m {
        acc += oracle.component_gradient(i, y);
    }
    acc / m as f64
}
