//! Dense complex linear algebra and state-vector primitives.

mod antilinear;
mod density;
mod haar;
pub mod literal;
mod operator;
pub(crate) mod ortho;
mod state;

pub use antilinear::{AntiLinearMap, ComparisonMap, SINGULAR_DET_TOL};
pub use density::{partial_trace, DensityMatrix};
pub use haar::{gaussian_state_with, haar_state, haar_state_with, haar_unitary, haar_unitary_with};
pub use operator::{Operator, UNITARY_TOL};
pub(crate) use operator::index_to_digits;
pub use state::{QubitMeasurement, StateVector, BRANCH_EPS, NORM_TOL};

/// Kronecker product of two states (free-function form of [`StateVector::tensor`]).
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    a.tensor(b)
}

/// `⟨a|b⟩`
pub fn inner(a: &StateVector, b: &StateVector) -> crate::Result<num_complex::Complex64> {
    a.inner(b)
}

pub fn apply(op: &Operator, s: &StateVector) -> crate::Result<StateVector> {
    op.apply(s)
}

pub fn apply_antilinear(k: &AntiLinearMap, s: &StateVector) -> crate::Result<StateVector> {
    k.apply(s)
}

pub fn measure_qubit(s: &StateVector, qubit: usize) -> crate::Result<QubitMeasurement> {
    s.measure_qubit(qubit)
}
