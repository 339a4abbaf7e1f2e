use nalgebra::DMatrix;
use num_complex::Complex64;

use super::operator::Operator;
use super::state::StateVector;
use crate::error::{Error, Result};

/// `|det A|` at or below this counts as singular.
pub const SINGULAR_DET_TOL: f64 = 1e-9;

/// An anti-linear map `K(v) = A · conj(v)`, with conjugation taken in the
/// computational basis before the linear part `A` is applied.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiLinearMap {
    linear_part: Operator,
}

impl AntiLinearMap {
    pub fn new(linear_part: Operator) -> Self {
        Self { linear_part }
    }

    /// Pure complex conjugation on a `dim`-dimensional space.
    pub fn conjugation(dim: usize) -> Self {
        Self::new(Operator::identity(dim))
    }

    /// The qubit map `a|0⟩ + b|1⟩ ↦ ā|1⟩ - b̄|0⟩`, which sends every state to an
    /// orthogonal one. Linear part `[[0, -1], [1, 0]]`.
    pub fn orthogonalizer() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Self::new(
            Operator::new(DMatrix::from_row_slice(2, 2, &[o, -l, l, o]))
                .expect("2x2 is square"),
        )
    }

    pub fn linear_part(&self) -> &Operator {
        &self.linear_part
    }

    pub fn dim(&self) -> usize {
        self.linear_part.dim()
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        self.linear_part.apply(&s.conj())
    }

    pub fn det_abs(&self) -> f64 {
        self.linear_part.determinant().norm()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.det_abs() > SINGULAR_DET_TOL
    }

    pub fn require_nonsingular(&self) -> Result<()> {
        let det_abs = self.det_abs();
        if det_abs > SINGULAR_DET_TOL {
            Ok(())
        } else {
            Err(Error::SingularMap { det_abs })
        }
    }

    pub fn is_antiunitary(&self) -> bool {
        self.linear_part.is_unitary()
    }
}

/// The map `K` a comparison machine tests against: decide whether `ψ = Kφ`.
#[derive(Clone, Debug, PartialEq)]
pub enum ComparisonMap {
    Linear(Operator),
    AntiLinear(AntiLinearMap),
}

impl ComparisonMap {
    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        match self {
            ComparisonMap::Linear(op) => op.apply(s),
            ComparisonMap::AntiLinear(k) => k.apply(s),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ComparisonMap::Linear(op) => op.dim(),
            ComparisonMap::AntiLinear(k) => k.dim(),
        }
    }

    pub fn is_antilinear(&self) -> bool {
        matches!(self, ComparisonMap::AntiLinear(_))
    }

    pub fn matrix(&self) -> &Operator {
        match self {
            ComparisonMap::Linear(op) => op,
            ComparisonMap::AntiLinear(k) => k.linear_part(),
        }
    }

    pub fn require_nonsingular(&self) -> Result<()> {
        let det_abs = self.matrix().determinant().norm();
        if det_abs > SINGULAR_DET_TOL {
            Ok(())
        } else {
            Err(Error::SingularMap { det_abs })
        }
    }

    /// `K` acting on `c · v`, expressed through `K v`: `c·Kv` or `c̄·Kv`.
    pub fn scalar_through(&self, c: Complex64) -> Complex64 {
        if self.is_antilinear() {
            c.conj()
        } else {
            c
        }
    }
}

impl From<AntiLinearMap> for ComparisonMap {
    fn from(k: AntiLinearMap) -> Self {
        ComparisonMap::AntiLinear(k)
    }
}

impl From<Operator> for ComparisonMap {
    fn from(op: Operator) -> Self {
        ComparisonMap::Linear(op)
    }
}
