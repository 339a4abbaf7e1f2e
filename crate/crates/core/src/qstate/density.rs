use nalgebra::DMatrix;
use num_complex::Complex64;

use super::operator::index_to_digits;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Reduced density matrix over a subset of register factors.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `⟨ψ|ρ|ψ⟩`, the fidelity with a pure reference state.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        if psi.len() != self.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                found: psi.len(),
            });
        }
        let v = psi.as_dvector();
        Ok(v.dotc(&(&self.matrix * v)).re)
    }
}

/// Traces out every factor of `s` not listed in `keep`. Kept factors appear in
/// ascending index order.
pub fn partial_trace(s: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    s.require_normalized()?;
    let dims = s.dims();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() || kept.len() != keep.len() || kept.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidFactor(format!(
            "cannot keep factors {keep:?} of a {}-factor register",
            dims.len()
        )));
    }
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let env: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let dk: usize = kept_dims.iter().product();
    let de: usize = env.iter().map(|&k| dims[k]).product();

    // Amplitudes reshaped to (kept, environment), then ρ = M M†.
    let mut m = DMatrix::<Complex64>::zeros(dk, de);
    for (i, &z) in s.amplitudes().iter().enumerate() {
        let digits = index_to_digits(dims, i);
        let row = kept.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]);
        let col = env.iter().fold(0, |acc, &k| acc * dims[k] + digits[k]);
        m[(row, col)] = z;
    }
    Ok(DensityMatrix {
        matrix: &m * m.adjoint(),
        dims: kept_dims,
    })
}
