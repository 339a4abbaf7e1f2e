//! The `[re, im]` pair literal format for states and matrices.
//!
//! A state is a JSON list of pairs in row-major computational-basis order, for
//! example `[[0.7071,0],[0,0.7071]]`. A matrix is a list of such rows.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::operator::Operator;
use super::state::StateVector;
use crate::error::{Error, Result};

pub type ComplexPair = [f64; 2];

pub fn pair(z: Complex64) -> ComplexPair {
    [z.re, z.im]
}

pub fn from_pair(p: ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn state_to_pairs(s: &StateVector) -> Vec<ComplexPair> {
    s.amplitudes().iter().copied().map(pair).collect()
}

pub fn operator_to_rows(op: &Operator) -> Vec<Vec<ComplexPair>> {
    let m = op.matrix();
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect())
        .collect()
}

pub fn operator_from_rows(rows: &[Vec<ComplexPair>]) -> Result<Operator> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("matrix literal must be square and non-empty".into()));
    }
    Operator::new(DMatrix::from_fn(n, n, |i, j| from_pair(rows[i][j])))
}

/// Parses a single-factor state literal; normalization is not checked.
pub fn parse_state(text: &str) -> Result<StateVector> {
    let pairs: Vec<ComplexPair> =
        serde_json::from_str(text.trim()).map_err(|e| Error::Parse(e.to_string()))?;
    if pairs.is_empty() {
        return Err(Error::Parse("empty state literal".into()));
    }
    if pairs.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Parse("non-finite amplitude".into()));
    }
    StateVector::from_amplitudes(pairs.into_iter().map(from_pair).collect())
}

pub fn parse_matrix(text: &str) -> Result<Operator> {
    let rows: Vec<Vec<ComplexPair>> =
        serde_json::from_str(text.trim()).map_err(|e| Error::Parse(e.to_string()))?;
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Parse("non-finite matrix entry".into()));
    }
    operator_from_rows(&rows)
}
