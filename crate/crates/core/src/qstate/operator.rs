use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::StateVector;
use crate::error::{Error, Result};

/// Tolerance for `‖U†U - I‖_max` on anything treated as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// A dense square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    matrix: DMatrix<Complex64>,
}

impl Operator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "operator must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { matrix })
    }

    /// Builds from row-major rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix rows are ragged or non-square".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Self {
            matrix: DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        }
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            matrix: DMatrix::from_row_slice(2, 2, &[h, h, h, -h]),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self · other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    /// Matrix–vector product. The factor structure of `s` is kept.
    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        self.check_dim(s.len())?;
        Ok(StateVector::from_dvector(
            &self.matrix * s.as_dvector(),
            s.dims().to_vec(),
        ))
    }

    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let g = self.matrix.adjoint() * &self.matrix - DMatrix::<Complex64>::identity(n, n);
        g.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() <= UNITARY_TOL
    }

    pub fn require_unitary(&self) -> Result<()> {
        let defect = self.unitarity_defect();
        if defect <= UNITARY_TOL {
            Ok(())
        } else {
            Err(Error::NotUnitary { defect })
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.matrix.determinant()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other.dim())?;
        Ok((&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    /// Lifts `local` acting on factor `factor` of a register with `dims` to the
    /// whole register.
    pub fn embed(dims: &[usize], factor: usize, local: &Operator) -> Result<Self> {
        let d = *dims
            .get(factor)
            .ok_or_else(|| Error::InvalidFactor(format!("factor {factor} out of range")))?;
        local.check_dim(d)?;
        let left: usize = dims[..factor].iter().product();
        let right: usize = dims[factor + 1..].iter().product();
        Ok(Operator::identity(left)
            .kron(local)
            .kron(&Operator::identity(right)))
    }

    /// Permutation operator sending basis `|digits⟩` to `|map(digits)⟩`.
    pub fn basis_permutation<F>(dims: &[usize], map: F) -> Self
    where
        F: Fn(&[usize]) -> Vec<usize>,
    {
        let n: usize = dims.iter().product();
        let mut m = DMatrix::zeros(n, n);
        for col in 0..n {
            let digits = index_to_digits(dims, col);
            let row = digits_to_index(dims, &map(&digits));
            m[(row, col)] = Complex64::new(1.0, 0.0);
        }
        Self { matrix: m }
    }

    /// Swap of factors `a` and `b` (equal dimension) conditioned on qubit
    /// factor `control` being `|1⟩`.
    pub fn controlled_swap(dims: &[usize], control: usize, a: usize, b: usize) -> Result<Self> {
        let n = dims.len();
        if control >= n || a >= n || b >= n || a == b || control == a || control == b {
            return Err(Error::InvalidFactor(format!(
                "controlled swap on factors ({control}; {a}, {b}) of {n}"
            )));
        }
        if dims[control] != 2 {
            return Err(Error::InvalidFactor(format!("control factor {control} is not a qubit")));
        }
        if dims[a] != dims[b] {
            return Err(Error::InvalidFactor(format!(
                "cannot swap factors of dimension {} and {}",
                dims[a], dims[b]
            )));
        }
        Ok(Self::basis_permutation(dims, |d| {
            let mut out = d.to_vec();
            if d[control] == 1 {
                out.swap(a, b);
            }
            out
        }))
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if self.dim() != found {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }
}

pub(crate) fn index_to_digits(dims: &[usize], mut index: usize) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for (k, &d) in dims.iter().enumerate().rev() {
        digits[k] = index % d;
        index /= d;
    }
    digits
}

pub(crate) fn digits_to_index(dims: &[usize], digits: &[usize]) -> usize {
    dims.iter().zip(digits).fold(0, |acc, (&d, &x)| acc * d + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_examples() {
        let zero = StateVector::basis(2, 0);
        let id = Operator::identity(2);
        assert_eq!(id.apply(&zero).unwrap(), zero);
        let one = Operator::pauli_x().apply(&zero).unwrap();
        assert_eq!(one, StateVector::basis(2, 1));
        let plus = Operator::hadamard().apply(&zero).unwrap();
        assert!(plus.distance(&StateVector::plus()).unwrap() < 1e-15);
        assert!(matches!(
            Operator::identity(3).apply(&zero),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gates_are_unitary() {
        assert!(Operator::hadamard().is_unitary());
        let cs = Operator::controlled_swap(&[2, 3, 3], 0, 1, 2).unwrap();
        assert!(cs.is_unitary());
        let bad = Operator::new(DMatrix::from_element(2, 2, Complex64::new(1.0, 0.0))).unwrap();
        assert!(matches!(bad.require_unitary(), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn controlled_swap_action() {
        let dims = [2, 2, 2];
        let cs = Operator::controlled_swap(&dims, 2, 0, 1).unwrap();
        // |0,1,1⟩ -> |1,0,1⟩ ; |0,1,0⟩ unchanged
        let s = StateVector::basis(2, 0)
            .tensor(&StateVector::basis(2, 1))
            .tensor(&StateVector::basis(2, 1));
        let t = StateVector::basis(2, 1)
            .tensor(&StateVector::basis(2, 0))
            .tensor(&StateVector::basis(2, 1));
        assert_eq!(cs.apply(&s).unwrap(), t);
        let u = StateVector::basis(2, 0)
            .tensor(&StateVector::basis(2, 1))
            .tensor(&StateVector::basis(2, 0));
        assert_eq!(cs.apply(&u).unwrap(), u);
        assert!(Operator::controlled_swap(&[3, 2, 2], 0, 1, 2).is_err());
    }

    #[test]
    fn embed_matches_kron() {
        let h = Operator::hadamard();
        let e = Operator::embed(&[2, 2], 1, &h).unwrap();
        let k = Operator::identity(2).kron(&h);
        assert_eq!(e.max_abs_diff(&k).unwrap(), 0.0);
    }

    #[test]
    fn digit_roundtrip() {
        let dims = [2, 3, 2];
        for i in 0..12 {
            assert_eq!(digits_to_index(&dims, &index_to_digits(&dims, i)), i);
        }
    }
}
