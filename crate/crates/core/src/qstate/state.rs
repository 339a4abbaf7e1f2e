use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on the Euclidean norm for a vector to count as a physical state.
pub const NORM_TOL: f64 = 1e-12;

/// Below this probability a measurement branch is reported as absent.
pub const BRANCH_EPS: f64 = 1e-14;

/// Complex amplitudes over a tensor-factored register.
///
/// Unnormalized vectors are allowed: the impossibility argument manipulates
/// unnormalized superpositions, and those have to be representable. Anything
/// that produces a probability calls [`StateVector::require_normalized`] first.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
    dims: Vec<usize>,
}

/// Outcome of a projective measurement of one qubit factor.
#[derive(Clone, Debug)]
pub struct QubitMeasurement {
    pub p0: f64,
    pub p1: f64,
    pub collapsed0: Option<StateVector>,
    pub collapsed1: Option<StateVector>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidFactor(format!("bad factor dimensions {dims:?}")));
        }
        let expected: usize = dims.iter().product();
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            amplitudes: DVector::from_vec(amplitudes),
            dims,
        })
    }

    /// A single-factor vector.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = amplitudes.len();
        Self::new(amplitudes, vec![n])
    }

    pub(crate) fn from_dvector(amplitudes: DVector<Complex64>, dims: Vec<usize>) -> Self {
        debug_assert_eq!(amplitudes.len(), dims.iter().product::<usize>());
        Self { amplitudes, dims }
    }

    /// Computational basis state `|index⟩` of a single factor of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut amps = DVector::zeros(dim);
        amps[index] = Complex64::new(1.0, 0.0);
        Self::from_dvector(amps, vec![dim])
    }

    /// `|0…0⟩` over the given factors.
    pub fn zero_state(dims: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        let mut amps = DVector::zeros(n);
        amps[0] = Complex64::new(1.0, 0.0);
        Self::from_dvector(amps, dims.to_vec())
    }

    /// `(|0⟩ + |1⟩)/√2`
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_dvector(
            DVector::from_vec(vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)]),
            vec![2],
        )
    }

    /// `(|0⟩ - |1⟩)/√2`
    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_dvector(
            DVector::from_vec(vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)]),
            vec![2],
        )
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    pub(crate) fn as_dvector(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm: self.norm() })
        }
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= f64::MIN_POSITIVE {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    /// Same amplitudes reinterpreted over different factors of equal total size.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        Self::new(self.amplitudes.as_slice().to_vec(), dims)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_dvector(&self.amplitudes * c, self.dims.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self::from_dvector(
            &self.amplitudes + &other.amplitudes,
            self.dims.clone(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self::from_dvector(
            &self.amplitudes - &other.amplitudes,
            self.dims.clone(),
        ))
    }

    /// Entrywise complex conjugation in the computational basis.
    pub fn conj(&self) -> Self {
        Self::from_dvector(self.amplitudes.map(|z| z.conj()), self.dims.clone())
    }

    /// Kronecker product; the factor lists are concatenated.
    pub fn tensor(&self, other: &Self) -> Self {
        let a = self.amplitudes.as_slice();
        let b = other.amplitudes.as_slice();
        let mut out = Vec::with_capacity(a.len() * b.len());
        for &x in a {
            out.extend(b.iter().map(|&y| x * y));
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_dvector(DVector::from_vec(out), dims)
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_len(other)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Euclidean distance `‖self - other‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_len(other)?;
        Ok((&self.amplitudes - &other.amplitudes).norm())
    }

    /// Stride of a factor in the row-major amplitude layout.
    pub(crate) fn factor_stride(dims: &[usize], factor: usize) -> usize {
        dims[factor + 1..].iter().product()
    }

    /// Linear projection of one qubit factor onto `|outcome⟩` (no renormalization).
    pub fn project_qubit(&self, qubit: usize, outcome: usize) -> Result<Self> {
        self.check_qubit(qubit)?;
        if outcome > 1 {
            return Err(Error::InvalidArgument(format!("qubit outcome {outcome}")));
        }
        let stride = Self::factor_stride(&self.dims, qubit);
        let amps = DVector::from_iterator(
            self.len(),
            self.amplitudes.iter().enumerate().map(|(i, &z)| {
                if (i / stride) % 2 == outcome {
                    z
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        );
        Ok(Self::from_dvector(amps, self.dims.clone()))
    }

    /// Projective measurement of a qubit factor in the computational basis.
    pub fn measure_qubit(&self, qubit: usize) -> Result<QubitMeasurement> {
        self.check_qubit(qubit)?;
        self.require_normalized()?;
        let stride = Self::factor_stride(&self.dims, qubit);
        let mut p = [0.0f64; 2];
        for (i, z) in self.amplitudes.iter().enumerate() {
            p[(i / stride) % 2] += z.norm_sqr();
        }
        let collapse = |outcome: usize, prob: f64| -> Result<Option<StateVector>> {
            if prob > BRANCH_EPS {
                Ok(Some(self.project_qubit(qubit, outcome)?.normalized()?))
            } else {
                Ok(None)
            }
        };
        Ok(QubitMeasurement {
            p0: p[0],
            p1: p[1],
            collapsed0: collapse(0, p[0])?,
            collapsed1: collapse(1, p[1])?,
        })
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        match self.dims.get(qubit) {
            None => Err(Error::InvalidFactor(format!(
                "factor index {qubit} out of range for {} factors",
                self.dims.len()
            ))),
            Some(&2) => Ok(()),
            Some(&d) => Err(Error::InvalidFactor(format!(
                "factor {qubit} has dimension {d}, not a qubit"
            ))),
        }
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }
}
