//! The cloning game with a physical payoff: the cloner gets +1 when a clone
//! passes a SWAP test against a fresh copy of the original and -1 otherwise.
//! The expected payoff is `2·p_pass - 1`, which equals the clone fidelity.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::literal::{operator_from_rows, operator_to_rows, ComplexPair};
use crate::qstate::ortho::{complete_with_standard_basis, extend_orthonormal};
use crate::qstate::{haar_unitary_with, partial_trace, Operator, StateVector};
use crate::seeds::{derive_seed, rng_from_seed};

/// Allowed disagreement between the circuit pass probability and `(1+F)/2`.
pub const PAYOFF_CROSSCHECK_TOL: f64 = 1e-10;

const SAMPLE_CHUNK: usize = 1 << 16;

/// A unitary on `input ⊗ blanks ⊗ machine ancilla`. Factor 0 holds the state
/// to copy; every other factor starts in `|0⟩`.
#[derive(Clone, Debug)]
pub struct Cloner {
    unitary: Operator,
    factor_dims: Vec<usize>,
    clone_factors: [usize; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GameResult {
    pub p_pass: f64,
    pub expected_payoff: f64,
    pub fidelity: f64,
}

/// JSON form of a [`Cloner`], sharing the machine matrix conventions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClonerSpec {
    pub factor_dims: Vec<usize>,
    pub clone_factor_indices: [usize; 2],
    pub unitary: Vec<Vec<ComplexPair>>,
}

impl Cloner {
    pub fn new(unitary: Operator, factor_dims: Vec<usize>, clone_factors: [usize; 2]) -> Result<Self> {
        let total: usize = factor_dims.iter().product();
        if factor_dims.is_empty() || unitary.dim() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: unitary.dim(),
            });
        }
        unitary.require_unitary()?;
        let [c1, c2] = clone_factors;
        if c1 == c2 || c1 >= factor_dims.len() || c2 >= factor_dims.len() {
            return Err(Error::InvalidFactor(format!(
                "clone factors {clone_factors:?} for {} factors",
                factor_dims.len()
            )));
        }
        if factor_dims[c1] != factor_dims[0] || factor_dims[c2] != factor_dims[0] {
            return Err(Error::InvalidFactor(
                "clone factors must match the input dimension".into(),
            ));
        }
        Ok(Self {
            unitary,
            factor_dims,
            clone_factors,
        })
    }

    /// Leaves the input alone: clone 1 is the original, clone 2 stays `|0⟩`.
    pub fn trivial(dim: usize) -> Self {
        Self::new(Operator::identity(dim * dim), vec![dim, dim], [0, 1]).expect("valid layout")
    }

    /// The symmetric universal 1→2 qubit cloner on `input ⊗ blank ⊗ ancilla`:
    ///
    /// `|0⟩|00⟩ ↦ √(2/3)|00⟩|0⟩ + √(1/6)(|01⟩+|10⟩)|1⟩`
    /// `|1⟩|00⟩ ↦ √(2/3)|11⟩|1⟩ + √(1/6)(|01⟩+|10⟩)|0⟩`
    ///
    /// extended to a unitary by orthonormal completion.
    pub fn universal() -> Self {
        let a = (2.0f64 / 3.0).sqrt();
        let b = (1.0f64 / 6.0).sqrt();
        let vec8 = |entries: &[(usize, f64)]| {
            let mut v = DVector::<Complex64>::zeros(8);
            for &(i, x) in entries {
                v[i] = Complex64::new(x, 0.0);
            }
            v
        };
        // Basis index = 4·input + 2·blank + ancilla.
        let image0 = vec8(&[(0b000, a), (0b011, b), (0b101, b)]);
        let image1 = vec8(&[(0b111, a), (0b010, b), (0b100, b)]);
        let mut inputs = vec![vec8(&[(0b000, 1.0)]), vec8(&[(0b100, 1.0)])];
        complete_with_standard_basis(&mut inputs, 8);
        let mut outputs = Vec::new();
        extend_orthonormal(&mut outputs, &image0, 1e-12);
        extend_orthonormal(&mut outputs, &image1, 1e-12);
        complete_with_standard_basis(&mut outputs, 8);
        let mut u = DMatrix::<Complex64>::zeros(8, 8);
        for (o, i) in outputs.iter().zip(&inputs) {
            u += o * i.adjoint();
        }
        Self::new(Operator::new(u).expect("square"), vec![2, 2, 2], [0, 1])
            .expect("valid universal cloner")
    }

    /// Haar-random three-qubit cloner with a random pair of clone factors.
    pub fn random(seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let u = haar_unitary_with(8, &mut rng);
        let picked = sample(&mut rng, 3, 2);
        Self::new(u, vec![2, 2, 2], [picked.index(0), picked.index(1)]).expect("valid layout")
    }

    pub fn unitary(&self) -> &Operator {
        &self.unitary
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn clone_factors(&self) -> [usize; 2] {
        self.clone_factors
    }

    pub fn input_dim(&self) -> usize {
        self.factor_dims[0]
    }

    /// Joint output state for input `psi`.
    pub fn output(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                found: psi.len(),
            });
        }
        psi.require_normalized()?;
        let blanks = StateVector::zero_state(&self.factor_dims[1..]);
        let input = psi.tensor(&blanks).with_dims(self.factor_dims.clone())?;
        self.unitary.apply(&input)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ClonerSpec::from(self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ClonerSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.try_into()
    }
}

impl From<&Cloner> for ClonerSpec {
    fn from(c: &Cloner) -> Self {
        Self {
            factor_dims: c.factor_dims.clone(),
            clone_factor_indices: c.clone_factors,
            unitary: operator_to_rows(&c.unitary),
        }
    }
}

impl TryFrom<ClonerSpec> for Cloner {
    type Error = Error;
    fn try_from(spec: ClonerSpec) -> Result<Self> {
        Cloner::new(
            operator_from_rows(&spec.unitary)?,
            spec.factor_dims,
            spec.clone_factor_indices,
        )
    }
}

/// Plays one round analytically: clones `psi`, SWAP-tests clone `clone_index`
/// (1 or 2) against a fresh copy of `psi`, and reads the pass probability off
/// the answer qubit. The fidelity `⟨ψ|ρ_clone|ψ⟩` is computed separately from
/// the reduced state and must agree with `2·p_pass - 1`.
pub fn run_game(cloner: &Cloner, psi: &StateVector, clone_index: usize) -> Result<GameResult> {
    let clone_factor = match clone_index {
        1 => cloner.clone_factors[0],
        2 => cloner.clone_factors[1],
        other => {
            return Err(Error::InvalidArgument(format!(
                "clone index must be 1 or 2, got {other}"
            )))
        }
    };
    let out = cloner.output(psi)?;

    let n = cloner.factor_dims.len();
    let (reference, answer) = (n, n + 1);
    let full = out.tensor(psi).tensor(&StateVector::basis(2, 0));
    let dims = full.dims().to_vec();
    let h = Operator::embed(&dims, answer, &Operator::hadamard())?;
    let cswap = Operator::controlled_swap(&dims, answer, clone_factor, reference)?;
    let tested = h.apply(&cswap.apply(&h.apply(&full)?)?)?;
    let p_pass = tested.measure_qubit(answer)?.p0;

    let fidelity = partial_trace(&out, &[clone_factor])?.expectation(psi)?;
    if (p_pass - (1.0 + fidelity) / 2.0).abs() > PAYOFF_CROSSCHECK_TOL {
        return Err(Error::CrossCheck(format!(
            "pass probability {p_pass} disagrees with fidelity {fidelity}"
        )));
    }
    Ok(GameResult {
        p_pass,
        expected_payoff: 2.0 * p_pass - 1.0,
        fidelity,
    })
}

/// Monte-Carlo payoff: `n_rounds` independent pass/fail draws at the analytic
/// pass probability, averaged as ±1 payoffs.
pub fn sample_game(
    cloner: &Cloner,
    psi: &StateVector,
    clone_index: usize,
    n_rounds: usize,
    seed: u64,
) -> Result<f64> {
    if n_rounds == 0 {
        return Err(Error::InvalidArgument("n_rounds must be at least 1".into()));
    }
    let p_pass = run_game(cloner, psi, clone_index)?.p_pass;
    let chunks = n_rounds.div_ceil(SAMPLE_CHUNK);
    let passes: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng_from_seed(derive_seed(seed, c as u64));
            let len = SAMPLE_CHUNK.min(n_rounds - c * SAMPLE_CHUNK);
            (0..len).filter(|_| rng.random::<f64>() < p_pass).count() as u64
        })
        .sum();
    let n = n_rounds as f64;
    Ok((2.0 * passes as f64 - n) / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::haar_state;

    #[test]
    fn trivial_cloner_first_clone_is_perfect() {
        let c = Cloner::trivial(2);
        let r = run_game(&c, &haar_state(2, 4), 1).unwrap();
        assert!((r.p_pass - 1.0).abs() < 1e-12);
        assert!((r.expected_payoff - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trivial_cloner_second_clone_on_plus() {
        let c = Cloner::trivial(2);
        let r = run_game(&c, &StateVector::plus(), 2).unwrap();
        assert!((r.fidelity - 0.5).abs() < 1e-12);
        assert!((r.expected_payoff - 0.5).abs() < 1e-12);
    }

    #[test]
    fn universal_cloner_payoff() {
        let c = Cloner::universal();
        for seed in 0..10 {
            let psi = haar_state(2, seed);
            for idx in [1, 2] {
                let r = run_game(&c, &psi, idx).unwrap();
                assert!((r.expected_payoff - 5.0 / 6.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sampled_payoffs() {
        let c = Cloner::trivial(2);
        assert_eq!(sample_game(&c, &haar_state(2, 1), 1, 1000, 3).unwrap(), 1.0);
        let m = sample_game(&c, &StateVector::plus(), 2, 100_000, 3).unwrap();
        assert!((m - 0.5).abs() < 0.02);
        assert_eq!(
            sample_game(&c, &StateVector::plus(), 2, 5000, 8).unwrap(),
            sample_game(&c, &StateVector::plus(), 2, 5000, 8).unwrap()
        );
    }

    #[test]
    fn validation() {
        let c = Cloner::universal();
        assert!(run_game(&c, &haar_state(2, 0), 3).is_err());
        assert!(run_game(&c, &haar_state(3, 0), 1).is_err());
        assert!(Cloner::new(Operator::identity(8), vec![2, 2, 2], [1, 1]).is_err());
        assert!(Cloner::new(Operator::identity(6), vec![2, 3], [0, 1]).is_err());
        let back = Cloner::from_json(&c.to_json()).unwrap();
        assert_eq!(back.unitary().max_abs_diff(c.unitary()).unwrap(), 0.0);
    }
}
