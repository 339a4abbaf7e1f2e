use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::DecisionMachine;
use crate::error::{Error, Result};
use crate::qstate::{haar_state_with, ComparisonMap, StateVector};
use crate::seeds::{derive_seed, rng_from_seed};

/// Default tolerance on the "certain" side of a one-sided machine.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// Two states are the same ray when `|⟨a|b⟩| ≥ 1 - RAY_MATCH_TOL`.
pub const RAY_MATCH_TOL: f64 = 1e-10;

/// Mismatched samples with overlap above this are redrawn.
pub const NEAR_MATCH_REJECT: f64 = 0.999;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OneSidedness {
    /// Matched pairs always get YES; errors only on the NO side.
    YesCertainOnMatch,
    /// Mismatched pairs always get NO; errors only on the YES side.
    NoCertainOnMismatch,
    Both,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub max_matched_p_no: f64,
    pub max_matched_p_yes: f64,
    pub max_mismatched_p_yes: f64,
    pub max_mismatched_p_no: f64,
    pub class: OneSidedness,
}

/// `(φ, normalize(Kφ))` with Haar-random `φ`.
pub fn matched_pair<R: Rng + ?Sized>(
    k: &ComparisonMap,
    rng: &mut R,
) -> Result<(StateVector, StateVector)> {
    let phi = haar_state_with(k.dim(), rng);
    let psi = k.apply(&phi)?.normalized()?;
    Ok((phi, psi))
}

/// `(φ, ψ)` with independent Haar-random states, redrawing `ψ` while it is
/// within [`NEAR_MATCH_REJECT`] overlap of `normalize(Kφ)`.
pub fn mismatched_pair<R: Rng + ?Sized>(
    k: &ComparisonMap,
    rng: &mut R,
) -> Result<(StateVector, StateVector)> {
    let phi = haar_state_with(k.dim(), rng);
    let image = k.apply(&phi)?.normalized()?;
    loop {
        let psi = haar_state_with(k.dim(), rng);
        if image.inner(&psi)?.norm() <= NEAR_MATCH_REJECT {
            return Ok((phi, psi));
        }
    }
}

/// Samples matched and mismatched pairs and reports which answer, if any, the
/// machine gives with certainty (up to `tol`).
pub fn classify_one_sidedness(
    machine: &DecisionMachine,
    k: &ComparisonMap,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Classification> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
    }
    if k.dim() != machine.probe_dim() || k.dim() != machine.target_dim() {
        return Err(Error::DimensionMismatch {
            expected: machine.probe_dim(),
            found: k.dim(),
        });
    }
    let per_sample: Vec<[f64; 4]> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(seed, i));
            let (phi, psi) = matched_pair(k, &mut rng)?;
            let matched = machine.evaluate(&phi, &psi)?;
            let (phi, psi) = mismatched_pair(k, &mut rng)?;
            let mismatched = machine.evaluate(&phi, &psi)?;
            Ok([matched.p_no, matched.p_yes, mismatched.p_yes, mismatched.p_no])
        })
        .collect::<Result<_>>()?;
    let max = |j: usize| per_sample.iter().map(|s| s[j]).fold(0.0, f64::max);
    let (mn, my, xy, xn) = (max(0), max(1), max(2), max(3));
    let class = match (mn <= tol, xy <= tol) {
        (true, true) => OneSidedness::Both,
        (true, false) => OneSidedness::YesCertainOnMatch,
        (false, true) => OneSidedness::NoCertainOnMismatch,
        (false, false) => OneSidedness::Neither,
    };
    Ok(Classification {
        max_matched_p_no: mn,
        max_matched_p_yes: my,
        max_mismatched_p_yes: xy,
        max_mismatched_p_no: xn,
        class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::Answer;
    use crate::qstate::{AntiLinearMap, Operator};

    #[test]
    fn swap_test_is_yes_certain_for_identity() {
        let m = DecisionMachine::swap_test(2);
        let k = ComparisonMap::Linear(Operator::identity(2));
        let c = classify_one_sidedness(&m, &k, 200, 1, DEFAULT_CLASSIFY_TOL).unwrap();
        assert_eq!(c.class, OneSidedness::YesCertainOnMatch);
        assert!(c.max_matched_p_no <= 1e-12);
    }

    #[test]
    fn always_no_is_trivially_no_certain() {
        let m = DecisionMachine::constant(2, 2, Answer::No);
        let k = ComparisonMap::AntiLinear(AntiLinearMap::orthogonalizer());
        let c = classify_one_sidedness(&m, &k, 100, 2, DEFAULT_CLASSIFY_TOL).unwrap();
        assert_eq!(c.class, OneSidedness::NoCertainOnMismatch);
        assert_eq!(c.max_matched_p_yes, 0.0);
    }

    #[test]
    fn swap_test_with_orthogonalizer_is_neither() {
        let m = DecisionMachine::swap_test(2);
        let korth = AntiLinearMap::orthogonalizer();
        let k = ComparisonMap::AntiLinear(korth.clone());
        let c = classify_one_sidedness(&m, &k, 100, 3, DEFAULT_CLASSIFY_TOL).unwrap();
        assert_eq!(c.class, OneSidedness::Neither);
        let zero = StateVector::basis(2, 0);
        let image = korth.apply(&zero).unwrap();
        assert!((m.evaluate(&zero, &image).unwrap().p_no - 0.5).abs() < 1e-14);
    }

    #[test]
    fn deterministic_per_seed() {
        let m = DecisionMachine::swap_test(2);
        let k = ComparisonMap::AntiLinear(AntiLinearMap::conjugation(2));
        let a = classify_one_sidedness(&m, &k, 64, 9, 1e-9).unwrap();
        let b = classify_one_sidedness(&m, &k, 64, 9, 1e-9).unwrap();
        assert_eq!(a, b);
        assert!(classify_one_sidedness(&m, &k, 0, 9, 1e-9).is_err());
    }

    #[test]
    fn mismatched_pairs_are_separated() {
        let k = ComparisonMap::AntiLinear(AntiLinearMap::orthogonalizer());
        let mut rng = rng_from_seed(5);
        for _ in 0..200 {
            let (phi, psi) = mismatched_pair(&k, &mut rng).unwrap();
            let img = k.apply(&phi).unwrap();
            assert!(img.inner(&psi).unwrap().norm() <= NEAR_MATCH_REJECT);
        }
    }
}
