use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::operator::Operator;
use super::ortho::extend_orthonormal;
use super::state::StateVector;
use crate::seeds::rng_from_seed;

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<Complex64> {
    DVector::from_fn(dim, |_, _| complex_gaussian(rng))
}

/// Haar-random pure state of dimension `dim`, deterministic per seed.
pub fn haar_state(dim: usize, seed: u64) -> StateVector {
    haar_state_with(dim, &mut rng_from_seed(seed))
}

pub fn haar_state_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    assert!(dim >= 1, "dimension must be positive");
    loop {
        let v = gaussian_vector(dim, rng);
        let n = v.norm();
        if n > 1e-300 {
            return StateVector::from_dvector(v / Complex64::new(n, 0.0), vec![dim]);
        }
    }
}

/// Haar-random unitary of dimension `dim`, deterministic per seed.
pub fn haar_unitary(dim: usize, seed: u64) -> Operator {
    haar_unitary_with(dim, &mut rng_from_seed(seed))
}

/// Gram–Schmidt on the columns of a complex Ginibre matrix. This equals QR with
/// a positive real diagonal in `R`, which is the phase fix that makes the
/// result Haar distributed.
pub fn haar_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    assert!(dim >= 1, "dimension must be positive");
    let mut columns: Vec<DVector<Complex64>> = Vec::with_capacity(dim);
    while columns.len() < dim {
        let v = gaussian_vector(dim, rng);
        extend_orthonormal(&mut columns, &v, 1e-8);
    }
    Operator::new(DMatrix::from_columns(&columns)).expect("square by construction")
}

/// Random Gaussian vector of the given dimension (not normalized).
pub fn gaussian_state_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    StateVector::from_dvector(gaussian_vector(dim, rng), vec![dim])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn states_are_normalized_and_deterministic() {
        for seed in 0..100 {
            let s = haar_state(2, seed);
            assert!((s.norm() - 1.0).abs() < 1e-14);
            assert_eq!(s, haar_state(2, seed));
        }
        assert_ne!(haar_state(4, 1), haar_state(4, 2));
    }

    #[test]
    fn unitaries_pass_unitarity() {
        for seed in 0..50 {
            let u = haar_unitary(2 + (seed as usize % 15), seed);
            assert!(u.unitarity_defect() <= 1e-10);
        }
        let u = haar_unitary(2, 3);
        let s = u.apply(&haar_state(2, 4)).unwrap();
        assert!(s.is_normalized());
    }
}
