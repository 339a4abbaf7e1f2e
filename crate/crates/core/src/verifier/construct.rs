use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::probes::build_probe_set;
use super::Case;
use crate::error::{Error, Result};
use crate::machines::DecisionMachine;
use crate::qstate::ortho::{complete_with_standard_basis, extend_orthonormal};
use crate::qstate::{index_to_digits, ComparisonMap, Operator};
use crate::seeds::rng_from_seed;

const RANK_TOL: f64 = 1e-9;

/// Output qubit of constructed machines: the first ancilla factor.
const ANSWER_FACTOR: usize = 2;

/// Builds a machine whose constrained probes land exactly in the one-sided
/// answer subspace (violation 0).
///
/// The constrained probes are the mismatched ones for case 1 and the matched
/// ones for case 2. An orthonormal basis of their span is mapped onto random
/// orthonormal vectors with the output qubit fixed to the allowed answer; the
/// orthogonal complement of the span within `probe ⊗ target` is sent to the
/// opposite answer, so any freedom the constraints leave is used to be
/// non-trivial. The rest of the unitary is a seeded orthonormal completion.
pub fn exactly_constrained_machine(
    k: &ComparisonMap,
    case: Case,
    ancilla_dims: &[usize],
    seed: u64,
) -> Result<DecisionMachine> {
    if ancilla_dims.first() != Some(&2) {
        return Err(Error::InvalidFactor(
            "the first ancilla factor must be the answer qubit".into(),
        ));
    }
    let probes = build_probe_set(k)?;
    let constrained: Vec<DVector<Complex64>> = match case {
        Case::NoCertain => probes.mismatched().iter().map(|p| dvec(&p.normalized)).collect(),
        Case::YesCertain => probes.matched().iter().map(|p| dvec(&p.normalized)).collect(),
    };

    // Split probe ⊗ target into span(constrained) and its complement.
    let mut span = Vec::new();
    for v in &constrained {
        extend_orthonormal(&mut span, v, RANK_TOL);
    }
    let rank = span.len();
    let mut split = span.clone();
    complete_with_standard_basis(&mut split, 4);
    let complement = &split[rank..];

    let mut dims = vec![2, 2];
    dims.extend_from_slice(ancilla_dims);
    let anc: usize = ancilla_dims.iter().product();
    let n = 4 * anc;

    // Inputs with the ancilla in |0…0⟩: index i of probe ⊗ target ↦ i·anc.
    let embed = |v: &DVector<Complex64>| -> DVector<Complex64> {
        let mut out = DVector::zeros(n);
        for (i, z) in v.iter().enumerate() {
            out[i * anc] = *z;
        }
        out
    };
    let mut inputs: Vec<DVector<Complex64>> = span.iter().chain(complement).map(embed).collect();
    complete_with_standard_basis(&mut inputs, n);

    let allowed = case.forbidden_answer().opposite().outcome();
    let on_answer = |outcome: usize| -> Vec<bool> {
        (0..n)
            .map(|i| index_to_digits(&dims, i)[ANSWER_FACTOR] == outcome)
            .collect()
    };
    let allowed_mask = on_answer(allowed);
    let forbidden_mask = on_answer(1 - allowed);

    let mut rng = rng_from_seed(seed);
    let mut outputs: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    fill_random(&mut outputs, rank, Some(&allowed_mask), n, &mut rng);
    fill_random(&mut outputs, rank + complement.len(), Some(&forbidden_mask), n, &mut rng);
    fill_random(&mut outputs, n, None, n, &mut rng);

    let mut u = DMatrix::<Complex64>::zeros(n, n);
    for (out, inp) in outputs.iter().zip(&inputs) {
        u += out * inp.adjoint();
    }
    DecisionMachine::new(Operator::new(u)?, 2, 2, ancilla_dims.to_vec(), None, ANSWER_FACTOR)
}

fn dvec(s: &crate::qstate::StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(s.amplitudes())
}

/// Appends random orthonormal vectors (supported on `mask` when given) until
/// `basis` has `target` elements.
fn fill_random<R: Rng>(
    basis: &mut Vec<DVector<Complex64>>,
    target: usize,
    mask: Option<&[bool]>,
    n: usize,
    rng: &mut R,
) {
    while basis.len() < target {
        let v = DVector::from_fn(n, |i, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            match mask {
                Some(m) if !m[i] => Complex64::new(0.0, 0.0),
                _ => Complex64::new(re, im),
            }
        });
        extend_orthonormal(basis, &v, 1e-6);
    }
}
