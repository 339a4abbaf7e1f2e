use rayon::prelude::*;

use super::Case;
use crate::error::{Error, Result};
use crate::machines::{matched_pair, mismatched_pair, DecisionMachine};
use crate::qstate::ComparisonMap;
use crate::seeds::{derive_seed, rng_from_seed};

/// How far a machine is from the constant machine its case allows.
///
/// Case 1 (NO-certain): largest YES probability over sampled matched pairs.
/// Case 2 (YES-certain): largest NO probability over sampled mismatched pairs.
pub fn nontriviality(
    machine: &DecisionMachine,
    k: &ComparisonMap,
    case: Case,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    if k.dim() != machine.probe_dim() || k.dim() != machine.target_dim() {
        return Err(Error::DimensionMismatch {
            expected: machine.probe_dim(),
            found: k.dim(),
        });
    }
    let values: Vec<f64> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(seed, i));
            match case {
                Case::NoCertain => {
                    let (phi, psi) = matched_pair(k, &mut rng)?;
                    Ok(machine.evaluate(&phi, &psi)?.p_yes)
                }
                Case::YesCertain => {
                    let (phi, psi) = mismatched_pair(k, &mut rng)?;
                    Ok(machine.evaluate(&phi, &psi)?.p_no)
                }
            }
        })
        .collect::<Result<_>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}
