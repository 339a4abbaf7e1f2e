use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use super::branches::extract_branches;
use super::probes::{build_probe_set, ProbeSet};
use super::{Case, PREMISE_TOL};
use crate::error::{Error, Result};
use crate::machines::DecisionMachine;
use crate::qstate::{ComparisonMap, StateVector};

/// Additive slack in the verdict `gap ≤ C · violation + slack`.
pub const VERDICT_SLACK: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The amplitudes a one-sided premise forces to zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CaseAmplitudes {
    /// YES amplitudes on the matched basis probes.
    Case1 { a00: f64, a11: f64 },
    /// NO amplitudes on the mismatched basis probes.
    Case2 { b01: f64, b10: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: Case,
    /// Largest forbidden-answer amplitude over the constrained probes.
    pub violation: f64,
    pub amplitudes: CaseAmplitudes,
    pub triviality_gap: f64,
    /// `None` when no bound follows from the probes (linear `K` in case 2).
    pub bound_constant: Option<f64>,
    pub verdict: Verdict,
    /// Whether the machine is one-sided on the probes within the premise tolerance.
    pub premise_met: bool,
    /// Disagreement between the branch vectors obtained by recombining probe
    /// outputs and those obtained by running the basis probes directly.
    pub recombination_residual: f64,
}

impl VerificationReport {
    fn finish(
        case: Case,
        violation: f64,
        amplitudes: CaseAmplitudes,
        bound_constant: Option<f64>,
        recombination_residual: f64,
    ) -> Self {
        let triviality_gap = match amplitudes {
            CaseAmplitudes::Case1 { a00, a11 } => a00.max(a11),
            CaseAmplitudes::Case2 { b01, b10 } => b01.max(b10),
        };
        let verdict = match bound_constant {
            Some(c) if triviality_gap <= c * violation + VERDICT_SLACK => Verdict::Pass,
            _ => Verdict::Fail,
        };
        Self {
            case,
            violation,
            amplitudes,
            triviality_gap,
            bound_constant,
            verdict,
            premise_met: violation <= PREMISE_TOL,
            recombination_residual,
        }
    }
}

/// `1 + √2`: `|1⟩φ̂₁ = √2·S₁ - |0⟩φ̂₁` with `S₁ = (|0⟩+|1⟩)/√2 ⊗ φ̂₁`, so the
/// YES amplitude of the matched probe is at most `√2·v + v`.
pub fn case1_bound_constant() -> f64 {
    1.0 + SQRT_2
}

/// Constant in `max(b₀₁, b₁₀) ≤ C₂ · v` for anti-linear `K`.
///
/// With NO-branches `a, d` of the matched basis probes, `p, q` of the sum and
/// phase probes (all on the unnormalized probes), the mismatched branches are
/// `X = p + i·q - (1+i)(a+d)/2` and `Y = p - i·q - (1-i)(a+d)/2`. Each term is
/// bounded by `v` times the norm of its probe, and `b₀₁ = ‖X‖/‖φ₁‖`,
/// `b₁₀ = ‖Y‖/‖φ₀‖`. Equals `2 + √2` for anti-unitary `K`. `None` for linear
/// `K`, where the phase probe gives no new equation.
pub fn case2_bound_constant(probes: &ProbeSet) -> Option<f64> {
    if !probes.antilinear {
        return None;
    }
    let [r0, r1] = probes.image_norms();
    let numer = probes.matched_sum.raw.norm()
        + probes.matched_phase.raw.norm()
        + (r0 + r1) * FRAC_1_SQRT_2;
    Some(numer / r0.min(r1))
}

fn check_machine(machine: &DecisionMachine) -> Result<()> {
    if machine.probe_dim() != 2 || machine.target_dim() != 2 {
        return Err(Error::InvalidArgument(format!(
            "verification needs qubit probe and target registers, got {}x{}",
            machine.probe_dim(),
            machine.target_dim()
        )));
    }
    Ok(())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Case 1: the machine must answer NO on every mismatched probe. Any YES
/// amplitude there is violation; the YES amplitudes on the matched basis
/// probes (`a₀₀`, `a₁₁`) are what the argument forces to zero.
pub fn verify_case1(machine: &DecisionMachine, k: &ComparisonMap) -> Result<VerificationReport> {
    check_machine(machine)?;
    let probes = build_probe_set(k)?;
    let yes = |s: &StateVector| -> Result<StateVector> {
        Ok(extract_branches(machine, s)?.yes_branch)
    };

    let mut violation: f64 = 0.0;
    for p in probes.mismatched() {
        violation = violation.max(yes(&p.normalized)?.norm());
    }
    let a00_branch = yes(&probes.basis[0][0].normalized)?;
    let a11_branch = yes(&probes.basis[1][1].normalized)?;

    // |j⟩φ̂_j = √2·(|0⟩+|1⟩)/√2 ⊗ φ̂_j - |1-j⟩φ̂_j, pushed through the machine.
    let root2 = c(SQRT_2, 0.0);
    let a11_recombined = yes(&probes.mismatched_superpositions[1].normalized)?
        .scale(root2)
        .sub(&yes(&probes.basis[0][1].normalized)?)?;
    let a00_recombined = yes(&probes.mismatched_superpositions[0].normalized)?
        .scale(root2)
        .sub(&yes(&probes.basis[1][0].normalized)?)?;
    let residual = a11_recombined
        .distance(&a11_branch)?
        .max(a00_recombined.distance(&a00_branch)?);

    Ok(VerificationReport::finish(
        Case::NoCertain,
        violation,
        CaseAmplitudes::Case1 {
            a00: a00_branch.norm(),
            a11: a11_branch.norm(),
        },
        Some(case1_bound_constant()),
        residual,
    ))
}

/// Case 2: the machine must answer YES on every matched probe. Any NO
/// amplitude there is violation; the NO amplitudes on the mismatched basis
/// probes (`b₀₁`, `b₁₀`) are what the argument forces to zero for anti-linear
/// `K`.
pub fn verify_case2(machine: &DecisionMachine, k: &ComparisonMap) -> Result<VerificationReport> {
    check_machine(machine)?;
    let probes = build_probe_set(k)?;
    let no = |s: &StateVector| -> Result<StateVector> {
        Ok(extract_branches(machine, s)?.no_branch)
    };

    let mut violation: f64 = 0.0;
    for p in probes.matched() {
        violation = violation.max(no(&p.normalized)?.norm());
    }
    let b01 = no(&probes.basis[0][1].normalized)?.norm();
    let b10 = no(&probes.basis[1][0].normalized)?.norm();

    // Proof algebra on the unnormalized probes.
    let a = no(&probes.basis[0][0].raw)?;
    let d = no(&probes.basis[1][1].raw)?;
    let p = no(&probes.matched_sum.raw)?;
    let q = no(&probes.matched_phase.raw)?;
    let x_direct = no(&probes.basis[0][1].raw)?;
    let y_direct = no(&probes.basis[1][0].raw)?;
    let ad = a.add(&d)?;
    let residual = if probes.antilinear {
        // X = p + i q - (1+i)(a+d)/2,  Y = p - i q - (1-i)(a+d)/2
        let x = p
            .add(&q.scale(c(0.0, 1.0)))?
            .sub(&ad.scale(c(0.5, 0.5)))?;
        let y = p
            .sub(&q.scale(c(0.0, 1.0)))?
            .sub(&ad.scale(c(0.5, -0.5)))?;
        x.distance(&x_direct)?.max(y.distance(&y_direct)?)
    } else {
        // Only X + Y = 2p - a - d is available.
        let sum = p.scale(c(2.0, 0.0)).sub(&ad)?;
        sum.distance(&x_direct.add(&y_direct)?)?
    };

    Ok(VerificationReport::finish(
        Case::YesCertain,
        violation,
        CaseAmplitudes::Case2 { b01, b10 },
        case2_bound_constant(&probes),
        residual,
    ))
}

pub fn verify(machine: &DecisionMachine, k: &ComparisonMap, case: Case) -> Result<VerificationReport> {
    match case {
        Case::NoCertain => verify_case1(machine, k),
        Case::YesCertain => verify_case2(machine, k),
    }
}
