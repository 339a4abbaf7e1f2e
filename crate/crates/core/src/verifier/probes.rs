use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::qstate::{ComparisonMap, StateVector};

/// Allowed residual in the `K(|0⟩+|1⟩)` and `K(|0⟩+i|1⟩)` identities, relative
/// to the size of `K`.
const IDENTITY_TOL: f64 = 1e-12;

/// An input on `probe ⊗ target` as written in the argument, plus its unit-norm
/// copy for anything that reports a probability.
#[derive(Clone, Debug)]
pub struct Probe {
    pub label: &'static str,
    pub raw: StateVector,
    pub normalized: StateVector,
}

impl Probe {
    fn new(label: &'static str, raw: StateVector) -> Result<Self> {
        let normalized = raw.normalized()?;
        Ok(Self {
            label,
            raw,
            normalized,
        })
    }
}

/// The inputs the impossibility argument feeds to a machine, with
/// `|φ_j⟩ = K|j⟩`.
#[derive(Clone, Debug)]
pub struct ProbeSet {
    /// `K|0⟩`, `K|1⟩` (unnormalized when `K` is not norm preserving).
    pub images: [StateVector; 2],
    /// `basis[i][j] = |i⟩ ⊗ |φ_j⟩`; matched iff `i == j`.
    pub basis: [[Probe; 2]; 2],
    /// `(|0⟩+|1⟩)/√2 ⊗ |φ_j⟩`, mismatched for both `j` because `K` is
    /// non-singular.
    pub mismatched_superpositions: [Probe; 2],
    /// `(|0⟩+|1⟩)(|φ₀⟩+|φ₁⟩)/2`, matched.
    pub matched_sum: Probe,
    /// `(|0⟩+i|1⟩) K(|0⟩+i|1⟩) / 2`, matched: `(|φ₀⟩-i|φ₁⟩)` for anti-linear
    /// `K`, `(|φ₀⟩+i|φ₁⟩)` for linear `K`.
    pub matched_phase: Probe,
    /// Residuals of the two superposition identities, checked against `K`
    /// applied directly.
    pub identity_residuals: [f64; 2],
    pub antilinear: bool,
}

impl ProbeSet {
    /// Normalized mismatched probes used for the case-1 violation.
    pub fn mismatched(&self) -> [&Probe; 4] {
        [
            &self.basis[0][1],
            &self.basis[1][0],
            &self.mismatched_superpositions[1],
            &self.mismatched_superpositions[0],
        ]
    }

    /// Matched probes used for the case-2 violation.
    pub fn matched(&self) -> [&Probe; 4] {
        [
            &self.basis[0][0],
            &self.basis[1][1],
            &self.matched_sum,
            &self.matched_phase,
        ]
    }

    /// `‖K|j⟩‖`
    pub fn image_norms(&self) -> [f64; 2] {
        [self.images[0].norm(), self.images[1].norm()]
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn build_probe_set(k: &ComparisonMap) -> Result<ProbeSet> {
    if k.dim() != 2 {
        return Err(Error::InvalidArgument(format!(
            "probe construction needs a qubit map, got dimension {}",
            k.dim()
        )));
    }
    k.require_nonsingular()?;
    let e0 = StateVector::basis(2, 0);
    let e1 = StateVector::basis(2, 1);
    let phi0 = k.apply(&e0)?;
    let phi1 = k.apply(&e1)?;

    // The identities the argument relies on, checked against K itself.
    let sum_in = e0.add(&e1)?;
    let phase_in = e0.add(&e1.scale(c(0.0, 1.0)))?;
    let sum_formula = phi0.add(&phi1)?;
    let i_through = k.scalar_through(c(0.0, 1.0));
    let phase_formula = phi0.add(&phi1.scale(i_through))?;
    let scale = k.matrix().matrix().norm().max(1.0);
    let residuals = [
        k.apply(&sum_in)?.distance(&sum_formula)?,
        k.apply(&phase_in)?.distance(&phase_formula)?,
    ];
    if residuals.iter().any(|&r| r > IDENTITY_TOL * scale) {
        return Err(Error::CrossCheck(format!(
            "superposition identities violated: residuals {residuals:?}"
        )));
    }

    let h = c(FRAC_1_SQRT_2, 0.0);
    let half = c(0.5, 0.0);
    let plus_raw = sum_in.scale(h);
    let basis = [
        [
            Probe::new("|0>|phi0>", e0.tensor(&phi0))?,
            Probe::new("|0>|phi1>", e0.tensor(&phi1))?,
        ],
        [
            Probe::new("|1>|phi0>", e1.tensor(&phi0))?,
            Probe::new("|1>|phi1>", e1.tensor(&phi1))?,
        ],
    ];
    let phi0_hat = phi0.normalized()?;
    let phi1_hat = phi1.normalized()?;
    let mismatched_superpositions = [
        Probe::new("(|0>+|1>)/sqrt2 |phi0>", plus_raw.tensor(&phi0_hat))?,
        Probe::new("(|0>+|1>)/sqrt2 |phi1>", plus_raw.tensor(&phi1_hat))?,
    ];
    let matched_sum = Probe::new(
        "(|0>+|1>)(|phi0>+|phi1>)/2",
        sum_in.tensor(&sum_formula).scale(half),
    )?;
    let matched_phase = Probe::new(
        if k.is_antilinear() {
            "(|0>+i|1>)(|phi0>-i|phi1>)/2"
        } else {
            "(|0>+i|1>)(|phi0>+i|phi1>)/2"
        },
        phase_in.tensor(&phase_formula).scale(half),
    )?;

    Ok(ProbeSet {
        images: [phi0, phi1],
        basis,
        mismatched_superpositions,
        matched_sum,
        matched_phase,
        identity_residuals: residuals,
        antilinear: k.is_antilinear(),
    })
}
