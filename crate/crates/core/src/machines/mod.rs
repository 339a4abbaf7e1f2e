//! Decision machines: a unitary on `probe ⊗ target ⊗ ancillas` whose answer is
//! read off a designated qubit factor (`|0⟩` = YES, `|1⟩` = NO).

mod classify;
mod serial;

pub use classify::{
    classify_one_sidedness, matched_pair, mismatched_pair, Classification, OneSidedness,
    DEFAULT_CLASSIFY_TOL, NEAR_MATCH_REJECT, RAY_MATCH_TOL,
};
pub use serial::MachineSpec;

use crate::error::{Error, Result};
use crate::qstate::{Operator, StateVector};

/// Outcome index of the answer qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn outcome(self) -> usize {
        match self {
            Answer::Yes => 0,
            Answer::No => 1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Answer::Yes => Answer::No,
            Answer::No => Answer::Yes,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecisionMachine {
    unitary: Operator,
    probe_dim: usize,
    target_dim: usize,
    ancilla_dims: Vec<usize>,
    ancilla_init: StateVector,
    output_qubit: usize,
}

/// Answer statistics of a machine on one input pair.
#[derive(Clone, Debug)]
pub struct OutcomeDistribution {
    pub p_yes: f64,
    pub p_no: f64,
    pub post_yes: Option<StateVector>,
    pub post_no: Option<StateVector>,
}

impl DecisionMachine {
    /// Validates the layout. `ancilla_init` defaults to `|0…0⟩`.
    pub fn new(
        unitary: Operator,
        probe_dim: usize,
        target_dim: usize,
        ancilla_dims: Vec<usize>,
        ancilla_init: Option<StateVector>,
        output_qubit: usize,
    ) -> Result<Self> {
        if probe_dim == 0 || target_dim == 0 || ancilla_dims.contains(&0) {
            return Err(Error::InvalidFactor("zero-dimensional register factor".into()));
        }
        let total = probe_dim * target_dim * ancilla_dims.iter().product::<usize>();
        if unitary.dim() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: unitary.dim(),
            });
        }
        unitary.require_unitary()?;
        let ancilla_init = match ancilla_init {
            Some(s) => {
                let anc_len: usize = ancilla_dims.iter().product();
                if s.len() != anc_len {
                    return Err(Error::DimensionMismatch {
                        expected: anc_len,
                        found: s.len(),
                    });
                }
                s.require_normalized()?;
                if ancilla_dims.is_empty() {
                    s
                } else {
                    s.with_dims(ancilla_dims.clone())?
                }
            }
            None => StateVector::zero_state(if ancilla_dims.is_empty() {
                &[1]
            } else {
                &ancilla_dims
            }),
        };
        let machine = Self {
            unitary,
            probe_dim,
            target_dim,
            ancilla_dims,
            ancilla_init,
            output_qubit,
        };
        match machine.factor_dims().get(output_qubit) {
            Some(2) => Ok(machine),
            _ => Err(Error::InvalidFactor(format!(
                "output factor {output_qubit} is not a qubit of {:?}",
                machine.factor_dims()
            ))),
        }
    }

    /// SWAP test on two `state_dim`-dimensional registers with one answer
    /// qubit: `H · CSWAP · H` on the answer qubit, which is factor 2.
    pub fn swap_test(state_dim: usize) -> Self {
        let dims = [state_dim, state_dim, 2];
        let h = Operator::embed(&dims, 2, &Operator::hadamard()).expect("qubit factor");
        let cswap = Operator::controlled_swap(&dims, 2, 0, 1).expect("valid factors");
        let u = h
            .compose(&cswap)
            .and_then(|m| m.compose(&h))
            .expect("equal dimensions");
        Self::new(u, state_dim, state_dim, vec![2], None, 2).expect("SWAP test is valid")
    }

    /// Tests `ψ = Kφ` for unitary `K`: apply `K` to the probe, then SWAP-test.
    pub fn k_comparison(k: &Operator) -> Result<Self> {
        k.require_unitary()?;
        let d = k.dim();
        let swap = Self::swap_test(d);
        let pre = Operator::embed(&swap.factor_dims(), 0, k)?;
        swap.with_unitary(swap.unitary.compose(&pre)?)
    }

    /// A machine that ignores its input and always answers `answer`.
    pub fn constant(probe_dim: usize, target_dim: usize, answer: Answer) -> Self {
        let dims = [probe_dim, target_dim, 2];
        let u = match answer {
            Answer::Yes => Operator::identity(probe_dim * target_dim * 2),
            Answer::No => Operator::embed(&dims, 2, &Operator::pauli_x()).expect("qubit factor"),
        };
        Self::new(u, probe_dim, target_dim, vec![2], None, 2).expect("valid constant machine")
    }

    /// Appends idle ancilla factors initialized to `|0⟩`.
    pub fn with_extra_ancillas(&self, extra: &[usize]) -> Result<Self> {
        if extra.is_empty() {
            return Ok(self.clone());
        }
        let extra_len: usize = extra.iter().product();
        let unitary = self.unitary.kron(&Operator::identity(extra_len));
        let mut ancilla_dims = self.ancilla_dims.clone();
        ancilla_dims.extend_from_slice(extra);
        let init = self.ancilla_init.tensor(&StateVector::zero_state(extra));
        Self::new(
            unitary,
            self.probe_dim,
            self.target_dim,
            ancilla_dims,
            Some(init),
            self.output_qubit,
        )
    }

    /// Same register layout with a different unitary.
    pub fn with_unitary(&self, unitary: Operator) -> Result<Self> {
        Self::new(
            unitary,
            self.probe_dim,
            self.target_dim,
            self.ancilla_dims.clone(),
            Some(self.ancilla_init.clone()),
            self.output_qubit,
        )
    }

    pub fn unitary(&self) -> &Operator {
        &self.unitary
    }

    pub fn probe_dim(&self) -> usize {
        self.probe_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn ancilla_dims(&self) -> &[usize] {
        &self.ancilla_dims
    }

    pub fn ancilla_init(&self) -> &StateVector {
        &self.ancilla_init
    }

    pub fn output_qubit(&self) -> usize {
        self.output_qubit
    }

    pub fn factor_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.probe_dim, self.target_dim];
        dims.extend_from_slice(&self.ancilla_dims);
        dims
    }

    pub fn total_dim(&self) -> usize {
        self.unitary.dim()
    }

    /// `input ⊗ ancilla_init` with the machine's factor layout. `input` lives on
    /// `probe ⊗ target` and may be unnormalized.
    pub fn embed_input(&self, input: &StateVector) -> Result<StateVector> {
        let pt = self.probe_dim * self.target_dim;
        if input.len() != pt {
            return Err(Error::DimensionMismatch {
                expected: pt,
                found: input.len(),
            });
        }
        let full = input.tensor(&self.ancilla_init);
        full.with_dims(self.factor_dims())
    }

    /// Linear action of the machine on an input over `probe ⊗ target`.
    pub fn run(&self, input: &StateVector) -> Result<StateVector> {
        self.unitary.apply(&self.embed_input(input)?)
    }

    pub fn evaluate(&self, phi: &StateVector, psi: &StateVector) -> Result<OutcomeDistribution> {
        if phi.len() != self.probe_dim {
            return Err(Error::DimensionMismatch {
                expected: self.probe_dim,
                found: phi.len(),
            });
        }
        if psi.len() != self.target_dim {
            return Err(Error::DimensionMismatch {
                expected: self.target_dim,
                found: psi.len(),
            });
        }
        phi.require_normalized()?;
        psi.require_normalized()?;
        let out = self.run(&phi.tensor(psi))?;
        let m = out.measure_qubit(self.output_qubit)?;
        Ok(OutcomeDistribution {
            p_yes: m.p0,
            p_no: m.p1,
            post_yes: m.collapsed0,
            post_no: m.collapsed1,
        })
    }
}

/// Closed-form SWAP-test acceptance probability `(1 + |⟨φ|ψ⟩|²)/2`.
pub fn swap_test_probability(phi: &StateVector, psi: &StateVector) -> Result<f64> {
    phi.require_normalized()?;
    psi.require_normalized()?;
    let delta = phi.inner(psi)?.norm();
    Ok((1.0 + delta * delta) / 2.0)
}

pub fn build_swap_test_machine(state_dim: usize) -> Result<DecisionMachine> {
    if state_dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "state dimension must be at least 2, got {state_dim}"
        )));
    }
    Ok(DecisionMachine::swap_test(state_dim))
}

pub fn build_k_comparison_machine(k: &Operator) -> Result<DecisionMachine> {
    DecisionMachine::k_comparison(k)
}

pub fn evaluate(
    machine: &DecisionMachine,
    phi: &StateVector,
    psi: &StateVector,
) -> Result<OutcomeDistribution> {
    machine.evaluate(phi, psi)
}
