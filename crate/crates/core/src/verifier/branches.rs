use crate::error::Result;
use crate::machines::DecisionMachine;
use crate::qstate::{StateVector, BRANCH_EPS};

/// Split of a machine output into its YES and NO parts,
/// `M(input) = y·|0⟩|Y⟩ + n·|1⟩|N⟩` on the output qubit.
#[derive(Clone, Debug)]
pub struct BranchDecomposition {
    pub yes_amplitude: f64,
    pub yes_vector: Option<StateVector>,
    pub no_amplitude: f64,
    pub no_vector: Option<StateVector>,
    /// Unnormalized `y·|0⟩|Y⟩`; linear in the input.
    pub yes_branch: StateVector,
    /// Unnormalized `n·|1⟩|N⟩`; linear in the input.
    pub no_branch: StateVector,
}

/// Applies the machine linearly to `input` on `probe ⊗ target` (which may be
/// unnormalized) and projects the output qubit.
pub fn extract_branches(machine: &DecisionMachine, input: &StateVector) -> Result<BranchDecomposition> {
    let out = machine.run(input)?;
    let yes_branch = out.project_qubit(machine.output_qubit(), 0)?;
    let no_branch = out.project_qubit(machine.output_qubit(), 1)?;
    let yes_amplitude = yes_branch.norm();
    let no_amplitude = no_branch.norm();
    let unit = |b: &StateVector, amp: f64| -> Result<Option<StateVector>> {
        if amp > BRANCH_EPS {
            Ok(Some(b.normalized()?))
        } else {
            Ok(None)
        }
    };
    Ok(BranchDecomposition {
        yes_vector: unit(&yes_branch, yes_amplitude)?,
        no_vector: unit(&no_branch, no_amplitude)?,
        yes_amplitude,
        no_amplitude,
        yes_branch,
        no_branch,
    })
}
