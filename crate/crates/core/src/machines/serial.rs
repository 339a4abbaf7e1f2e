use serde::{Deserialize, Serialize};

use super::DecisionMachine;
use crate::error::{Error, Result};
use crate::qstate::literal::{operator_from_rows, operator_to_rows, state_to_pairs, ComplexPair};
use crate::qstate::StateVector;

/// JSON form of a [`DecisionMachine`]: row-major `[re, im]` matrix entries
/// and an ancilla state literal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MachineSpec {
    pub probe_dim: usize,
    pub target_dim: usize,
    pub ancilla_dims: Vec<usize>,
    pub output_qubit: usize,
    pub unitary: Vec<Vec<ComplexPair>>,
    pub ancilla_init: Vec<ComplexPair>,
}

impl From<&DecisionMachine> for MachineSpec {
    fn from(m: &DecisionMachine) -> Self {
        Self {
            probe_dim: m.probe_dim(),
            target_dim: m.target_dim(),
            ancilla_dims: m.ancilla_dims().to_vec(),
            output_qubit: m.output_qubit(),
            unitary: operator_to_rows(m.unitary()),
            ancilla_init: state_to_pairs(m.ancilla_init()),
        }
    }
}

impl TryFrom<MachineSpec> for DecisionMachine {
    type Error = Error;

    fn try_from(spec: MachineSpec) -> Result<Self> {
        let unitary = operator_from_rows(&spec.unitary)?;
        let init = StateVector::from_amplitudes(
            spec.ancilla_init
                .iter()
                .map(|p| num_complex::Complex64::new(p[0], p[1]))
                .collect(),
        )?;
        DecisionMachine::new(
            unitary,
            spec.probe_dim,
            spec.target_dim,
            spec.ancilla_dims,
            Some(init),
            spec.output_qubit,
        )
    }
}

impl DecisionMachine {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MachineSpec::from(self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: MachineSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.try_into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_preserves_behaviour() {
        let m = DecisionMachine::swap_test(2).with_extra_ancillas(&[2]).unwrap();
        let back = DecisionMachine::from_json(&m.to_json()).unwrap();
        assert_eq!(back.factor_dims(), m.factor_dims());
        assert_eq!(back.unitary().max_abs_diff(m.unitary()).unwrap(), 0.0);
        assert_eq!(back.output_qubit(), 2);
    }

    #[test]
    fn rejects_non_unitary_file() {
        let mut spec = MachineSpec::from(&DecisionMachine::swap_test(2));
        spec.unitary[0][0] = [3.0, 0.0];
        assert!(DecisionMachine::try_from(spec).is_err());
        assert!(DecisionMachine::from_json("{\"probe_dim\": 2}").is_err());
    }
}
