//! Executable form of the impossibility argument for one-sided comparison
//! machines against an anti-linear, non-singular map `K`.
//!
//! Case 1 machines answer NO with certainty on mismatched inputs; case 2
//! machines answer YES with certainty on matched inputs. For each case the
//! verifier measures how far a machine is from the one-sided premise
//! (`violation`, an amplitude) and how far it is from the trivial machine the
//! argument forces (`triviality_gap`), and checks `gap ≤ C · violation`.

mod branches;
mod cases;
mod construct;
mod nontrivial;
mod probes;
pub mod search;

pub use branches::{extract_branches, BranchDecomposition};
pub use cases::{
    case1_bound_constant, case2_bound_constant, verify, verify_case1, verify_case2,
    CaseAmplitudes, VerificationReport, Verdict, VERDICT_SLACK,
};
pub use construct::exactly_constrained_machine;
pub use nontrivial::nontriviality;
pub use probes::{build_probe_set, Probe, ProbeSet};
pub use search::{adversarial_search, SearchConfig, SearchOutcome};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machines::Answer;

/// Tolerance below which a violation counts as meeting the one-sided premise.
pub const PREMISE_TOL: f64 = 1e-9;

/// Which one-sided premise a machine is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Case {
    /// NO is certain on mismatched inputs; errors happen on the YES side.
    NoCertain,
    /// YES is certain on matched inputs; errors happen on the NO side.
    YesCertain,
}

impl Case {
    pub fn id(self) -> u8 {
        match self {
            Case::NoCertain => 1,
            Case::YesCertain => 2,
        }
    }

    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Case::NoCertain),
            2 => Ok(Case::YesCertain),
            other => Err(Error::InvalidArgument(format!("case must be 1 or 2, got {other}"))),
        }
    }

    /// The answer that must never be given on the constrained inputs, which is
    /// also the answer a non-trivial machine gives on the other class.
    pub fn forbidden_answer(self) -> Answer {
        match self {
            Case::NoCertain => Answer::Yes,
            Case::YesCertain => Answer::No,
        }
    }
}

impl TryFrom<u8> for Case {
    type Error = Error;
    fn try_from(id: u8) -> Result<Self> {
        Case::from_id(id)
    }
}

impl From<Case> for u8 {
    fn from(c: Case) -> u8 {
        c.id()
    }
}
