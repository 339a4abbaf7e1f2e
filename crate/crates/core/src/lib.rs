//! Simulation of quantum comparison machines with one-sided error.
//!
//! The crate is split along the lines of the experiment:
//!
//! - [`qstate`]: dense state vectors, operators, anti-linear maps, Haar sampling
//!   and partial traces for registers of a few qubits.
//! - [`machines`]: decision machines (the SWAP test and K-comparison machines),
//!   their evaluation and a sampled one-sidedness classifier.
//! - [`verifier`]: branch extraction, the two constraint cases for anti-linear
//!   comparison maps, exactly-constrained machine construction and an
//!   adversarial penalty search over machine unitaries.
//! - [`cloning`]: the SWAP-test payoff variant of the cloning game.
//!
//! Register convention: machine inputs are laid out as `probe ⊗ target ⊗ ancillas`,
//! and the answer is read from a designated qubit factor, `|0⟩` meaning YES and
//! `|1⟩` meaning NO.

pub mod cloning;
pub mod error;
pub mod machines;
pub mod qstate;
pub mod seeds;
pub mod verifier;

pub use error::{Error, Result};
pub use num_complex::Complex64;
