//! Simulation and exact learning of one-way quantum finite automata.
//!
//! Three machine kinds are modelled in [`automata`]: measure-once QFAs,
//! measure-many QFAs and reversible (group) finite automata. [`oracle`]
//! provides the amplitude-distribution teacher, [`learner`] the algorithms
//! that rebuild an equivalent machine from its answers, and [`verify`] the
//! trajectory-level equivalence checks.
//!
//! The crate is `no_std` with `alloc`; the default `std` feature only adds
//! wall-clock timing to learn reports.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod automata;
pub mod learner;
pub mod linalg;
pub mod oracle;
pub mod verify;

pub use automata::{Alphabet, AutomatonError, Machine, MachineKind, MmQfa, MoQfa, Rfa, Violation};
pub use learner::{learn_mm, learn_mo, learn_rfa, LearnConfig, LearnError, LearnReport, LearnResult, Outcome};
pub use linalg::{Complex, ComplexMatrix, ComplexVector, OrthoFrame};
pub use oracle::{AdOracle, SimulatedOracle};
pub use verify::{audit, verify_mm, verify_mo, verify_rfa, VerifyConfig, VerifyReport};
