//! Model-based conformance testing for input/output labeled transition
//! systems.
//!
//! The crate checks `ioco` and language-based conformance between a
//! specification and an implementation model, generates fault models of
//! test purposes from a leveled unfolding of the specification, runs them
//! against implementation models, and produces random models and mutants
//! for experiments.

pub mod action;
pub mod conformance;
pub mod error;
pub mod fsa;
pub mod iolts;
pub mod modelgen;
pub mod testgen;
pub mod testrun;

pub use action::{Action, Word};
pub use error::{Error, Result};
pub use fsa::Dfsa;
pub use iolts::{Iolts, Label, Transition};
