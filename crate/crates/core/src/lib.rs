//! Truncated Fock-space simulation of the quantum scissors acting on
//! thermal light, with closed-form cross-checks for every figure of merit.
//!
//! The crate is organised bottom-up:
//!
//! - [`fock`]: Fock spaces, dense density matrices, ladder operators.
//! - [`states`]: truncated thermal states and Fock ancillas.
//! - [`beam_splitter`]: photon-number-sector construction of splitter unitaries.
//! - [`scissors`]: the heralded three-mode circuit.
//! - [`observables`]: photon statistics, parity, Wigner functions.
//! - [`closed_form`]: analytic expressions used as the reference.
//! - [`report`]: per-point merit reports, sweeps and their CSV/JSON encodings.
//! - [`validation`]: the invariant and oracle suite.
//! - [`cli`]: the `qsd` command-line driver.
//!
//! Runnable walkthroughs live in `examples/`; start with
//! `cargo run --example truncate_thermal`.

pub mod beam_splitter;
pub mod cli;
pub mod closed_form;
pub mod error;
pub mod fock;
pub mod observables;
pub mod report;
pub mod scissors;
pub mod states;
pub mod validation;

pub use error::{Error, Result};
pub use fock::{DensityMatrix, FockSpace};
pub use scissors::{run_qsd, run_qsd_generic, QsdParams, QsdResult, ScissorsCircuit};
