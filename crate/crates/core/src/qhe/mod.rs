//! Quantum homomorphic encryption over the quantum one-time pad.
//!
//! The client pads its data with a random Pauli key, the server evaluates a
//! Clifford+T circuit on the padded data (spending one Bell pair per `T` or
//! `Tdg`), and the client updates its key through the circuit to decrypt.

mod client;
mod compile;
pub mod gf2;
mod key;
mod run;
mod script;
mod security;

use thiserror::Error;

use crate::cqsim::{CircuitError, GateKind, SimError};

pub use client::{client_decrypt_run, ClientOutput};
pub use compile::{compile_server, compile_server_with, protocol_circuit, CbitLayout, CompileOptions, Mode, ServerCompilation};
pub use key::{
    bits_to_string, decrypt_in_place, encrypt, gen_key, update_key_clifford, update_key_nonunitary, update_key_t,
    BellOutcome, NonUnitary, PauliKey,
};
pub use run::{run_compiled, run_qhe, run_shot, traces_to_csv, KeyTrace, QheConfig, QheRun, ShotResult};
pub use script::{CliffordMap, KeyUpdateScript, KeyUpdateStep, Readout, XorCountReport};
pub use security::{average_density, coherent_deviation, mixedness_check, KeySet};

#[derive(Debug, Error)]
pub enum QheError {
    #[error("key covers {got} qubits, expected {expected}")]
    KeyLength { expected: usize, got: usize },
    #[error("qubit {qubit} outside a {n}-qubit key")]
    KeyIndex { qubit: usize, n: usize },
    #[error("`{0}` is not a Clifford gate")]
    NotClifford(GateKind),
    #[error("expected the outcome of Bell register {expected}, got register {got}")]
    BellIndex { expected: usize, got: usize },
    #[error("no outcome recorded for Bell register {0}")]
    MissingOutcome(usize),
    #[error("a key needs at least one qubit")]
    NoQubits,
    #[error("instruction {index}: {what}")]
    Unsupported { index: usize, what: String },
    #[error("instruction {index}: cbit {cbit} is measured twice, which realistic mode cannot decrypt")]
    RemeasuredCbit { index: usize, cbit: usize },
    #[error("{n} qubits is too many for a density-matrix check (max {max})")]
    TooLarge { n: usize, max: usize },
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}
