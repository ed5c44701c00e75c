//! Classical-quantum circuit representation and statevector simulation.

pub mod branch;
mod circuit;
mod gate;
mod hist;
mod json;
mod run;
mod state;

pub use circuit::{Circuit, CircuitBuilder, CircuitError, Instruction};
pub(crate) use circuit::invert_instructions;
pub use gate::GateKind;
pub use hist::{
    distribution_from_probs, max_deviation, read_distribution_csv, tv_distance, uniform, CsvError,
    Distribution, Histogram,
};
pub use json::JsonError;
pub use run::{run, run_with_cbits, sample, sample_cbits, shot_rng, RunRecord, SimError};
pub use state::{bitstring, StateError, StateVector};
