//! Szegedy walk circuits for cycle, complete and complete-bipartite graphs,
//! their Clifford+T decompositions and closed-form T-counts.

mod decompose;
mod graph;
mod tcount;
mod walk;

use thiserror::Error;

pub use decompose::{decompose_cry, decompose_mcu, decompose_mcx, toffoli_expansion, Control, Decomposition, Emitter, Level};
pub use graph::GraphSpec;
pub use tcount::{pplus_count, rotation_cost, t_count, CompleteBreakdown, SymbolicCount, TCountReport};
pub use walk::{
    build_diffusion, build_increment, build_semiclassical, build_update, build_walk_step, register_superposition, restricted_unitary,
    walk_initial_state, SemiclassicalSchedule, WalkCircuit,
};

#[derive(Debug, Error)]
pub enum SzegedyError {
    #[error("{0}")]
    InvalidGraph(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0} needs arbitrary-angle rotations, which have no Clifford+T form here")]
    SynthesisUnsupported(GraphSpec),
}
