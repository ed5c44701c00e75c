use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::circuit::{Circuit, Instruction};
use super::hist::Histogram;
use super::state::{StateError, StateVector};

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("circuit has {circuit} qubits but the initial state has {state}")]
    WidthMismatch { circuit: usize, state: usize },
    #[error("circuit has {circuit} cbits but {given} initial cbits were given")]
    CbitMismatch { circuit: usize, given: usize },
    #[error("instruction {index}: {source}")]
    Instruction { index: usize, source: StateError },
    #[error("no qubits or cbits selected for sampling")]
    NothingMeasured,
    #[error("shot count must be at least 1")]
    NoShots,
}

/// Outcome of one run of a circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub final_state: StateVector,
    pub cbits: Vec<bool>,
    /// `(instruction index, bit)` for every measurement and random-bit draw.
    pub measurement_log: Vec<(usize, bool)>,
}

impl RunRecord {
    /// Packs the listed cbits into an integer, first cbit most significant.
    pub fn cbit_value(&self, cbits: &[usize]) -> usize {
        pack(&self.cbits, cbits)
    }
}

pub(crate) fn pack(bits: &[bool], which: &[usize]) -> usize {
    which.iter().fold(0, |acc, &c| (acc << 1) | usize::from(bits[c]))
}

/// A point where the run must pick one of two outcomes.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Fork {
    Measure { qubit: usize, cbit: usize, p1: f64 },
    Reset { qubit: usize, p1: f64 },
    Coin { cbit: usize },
}

impl Fork {
    pub(crate) fn p1(&self) -> f64 {
        match *self {
            Fork::Measure { p1, .. } | Fork::Reset { p1, .. } => p1,
            Fork::Coin { .. } => 0.5,
        }
    }

    pub(crate) fn logged(&self) -> bool {
        !matches!(self, Fork::Reset { .. })
    }

    pub(crate) fn resolve(&self, state: &mut StateVector, cbits: &mut [bool], outcome: bool) {
        match *self {
            Fork::Measure { qubit, cbit, .. } => {
                state.collapse(qubit, outcome);
                cbits[cbit] = outcome;
            }
            Fork::Reset { qubit, .. } => state.reset_to(qubit, outcome),
            Fork::Coin { cbit } => cbits[cbit] = outcome,
        }
    }
}

/// Executes one instruction. Deterministic instructions are applied in
/// place; random ones are returned as a [`Fork`] to be resolved by the
/// caller.
pub(crate) fn step(state: &mut StateVector, cbits: &mut [bool], instr: &Instruction) -> Option<Fork> {
    match instr {
        Instruction::Gate { gate, qubits } => state.apply_unchecked(*gate, qubits),
        Instruction::Conditional { gate, qubits, cbit } => {
            if cbits[*cbit] {
                state.apply_unchecked(*gate, qubits);
            }
        }
        Instruction::Measure { qubit, cbit } => {
            return Some(Fork::Measure { qubit: *qubit, cbit: *cbit, p1: state.prob_one(*qubit) })
        }
        Instruction::Reset { qubit } => {
            return Some(Fork::Reset { qubit: *qubit, p1: state.prob_one(*qubit) })
        }
        Instruction::ClassicalRandomInit { cbit } => return Some(Fork::Coin { cbit: *cbit }),
        Instruction::ClassicalNot { cbit } => cbits[*cbit] ^= true,
        Instruction::ClassicalCnot { control, target } => cbits[*target] ^= cbits[*control],
        Instruction::ClassicalSwap { a, b } => cbits.swap(*a, *b),
        Instruction::ClassicalReset { cbit } => cbits[*cbit] = false,
    }
    None
}

pub(crate) fn check_width(circuit: &Circuit, state: &StateVector) -> Result<(), SimError> {
    if circuit.n_qubits() != state.n_qubits() {
        return Err(SimError::WidthMismatch {
            circuit: circuit.n_qubits(),
            state: state.n_qubits(),
        });
    }
    Ok(())
}

/// Runs `circuit` on `initial` with all cbits starting at 0.
pub fn run(circuit: &Circuit, initial: StateVector, rng: &mut impl Rng) -> Result<RunRecord, SimError> {
    let cbits = vec![false; circuit.n_cbits()];
    run_with_cbits(circuit, initial, cbits, rng)
}

/// Runs `circuit` with a caller-provided classical register.
pub fn run_with_cbits(
    circuit: &Circuit,
    initial: StateVector,
    mut cbits: Vec<bool>,
    rng: &mut impl Rng,
) -> Result<RunRecord, SimError> {
    check_width(circuit, &initial)?;
    if cbits.len() != circuit.n_cbits() {
        return Err(SimError::CbitMismatch { circuit: circuit.n_cbits(), given: cbits.len() });
    }
    let mut state = initial;
    let mut log = Vec::new();
    for (index, instr) in circuit.instructions().iter().enumerate() {
        if let Some(fork) = step(&mut state, &mut cbits, instr) {
            let outcome = rng.random::<f64>() < fork.p1();
            fork.resolve(&mut state, &mut cbits, outcome);
            if fork.logged() {
                log.push((index, outcome));
            }
        }
    }
    Ok(RunRecord { final_state: state, cbits, measurement_log: log })
}

/// RNG for shot `shot` of a seeded experiment: a ChaCha8 stream keyed by
/// `seed`, with the shot index selecting the stream.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Runs `shots` independent shots and measures `measured_qubits` of each
/// final state.
pub fn sample(
    circuit: &Circuit,
    initial: &StateVector,
    shots: u64,
    measured_qubits: &[usize],
    seed: u64,
) -> Result<Histogram, SimError> {
    if measured_qubits.is_empty() {
        return Err(SimError::NothingMeasured);
    }
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    check_width(circuit, initial)?;
    for &q in measured_qubits {
        if q >= circuit.n_qubits() {
            return Err(SimError::Instruction {
                index: circuit.len(),
                source: StateError::QubitOutOfRange { qubit: q, n_qubits: circuit.n_qubits() },
            });
        }
    }
    let mut hist = Histogram::new(measured_qubits.len());
    for shot in 0..shots {
        let mut rng = shot_rng(seed, shot);
        let mut record = run(circuit, initial.clone(), &mut rng)?;
        let value = measured_qubits.iter().try_fold(0usize, |acc, &q| {
            record.final_state.measure(q, &mut rng).map(|b| (acc << 1) | usize::from(b))
        });
        let value = value.map_err(|source| SimError::Instruction { index: circuit.len(), source })?;
        hist.record(value);
    }
    Ok(hist)
}

/// Runs `shots` independent shots and histograms the listed cbits.
pub fn sample_cbits(
    circuit: &Circuit,
    initial: &StateVector,
    shots: u64,
    cbits: &[usize],
    seed: u64,
) -> Result<Histogram, SimError> {
    if cbits.is_empty() {
        return Err(SimError::NothingMeasured);
    }
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let mut hist = Histogram::new(cbits.len());
    for shot in 0..shots {
        let record = run(circuit, initial.clone(), &mut shot_rng(seed, shot))?;
        hist.record(record.cbit_value(cbits));
    }
    Ok(hist)
}
