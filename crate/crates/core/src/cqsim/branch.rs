//! Exhaustive enumeration of every measurement, reset and coin-flip branch
//! of a circuit, with exact probability bookkeeping.

use super::circuit::Circuit;
use super::run::{check_width, pack, step, SimError};
use super::state::StateVector;

/// Branches whose probability falls to this level or below are dropped.
pub const PRUNE: f64 = 1e-14;

/// One complete path through the circuit.
#[derive(Debug)]
pub struct Leaf<'a> {
    pub probability: f64,
    pub cbits: &'a [bool],
    pub state: &'a StateVector,
}

/// Calls `visit` once per surviving leaf. Leaf probabilities sum to 1 up
/// to the pruned mass.
pub fn enumerate(
    circuit: &Circuit,
    initial: &StateVector,
    mut visit: impl FnMut(Leaf<'_>),
) -> Result<(), SimError> {
    check_width(circuit, initial)?;
    let mut stack = vec![(0usize, 1.0f64, initial.clone(), vec![false; circuit.n_cbits()])];
    let instrs = circuit.instructions();
    'paths: while let Some((mut pc, prob, mut state, mut cbits)) = stack.pop() {
        while pc < instrs.len() {
            let fork = step(&mut state, &mut cbits, &instrs[pc]);
            pc += 1;
            let Some(fork) = fork else { continue };
            let p1 = fork.p1().clamp(0.0, 1.0);
            let (p_one, p_zero) = (prob * p1, prob * (1.0 - p1));
            match (p_zero > PRUNE, p_one > PRUNE) {
                (true, true) => {
                    let mut one_state = state.clone();
                    let mut one_cbits = cbits.clone();
                    fork.resolve(&mut one_state, &mut one_cbits, true);
                    fork.resolve(&mut state, &mut cbits, false);
                    stack.push((pc, p_one, one_state, one_cbits));
                    stack.push((pc, p_zero, state, cbits));
                    continue 'paths;
                }
                (true, false) => fork.resolve(&mut state, &mut cbits, false),
                (false, true) => fork.resolve(&mut state, &mut cbits, true),
                (false, false) => continue 'paths,
            }
        }
        visit(Leaf { probability: prob, cbits: &cbits, state: &state });
    }
    Ok(())
}

/// Exact distribution of the listed cbits, indexed big-endian in list order.
pub fn cbit_distribution(
    circuit: &Circuit,
    initial: &StateVector,
    cbits: &[usize],
) -> Result<Vec<f64>, SimError> {
    let mut out = vec![0.0; 1 << cbits.len()];
    enumerate(circuit, initial, |leaf| out[pack(leaf.cbits, cbits)] += leaf.probability)?;
    Ok(out)
}

/// Exact distribution of the listed qubits in the final state, averaged over
/// every branch.
pub fn qubit_distribution(
    circuit: &Circuit,
    initial: &StateVector,
    qubits: &[usize],
) -> Result<Vec<f64>, SimError> {
    let mut out = vec![0.0; 1 << qubits.len()];
    enumerate(circuit, initial, |leaf| {
        for (o, p) in out.iter_mut().zip(leaf.state.marginal(qubits)) {
            *o += leaf.probability * p;
        }
    })?;
    Ok(out)
}

/// Exact joint distribution of the listed cbits followed by a final
/// measurement of the listed qubits.
pub fn joint_distribution(
    circuit: &Circuit,
    initial: &StateVector,
    cbits: &[usize],
    qubits: &[usize],
) -> Result<Vec<f64>, SimError> {
    let mut out = vec![0.0; 1 << (cbits.len() + qubits.len())];
    enumerate(circuit, initial, |leaf| {
        let high = pack(leaf.cbits, cbits) << qubits.len();
        for (v, p) in leaf.state.marginal(qubits).into_iter().enumerate() {
            out[high | v] += leaf.probability * p;
        }
    })?;
    Ok(out)
}
