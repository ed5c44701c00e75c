#![allow(dead_code)]

use proptest::prelude::*;

use cqhe::cqsim::{GateKind, Instruction};

pub const CLIFFORD_1Q: [GateKind; 6] = [GateKind::X, GateKind::Z, GateKind::H, GateKind::S, GateKind::Sdg, GateKind::H];

/// A gate from `pool` (two-qubit gates need `n >= 2`) on distinct qubits.
pub fn gate_on(n: usize, pool: Vec<GateKind>) -> impl Strategy<Value = Instruction> {
    (prop::sample::select(pool), 0..n, 1..n.max(2)).prop_map(move |(g, a, off)| {
        if g.arity() == 2 && n >= 2 {
            Instruction::gate(g, &[a, (a + off) % n])
        } else if g.arity() == 2 {
            Instruction::gate(GateKind::H, &[a])
        } else {
            Instruction::gate(g, &[a])
        }
    })
}

pub fn clifford_pool() -> Vec<GateKind> {
    let mut v = CLIFFORD_1Q.to_vec();
    v.extend([GateKind::Cnot, GateKind::Cnot, GateKind::Swap]);
    v
}

pub fn clifford_t_pool() -> Vec<GateKind> {
    let mut v = clifford_pool();
    v.extend([GateKind::T, GateKind::Tdg]);
    v
}
