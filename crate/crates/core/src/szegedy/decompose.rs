//! Multi-controlled gates in terms of Toffoli, CNOT and single-qubit gates.

use std::fmt;
use std::str::FromStr;

use super::SzegedyError;
use crate::cqsim::{Circuit, GateKind, Instruction};

/// How far gates are broken down.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// Toffoli gates stay as named instructions.
    Exact,
    /// Only Clifford gates plus `T`/`Tdg`.
    CliffordT,
}

impl FromStr for Level {
    type Err = SzegedyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Level::Exact),
            "clifford_t" | "clifford-t" => Ok(Level::CliffordT),
            other => Err(SzegedyError::InvalidGraph(format!("unknown compile level `{other}`"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Exact => "exact",
            Level::CliffordT => "clifford_t",
        })
    }
}

/// A control qubit and the value it must hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub on: bool,
}

impl Control {
    pub fn one(qubit: usize) -> Self {
        Control { qubit, on: true }
    }

    pub fn zero(qubit: usize) -> Self {
        Control { qubit, on: false }
    }
}

/// `A` with `H = A X A^†`, in time order.
const A: [GateKind; 6] = [GateKind::H, GateKind::Sdg, GateKind::H, GateKind::T, GateKind::H, GateKind::S];
/// `A^†` in time order.
const A_DAG: [GateKind; 6] = [GateKind::Sdg, GateKind::H, GateKind::Tdg, GateKind::H, GateKind::S, GateKind::H];

/// Gate stream with a shared pool of clean ancillas starting at
/// `ancilla_base`.
#[derive(Clone, Debug)]
pub struct Emitter {
    level: Level,
    ops: Vec<Instruction>,
    ancilla_base: usize,
    ancillas_used: usize,
}

impl Emitter {
    pub fn new(level: Level, ancilla_base: usize) -> Self {
        Emitter { level, ops: Vec::new(), ancilla_base, ancillas_used: 0 }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    /// Largest number of ancillas any single gate borrowed.
    pub fn ancillas_used(&self) -> usize {
        self.ancillas_used
    }

    pub fn ops(&self) -> &[Instruction] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<Instruction> {
        self.ops
    }

    pub fn extend(&mut self, ops: impl IntoIterator<Item = Instruction>) {
        self.ops.extend(ops);
    }

    fn borrow(&mut self, k: usize) -> Vec<usize> {
        self.ancillas_used = self.ancillas_used.max(k);
        (self.ancilla_base..self.ancilla_base + k).collect()
    }

    pub fn gate(&mut self, gate: GateKind, qubits: &[usize]) {
        self.ops.push(Instruction::gate(gate, qubits));
    }

    pub fn x(&mut self, q: usize) {
        self.gate(GateKind::X, &[q]);
    }

    pub fn h(&mut self, q: usize) {
        self.gate(GateKind::H, &[q]);
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        self.gate(GateKind::Cnot, &[c, t]);
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        match self.level {
            Level::Exact => self.gate(GateKind::Swap, &[a, b]),
            Level::CliffordT => {
                self.cnot(a, b);
                self.cnot(b, a);
                self.cnot(a, b);
            }
        }
    }

    /// Toffoli, expanded into 7 `T`/`Tdg` and 6 CNOTs at Clifford+T level.
    pub fn toffoli(&mut self, a: usize, b: usize, c: usize) {
        if self.level == Level::Exact {
            self.gate(GateKind::Toffoli, &[a, b, c]);
            return;
        }
        use GateKind::{Cnot, Tdg, H, T};
        let seq: [(GateKind, &[usize]); 15] = [
            (H, &[c]),
            (Cnot, &[b, c]),
            (Tdg, &[c]),
            (Cnot, &[a, c]),
            (T, &[c]),
            (Cnot, &[b, c]),
            (Tdg, &[c]),
            (Cnot, &[a, c]),
            (T, &[b]),
            (T, &[c]),
            (H, &[c]),
            (Cnot, &[a, b]),
            (T, &[a]),
            (Tdg, &[b]),
            (Cnot, &[a, b]),
        ];
        for (g, q) in seq {
            self.gate(g, q);
        }
    }

    /// Runs `body` with every 0-control flipped so that all controls read 1.
    fn with_polarity(&mut self, controls: &[Control], body: impl FnOnce(&mut Self, &[usize])) {
        let flips: Vec<usize> = controls.iter().filter(|c| !c.on).map(|c| c.qubit).collect();
        flips.iter().for_each(|&q| self.x(q));
        let qubits: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
        body(self, &qubits);
        flips.iter().for_each(|&q| self.x(q));
    }

    /// Multi-controlled X: `2 n_c - 3` Toffolis on `n_c - 2` ancillas.
    pub fn mcx(&mut self, controls: &[Control], target: usize) {
        self.with_polarity(controls, |e, cs| e.mcx_positive(cs, target));
    }

    fn mcx_positive(&mut self, cs: &[usize], target: usize) {
        match cs.len() {
            0 => self.x(target),
            1 => self.cnot(cs[0], target),
            2 => self.toffoli(cs[0], cs[1], target),
            nc => {
                let anc = self.borrow(nc - 2);
                let chain = self.and_chain(cs, &anc);
                self.toffoli(cs[nc - 1], anc[nc - 3], target);
                self.unchain(&chain);
            }
        }
    }

    /// Computes the AND of `cs[..=k]` into `anc[k-1]` for every `k`, one
    /// Toffoli per ancilla. Returns the Toffolis for uncomputation.
    fn and_chain(&mut self, cs: &[usize], anc: &[usize]) -> Vec<[usize; 3]> {
        let mut chain = Vec::with_capacity(anc.len());
        for (k, &a) in anc.iter().enumerate() {
            let prev = if k == 0 { cs[0] } else { anc[k - 1] };
            let t = [cs[k + 1], prev, a];
            self.toffoli(t[0], t[1], t[2]);
            chain.push(t);
        }
        chain
    }

    fn unchain(&mut self, chain: &[[usize; 3]]) {
        for t in chain.iter().rev() {
            self.toffoli(t[0], t[1], t[2]);
        }
    }

    /// Controlled-H through `H = A X A^†`: 2 `T`/`Tdg`.
    pub fn ch(&mut self, control: usize, target: usize) {
        A_DAG.iter().for_each(|&g| self.gate(g, &[target]));
        self.cnot(control, target);
        A.iter().for_each(|&g| self.gate(g, &[target]));
    }

    /// Controlled `RY(theta)` from two CNOTs and two half-angle rotations.
    pub fn cry(&mut self, control: usize, target: usize, theta: f64) {
        self.gate(GateKind::Ry(theta / 2.0), &[target]);
        self.cnot(control, target);
        self.gate(GateKind::Ry(-theta / 2.0), &[target]);
        self.cnot(control, target);
    }

    /// A singly-controlled `u` (X, Z, H or RY).
    pub fn controlled(&mut self, u: GateKind, control: usize, target: usize) -> Result<(), SzegedyError> {
        match u {
            GateKind::X => self.cnot(control, target),
            GateKind::Z => {
                self.h(target);
                self.cnot(control, target);
                self.h(target);
            }
            GateKind::H => self.ch(control, target),
            GateKind::Ry(theta) => self.cry(control, target, theta),
            other => return Err(SzegedyError::Unsupported(format!("no controlled form for `{other}`"))),
        }
        Ok(())
    }

    /// `u` on every target, all controlled by `controls`: `2 n_c - 2`
    /// Toffolis around singly-controlled copies of `u` on `n_c - 1` ancillas.
    pub fn mcu(&mut self, controls: &[Control], u: GateKind, targets: &[usize]) -> Result<(), SzegedyError> {
        let mut result = Ok(());
        self.with_polarity(controls, |e, cs| {
            result = e.mcu_positive(cs, u, targets);
        });
        result
    }

    fn mcu_positive(&mut self, cs: &[usize], u: GateKind, targets: &[usize]) -> Result<(), SzegedyError> {
        match cs.len() {
            0 => targets.iter().for_each(|&t| self.gate(u, &[t])),
            1 => {
                for &t in targets {
                    self.controlled(u, cs[0], t)?;
                }
            }
            nc => {
                let anc = self.borrow(nc - 1);
                let chain = self.and_chain(cs, &anc);
                for &t in targets {
                    self.controlled(u, anc[nc - 2], t)?;
                }
                self.unchain(&chain);
            }
        }
        Ok(())
    }

    /// Multi-controlled H on `targets`. A single target with two or more
    /// controls goes through `A`, a multi-controlled X and `A^†`.
    pub fn mch(&mut self, controls: &[Control], targets: &[usize]) {
        if targets.len() == 1 && controls.len() >= 2 {
            let t = targets[0];
            A_DAG.iter().for_each(|&g| self.gate(g, &[t]));
            self.mcx(controls, t);
            A.iter().for_each(|&g| self.gate(g, &[t]));
        } else {
            self.mcu(controls, GateKind::H, targets).expect("H has a controlled form");
        }
    }

    pub fn mcry(&mut self, controls: &[Control], theta: f64, target: usize) {
        self.mcu(controls, GateKind::Ry(theta), &[target]).expect("RY has a controlled form");
    }
}

/// A standalone decomposition: controls on qubits `0..n_c`, target on
/// `n_c` (or the listed targets after it), ancillas after that.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub circuit: Circuit,
    pub ancillas: usize,
}

impl Decomposition {
    pub fn toffoli_count(&self) -> usize {
        self.circuit.count_gate(|g| *g == GateKind::Toffoli)
    }
}

fn finish(e: Emitter, data_qubits: usize) -> Decomposition {
    let ancillas = e.ancillas_used();
    let circuit = Circuit::new(data_qubits + ancillas, 0, e.into_ops()).expect("emitted indices are in range");
    Decomposition { circuit, ancillas }
}

/// `n_c`-controlled X as Toffolis.
pub fn decompose_mcx(n_c: usize) -> Result<Decomposition, SzegedyError> {
    if n_c < 2 {
        return Err(SzegedyError::Unsupported(format!("multi-controlled X needs at least 2 controls, got {n_c}")));
    }
    let mut e = Emitter::new(Level::Exact, n_c + 1);
    let controls: Vec<Control> = (0..n_c).map(Control::one).collect();
    e.mcx(&controls, n_c);
    Ok(finish(e, n_c + 1))
}

/// `n_c`-controlled `u` as Toffolis plus one singly-controlled `u`.
pub fn decompose_mcu(n_c: usize, u: GateKind) -> Result<Decomposition, SzegedyError> {
    if n_c < 1 {
        return Err(SzegedyError::Unsupported("multi-controlled U needs at least 1 control".into()));
    }
    let mut e = Emitter::new(Level::Exact, n_c + 1);
    let controls: Vec<Control> = (0..n_c).map(Control::one).collect();
    e.mcu(&controls, u, &[n_c])?;
    Ok(finish(e, n_c + 1))
}

/// Controlled `RY(theta)`, control on qubit 0 and target on qubit 1.
pub fn decompose_cry(theta: f64) -> Vec<Instruction> {
    let mut e = Emitter::new(Level::Exact, 2);
    e.cry(0, 1, theta);
    e.into_ops()
}

/// Clifford+T expansion of a Toffoli on qubits `(0, 1, 2)`.
pub fn toffoli_expansion() -> Vec<Instruction> {
    let mut e = Emitter::new(Level::CliffordT, 3);
    e.toffoli(0, 1, 2);
    e.into_ops()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toffoli_and_ancilla_counts() {
        let d = decompose_mcx(2).unwrap();
        assert_eq!((d.toffoli_count(), d.ancillas), (1, 0));
        let d = decompose_mcx(5).unwrap();
        assert_eq!((d.toffoli_count(), d.ancillas), (7, 3));
        let d = decompose_mcx(4).unwrap();
        assert_eq!((d.toffoli_count(), d.ancillas), (5, 2));
        assert!(decompose_mcx(1).is_err());

        let d = decompose_mcu(5, GateKind::H).unwrap();
        assert_eq!((d.toffoli_count(), d.ancillas), (8, 4));
        let d = decompose_mcu(1, GateKind::H).unwrap();
        assert_eq!((d.toffoli_count(), d.ancillas), (0, 0));
    }

    #[test]
    fn toffoli_expansion_has_seven_t_gates() {
        let ops = toffoli_expansion();
        assert_eq!(ops.len(), 15);
        assert_eq!(ops.iter().filter(|i| i.gate_kind().is_some_and(|g| g.is_t_type())).count(), 7);
    }

    #[test]
    fn controlled_h_costs_two_t() {
        let mut e = Emitter::new(Level::CliffordT, 2);
        e.ch(0, 1);
        assert_eq!(e.ops().iter().filter(|i| i.gate_kind().is_some_and(|g| g.is_t_type())).count(), 2);
    }
}
