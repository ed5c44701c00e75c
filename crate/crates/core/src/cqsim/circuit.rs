use std::fmt;

use thiserror::Error;

use super::gate::GateKind;

/// One step of a classical-quantum circuit.
///
/// Classical gates act on the classical register directly instead of being
/// emulated through ancilla qubits.
#[derive(Clone, Debug, PartialEq)]
pub enum Instruction {
    Gate { gate: GateKind, qubits: Vec<usize> },
    Measure { qubit: usize, cbit: usize },
    Reset { qubit: usize },
    /// Applies `gate` iff classical bit `cbit` holds 1.
    Conditional { gate: GateKind, qubits: Vec<usize>, cbit: usize },
    ClassicalNot { cbit: usize },
    ClassicalCnot { control: usize, target: usize },
    ClassicalSwap { a: usize, b: usize },
    ClassicalReset { cbit: usize },
    /// Sets `cbit` to a fair coin flip.
    ClassicalRandomInit { cbit: usize },
}

impl Instruction {
    pub fn gate(gate: GateKind, qubits: &[usize]) -> Self {
        Instruction::Gate { gate, qubits: qubits.to_vec() }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Instruction::Gate { qubits, .. } | Instruction::Conditional { qubits, .. } => {
                qubits.clone()
            }
            Instruction::Measure { qubit, .. } | Instruction::Reset { qubit } => vec![*qubit],
            _ => Vec::new(),
        }
    }

    pub fn cbits(&self) -> Vec<usize> {
        match self {
            Instruction::Measure { cbit, .. }
            | Instruction::Conditional { cbit, .. }
            | Instruction::ClassicalNot { cbit }
            | Instruction::ClassicalReset { cbit }
            | Instruction::ClassicalRandomInit { cbit } => vec![*cbit],
            Instruction::ClassicalCnot { control, target } => vec![*control, *target],
            Instruction::ClassicalSwap { a, b } => vec![*a, *b],
            _ => Vec::new(),
        }
    }

    /// The quantum gate carried by this instruction, if any.
    pub fn gate_kind(&self) -> Option<GateKind> {
        match self {
            Instruction::Gate { gate, .. } | Instruction::Conditional { gate, .. } => Some(*gate),
            _ => None,
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(
            self,
            Instruction::ClassicalNot { .. }
                | Instruction::ClassicalCnot { .. }
                | Instruction::ClassicalSwap { .. }
                | Instruction::ClassicalReset { .. }
                | Instruction::ClassicalRandomInit { .. }
        )
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Gate { gate, qubits } => write!(f, "{gate} q{qubits:?}"),
            Instruction::Measure { qubit, cbit } => write!(f, "measure q{qubit} -> c{cbit}"),
            Instruction::Reset { qubit } => write!(f, "reset q{qubit}"),
            Instruction::Conditional { gate, qubits, cbit } => {
                write!(f, "if c{cbit}: {gate} q{qubits:?}")
            }
            Instruction::ClassicalNot { cbit } => write!(f, "not c{cbit}"),
            Instruction::ClassicalCnot { control, target } => {
                write!(f, "c{target} ^= c{control}")
            }
            Instruction::ClassicalSwap { a, b } => write!(f, "swap c{a}, c{b}"),
            Instruction::ClassicalReset { cbit } => write!(f, "c{cbit} = 0"),
            Instruction::ClassicalRandomInit { cbit } => write!(f, "c{cbit} = random"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("instruction {index}: qubit {qubit} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, qubit: usize, n_qubits: usize },
    #[error("instruction {index}: cbit {cbit} out of range for {n_cbits} cbits")]
    CbitOutOfRange { index: usize, cbit: usize, n_cbits: usize },
    #[error("instruction {index}: {gate} expects {expected} qubits, got {got}")]
    Arity { index: usize, gate: GateKind, expected: usize, got: usize },
    #[error("instruction {index}: repeated qubit {qubit}")]
    DuplicateQubit { index: usize, qubit: usize },
    #[error("instruction {index}: {what}")]
    Unsupported { index: usize, what: String },
}

/// An immutable, validated instruction list over `n_qubits` qubits and
/// `n_cbits` classical bits.
///
/// Qubit 0 is the leftmost factor of every ket (big-endian), so it is the
/// most significant bit of a basis-state index and the first character of
/// every bitstring this crate prints.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    n_cbits: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(
        n_qubits: usize,
        n_cbits: usize,
        instructions: Vec<Instruction>,
    ) -> Result<Self, CircuitError> {
        for (index, instr) in instructions.iter().enumerate() {
            validate(index, instr, n_qubits, n_cbits)?;
        }
        Ok(Circuit { n_qubits, n_cbits, instructions })
    }

    pub fn empty(n_qubits: usize, n_cbits: usize) -> Self {
        Circuit { n_qubits, n_cbits, instructions: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_cbits(&self) -> usize {
        self.n_cbits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Number of `T` and `Tdg` instructions (unconditional and conditional).
    pub fn t_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| i.gate_kind().is_some_and(|g| g.is_t_type()))
            .count()
    }

    pub fn count_gate(&self, pred: impl Fn(&GateKind) -> bool) -> usize {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::Gate { gate, .. } if pred(gate)))
            .count()
    }

    pub fn count(&self, pred: impl Fn(&Instruction) -> bool) -> usize {
        self.instructions.iter().filter(|i| pred(i)).count()
    }

    /// True when the circuit only contains unconditional quantum gates.
    pub fn is_unitary(&self) -> bool {
        self.instructions.iter().all(|i| matches!(i, Instruction::Gate { .. }))
    }

    /// Reversed circuit with every gate replaced by its inverse.
    pub fn inverse(&self) -> Result<Circuit, CircuitError> {
        let instructions = invert_instructions(&self.instructions)?;
        Ok(Circuit { n_qubits: self.n_qubits, n_cbits: self.n_cbits, instructions })
    }

    /// Same instructions on a wider register; existing indices keep their meaning.
    pub fn widened(&self, n_qubits: usize, n_cbits: usize) -> Result<Circuit, CircuitError> {
        Circuit::new(
            n_qubits.max(self.n_qubits),
            n_cbits.max(self.n_cbits),
            self.instructions.clone(),
        )
    }
}

pub(crate) fn invert_instructions(
    instructions: &[Instruction],
) -> Result<Vec<Instruction>, CircuitError> {
    instructions
        .iter()
        .enumerate()
        .rev()
        .map(|(index, instr)| match instr {
            Instruction::Gate { gate, qubits } => {
                Ok(Instruction::Gate { gate: gate.inverse(), qubits: qubits.clone() })
            }
            other => Err(CircuitError::Unsupported {
                index,
                what: format!("cannot invert non-unitary instruction `{other}`"),
            }),
        })
        .collect()
}

fn validate(
    index: usize,
    instr: &Instruction,
    n_qubits: usize,
    n_cbits: usize,
) -> Result<(), CircuitError> {
    if let Some(gate) = instr.gate_kind() {
        let qubits = instr.qubits();
        if qubits.len() != gate.arity() {
            return Err(CircuitError::Arity {
                index,
                gate,
                expected: gate.arity(),
                got: qubits.len(),
            });
        }
        for (k, q) in qubits.iter().enumerate() {
            if qubits[..k].contains(q) {
                return Err(CircuitError::DuplicateQubit { index, qubit: *q });
            }
        }
    }
    for qubit in instr.qubits() {
        if qubit >= n_qubits {
            return Err(CircuitError::QubitOutOfRange { index, qubit, n_qubits });
        }
    }
    for cbit in instr.cbits() {
        if cbit >= n_cbits {
            return Err(CircuitError::CbitOutOfRange { index, cbit, n_cbits });
        }
    }
    Ok(())
}

/// Incremental construction of a [`Circuit`]; validation happens in `build`.
#[derive(Clone, Debug, Default)]
pub struct CircuitBuilder {
    n_qubits: usize,
    n_cbits: usize,
    instructions: Vec<Instruction>,
}

impl CircuitBuilder {
    pub fn new(n_qubits: usize, n_cbits: usize) -> Self {
        CircuitBuilder { n_qubits, n_cbits, instructions: Vec::new() }
    }

    pub fn push(&mut self, instr: Instruction) -> &mut Self {
        self.instructions.push(instr);
        self
    }

    pub fn extend(&mut self, instrs: impl IntoIterator<Item = Instruction>) -> &mut Self {
        self.instructions.extend(instrs);
        self
    }

    pub fn gate(&mut self, gate: GateKind, qubits: &[usize]) -> &mut Self {
        self.push(Instruction::gate(gate, qubits))
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.gate(GateKind::X, &[q])
    }

    pub fn z(&mut self, q: usize) -> &mut Self {
        self.gate(GateKind::Z, &[q])
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.gate(GateKind::H, &[q])
    }

    pub fn s(&mut self, q: usize) -> &mut Self {
        self.gate(GateKind::S, &[q])
    }

    pub fn sdg(&mut self, q: usize) -> &mut Self {
        self.gate(GateKind::Sdg, &[q])
    }

    pub fn t(&mut self, q: usize) -> &mut Self {
        self.gate(GateKind::T, &[q])
    }

    pub fn tdg(&mut self, q: usize) -> &mut Self {
        self.gate(GateKind::Tdg, &[q])
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> &mut Self {
        self.gate(GateKind::Cnot, &[control, target])
    }

    pub fn swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.gate(GateKind::Swap, &[a, b])
    }

    pub fn toffoli(&mut self, a: usize, b: usize, target: usize) -> &mut Self {
        self.gate(GateKind::Toffoli, &[a, b, target])
    }

    pub fn ry(&mut self, theta: f64, q: usize) -> &mut Self {
        self.gate(GateKind::Ry(theta), &[q])
    }

    pub fn measure(&mut self, qubit: usize, cbit: usize) -> &mut Self {
        self.push(Instruction::Measure { qubit, cbit })
    }

    pub fn reset(&mut self, qubit: usize) -> &mut Self {
        self.push(Instruction::Reset { qubit })
    }

    pub fn c_if(&mut self, gate: GateKind, qubits: &[usize], cbit: usize) -> &mut Self {
        self.push(Instruction::Conditional { gate, qubits: qubits.to_vec(), cbit })
    }

    pub fn c_not(&mut self, cbit: usize) -> &mut Self {
        self.push(Instruction::ClassicalNot { cbit })
    }

    pub fn c_cnot(&mut self, control: usize, target: usize) -> &mut Self {
        self.push(Instruction::ClassicalCnot { control, target })
    }

    pub fn c_swap(&mut self, a: usize, b: usize) -> &mut Self {
        self.push(Instruction::ClassicalSwap { a, b })
    }

    pub fn c_reset(&mut self, cbit: usize) -> &mut Self {
        self.push(Instruction::ClassicalReset { cbit })
    }

    pub fn c_random(&mut self, cbit: usize) -> &mut Self {
        self.push(Instruction::ClassicalRandomInit { cbit })
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn build(self) -> Result<Circuit, CircuitError> {
        Circuit::new(self.n_qubits, self.n_cbits, self.instructions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_indices() {
        let err = Circuit::new(2, 1, vec![Instruction::gate(GateKind::H, &[2])]).unwrap_err();
        assert!(matches!(err, CircuitError::QubitOutOfRange { qubit: 2, .. }));
        let err = Circuit::new(2, 1, vec![Instruction::Measure { qubit: 0, cbit: 1 }]).unwrap_err();
        assert!(matches!(err, CircuitError::CbitOutOfRange { cbit: 1, .. }));
    }

    #[test]
    fn rejects_arity_mismatch_and_duplicates() {
        let err = Circuit::new(2, 0, vec![Instruction::gate(GateKind::Cnot, &[0])]).unwrap_err();
        assert!(matches!(err, CircuitError::Arity { expected: 2, got: 1, .. }));
        let err = Circuit::new(2, 0, vec![Instruction::gate(GateKind::Cnot, &[1, 1])]).unwrap_err();
        assert!(matches!(err, CircuitError::DuplicateQubit { qubit: 1, .. }));
    }

    #[test]
    fn inverse_reverses_and_daggers() {
        let mut b = CircuitBuilder::new(2, 0);
        b.h(0).t(1).cnot(0, 1).ry(0.5, 0);
        let inv = b.build().unwrap().inverse().unwrap();
        assert_eq!(
            inv.instructions(),
            &[
                Instruction::gate(GateKind::Ry(-0.5), &[0]),
                Instruction::gate(GateKind::Cnot, &[0, 1]),
                Instruction::gate(GateKind::Tdg, &[1]),
                Instruction::gate(GateKind::H, &[0]),
            ]
        );
    }

    #[test]
    fn inverse_refuses_measurements() {
        let mut b = CircuitBuilder::new(1, 1);
        b.h(0).measure(0, 0);
        assert!(b.build().unwrap().inverse().is_err());
    }
}
