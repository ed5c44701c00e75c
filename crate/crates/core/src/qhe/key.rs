use std::fmt;

use rand::Rng;

use super::QheError;
use crate::cqsim::{GateKind, StateVector};

/// Quantum one-time-pad key: qubit `i` is encrypted as `X^x_i Z^z_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliKey {
    x: Vec<bool>,
    z: Vec<bool>,
}

impl PauliKey {
    pub fn new(x: Vec<bool>, z: Vec<bool>) -> Result<Self, QheError> {
        if x.len() != z.len() {
            return Err(QheError::KeyLength { expected: x.len(), got: z.len() });
        }
        Ok(PauliKey { x, z })
    }

    pub fn zero(n: usize) -> Self {
        PauliKey { x: vec![false; n], z: vec![false; n] }
    }

    /// Key from the packed vector `(x_0..x_{n-1}, z_0..z_{n-1})`.
    pub fn from_bits(bits: &[bool]) -> Self {
        let n = bits.len() / 2;
        PauliKey { x: bits[..n].to_vec(), z: bits[n..2 * n].to_vec() }
    }

    pub fn to_bits(&self) -> Vec<bool> {
        self.x.iter().chain(&self.z).copied().collect()
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[bool] {
        &self.x
    }

    pub fn z(&self) -> &[bool] {
        &self.z
    }

    pub fn x_mut(&mut self) -> &mut [bool] {
        &mut self.x
    }

    pub fn z_mut(&mut self) -> &mut [bool] {
        &mut self.z
    }

    fn check(&self, qubits: &[usize]) -> Result<(), QheError> {
        match qubits.iter().find(|&&q| q >= self.n()) {
            Some(&q) => Err(QheError::KeyIndex { qubit: q, n: self.n() }),
            None => Ok(()),
        }
    }

    /// Key after the server applies a Clifford gate to the encrypted data.
    pub fn update_clifford(&mut self, gate: GateKind, qubits: &[usize]) -> Result<(), QheError> {
        if !gate.is_clifford() {
            return Err(QheError::NotClifford(gate));
        }
        if qubits.len() != gate.arity() {
            return Err(QheError::KeyIndex { qubit: qubits.len(), n: gate.arity() });
        }
        self.check(qubits)?;
        match gate {
            GateKind::X | GateKind::Z => {}
            GateKind::H => {
                let i = qubits[0];
                std::mem::swap(&mut self.x[i], &mut self.z[i]);
            }
            GateKind::S | GateKind::Sdg => {
                let i = qubits[0];
                self.z[i] ^= self.x[i];
            }
            GateKind::Cnot => {
                let (i, j) = (qubits[0], qubits[1]);
                self.z[i] ^= self.z[j];
                self.x[j] ^= self.x[i];
            }
            GateKind::Swap => {
                let (i, j) = (qubits[0], qubits[1]);
                self.x.swap(i, j);
                self.z.swap(i, j);
            }
            _ => unreachable!("filtered by is_clifford"),
        }
        Ok(())
    }

    /// Key after a `T` (or `Tdg`) evaluated through a Bell register.
    pub fn update_t(&mut self, qubit: usize, outcome: BellOutcome, dagger: bool) -> Result<(), QheError> {
        self.check(&[qubit])?;
        let (x, z) = (self.x[qubit], self.z[qubit]);
        self.x[qubit] = x ^ outcome.r_a;
        self.z[qubit] = if dagger { z ^ outcome.r_b } else { x ^ z ^ outcome.r_b };
        Ok(())
    }

    /// Key after a measurement or reset of an encrypted qubit.
    pub fn update_nonunitary(&mut self, op: NonUnitary, qubit: usize) -> Result<(), QheError> {
        self.check(&[qubit])?;
        self.z[qubit] = false;
        if op == NonUnitary::Reset {
            self.x[qubit] = false;
        }
        Ok(())
    }
}

impl fmt::Display for PauliKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x={} z={}", bits_to_string(&self.x), bits_to_string(&self.z))
    }
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonUnitary {
    Measure,
    Reset,
}

/// Result of measuring Bell register `bell_index` (1-based, in circuit
/// order of the `T`/`Tdg` gates).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BellOutcome {
    pub r_a: bool,
    pub r_b: bool,
    pub bell_index: usize,
}

/// Uniformly random key on `n` qubits.
pub fn gen_key(n: usize, rng: &mut impl Rng) -> Result<PauliKey, QheError> {
    if n == 0 {
        return Err(QheError::NoQubits);
    }
    let x = (0..n).map(|_| rng.random::<bool>()).collect();
    let z = (0..n).map(|_| rng.random::<bool>()).collect();
    Ok(PauliKey { x, z })
}

/// Applies `X^x Z^z` to each qubit of the state (Z first).
pub fn encrypt(state: &StateVector, key: &PauliKey) -> Result<StateVector, QheError> {
    if state.n_qubits() != key.n() {
        return Err(QheError::KeyLength { expected: state.n_qubits(), got: key.n() });
    }
    let mut out = state.clone();
    encrypt_in_place(&mut out, key, 0);
    Ok(out)
}

/// Applies `X^x_i Z^z_i` to qubit `offset + i`.
pub(crate) fn encrypt_in_place(state: &mut StateVector, key: &PauliKey, offset: usize) {
    for i in 0..key.n() {
        if key.z[i] {
            state.apply_gate(GateKind::Z, &[offset + i]).expect("key fits the register");
        }
        if key.x[i] {
            state.apply_gate(GateKind::X, &[offset + i]).expect("key fits the register");
        }
    }
}

/// Removes the pad: applies `(X^x Z^z)^† = Z^z X^x` on qubit `offset + i`.
pub fn decrypt_in_place(state: &mut StateVector, key: &PauliKey, offset: usize) {
    for i in 0..key.n() {
        if key.x[i] {
            state.apply_gate(GateKind::X, &[offset + i]).expect("key fits the register");
        }
        if key.z[i] {
            state.apply_gate(GateKind::Z, &[offset + i]).expect("key fits the register");
        }
    }
}

pub fn update_key_clifford(key: &PauliKey, gate: GateKind, qubits: &[usize]) -> Result<PauliKey, QheError> {
    let mut out = key.clone();
    out.update_clifford(gate, qubits)?;
    Ok(out)
}

/// T/Tdg update; `expected_index` is the Bell register the caller is
/// consuming and must match the outcome's.
pub fn update_key_t(
    key: &PauliKey,
    qubit: usize,
    outcome: BellOutcome,
    expected_index: usize,
    dagger: bool,
) -> Result<PauliKey, QheError> {
    if outcome.bell_index != expected_index {
        return Err(QheError::BellIndex { expected: expected_index, got: outcome.bell_index });
    }
    let mut out = key.clone();
    out.update_t(qubit, outcome, dagger)?;
    Ok(out)
}

pub fn update_key_nonunitary(key: &PauliKey, op: NonUnitary, qubit: usize) -> Result<PauliKey, QheError> {
    let mut out = key.clone();
    out.update_nonunitary(op, qubit)?;
    Ok(out)
}
