use rand::Rng;

use super::compile::{Mode, ServerCompilation};
use super::key::{decrypt_in_place, BellOutcome, PauliKey};
use super::QheError;
use crate::cqsim::{GateKind, StateVector};

/// What the client holds after processing the server's output.
#[derive(Clone, Debug)]
pub struct ClientOutput {
    /// Decrypted classical outcomes, one per cbit of the evaluated circuit.
    pub decrypted: Vec<bool>,
    pub final_key: PauliKey,
    pub bell: Vec<BellOutcome>,
    /// Joint state after the Bell measurements; the evaluated qubits are
    /// still padded with `final_key`.
    pub state: StateVector,
}

impl ClientOutput {
    /// The evaluated register with the final pad removed (ancilla and Bell
    /// qubits are left as they are).
    pub fn decrypted_state(&self) -> StateVector {
        let mut s = self.state.clone();
        decrypt_in_place(&mut s, &self.final_key, 0);
        s
    }
}

/// Realistic-mode client: walks the composed script, measuring each Bell
/// register when its T step is reached, and decrypts every outcome.
pub fn client_decrypt_run(
    comp: &ServerCompilation,
    encrypted_final: StateVector,
    server_cbits: &[bool],
    key: &PauliKey,
    rng: &mut impl Rng,
) -> Result<ClientOutput, QheError> {
    if comp.mode != Mode::Realistic {
        return Err(QheError::Mismatch("the simplified server circuit already contains the client".into()));
    }
    if encrypted_final.n_qubits() != comp.server_circuit.n_qubits() {
        return Err(QheError::Mismatch(format!(
            "state has {} qubits, server circuit {}",
            encrypted_final.n_qubits(),
            comp.server_circuit.n_qubits()
        )));
    }
    if server_cbits.len() != comp.layout.outcomes {
        return Err(QheError::Mismatch(format!(
            "{} server cbits given, {} expected",
            server_cbits.len(),
            comp.layout.outcomes
        )));
    }
    let mut state = encrypted_final;
    let mut decrypted = server_cbits.to_vec();
    let mut final_key = key.clone();
    let mut bell = Vec::with_capacity(comp.t_count());
    let mut failure = None;
    comp.composed.run(
        &mut final_key,
        |l, qubit, k| {
            let (b1, b2) = comp.bell_qubits[l - 1];
            if k.x()[qubit] {
                state.apply_gate(GateKind::S, &[b1]).expect("bell qubits are in range");
            }
            state.apply_gate(GateKind::Cnot, &[b1, b2]).expect("bell qubits are in range");
            state.apply_gate(GateKind::H, &[b1]).expect("bell qubits are in range");
            let r_b = state.measure(b1, rng).expect("bell qubits are in range");
            let r_a = state.measure(b2, rng).expect("bell qubits are in range");
            let outcome = BellOutcome { r_a, r_b, bell_index: l };
            bell.push(outcome);
            outcome
        },
        |cbit, x| match decrypted.get_mut(cbit) {
            Some(bit) => *bit ^= x,
            None => failure = Some(cbit),
        },
    )?;
    if let Some(cbit) = failure {
        return Err(QheError::Mismatch(format!("script reads cbit {cbit} outside the circuit")));
    }
    Ok(ClientOutput { decrypted, final_key, bell, state })
}
