use std::fmt;
use std::str::FromStr;

use super::script::{KeyUpdateScript, KeyUpdateStep};
use super::QheError;
use crate::cqsim::{Circuit, CircuitBuilder, GateKind, Instruction};

/// How Bell registers are provisioned for `T`/`Tdg` evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// One fresh Bell pair per T gate; the client measures them all after
    /// the server has finished.
    Realistic,
    /// A single Bell pair, measured by the client and reset right after each
    /// T gate.
    Simplified,
}

impl FromStr for Mode {
    type Err = QheError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "realistic" => Ok(Mode::Realistic),
            "simplified" => Ok(Mode::Simplified),
            other => Err(QheError::Mismatch(format!("unknown mode `{other}` (expected realistic or simplified)"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Realistic => "realistic",
            Mode::Simplified => "simplified",
        })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CompileOptions {
    /// Leave X and Z gates out of the key-update script (their update is the
    /// identity).
    pub skip_pauli_updates: bool,
}

/// Classical register of a protocol circuit:
/// `[server outcomes | decrypted outcomes | x key | z key | Bell outcomes]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CbitLayout {
    pub n: usize,
    pub outcomes: usize,
    pub bell_bits: usize,
}

impl CbitLayout {
    pub fn outcome(&self, c: usize) -> usize {
        c
    }

    pub fn decrypted(&self, c: usize) -> usize {
        self.outcomes + c
    }

    pub fn x(&self, q: usize) -> usize {
        2 * self.outcomes + q
    }

    pub fn z(&self, q: usize) -> usize {
        2 * self.outcomes + self.n + q
    }

    /// `(r_a, r_b)` cbits of Bell register `slot` (0-based).
    pub fn bell(&self, slot: usize) -> (usize, usize) {
        let base = 2 * self.outcomes + 2 * self.n + 2 * slot;
        (base + 1, base)
    }

    pub fn total(&self) -> usize {
        2 * self.outcomes + 2 * self.n + self.bell_bits
    }

    pub fn decrypted_range(&self) -> Vec<usize> {
        (self.outcomes..2 * self.outcomes).collect()
    }

    pub fn outcome_range(&self) -> Vec<usize> {
        (0..self.outcomes).collect()
    }
}

/// What the server runs, plus what the client needs to undo it.
#[derive(Clone, Debug)]
pub struct ServerCompilation {
    pub mode: Mode,
    /// Qubits of the evaluated circuit; Bell qubits follow them.
    pub n: usize,
    pub server_circuit: Circuit,
    /// Per-gate key-update script.
    pub script: KeyUpdateScript,
    /// Same script with Clifford runs composed.
    pub composed: KeyUpdateScript,
    /// `(first, second)` Bell qubit of register `l`, at index `l - 1`.
    pub bell_qubits: Vec<(usize, usize)>,
    /// Classical register layout (simplified server circuits use all of it,
    /// realistic ones only the outcome block).
    pub layout: CbitLayout,
    /// Instruction index in the server circuit where the client measures the
    /// first Bell qubit of each register (simplified mode only).
    pub bell_measurements: Vec<usize>,
}

impl ServerCompilation {
    pub fn t_count(&self) -> usize {
        self.bell_qubits.len()
    }
}

/// Classical instructions mirroring a Clifford key update on the layout's
/// key bits.
pub(crate) fn clifford_key_ops(layout: &CbitLayout, gate: GateKind, qubits: &[usize]) -> Vec<Instruction> {
    let (x, z) = (|q| layout.x(q), |q| layout.z(q));
    match gate {
        GateKind::H => vec![Instruction::ClassicalSwap { a: x(qubits[0]), b: z(qubits[0]) }],
        GateKind::S | GateKind::Sdg => {
            vec![Instruction::ClassicalCnot { control: x(qubits[0]), target: z(qubits[0]) }]
        }
        GateKind::Cnot => {
            let (i, j) = (qubits[0], qubits[1]);
            vec![
                Instruction::ClassicalCnot { control: z(j), target: z(i) },
                Instruction::ClassicalCnot { control: x(i), target: x(j) },
            ]
        }
        GateKind::Swap => {
            let (i, j) = (qubits[0], qubits[1]);
            vec![
                Instruction::ClassicalSwap { a: x(i), b: x(j) },
                Instruction::ClassicalSwap { a: z(i), b: z(j) },
            ]
        }
        _ => Vec::new(),
    }
}

/// Client half of the T gadget on Bell qubits `(b1, b2)`, writing the
/// outcomes into `(ra, rb)` and updating the key bits of `q`.
pub(crate) fn client_t_ops(
    layout: &CbitLayout,
    q: usize,
    (b1, b2): (usize, usize),
    (ra, rb): (usize, usize),
    dagger: bool,
) -> Vec<Instruction> {
    let (x, z) = (layout.x(q), layout.z(q));
    let mut ops = vec![
        Instruction::Conditional { gate: GateKind::S, qubits: vec![b1], cbit: x },
        Instruction::gate(GateKind::Cnot, &[b1, b2]),
        Instruction::gate(GateKind::H, &[b1]),
        Instruction::Measure { qubit: b1, cbit: rb },
        Instruction::Measure { qubit: b2, cbit: ra },
    ];
    if !dagger {
        ops.push(Instruction::ClassicalCnot { control: x, target: z });
    }
    ops.push(Instruction::ClassicalCnot { control: ra, target: x });
    ops.push(Instruction::ClassicalCnot { control: rb, target: z });
    ops
}

/// Server half of the T gadget.
fn server_t_ops(q: usize, (b1, b2): (usize, usize), dagger: bool) -> [Instruction; 4] {
    [
        Instruction::gate(if dagger { GateKind::Tdg } else { GateKind::T }, &[q]),
        Instruction::gate(GateKind::H, &[b1]),
        Instruction::gate(GateKind::Cnot, &[b1, b2]),
        Instruction::gate(GateKind::Swap, &[q, b1]),
    ]
}

/// Classical decryption of an outcome measured from qubit `q` into `c`.
pub(crate) fn decrypt_measure_ops(layout: &CbitLayout, q: usize, c: usize) -> [Instruction; 4] {
    [
        Instruction::ClassicalReset { cbit: layout.decrypted(c) },
        Instruction::ClassicalCnot { control: layout.outcome(c), target: layout.decrypted(c) },
        Instruction::ClassicalCnot { control: layout.x(q), target: layout.decrypted(c) },
        Instruction::ClassicalReset { cbit: layout.z(q) },
    ]
}

fn check_evaluable(circuit: &Circuit, mode: Mode) -> Result<(), QheError> {
    let mut measured = vec![false; circuit.n_cbits()];
    for (index, instr) in circuit.instructions().iter().enumerate() {
        match instr {
            Instruction::Gate { gate, .. } if gate.is_clifford() || gate.is_t_type() => {}
            Instruction::Gate { gate, .. } => {
                return Err(QheError::Unsupported {
                    index,
                    what: format!("gate `{gate}` has no homomorphic evaluation"),
                })
            }
            Instruction::Measure { cbit, .. } => {
                if mode == Mode::Realistic && measured[*cbit] {
                    return Err(QheError::RemeasuredCbit { index, cbit: *cbit });
                }
                measured[*cbit] = true;
            }
            Instruction::Reset { .. } => {}
            other => {
                return Err(QheError::Unsupported {
                    index,
                    what: format!("`{other}` cannot be evaluated by the server"),
                })
            }
        }
    }
    Ok(())
}

/// Compiles a Clifford+T circuit (with measurements and resets) into the
/// server's circuit and the client's key-update script.
pub fn compile_server(circuit: &Circuit, mode: Mode) -> Result<ServerCompilation, QheError> {
    compile_server_with(circuit, mode, CompileOptions::default())
}

pub fn compile_server_with(
    circuit: &Circuit,
    mode: Mode,
    options: CompileOptions,
) -> Result<ServerCompilation, QheError> {
    check_evaluable(circuit, mode)?;
    let n = circuit.n_qubits();
    let l_total = circuit.t_count();
    let (n_qubits, bell_bits) = match mode {
        Mode::Realistic => (n + 2 * l_total, 2 * l_total),
        Mode::Simplified => (n + if l_total > 0 { 2 } else { 0 }, 2),
    };
    let layout = CbitLayout { n, outcomes: circuit.n_cbits(), bell_bits };
    let n_cbits = match mode {
        Mode::Realistic => circuit.n_cbits(),
        Mode::Simplified => layout.total(),
    };
    let simplified = mode == Mode::Simplified;

    let mut out = CircuitBuilder::new(n_qubits, n_cbits);
    let mut steps = Vec::new();
    let mut bell_qubits = Vec::new();
    let mut bell_measurements = Vec::new();
    for instr in circuit.instructions() {
        match instr {
            Instruction::Gate { gate, qubits } if gate.is_t_type() => {
                let dagger = *gate == GateKind::Tdg;
                let q = qubits[0];
                let pair = match mode {
                    Mode::Realistic => (n + 2 * bell_qubits.len(), n + 2 * bell_qubits.len() + 1),
                    Mode::Simplified => (n, n + 1),
                };
                bell_qubits.push(pair);
                steps.push(KeyUpdateStep::T { qubit: q, bell_index: bell_qubits.len(), dagger });
                out.extend(server_t_ops(q, pair, dagger));
                if simplified {
                    bell_measurements.push(out.len() + 3);
                    out.extend(client_t_ops(&layout, q, pair, layout.bell(0), dagger));
                    out.reset(pair.0).reset(pair.1);
                }
            }
            Instruction::Gate { gate, qubits } => {
                if !(options.skip_pauli_updates && matches!(gate, GateKind::X | GateKind::Z)) {
                    steps.push(KeyUpdateStep::Gate { gate: *gate, qubits: qubits.clone() });
                }
                out.push(instr.clone());
                if simplified {
                    out.extend(clifford_key_ops(&layout, *gate, qubits));
                }
            }
            Instruction::Measure { qubit, cbit } => {
                steps.push(KeyUpdateStep::Measure { qubit: *qubit, cbit: *cbit });
                out.push(instr.clone());
                if simplified {
                    out.extend(decrypt_measure_ops(&layout, *qubit, *cbit));
                }
            }
            Instruction::Reset { qubit } => {
                steps.push(KeyUpdateStep::Reset { qubit: *qubit });
                out.push(instr.clone());
                if simplified {
                    out.c_reset(layout.x(*qubit)).c_reset(layout.z(*qubit));
                }
            }
            _ => unreachable!("rejected by check_evaluable"),
        }
    }
    let script = KeyUpdateScript::new(n, steps);
    let composed = script.compose();
    Ok(ServerCompilation {
        mode,
        n,
        server_circuit: out.build()?,
        script,
        composed,
        bell_qubits,
        layout,
        bell_measurements,
    })
}

/// The whole protocol as a single circuit starting from all-zero cbits:
/// random key bits for the first `protected` qubits, one-time-pad
/// encryption, the server circuit and (in realistic mode) the client's Bell
/// measurements and key updates. Decrypted outcomes end up in
/// `layout.decrypted(..)`, the final key in `layout.x(..)`/`layout.z(..)`.
pub fn protocol_circuit(comp: &ServerCompilation, protected: usize) -> Result<Circuit, QheError> {
    if protected > comp.n {
        return Err(QheError::KeyLength { expected: comp.n, got: protected });
    }
    let layout = comp.layout;
    let server = &comp.server_circuit;
    let mut b = CircuitBuilder::new(server.n_qubits(), layout.total());
    for q in 0..protected {
        b.c_random(layout.x(q)).c_random(layout.z(q));
        b.c_if(GateKind::Z, &[q], layout.z(q)).c_if(GateKind::X, &[q], layout.x(q));
    }
    b.extend(server.instructions().iter().cloned());
    if comp.mode == Mode::Realistic {
        for step in comp.script.steps() {
            match step {
                KeyUpdateStep::Gate { gate, qubits } => b.extend(clifford_key_ops(&layout, *gate, qubits)),
                KeyUpdateStep::Measure { qubit, cbit } => b.extend(decrypt_measure_ops(&layout, *qubit, *cbit)),
                KeyUpdateStep::Reset { qubit } => b.c_reset(layout.x(*qubit)).c_reset(layout.z(*qubit)),
                KeyUpdateStep::T { qubit, bell_index, dagger } => {
                    let slot = bell_index - 1;
                    b.extend(client_t_ops(&layout, *qubit, comp.bell_qubits[slot], layout.bell(slot), *dagger))
                }
                KeyUpdateStep::Map(_) => unreachable!("per-gate scripts hold no maps"),
            };
        }
    }
    Ok(b.build()?)
}
