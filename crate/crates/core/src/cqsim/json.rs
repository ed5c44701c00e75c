//! Circuit interchange format.
//!
//! ```json
//! {"n_qubits": 2, "n_cbits": 2, "instructions": [
//!   {"op": "h", "qubits": [0]},
//!   {"op": "cx", "qubits": [0, 1]},
//!   {"op": "ry", "qubits": [1], "param": 0.5},
//!   {"op": "measure", "qubits": [0], "cbits": [0]},
//!   {"op": "c_if", "gate": "s", "qubits": [1], "cbits": [1]},
//!   {"op": "cnot_cl", "cbits": [0, 1]}
//! ]}
//! ```
//!
//! Classical operations are `not_cl`, `cnot_cl` (control, target),
//! `swap_cl`, `reset_cl` and `rand_cl`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::circuit::{Circuit, CircuitError, Instruction};
use super::gate::GateKind;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed circuit JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("instruction {index}: {message}")]
    Instruction { index: usize, message: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Serialize, Deserialize)]
struct CircuitDoc {
    n_qubits: usize,
    n_cbits: usize,
    instructions: Vec<InstructionDoc>,
}

#[derive(Serialize, Deserialize)]
struct InstructionDoc {
    op: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gate: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    cbits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param: Option<f64>,
}

impl From<&Instruction> for InstructionDoc {
    fn from(instr: &Instruction) -> Self {
        let doc = |op: &str, qubits: Vec<usize>, cbits: Vec<usize>| InstructionDoc {
            op: op.to_string(),
            gate: None,
            qubits,
            cbits,
            param: None,
        };
        match instr {
            Instruction::Gate { gate, qubits } => InstructionDoc {
                param: gate.param(),
                ..doc(gate.name(), qubits.clone(), Vec::new())
            },
            Instruction::Measure { qubit, cbit } => doc("measure", vec![*qubit], vec![*cbit]),
            Instruction::Reset { qubit } => doc("reset", vec![*qubit], Vec::new()),
            Instruction::Conditional { gate, qubits, cbit } => InstructionDoc {
                gate: Some(gate.name().to_string()),
                param: gate.param(),
                ..doc("c_if", qubits.clone(), vec![*cbit])
            },
            Instruction::ClassicalNot { cbit } => doc("not_cl", Vec::new(), vec![*cbit]),
            Instruction::ClassicalCnot { control, target } => {
                doc("cnot_cl", Vec::new(), vec![*control, *target])
            }
            Instruction::ClassicalSwap { a, b } => doc("swap_cl", Vec::new(), vec![*a, *b]),
            Instruction::ClassicalReset { cbit } => doc("reset_cl", Vec::new(), vec![*cbit]),
            Instruction::ClassicalRandomInit { cbit } => doc("rand_cl", Vec::new(), vec![*cbit]),
        }
    }
}

impl InstructionDoc {
    fn into_instruction(self, index: usize) -> Result<Instruction, JsonError> {
        let bad = |message: String| JsonError::Instruction { index, message };
        let one = |v: &[usize], what: &str| -> Result<usize, JsonError> {
            match v {
                [x] => Ok(*x),
                _ => Err(bad(format!("`{}` expects exactly one {what}", self.op))),
            }
        };
        let two = |v: &[usize]| -> Result<(usize, usize), JsonError> {
            match v {
                [a, b] => Ok((*a, *b)),
                _ => Err(bad(format!("`{}` expects exactly two cbits", self.op))),
            }
        };
        let instr = match self.op.as_str() {
            "measure" => Instruction::Measure {
                qubit: one(&self.qubits, "qubit")?,
                cbit: one(&self.cbits, "cbit")?,
            },
            "reset" => Instruction::Reset { qubit: one(&self.qubits, "qubit")? },
            "c_if" => {
                let name = self
                    .gate
                    .as_deref()
                    .ok_or_else(|| bad("`c_if` needs a `gate` field".into()))?;
                let gate = GateKind::from_name(name, self.param)
                    .ok_or_else(|| bad(format!("unknown gate `{name}`")))?;
                Instruction::Conditional {
                    gate,
                    qubits: self.qubits.clone(),
                    cbit: one(&self.cbits, "cbit")?,
                }
            }
            "not_cl" => Instruction::ClassicalNot { cbit: one(&self.cbits, "cbit")? },
            "cnot_cl" => {
                let (control, target) = two(&self.cbits)?;
                Instruction::ClassicalCnot { control, target }
            }
            "swap_cl" => {
                let (a, b) = two(&self.cbits)?;
                Instruction::ClassicalSwap { a, b }
            }
            "reset_cl" => Instruction::ClassicalReset { cbit: one(&self.cbits, "cbit")? },
            "rand_cl" => Instruction::ClassicalRandomInit { cbit: one(&self.cbits, "cbit")? },
            name => {
                let gate = GateKind::from_name(name, self.param)
                    .ok_or_else(|| bad(format!("unknown op `{name}`")))?;
                Instruction::Gate { gate, qubits: self.qubits.clone() }
            }
        };
        Ok(instr)
    }
}

impl Circuit {
    pub fn to_json(&self) -> String {
        let doc = CircuitDoc {
            n_qubits: self.n_qubits(),
            n_cbits: self.n_cbits(),
            instructions: self.instructions().iter().map(InstructionDoc::from).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("circuit documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Circuit, JsonError> {
        let doc: CircuitDoc = serde_json::from_str(text)?;
        let instructions = doc
            .instructions
            .into_iter()
            .enumerate()
            .map(|(i, d)| d.into_instruction(i))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Circuit::new(doc.n_qubits, doc.n_cbits, instructions)?)
    }
}
