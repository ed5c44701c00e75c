use serde::Serialize;

use super::gf2::{pack_bits, unpack_bits, BitMatrix};
use super::key::{BellOutcome, NonUnitary, PauliKey};
use super::QheError;
use crate::cqsim::GateKind;

/// `x_q` at the moment of a measurement, as a linear form over the key that
/// entered the enclosing [`CliffordMap`]. The client XORs it into the
/// measured bit to decrypt it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Readout {
    pub cbit: usize,
    pub row: u128,
}

/// Linear key update on the packed vector `(x_0..x_{n-1}, z_0..z_{n-1})`
/// covering a run of Clifford gates, measurements and resets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordMap {
    pub matrix: BitMatrix,
    pub readouts: Vec<Readout>,
}

impl CliffordMap {
    pub fn identity(n: usize) -> Self {
        CliffordMap { matrix: BitMatrix::identity(2 * n), readouts: Vec::new() }
    }

    /// Input bits XORed together to produce output bit `output`.
    pub fn terms(&self, output: usize) -> Vec<usize> {
        let row = self.matrix.row(output);
        (0..self.matrix.dim()).filter(|&c| row >> c & 1 == 1).collect()
    }

    fn apply(&self, key: &mut PauliKey, readout: &mut impl FnMut(usize, bool)) {
        let v = pack_bits(&key.to_bits());
        for r in &self.readouts {
            readout(r.cbit, (r.row & v).count_ones() & 1 == 1);
        }
        *key = PauliKey::from_bits(&unpack_bits(self.matrix.apply(v), self.matrix.dim()));
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum KeyUpdateStep {
    /// Update for a single Clifford gate.
    Gate { gate: GateKind, qubits: Vec<usize> },
    Measure { qubit: usize, cbit: usize },
    Reset { qubit: usize },
    /// `T` or `Tdg` consuming Bell register `bell_index` (1-based).
    T { qubit: usize, bell_index: usize, dagger: bool },
    Map(CliffordMap),
}

impl KeyUpdateStep {
    /// Classical XOR operations needed to carry out this step.
    pub fn xor_ops(&self) -> usize {
        match self {
            KeyUpdateStep::Gate { gate, .. } => match gate {
                GateKind::S | GateKind::Sdg => 1,
                GateKind::Cnot => 2,
                _ => 0,
            },
            KeyUpdateStep::T { dagger: false, .. } => 3,
            KeyUpdateStep::T { dagger: true, .. } => 2,
            KeyUpdateStep::Map(map) => map.matrix.xor_cost(),
            KeyUpdateStep::Measure { .. } | KeyUpdateStep::Reset { .. } => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KeyUpdateScript {
    n: usize,
    steps: Vec<KeyUpdateStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XorCountReport {
    #[serde(rename = "L")]
    pub l: usize,
    pub n: usize,
    pub xor_ops: usize,
    pub bound: usize,
    /// XORs spent decrypting intermediate measurement outcomes; reported
    /// apart from the key-update budget.
    pub readout_ops: usize,
}

impl XorCountReport {
    pub fn bound_for(l: usize, n: usize) -> usize {
        (l + 1) * 2 * n * (2 * n).saturating_sub(1) + 3 * l
    }

    pub fn within_bound(&self) -> bool {
        self.xor_ops <= self.bound
    }
}

impl KeyUpdateScript {
    pub fn new(n: usize, steps: Vec<KeyUpdateStep>) -> Self {
        KeyUpdateScript { n, steps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[KeyUpdateStep] {
        &self.steps
    }

    /// Number of `T`/`Tdg` steps.
    pub fn t_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, KeyUpdateStep::T { .. })).count()
    }

    /// True when maps and T steps alternate, starting and ending with a map.
    pub fn is_composed(&self) -> bool {
        self.steps.len() == 2 * self.t_count() + 1
            && self.steps.iter().enumerate().all(|(i, s)| match s {
                KeyUpdateStep::Map(_) => i % 2 == 0,
                KeyUpdateStep::T { .. } => i % 2 == 1,
                _ => false,
            })
    }

    /// Runs the script on `key`. `bell` supplies the outcome for each T step
    /// given the current key; `readout` receives `(cbit, x_q)` at each
    /// measurement.
    pub fn run(
        &self,
        key: &mut PauliKey,
        mut bell: impl FnMut(usize, usize, &PauliKey) -> BellOutcome,
        mut readout: impl FnMut(usize, bool),
    ) -> Result<(), QheError> {
        if key.n() != self.n {
            return Err(QheError::KeyLength { expected: self.n, got: key.n() });
        }
        for step in &self.steps {
            match step {
                KeyUpdateStep::Gate { gate, qubits } => key.update_clifford(*gate, qubits)?,
                KeyUpdateStep::Measure { qubit, cbit } => {
                    readout(*cbit, key.x()[*qubit]);
                    key.update_nonunitary(NonUnitary::Measure, *qubit)?;
                }
                KeyUpdateStep::Reset { qubit } => key.update_nonunitary(NonUnitary::Reset, *qubit)?,
                KeyUpdateStep::T { qubit, bell_index, dagger } => {
                    let outcome = bell(*bell_index, *qubit, key);
                    if outcome.bell_index != *bell_index {
                        return Err(QheError::BellIndex { expected: *bell_index, got: outcome.bell_index });
                    }
                    key.update_t(*qubit, outcome, *dagger)?;
                }
                KeyUpdateStep::Map(map) => map.apply(key, &mut readout),
            }
        }
        Ok(())
    }

    /// Runs the script with pre-recorded Bell outcomes (indexed by
    /// `bell_index - 1`). Returns the final key and the readouts in order.
    pub fn apply(
        &self,
        key: &PauliKey,
        outcomes: &[(bool, bool)],
    ) -> Result<(PauliKey, Vec<(usize, bool)>), QheError> {
        let mut k = key.clone();
        let mut reads = Vec::new();
        let mut missing = None;
        self.run(
            &mut k,
            |l, _, _| match outcomes.get(l - 1) {
                Some(&(r_a, r_b)) => BellOutcome { r_a, r_b, bell_index: l },
                None => {
                    missing.get_or_insert(l);
                    BellOutcome { r_a: false, r_b: false, bell_index: l }
                }
            },
            |c, b| reads.push((c, b)),
        )?;
        if let Some(l) = missing {
            return Err(QheError::MissingOutcome(l));
        }
        Ok((k, reads))
    }

    /// Collapses every maximal run of non-T steps into one [`CliffordMap`].
    /// The result has `L + 1` maps alternating with the `L` T steps.
    pub fn compose(&self) -> KeyUpdateScript {
        let n = self.n;
        let mut steps = Vec::new();
        let mut current = CliffordMap::identity(n);
        for step in &self.steps {
            let m = &mut current.matrix;
            match step {
                KeyUpdateStep::Gate { gate, qubits } => match gate {
                    GateKind::H => m.swap_rows(qubits[0], n + qubits[0]),
                    GateKind::S | GateKind::Sdg => m.add_row(n + qubits[0], qubits[0]),
                    GateKind::Cnot => {
                        let (i, j) = (qubits[0], qubits[1]);
                        m.add_row(n + i, n + j);
                        m.add_row(j, i);
                    }
                    GateKind::Swap => {
                        let (i, j) = (qubits[0], qubits[1]);
                        m.swap_rows(i, j);
                        m.swap_rows(n + i, n + j);
                    }
                    _ => {}
                },
                KeyUpdateStep::Measure { qubit, cbit } => {
                    current.readouts.push(Readout { cbit: *cbit, row: m.row(*qubit) });
                    current.matrix.clear_row(n + qubit);
                }
                KeyUpdateStep::Reset { qubit } => {
                    m.clear_row(*qubit);
                    m.clear_row(n + qubit);
                }
                KeyUpdateStep::Map(map) => {
                    let before = m.clone();
                    for r in &map.readouts {
                        let row = (0..2 * n)
                            .filter(|&c| r.row >> c & 1 == 1)
                            .fold(0, |acc, c| acc ^ before.row(c));
                        current.readouts.push(Readout { cbit: r.cbit, row });
                    }
                    current.matrix = map.matrix.compose(&before);
                }
                KeyUpdateStep::T { .. } => {
                    steps.push(KeyUpdateStep::Map(std::mem::replace(
                        &mut current,
                        CliffordMap::identity(n),
                    )));
                    steps.push(step.clone());
                }
            }
        }
        steps.push(KeyUpdateStep::Map(current));
        KeyUpdateScript { n, steps }
    }

    /// XOR operations of the script as written.
    pub fn xor_ops(&self) -> usize {
        self.steps.iter().map(KeyUpdateStep::xor_ops).sum()
    }

    /// XOR budget of the composed form against the quasi-compactness bound.
    pub fn report(&self) -> XorCountReport {
        let composed = if self.is_composed() { self.clone() } else { self.compose() };
        let l = composed.t_count();
        let readout_ops = composed
            .steps
            .iter()
            .filter_map(|s| match s {
                KeyUpdateStep::Map(m) => Some(m.readouts.iter().map(|r| r.row.count_ones() as usize).sum::<usize>()),
                _ => None,
            })
            .sum();
        XorCountReport {
            l,
            n: self.n,
            xor_ops: composed.xor_ops(),
            bound: XorCountReport::bound_for(l, self.n),
            readout_ops,
        }
    }
}
