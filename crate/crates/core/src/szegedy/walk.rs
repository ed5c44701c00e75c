use num_complex::Complex64;

use super::decompose::{Control, Emitter, Level};
use super::graph::GraphSpec;
use super::SzegedyError;
use crate::cqsim::{invert_instructions, Circuit, CircuitBuilder, GateKind, Instruction, StateVector};

/// One compiled walk step. Qubits `0..n` hold register 1, `n..2n` register
/// 2 and the rest are decomposition ancillas that start and end in `|0>`.
#[derive(Clone, Debug)]
pub struct WalkCircuit {
    pub graph: GraphSpec,
    pub level: Level,
    pub circuit: Circuit,
    pub n: usize,
    pub ancilla_count: usize,
    pub tcount_actual: usize,
}

/// `t_q` walk steps between measurements, `t_f` measured steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SemiclassicalSchedule {
    pub t_q: usize,
    pub t_f: usize,
}

impl SemiclassicalSchedule {
    pub fn new(t_q: usize, t_f: usize) -> Result<Self, SzegedyError> {
        if t_q == 0 || t_f == 0 {
            return Err(SzegedyError::InvalidGraph("t_q and t_f must both be at least 1".into()));
        }
        Ok(SemiclassicalSchedule { t_q, t_f })
    }
}

fn reg2(n: usize, k: usize) -> usize {
    n + k
}

/// `|i>|k> -> |i>|k + i mod 2^n>`: register 1 bit `k` adds `2^(n-1-k)`,
/// i.e. increments the top `k + 1` bits of register 2.
pub(crate) fn add_register(e: &mut Emitter, n: usize) {
    for k in 0..n {
        increment(e, Some(k), &(0..=k).map(|j| reg2(n, j)).collect::<Vec<_>>());
    }
}

/// `|x> -> |x + 1>` on `bits` (most significant first), optionally
/// controlled by qubit `control`.
fn increment(e: &mut Emitter, control: Option<usize>, bits: &[usize]) {
    for j in 0..bits.len() {
        let mut controls: Vec<Control> = control.into_iter().map(Control::one).collect();
        controls.extend(bits[j + 1..].iter().map(|&q| Control::one(q)));
        e.mcx(&controls, bits[j]);
    }
}

fn cycle_update(e: &mut Emitter, n: usize) {
    if n > 1 {
        e.h(reg2(n, 0));
        for j in 1..n - 1 {
            e.cnot(reg2(n, 0), reg2(n, j));
        }
    }
    e.x(reg2(n, n - 1));
    add_register(e, n);
}

fn theta(n: usize, i: usize) -> f64 {
    let a = ((1u64 << (n - i)) - 1) as f64;
    let b = ((1u64 << (n - i + 1)) - 1) as f64;
    2.0 * (a / b).sqrt().acos()
}

/// Uniform superposition of `|1>..|2^n - 1>` on register 2.
fn nonzero_uniform(e: &mut Emitter, n: usize) {
    let q = |k| reg2(n, k);
    for i in 1..n {
        let zeros: Vec<Control> = (0..i - 1).map(|k| Control::zero(q(k))).collect();
        e.mcry(&zeros, theta(n, i), q(i - 1));
        let mut controls = zeros;
        controls.push(Control::one(q(i - 1)));
        let targets: Vec<usize> = (i..n).map(q).collect();
        e.mch(&controls, &targets);
    }
    let zeros: Vec<Control> = (0..n - 1).map(|k| Control::zero(q(k))).collect();
    e.mcx(&zeros, q(n - 1));
}

fn complete_update(e: &mut Emitter, n: usize) {
    nonzero_uniform(e, n);
    add_register(e, n);
}

fn bipartite_update(e: &mut Emitter, n: usize, n2_bits: usize) {
    e.mcx(&[Control::zero(0)], reg2(n, 0));
    for k in n - n2_bits..n {
        e.h(reg2(n, k));
    }
    let targets: Vec<usize> = (1..n - n2_bits).map(|k| reg2(n, k)).collect();
    e.mch(&[Control::one(0)], &targets);
}

fn emit_update(e: &mut Emitter, graph: GraphSpec) {
    let n = graph.width();
    match graph {
        GraphSpec::Cycle { .. } => cycle_update(e, n),
        GraphSpec::Complete { .. } => complete_update(e, n),
        GraphSpec::Bipartite { n2, .. } => bipartite_update(e, n, n2.trailing_zeros() as usize),
    }
}

/// `2|0><0| - 1` on register 2.
pub(crate) fn emit_diffusion(e: &mut Emitter, n: usize) {
    let q = |k| reg2(n, k);
    (0..n).for_each(|k| e.x(q(k)));
    e.h(q(n - 1));
    let controls: Vec<Control> = (0..n - 1).map(|k| Control::one(q(k))).collect();
    e.mcx(&controls, q(n - 1));
    e.h(q(n - 1));
    (0..n).for_each(|k| e.x(q(k)));
    // (XZ)^2 = -1 flips the sign to the reflection about |0>
    for g in [GateKind::X, GateKind::Z, GateKind::X, GateKind::Z] {
        e.gate(g, &[q(0)]);
    }
}

fn check_level(graph: GraphSpec, level: Level) -> Result<(), SzegedyError> {
    if level == Level::CliffordT && matches!(graph, GraphSpec::Complete { .. }) {
        return Err(SzegedyError::SynthesisUnsupported(graph));
    }
    Ok(())
}

fn finish(graph: GraphSpec, ops: Vec<Instruction>, ancillas: usize) -> Circuit {
    Circuit::new(2 * graph.width() + ancillas, 0, ops).expect("builder indices are in range")
}

pub(crate) fn update_ops(graph: GraphSpec, level: Level) -> (Vec<Instruction>, usize) {
    let mut e = Emitter::new(level, 2 * graph.width());
    emit_update(&mut e, graph);
    let used = e.ancillas_used();
    (e.into_ops(), used)
}

pub(crate) fn walk_ops(graph: GraphSpec, level: Level) -> (Vec<Instruction>, usize) {
    let n = graph.width();
    let (v, v_anc) = update_ops(graph, level);
    let mut e = Emitter::new(level, 2 * n);
    e.extend(invert_instructions(&v).expect("update is unitary"));
    emit_diffusion(&mut e, n);
    e.extend(v);
    for k in 0..n {
        e.swap(k, reg2(n, k));
    }
    let anc = e.ancillas_used().max(v_anc);
    (e.into_ops(), anc)
}

/// `|x> -> |x + 1 mod 2^m>` on qubits `0..m`, or with `controlled` the same
/// on qubits `1..=m` controlled by qubit 0. Ancillas follow the data.
pub fn build_increment(m: usize, controlled: bool, level: Level) -> Circuit {
    let data = m + usize::from(controlled);
    let mut e = Emitter::new(level, data);
    let bits: Vec<usize> = (data - m..data).collect();
    increment(&mut e, controlled.then_some(0), &bits);
    let anc = e.ancillas_used();
    Circuit::new(data + anc, 0, e.into_ops()).expect("builder indices are in range")
}

/// Update operator with `V|i>|0> = |psi_i>`.
pub fn build_update(graph: GraphSpec, level: Level) -> Result<WalkCircuit, SzegedyError> {
    check_level(graph, level)?;
    let (ops, anc) = update_ops(graph, level);
    Ok(wrap(graph, level, finish(graph, ops, anc), anc))
}

/// One walk step: `V^†`, the reflection on register 2, `V`, then the
/// register swap.
pub fn build_walk_step(graph: GraphSpec, level: Level) -> Result<WalkCircuit, SzegedyError> {
    check_level(graph, level)?;
    let (ops, anc) = walk_ops(graph, level);
    Ok(wrap(graph, level, finish(graph, ops, anc), anc))
}

/// Reflection on register 2 alone (with the ancillas it needs).
pub fn build_diffusion(graph: GraphSpec, level: Level) -> WalkCircuit {
    let mut e = Emitter::new(level, 2 * graph.width());
    emit_diffusion(&mut e, graph.width());
    let anc = e.ancillas_used();
    wrap(graph, level, finish(graph, e.into_ops(), anc), anc)
}

fn wrap(graph: GraphSpec, level: Level, circuit: Circuit, ancilla_count: usize) -> WalkCircuit {
    let tcount_actual = circuit.t_count();
    WalkCircuit { graph, level, n: graph.width(), ancilla_count, tcount_actual, circuit }
}

/// Measure register 1, then `t_f` rounds of: reset register 2, `V`,
/// `t_q` walk steps, measure register 1. Round `s` writes cbits
/// `s*n..(s+1)*n`.
pub fn build_semiclassical(
    graph: GraphSpec,
    schedule: SemiclassicalSchedule,
    level: Level,
) -> Result<WalkCircuit, SzegedyError> {
    check_level(graph, level)?;
    let n = graph.width();
    let (v, v_anc) = update_ops(graph, level);
    let (u, u_anc) = walk_ops(graph, level);
    let anc = v_anc.max(u_anc);
    let mut b = CircuitBuilder::new(2 * n + anc, (schedule.t_f + 1) * n);
    for k in 0..n {
        b.measure(k, k);
    }
    for s in 1..=schedule.t_f {
        for k in 0..n {
            b.reset(reg2(n, k));
        }
        b.extend(v.iter().cloned());
        for _ in 0..schedule.t_q {
            b.extend(u.iter().cloned());
        }
        for k in 0..n {
            b.measure(k, s * n + k);
        }
    }
    Ok(wrap(graph, level, b.build().expect("builder indices are in range"), anc))
}

/// `sum_i sqrt(w_i) |i>` on register 1 (weights are normalized), everything
/// else `|0>`, on `total` qubits.
pub fn register_superposition(n: usize, total: usize, weights: &[(usize, f64)]) -> Result<StateVector, SzegedyError> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << total];
    for &(node, w) in weights {
        if node >= 1 << n || w < 0.0 {
            return Err(SzegedyError::InvalidGraph(format!("bad initial weight {w} on node {node}")));
        }
        amps[node << (total - n)] += Complex64::new(w.sqrt(), 0.0);
    }
    StateVector::normalized(amps).map_err(|e| SzegedyError::InvalidGraph(e.to_string()))
}

/// `sum_i sqrt(w_i) |psi_i>` on the qubits of `walk`, prepared by running
/// the update operator on a register-1 superposition.
pub fn walk_initial_state(walk: &WalkCircuit, weights: &[(usize, f64)]) -> Result<StateVector, SzegedyError> {
    let total = walk.circuit.n_qubits();
    let mut state = register_superposition(walk.n, total, weights)?;
    let (v, _) = update_ops(walk.graph, Level::Exact);
    for instr in &v {
        if let Instruction::Gate { gate, qubits } = instr {
            state.apply_gate(*gate, qubits).map_err(|e| SzegedyError::InvalidGraph(e.to_string()))?;
        }
    }
    Ok(state)
}

/// Column-major dense unitary of a gate-only circuit restricted to the
/// first `data` qubits, with every other qubit fed `|0>`. Also returns the
/// largest squared norm any column leaked outside the all-zero ancilla
/// subspace.
pub fn restricted_unitary(circuit: &Circuit, data: usize) -> Result<(Vec<Vec<Complex64>>, f64), SzegedyError> {
    if !circuit.is_unitary() {
        return Err(SzegedyError::Unsupported("circuit contains non-unitary instructions".into()));
    }
    let total = circuit.n_qubits();
    let extra: Vec<usize> = (data..total).collect();
    let mut cols = Vec::with_capacity(1 << data);
    let mut leak: f64 = 0.0;
    for col in 0..1usize << data {
        let mut s = StateVector::basis(total, col << (total - data));
        for instr in circuit.instructions() {
            if let Instruction::Gate { gate, qubits } = instr {
                s.apply_gate(*gate, qubits).expect("validated circuit");
            }
        }
        let (reduced, l) = s.drop_zero_qubits(&extra);
        leak = leak.max(l);
        cols.push(reduced);
    }
    Ok((cols, leak))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walk_t_counts() {
        let cycle = build_walk_step(GraphSpec::cycle(8).unwrap(), Level::CliffordT).unwrap();
        assert_eq!(cycle.tcount_actual, 77);
        assert_eq!(cycle.ancilla_count, 1);
        let bip = build_walk_step(GraphSpec::bipartite(4, 4).unwrap(), Level::CliffordT).unwrap();
        assert_eq!(bip.tcount_actual, 7);
        assert_eq!(bip.ancilla_count, 0);
        let d = build_diffusion(GraphSpec::cycle(8).unwrap(), Level::CliffordT);
        assert_eq!(d.tcount_actual, 7);
    }

    #[test]
    fn complete_rejected_at_clifford_t() {
        assert!(matches!(
            build_walk_step(GraphSpec::complete(8).unwrap(), Level::CliffordT),
            Err(SzegedyError::SynthesisUnsupported(_))
        ));
    }

    #[test]
    fn semiclassical_structure() {
        let g = GraphSpec::cycle(8).unwrap();
        let one = build_semiclassical(g, SemiclassicalSchedule::new(1, 1).unwrap(), Level::CliffordT).unwrap();
        let c = &one.circuit;
        assert_eq!(c.count(|i| matches!(i, Instruction::Measure { .. })), 6);
        assert_eq!(c.count(|i| matches!(i, Instruction::Reset { .. })), 3);
        assert_eq!(c.n_cbits(), 6);
        assert_eq!(one.tcount_actual, 35 + 77);

        let ten = build_semiclassical(g, SemiclassicalSchedule::new(2, 10).unwrap(), Level::CliffordT).unwrap();
        assert_eq!(ten.circuit.n_cbits(), 33);
        assert_eq!(ten.tcount_actual, 10 * (35 + 2 * 77));
    }
}
