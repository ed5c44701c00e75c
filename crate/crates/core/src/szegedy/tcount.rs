use std::fmt;

use serde::Serialize;

use super::decompose::{Emitter, Level};
use super::graph::GraphSpec;
use super::walk::{emit_diffusion, update_ops, walk_ops};
use crate::cqsim::{GateKind, Instruction};

/// `constant + rotations * L_R`, where `L_R` is the T-count of one
/// synthesized `RY` rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicCount {
    pub constant: i64,
    pub rotations: i64,
}

impl SymbolicCount {
    pub const fn exact(constant: i64) -> Self {
        SymbolicCount { constant, rotations: 0 }
    }

    pub fn evaluate(&self, l_r: f64) -> f64 {
        self.constant as f64 + self.rotations as f64 * l_r
    }

    fn scale(self, k: i64) -> Self {
        SymbolicCount { constant: self.constant * k, rotations: self.rotations * k }
    }
}

impl std::ops::Add for SymbolicCount {
    type Output = SymbolicCount;

    fn add(self, o: SymbolicCount) -> SymbolicCount {
        SymbolicCount { constant: self.constant + o.constant, rotations: self.rotations + o.rotations }
    }
}

impl fmt::Display for SymbolicCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rotations {
            0 => write!(f, "{}", self.constant),
            r => write!(f, "{} + {}*L_R", self.constant, r),
        }
    }
}

/// Per-source counts of the complete-graph update operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CompleteBreakdown {
    /// Final multi-controlled X.
    pub l_cx: i64,
    /// Multi-controlled Hadamards.
    pub l_ch: i64,
    /// Ancilla-based multi-controlled rotations, Toffoli part.
    pub l_ca: i64,
    /// Controlled rotations including their `RY` halves.
    pub l_cr: SymbolicCount,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TCountReport {
    pub graph: String,
    pub n: usize,
    #[serde(rename = "L_V")]
    pub l_v: SymbolicCount,
    #[serde(rename = "L_D")]
    pub l_d: i64,
    #[serde(rename = "L_U")]
    pub l_u: SymbolicCount,
    /// Only for graphs with rotations: `Some(value)` when an error budget
    /// was given, `None` when left symbolic.
    #[serde(rename = "L_R", skip_serializing_if = "Option::is_none")]
    pub l_r: Option<Option<f64>>,
    /// `L_U` with `L_R` substituted, when that is possible.
    #[serde(rename = "L_U_value", skip_serializing_if = "Option::is_none")]
    pub l_u_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breakdown: Option<CompleteBreakdown>,
    /// `(m, count)` for every controlled increment on `m` qubits.
    #[serde(rename = "L_Pplus", skip_serializing_if = "Vec::is_empty")]
    pub l_pplus: Vec<(usize, i64)>,
    /// False when `n < 3` and the numbers come from counting the circuit.
    pub closed_form: bool,
}

/// Leading-order T cost of one rotation synthesized to error `eps`.
pub fn rotation_cost(eps: f64) -> f64 {
    4.0 * (1.0 / eps).log2()
}

/// T-count of a controlled increment on `m` qubits.
pub fn pplus_count(m: usize) -> i64 {
    let m = m as i64;
    7 * (m - 1) * (m - 1)
}

fn reflection_closed(n: i64) -> i64 {
    14 * n - 35
}

fn count_ops(ops: &[Instruction]) -> SymbolicCount {
    let t = ops.iter().filter(|i| i.gate_kind().is_some_and(|g| g.is_t_type())).count();
    let r = ops.iter().filter(|i| matches!(i.gate_kind(), Some(GateKind::Ry(_)))).count();
    SymbolicCount { constant: t as i64, rotations: r as i64 }
}

/// Counts read off the Clifford+T circuit (rotations left as `RY` gates).
fn direct(graph: GraphSpec) -> (SymbolicCount, i64, SymbolicCount) {
    let n = graph.width();
    let l_v = count_ops(&update_ops(graph, Level::CliffordT).0);
    let mut e = Emitter::new(Level::CliffordT, 2 * n);
    emit_diffusion(&mut e, n);
    let l_d = count_ops(e.ops()).constant;
    let l_u = count_ops(&walk_ops(graph, Level::CliffordT).0);
    (l_v, l_d, l_u)
}

fn complete_breakdown(n: i64) -> CompleteBreakdown {
    CompleteBreakdown {
        l_cx: 14 * n - 35,
        l_ch: 14 * n - 33,
        l_ca: 8 * n * n - 36 * n + 40,
        l_cr: SymbolicCount { constant: 7 * n * n - 35 * n + 42, rotations: 2 * n - 4 },
    }
}

/// Closed-form T-counts of one walk step; `eps` fixes the rotation cost.
pub fn t_count(graph: GraphSpec, eps: Option<f64>) -> TCountReport {
    let n = graph.width();
    let ni = n as i64;
    let closed_form = n >= 3;
    let cycle_v = SymbolicCount::exact((1..=n).map(pplus_count).sum());
    let mut breakdown = None;
    let mut l_pplus = Vec::new();
    let (l_v, l_d, l_u) = if closed_form {
        let l_v = match graph {
            GraphSpec::Cycle { .. } => {
                l_pplus = (1..=n).map(|m| (m, pplus_count(m))).collect();
                cycle_v
            }
            GraphSpec::Complete { .. } => {
                let b = complete_breakdown(ni);
                breakdown = Some(b);
                let tilde = SymbolicCount::exact(b.l_cx + b.l_ch + b.l_ca) + b.l_cr + SymbolicCount { constant: 0, rotations: 1 };
                tilde + cycle_v
            }
            GraphSpec::Bipartite { n1, n2 } => {
                SymbolicCount::exact(2 * (n1.trailing_zeros() as i64 - n2.trailing_zeros() as i64))
            }
        };
        let l_d = reflection_closed(ni);
        (l_v, l_d, l_v.scale(2) + SymbolicCount::exact(l_d))
    } else {
        if matches!(graph, GraphSpec::Cycle { .. }) {
            l_pplus = (1..=n).map(|m| (m, pplus_count(m))).collect();
        }
        direct(graph)
    };
    let has_rotations = l_u.rotations > 0;
    let l_r = has_rotations.then(|| eps.map(rotation_cost));
    let l_u_value = match l_r {
        Some(Some(cost)) => Some(l_u.evaluate(cost)),
        Some(None) => None,
        None => Some(l_u.constant as f64),
    };
    TCountReport { graph: graph.to_string(), n, l_v, l_d, l_u, l_r, l_u_value, breakdown, l_pplus, closed_form }
}

impl fmt::Display for TCountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph      {}", self.graph)?;
        writeln!(f, "n          {}", self.n)?;
        writeln!(f, "L_V        {}", self.l_v)?;
        writeln!(f, "L_D        {}", self.l_d)?;
        writeln!(f, "L_U        {}", self.l_u)?;
        if let Some(l_r) = self.l_r {
            match l_r {
                Some(v) => writeln!(f, "L_R        {v:.3}")?,
                None => writeln!(f, "L_R        symbolic")?,
            }
        }
        if let (Some(v), true) = (self.l_u_value, self.l_u.rotations > 0) {
            writeln!(f, "L_U value  {v:.3}")?;
        }
        if let Some(b) = &self.breakdown {
            writeln!(f, "L_CX       {}", b.l_cx)?;
            writeln!(f, "L_CH       {}", b.l_ch)?;
            writeln!(f, "L_CA       {}", b.l_ca)?;
            writeln!(f, "L_CR       {}", b.l_cr)?;
        }
        for (m, c) in &self.l_pplus {
            writeln!(f, "L_P+({m})    {c}")?;
        }
        if !self.closed_form {
            writeln!(f, "note       n < 3: counted from the compiled circuit")?;
        }
        Ok(())
    }
}
