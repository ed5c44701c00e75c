use std::fmt;

use super::SzegedyError;
use crate::oracle::TransitionMatrix;

/// The graph families with known update circuits. Node counts are powers
/// of two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Cycle { nodes: usize },
    Complete { nodes: usize },
    /// Complete bipartite graph with parts of `n1 >= n2` nodes.
    Bipartite { n1: usize, n2: usize },
}

fn log2_exact(v: usize, what: &str) -> Result<usize, SzegedyError> {
    if v < 2 || !v.is_power_of_two() {
        return Err(SzegedyError::InvalidGraph(format!("{what} must be a power of two >= 2, got {v}")));
    }
    Ok(v.trailing_zeros() as usize)
}

impl GraphSpec {
    pub fn cycle(nodes: usize) -> Result<Self, SzegedyError> {
        log2_exact(nodes, "cycle size")?;
        Ok(GraphSpec::Cycle { nodes })
    }

    pub fn complete(nodes: usize) -> Result<Self, SzegedyError> {
        log2_exact(nodes, "complete graph size")?;
        Ok(GraphSpec::Complete { nodes })
    }

    pub fn bipartite(n1: usize, n2: usize) -> Result<Self, SzegedyError> {
        log2_exact(n1, "first part")?;
        log2_exact(n2, "second part")?;
        if n2 > n1 {
            return Err(SzegedyError::InvalidGraph(format!("second part ({n2}) larger than first ({n1})")));
        }
        Ok(GraphSpec::Bipartite { n1, n2 })
    }

    /// Parses `cycle`, `complete` or `bipartite` with node counts.
    pub fn from_parts(kind: &str, nodes: usize, n2: Option<usize>) -> Result<Self, SzegedyError> {
        match kind {
            "cycle" => Self::cycle(nodes),
            "complete" => Self::complete(nodes),
            "bipartite" => Self::bipartite(nodes, n2.unwrap_or(nodes)),
            other => Err(SzegedyError::InvalidGraph(format!("unknown graph family `{other}`"))),
        }
    }

    /// Qubits per register.
    pub fn width(&self) -> usize {
        match *self {
            GraphSpec::Cycle { nodes } | GraphSpec::Complete { nodes } => nodes.trailing_zeros() as usize,
            GraphSpec::Bipartite { n1, .. } => n1.trailing_zeros() as usize + 1,
        }
    }

    /// Nodes simulated by the circuit (`2^width`).
    pub fn circuit_nodes(&self) -> usize {
        1 << self.width()
    }

    /// Indices of the real graph nodes inside the circuit's node space; for
    /// bipartite graphs the padding nodes are left out.
    pub fn original_nodes(&self) -> Vec<usize> {
        match *self {
            GraphSpec::Bipartite { n1, n2 } => (0..n1 + n2).collect(),
            _ => (0..self.circuit_nodes()).collect(),
        }
    }

    /// Column-stochastic transition matrix on the circuit's node space.
    pub fn transition_matrix(&self) -> TransitionMatrix {
        let n = self.circuit_nodes();
        let mut g = vec![0.0; n * n];
        let mut set = |j: usize, i: usize, v: f64| g[j * n + i] = v;
        match *self {
            GraphSpec::Cycle { nodes } => {
                for i in 0..nodes {
                    set((i + 1) % nodes, i, 0.5);
                    set((i + nodes - 1) % nodes, i, 0.5);
                }
                if nodes == 2 {
                    set(1, 0, 1.0);
                    set(0, 1, 1.0);
                }
            }
            GraphSpec::Complete { nodes } => {
                let p = 1.0 / (nodes - 1) as f64;
                for i in 0..nodes {
                    for j in (0..nodes).filter(|&j| j != i) {
                        set(j, i, p);
                    }
                }
            }
            GraphSpec::Bipartite { n1, n2 } => {
                for i in 0..n1 {
                    for j in n1..n1 + n2 {
                        set(j, i, 1.0 / n2 as f64);
                    }
                }
                // second part and padding nodes all lead into the first part
                for i in n1..2 * n1 {
                    for j in 0..n1 {
                        set(j, i, 1.0 / n1 as f64);
                    }
                }
            }
        }
        TransitionMatrix::new(n, g).expect("graph families are column-stochastic")
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Cycle { nodes } => write!(f, "cycle({nodes})"),
            GraphSpec::Complete { nodes } => write!(f, "complete({nodes})"),
            GraphSpec::Bipartite { n1, n2 } => write!(f, "bipartite({n1},{n2})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!(GraphSpec::cycle(8).unwrap().width(), 3);
        assert_eq!(GraphSpec::complete(16).unwrap().width(), 4);
        assert_eq!(GraphSpec::bipartite(8, 4).unwrap().width(), 4);
        assert!(GraphSpec::cycle(6).is_err());
        assert!(GraphSpec::bipartite(4, 8).is_err());
    }

    #[test]
    fn cycle_four_column_zero() {
        let g = GraphSpec::cycle(4).unwrap().transition_matrix();
        assert_eq!(g.column(0), vec![0.0, 0.5, 0.0, 0.5]);
    }

    #[test]
    fn complete_four_entries() {
        let g = GraphSpec::complete(4).unwrap().transition_matrix();
        for j in 0..4 {
            for i in 0..4 {
                let want = if i == j { 0.0 } else { 1.0 / 3.0 };
                assert!((g.get(j, i) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn bipartite_four_four() {
        let g = GraphSpec::bipartite(4, 4).unwrap().transition_matrix();
        for i in 0..4 {
            let col = g.column(i);
            assert!(col[..4].iter().all(|&v| v == 0.0));
            assert!(col[4..].iter().all(|&v| v == 0.25));
        }
    }
}
