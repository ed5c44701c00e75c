//! Dense reference model of the Szegedy walk, built straight from the
//! transition matrix with no circuits involved.
//!
//! Two-register states are vectors of length `N^2` indexed `i * N + k` for
//! `|i>_1 |k>_2`, which is the same order the circuit simulator uses.

use num_complex::Complex64;
use thiserror::Error;

const STOCHASTIC_TOL: f64 = 1e-12;
/// Largest node count the oracle accepts.
pub const MAX_NODES: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("expected {expected} entries for a {n}x{n} matrix, got {got}")]
    Shape { n: usize, expected: usize, got: usize },
    #[error("entry ({row}, {col}) is negative: {value}")]
    Negative { row: usize, col: usize, value: f64 },
    #[error("column {col} sums to {sum}, not 1")]
    NotStochastic { col: usize, sum: f64 },
    #[error("{0} nodes is more than the oracle handles ({MAX_NODES})")]
    TooLarge(usize),
    #[error("state has length {got}, expected {expected}")]
    StateLength { expected: usize, got: usize },
    #[error("{0}")]
    InvalidInput(String),
}

/// Column-stochastic `N x N` matrix; `get(j, i)` is the probability of
/// moving from node `i` to node `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl TransitionMatrix {
    /// `entries` is row-major: `entries[j * n + i] = G[j][i]`.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self, OracleError> {
        if entries.len() != n * n || n == 0 {
            return Err(OracleError::Shape { n, expected: n * n, got: entries.len() });
        }
        if n > MAX_NODES {
            return Err(OracleError::TooLarge(n));
        }
        for (idx, &value) in entries.iter().enumerate() {
            if value < 0.0 || !value.is_finite() {
                return Err(OracleError::Negative { row: idx / n, col: idx % n, value });
            }
        }
        let m = TransitionMatrix { n, entries };
        for col in 0..n {
            let sum: f64 = m.column(col).iter().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(OracleError::NotStochastic { col, sum });
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, OracleError> {
        let n = rows.len();
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, i: usize) -> f64 {
        self.entries[j * self.n + i]
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..self.n).map(|j| self.get(j, i)).collect()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `G p`.
    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        (0..self.n).map(|j| (0..self.n).map(|i| self.get(j, i) * p[i]).sum()).collect()
    }
}

/// Walk operator `U = S (2 Pi - 1)` with `Pi` the projector onto the span
/// of the `psi_i`, applied matrix-free.
#[derive(Clone, Debug)]
pub struct WalkOperator {
    n: usize,
    /// `psi[i][k] = sqrt(G[k][i])`, the register-2 part of `|psi_i>`.
    weights: Vec<Vec<f64>>,
}

/// Builds the walk operator of `g`. Zero transition probabilities stay
/// exactly zero.
pub fn walk_unitary(g: &TransitionMatrix) -> WalkOperator {
    let n = g.dim();
    let weights = (0..n).map(|i| g.column(i).into_iter().map(f64::sqrt).collect()).collect();
    WalkOperator { n, weights }
}

impl WalkOperator {
    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    /// `|psi_i>` as a full two-register vector.
    pub fn psi(&self, i: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (k, &w) in self.weights[i].iter().enumerate() {
            v[i * self.n + k] = Complex64::new(w, 0.0);
        }
        v
    }

    /// `sum_i sqrt(w_i) |psi_i>`, normalized.
    pub fn superposition(&self, weights: &[(usize, f64)]) -> Result<Vec<Complex64>, OracleError> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        for &(i, w) in weights {
            if i >= self.n || w < 0.0 {
                return Err(OracleError::InvalidInput(format!("bad weight {w} on node {i}")));
            }
            for (k, &a) in self.weights[i].iter().enumerate() {
                v[i * self.n + k] += Complex64::new(w.sqrt() * a, 0.0);
            }
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(OracleError::InvalidInput("initial weights are all zero".into()));
        }
        v.iter_mut().for_each(|a| *a /= norm);
        Ok(v)
    }

    /// `U v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        // reflection: 2 sum_i |psi_i><psi_i|v> - v
        let mut r: Vec<Complex64> = v.iter().map(|a| -a).collect();
        for i in 0..n {
            let block = &v[i * n..(i + 1) * n];
            let w = &self.weights[i];
            let overlap: Complex64 = block.iter().zip(w).map(|(a, &b)| a * b).sum();
            for k in 0..n {
                r[i * n + k] += 2.0 * overlap * w[k];
            }
        }
        // register swap
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                out[k * n + i] = r[i * n + k];
            }
        }
        out
    }

    pub fn apply_steps(&self, v: &[Complex64], t: usize) -> Vec<Complex64> {
        (0..t).fold(v.to_vec(), |acc, _| self.apply(&acc))
    }

    /// Dense matrix, column by column (`columns[c][r] = U[r][c]`).
    pub fn dense_columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|c| {
                let mut e = vec![Complex64::new(0.0, 0.0); self.dim()];
                e[c] = Complex64::new(1.0, 0.0);
                self.apply(&e)
            })
            .collect()
    }
}

/// Register-1 marginal of a two-register state.
pub fn node_distribution(n: usize, state: &[Complex64]) -> Vec<f64> {
    (0..n).map(|i| state[i * n..(i + 1) * n].iter().map(|a| a.norm_sqr()).sum()).collect()
}

/// Register-1 distribution after `t` walk steps from `init`.
pub fn evolve_distribution(u: &WalkOperator, init: &[Complex64], t: usize) -> Result<Vec<f64>, OracleError> {
    if init.len() != u.dim() {
        return Err(OracleError::StateLength { expected: u.dim(), got: init.len() });
    }
    let norm: f64 = init.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(OracleError::InvalidInput(format!("initial state has squared norm {norm}")));
    }
    Ok(node_distribution(u.nodes(), &u.apply_steps(init, t)))
}

/// `G^(t_q)[j][i] = || <j|_1 U^t_q |psi_i> ||^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiclassicalMatrix(TransitionMatrix);

impl SemiclassicalMatrix {
    pub fn matrix(&self) -> &TransitionMatrix {
        &self.0
    }

    pub fn get(&self, j: usize, i: usize) -> f64 {
        self.0.get(j, i)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

pub fn semiclassical_matrix(g: &TransitionMatrix, t_q: usize) -> Result<SemiclassicalMatrix, OracleError> {
    if t_q == 0 {
        return Err(OracleError::InvalidInput("t_q must be at least 1".into()));
    }
    let u = walk_unitary(g);
    let n = g.dim();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        let p = node_distribution(n, &u.apply_steps(&u.psi(i), t_q));
        for (j, pj) in p.into_iter().enumerate() {
            entries[j * n + i] = pj;
        }
    }
    Ok(SemiclassicalMatrix(TransitionMatrix::new(n, entries)?))
}

/// `p_0, G p_0, ..., G^t_f p_0` (`t_f + 1` vectors).
pub fn semiclassical_evolve(p0: &[f64], gq: &SemiclassicalMatrix, t_f: usize) -> Result<Vec<Vec<f64>>, OracleError> {
    if p0.len() != gq.dim() {
        return Err(OracleError::StateLength { expected: gq.dim(), got: p0.len() });
    }
    if p0.iter().any(|&p| p < 0.0) || (p0.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(OracleError::InvalidInput("initial vector is not a probability distribution".into()));
    }
    let mut out = vec![p0.to_vec()];
    for _ in 0..t_f {
        let next = gq.0.apply(out.last().expect("non-empty"));
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_matrices() {
        assert!(matches!(TransitionMatrix::new(2, vec![0.5, 0.5, 0.4, 0.5]), Err(OracleError::NotStochastic { col: 0, .. })));
        assert!(matches!(TransitionMatrix::new(2, vec![1.5, 0.0, -0.5, 1.0]), Err(OracleError::Negative { .. })));
        assert!(matches!(TransitionMatrix::new(2, vec![1.0; 3]), Err(OracleError::Shape { .. })));
    }

    #[test]
    fn two_node_flip() {
        let g = TransitionMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let u = walk_unitary(&g);
        let psi0 = u.psi(0);
        assert_eq!(psi0[1], Complex64::new(1.0, 0.0));
        assert_eq!(u.psi(1)[2], Complex64::new(1.0, 0.0));
        // the swap carries |0>|1> to |1>|0>
        let out = u.apply(&psi0);
        for (a, b) in out.iter().zip(&u.psi(1)) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn unit_step_zero_is_initial_node() {
        let g = TransitionMatrix::from_rows(&[vec![0.0, 0.5, 0.5], vec![0.5, 0.0, 0.5], vec![0.5, 0.5, 0.0]]).unwrap();
        let u = walk_unitary(&g);
        let p = evolve_distribution(&u, &u.psi(2), 0).unwrap();
        assert!(p[0] == 0.0 && p[1] == 0.0 && (p[2] - 1.0).abs() < 1e-15);
    }
}
