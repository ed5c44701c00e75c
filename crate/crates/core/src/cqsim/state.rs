use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use super::gate::GateKind;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("{gate} expects {expected} qubits, got {got}")]
    Arity { gate: GateKind, expected: usize, got: usize },
    #[error("repeated qubit {0}")]
    DuplicateQubit(usize),
    #[error("expected {expected} amplitudes, got {got}")]
    Length { expected: usize, got: usize },
    #[error("amplitudes have squared norm {0}, expected 1")]
    NotNormalized(f64),
}

/// Pure state of `n` qubits as `2^n` amplitudes, big-endian.
///
/// Qubit `q` is bit `n - 1 - q` of the amplitude index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n` qubits.
    pub fn zero(n: usize) -> Self {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Self {
        assert!(index < 1 << n, "basis index {index} out of range for {n} qubits");
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        StateVector { n, amps }
    }

    /// Wraps amplitudes that must already be normalized (within 1e-10).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, StateError> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.is_empty() || amps.len() != 1 << n {
            return Err(StateError::Length { expected: 1 << n.max(1), got: amps.len() });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(StateError::NotNormalized(norm));
        }
        Ok(StateVector { n, amps })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self, StateError> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(StateError::NotNormalized(0.0));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(amps)
    }

    /// Haar-ish random state: i.i.d. Gaussian amplitudes, normalized.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let mut gauss = || {
            // Box-Muller
            let u: f64 = 1.0 - rng.random::<f64>();
            let v: f64 = rng.random::<f64>();
            (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
        };
        let amps = (0..1usize << n).map(|_| Complex64::new(gauss(), gauss())).collect();
        Self::normalized(amps).expect("gaussian amplitudes are almost surely nonzero")
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `self ⊗ other`; the qubits of `self` come first.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        StateVector { n: self.n + other.n, amps }
    }

    /// Appends `k` qubits in `|0>` after the existing ones.
    pub fn with_ancillas(&self, k: usize) -> StateVector {
        self.tensor(&StateVector::zero(k))
    }

    /// Max entrywise distance after aligning global phase on the largest
    /// amplitude of `self`.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        let pivot = (0..self.dim())
            .max_by(|&i, &j| self.amps[i].norm_sqr().total_cmp(&self.amps[j].norm_sqr()))
            .unwrap_or(0);
        let (a, b) = (self.amps[pivot], other.amps[pivot]);
        let phase = if b.norm() > 1e-15 { (a / b) / (a / b).norm() } else { ONE };
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| (x - y * phase).norm())
            .fold(0.0, f64::max)
    }

    /// Max entrywise distance without any phase freedom.
    pub fn distance(&self, other: &StateVector) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.amps.iter().zip(&other.amps).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    fn check_qubit(&self, q: usize) -> Result<(), StateError> {
        if q >= self.n {
            Err(StateError::QubitOutOfRange { qubit: q, n_qubits: self.n })
        } else {
            Ok(())
        }
    }

    /// Applies a gate after validating arity and indices.
    pub fn apply_gate(&mut self, gate: GateKind, qubits: &[usize]) -> Result<(), StateError> {
        if qubits.len() != gate.arity() {
            return Err(StateError::Arity { gate, expected: gate.arity(), got: qubits.len() });
        }
        for (k, &q) in qubits.iter().enumerate() {
            self.check_qubit(q)?;
            if qubits[..k].contains(&q) {
                return Err(StateError::DuplicateQubit(q));
            }
        }
        self.apply_unchecked(gate, qubits);
        Ok(())
    }

    /// Applies a gate whose qubits are known to be valid and distinct.
    pub(crate) fn apply_unchecked(&mut self, gate: GateKind, qubits: &[usize]) {
        match gate {
            GateKind::X => self.apply_x(qubits[0]),
            GateKind::Z => self.apply_phase(qubits[0], -ONE),
            GateKind::S => self.apply_phase(qubits[0], Complex64::new(0.0, 1.0)),
            GateKind::Sdg => self.apply_phase(qubits[0], Complex64::new(0.0, -1.0)),
            GateKind::T => self.apply_phase(qubits[0], Complex64::from_polar(1.0, FRAC_PI_4)),
            GateKind::Tdg => self.apply_phase(qubits[0], Complex64::from_polar(1.0, -FRAC_PI_4)),
            GateKind::H => self.apply_h(qubits[0]),
            GateKind::Cnot => self.apply_cnot(qubits[0], qubits[1]),
            GateKind::Swap => self.apply_swap(qubits[0], qubits[1]),
            GateKind::Toffoli => self.apply_toffoli(qubits[0], qubits[1], qubits[2]),
            GateKind::Ry(_) | GateKind::Rz(_) => {
                let m = gate.matrix();
                self.apply_1q(qubits[0], [m[0], m[1], m[2], m[3]]);
            }
        }
    }

    /// Visits every pair `(i, i | mask)` with bit `mask` clear in `i`.
    #[inline]
    fn for_pairs(&mut self, mask: usize, mut f: impl FnMut(&mut Complex64, &mut Complex64)) {
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            let (lo, hi) = self.amps[base..base + 2 * mask].split_at_mut(mask);
            lo.iter_mut().zip(hi.iter_mut()).for_each(|(a, b)| f(a, b));
            base += 2 * mask;
        }
    }

    /// General single-qubit gate, row-major `[m00, m01, m10, m11]`.
    pub fn apply_1q(&mut self, q: usize, m: [Complex64; 4]) {
        let mask = self.mask(q);
        self.for_pairs(mask, |a, b| {
            let (x, y) = (*a, *b);
            *a = m[0] * x + m[1] * y;
            *b = m[2] * x + m[3] * y;
        });
    }

    fn apply_x(&mut self, q: usize) {
        let mask = self.mask(q);
        self.for_pairs(mask, std::mem::swap);
    }

    fn apply_h(&mut self, q: usize) {
        let mask = self.mask(q);
        self.for_pairs(mask, |a, b| {
            let (x, y) = (*a, *b);
            *a = (x + y) * FRAC_1_SQRT_2;
            *b = (x - y) * FRAC_1_SQRT_2;
        });
    }

    fn apply_phase(&mut self, q: usize, phase: Complex64) {
        let mask = self.mask(q);
        self.for_pairs(mask, |_, b| *b *= phase);
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (self.mask(control), self.mask(target));
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (ma, mb) = (self.mask(a), self.mask(b));
        for i in 0..self.amps.len() {
            if i & ma != 0 && i & mb == 0 {
                self.amps.swap(i, (i & !ma) | mb);
            }
        }
    }

    fn apply_toffoli(&mut self, a: usize, b: usize, target: usize) {
        let c = self.mask(a) | self.mask(b);
        let t = self.mask(target);
        for i in 0..self.amps.len() {
            if i & c == c && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    /// Probability that measuring `q` yields 1.
    pub fn prob_one(&self, q: usize) -> f64 {
        let mask = self.mask(q);
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects qubit `q` onto `outcome` and renormalizes. Returns the
    /// probability of that outcome before projection.
    ///
    /// Panics if the outcome has zero probability.
    pub fn collapse(&mut self, q: usize, outcome: bool) -> f64 {
        let mask = self.mask(q);
        let mut kept = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & mask != 0) == outcome {
                kept += a.norm_sqr();
            } else {
                *a = ZERO;
            }
        }
        assert!(kept > 0.0, "collapsed qubit {q} onto an impossible outcome");
        let scale = 1.0 / kept.sqrt();
        self.amps.iter_mut().for_each(|a| *a *= scale);
        kept
    }

    /// Born-rule measurement of qubit `q`.
    pub fn measure(&mut self, q: usize, rng: &mut impl Rng) -> Result<bool, StateError> {
        self.check_qubit(q)?;
        let p1 = self.prob_one(q);
        let outcome = rng.random::<f64>() < p1;
        self.collapse(q, outcome);
        Ok(outcome)
    }

    /// Measure then flip back to `|0>` if the outcome was 1.
    pub fn reset(&mut self, q: usize, rng: &mut impl Rng) -> Result<(), StateError> {
        if self.measure(q, rng)? {
            self.apply_x(q);
        }
        Ok(())
    }

    /// Forces qubit `q` to `|0>` given a known outcome (used by branch
    /// enumeration).
    pub(crate) fn reset_to(&mut self, q: usize, outcome: bool) {
        self.collapse(q, outcome);
        if outcome {
            self.apply_x(q);
        }
    }

    /// Distribution of the listed qubits, indexed big-endian in list order.
    pub fn marginal(&self, qubits: &[usize]) -> Vec<f64> {
        let masks: Vec<usize> = qubits.iter().map(|&q| self.mask(q)).collect();
        let mut out = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            out[extract_bits(i, &masks)] += a.norm_sqr();
        }
        out
    }

    /// Removes qubits that are expected to be `|0>`. Returns the reduced
    /// state (unnormalized if there was leakage) and the squared norm that
    /// lived outside the all-zero subspace of the removed qubits.
    pub fn drop_zero_qubits(&self, qubits: &[usize]) -> (Vec<Complex64>, f64) {
        let removed: usize = qubits.iter().map(|&q| self.mask(q)).fold(0, |acc, m| acc | m);
        let kept_masks: Vec<usize> =
            (0..self.n).filter(|q| !qubits.contains(q)).map(|q| self.mask(q)).collect();
        let mut out = vec![ZERO; 1 << kept_masks.len()];
        let mut leak = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            if i & removed == 0 {
                out[extract_bits(i, &kept_masks)] = *a;
            } else {
                leak += a.norm_sqr();
            }
        }
        (out, leak)
    }
}

/// Packs the bits of `index` selected by `masks` into an integer, first mask
/// most significant.
pub(crate) fn extract_bits(index: usize, masks: &[usize]) -> usize {
    masks.iter().fold(0, |acc, &m| (acc << 1) | usize::from(index & m != 0))
}

/// Width-`n` big-endian bitstring of `value`.
pub fn bitstring(value: usize, n: usize) -> String {
    (0..n).map(|k| if value >> (n - 1 - k) & 1 == 1 { '1' } else { '0' }).collect()
}
