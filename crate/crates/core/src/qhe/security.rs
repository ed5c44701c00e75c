use num_complex::Complex64;

use super::key::{encrypt, PauliKey};
use super::QheError;
use crate::cqsim::StateVector;

pub const MAX_QUBITS: usize = 3;

/// Which keys the average runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeySet {
    /// All `4^n` Pauli keys.
    Full,
    /// The `2^n` keys with `z = 0`.
    XOnly,
}

fn keys(n: usize, set: KeySet) -> impl Iterator<Item = PauliKey> {
    let z_range = match set {
        KeySet::Full => 1usize << n,
        KeySet::XOnly => 1,
    };
    (0..1usize << n).flat_map(move |xs| {
        (0..z_range).map(move |zs| {
            let bits = |v: usize| (0..n).map(|i| v >> i & 1 == 1).collect();
            PauliKey::new(bits(xs), bits(zs)).expect("equal lengths")
        })
    })
}

/// Row-major `2^n x 2^n` density matrix averaged over every key of `set`.
pub fn average_density(state: &StateVector, set: KeySet) -> Result<Vec<Complex64>, QheError> {
    let n = state.n_qubits();
    if n > MAX_QUBITS {
        return Err(QheError::TooLarge { n, max: MAX_QUBITS });
    }
    let dim = state.dim();
    let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut count = 0.0;
    for key in keys(n, set) {
        let psi = encrypt(state, &key)?;
        let a = psi.amplitudes();
        for i in 0..dim {
            for j in 0..dim {
                rho[i * dim + j] += a[i] * a[j].conj();
            }
        }
        count += 1.0;
    }
    rho.iter_mut().for_each(|r| *r /= count);
    Ok(rho)
}

fn deviation_from_mixed(rho: &[Complex64], dim: usize) -> f64 {
    let target = 1.0 / dim as f64;
    rho.iter()
        .enumerate()
        .map(|(k, r)| {
            let want = if k / dim == k % dim { target } else { 0.0 };
            (r - want).norm()
        })
        .fold(0.0, f64::max)
}

/// Max entrywise deviation of the key-averaged encrypted state from the
/// maximally mixed state.
///
/// With [`KeySet::XOnly`] the state is read as the classical distribution
/// `|amp|^2` (off-diagonal terms dropped first): X-only pads hide
/// probability distributions, not coherent superpositions.
pub fn mixedness_check(n: usize, state: &StateVector, set: KeySet) -> Result<f64, QheError> {
    if n > MAX_QUBITS {
        return Err(QheError::TooLarge { n, max: MAX_QUBITS });
    }
    if state.n_qubits() != n {
        return Err(QheError::KeyLength { expected: n, got: state.n_qubits() });
    }
    let dim = state.dim();
    let rho = match set {
        KeySet::Full => average_density(state, set)?,
        KeySet::XOnly => {
            let probs = state.probabilities();
            let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
            for mask in 0..dim {
                for (i, p) in probs.iter().enumerate() {
                    let j = i ^ mask;
                    rho[j * dim + j] += p / dim as f64;
                }
            }
            rho
        }
    };
    Ok(deviation_from_mixed(&rho, dim))
}

/// Deviation from maximal mixing of the coherent state itself under the
/// given keys, without any dephasing.
pub fn coherent_deviation(state: &StateVector, set: KeySet) -> Result<f64, QheError> {
    let rho = average_density(state, set)?;
    Ok(deviation_from_mixed(&rho, state.dim()))
}
