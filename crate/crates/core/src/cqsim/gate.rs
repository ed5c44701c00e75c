use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;

/// Quantum gates understood by the simulator.
///
/// `Ry` and `Rz` carry their angle in radians. They are accepted by the
/// simulator but not by the homomorphic evaluator, which only knows how to
/// track keys through Clifford gates and `T`/`Tdg`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    X,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Cnot,
    Swap,
    Toffoli,
    Ry(f64),
    Rz(f64),
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap => 2,
            GateKind::Toffoli => 3,
            _ => 1,
        }
    }

    /// Gates whose conjugation maps Pauli operators to Pauli operators.
    pub fn is_clifford(&self) -> bool {
        matches!(
            self,
            GateKind::X
                | GateKind::Z
                | GateKind::H
                | GateKind::S
                | GateKind::Sdg
                | GateKind::Cnot
                | GateKind::Swap
        )
    }

    pub fn is_t_type(&self) -> bool {
        matches!(self, GateKind::T | GateKind::Tdg)
    }

    pub fn inverse(&self) -> GateKind {
        match *self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            GateKind::Ry(theta) => GateKind::Ry(-theta),
            GateKind::Rz(theta) => GateKind::Rz(-theta),
            other => other,
        }
    }

    /// Short lower-case name, as used by the circuit JSON format.
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Cnot => "cx",
            GateKind::Swap => "swap",
            GateKind::Toffoli => "ccx",
            GateKind::Ry(_) => "ry",
            GateKind::Rz(_) => "rz",
        }
    }

    pub fn param(&self) -> Option<f64> {
        match *self {
            GateKind::Ry(theta) | GateKind::Rz(theta) => Some(theta),
            _ => None,
        }
    }

    /// Parse a gate from its JSON name, with the angle for rotations.
    pub fn from_name(name: &str, param: Option<f64>) -> Option<GateKind> {
        let gate = match name {
            "x" => GateKind::X,
            "z" => GateKind::Z,
            "h" => GateKind::H,
            "s" => GateKind::S,
            "sdg" => GateKind::Sdg,
            "t" => GateKind::T,
            "tdg" => GateKind::Tdg,
            "cx" | "cnot" => GateKind::Cnot,
            "swap" => GateKind::Swap,
            "ccx" | "toffoli" => GateKind::Toffoli,
            "ry" => GateKind::Ry(param?),
            "rz" => GateKind::Rz(param?),
            _ => return None,
        };
        Some(gate)
    }

    /// Dense row-major matrix of the gate, `2^k x 2^k` for arity `k`.
    ///
    /// Multi-qubit matrices use big-endian ordering of the listed qubits: the
    /// first qubit is the most significant bit of the row index.
    pub fn matrix(&self) -> Vec<Complex64> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        match *self {
            GateKind::X => vec![zero, one, one, zero],
            GateKind::Z => vec![one, zero, zero, -one],
            GateKind::H => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                vec![h, h, h, -h]
            }
            GateKind::S => vec![one, zero, zero, c(0.0, 1.0)],
            GateKind::Sdg => vec![one, zero, zero, c(0.0, -1.0)],
            GateKind::T => vec![one, zero, zero, Complex64::from_polar(1.0, FRAC_PI_4)],
            GateKind::Tdg => vec![one, zero, zero, Complex64::from_polar(1.0, -FRAC_PI_4)],
            GateKind::Ry(theta) => {
                let (s, co) = (theta / 2.0).sin_cos();
                vec![c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
            }
            GateKind::Rz(theta) => vec![
                Complex64::from_polar(1.0, -theta / 2.0),
                zero,
                zero,
                Complex64::from_polar(1.0, theta / 2.0),
            ],
            GateKind::Cnot => permutation_matrix(4, |i| if i >= 2 { i ^ 1 } else { i }),
            GateKind::Swap => permutation_matrix(4, |i| ((i & 1) << 1) | (i >> 1)),
            GateKind::Toffoli => permutation_matrix(8, |i| if i >= 6 { i ^ 1 } else { i }),
        }
    }
}

fn permutation_matrix(dim: usize, image: impl Fn(usize) -> usize) -> Vec<Complex64> {
    let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        m[image(col) * dim + col] = Complex64::new(1.0, 0.0);
    }
    m
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param() {
            Some(theta) => write!(f, "{}({theta})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}
