//! Square bit matrices over GF(2), up to 128 columns.

use std::fmt;

pub const MAX_DIM: usize = 128;

/// Row `r` holds the coefficients of output bit `r` as a bitmask over input
/// bits (bit `c` of the mask is column `c`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    dim: usize,
    rows: Vec<u128>,
}

impl BitMatrix {
    pub fn identity(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "bit matrices are limited to {MAX_DIM} columns");
        BitMatrix { dim, rows: (0..dim).map(|r| 1u128 << r).collect() }
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "bit matrices are limited to {MAX_DIM} columns");
        BitMatrix { dim, rows: vec![0; dim] }
    }

    pub fn from_rows(dim: usize, rows: Vec<u128>) -> Self {
        assert_eq!(rows.len(), dim);
        BitMatrix { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, r: usize) -> u128 {
        self.rows[r]
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r] >> c & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        if v {
            self.rows[r] |= 1 << c;
        } else {
            self.rows[r] &= !(1 << c);
        }
    }

    /// `row[target] ^= row[source]`, i.e. left-multiply by an elementary matrix.
    pub fn add_row(&mut self, target: usize, source: usize) {
        self.rows[target] ^= self.rows[source];
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    pub fn clear_row(&mut self, r: usize) {
        self.rows[r] = 0;
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(r, &row)| row == 1u128 << r)
    }

    /// `self * v` for a packed bit vector.
    pub fn apply(&self, v: u128) -> u128 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (r, &row)| acc | (u128::from((row & v).count_ones() & 1) << r))
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.dim, other.dim);
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                (0..self.dim)
                    .filter(|&c| row >> c & 1 == 1)
                    .fold(0, |acc, c| acc ^ other.rows[c])
            })
            .collect();
        BitMatrix { dim: self.dim, rows }
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for c in 0..self.dim {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r] >> c & 1 == 1) else { continue };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row >> c & 1 == 1 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.dim
    }

    /// Classical XOR gates needed to evaluate the map row by row: a row with
    /// `k` ones costs `k - 1`.
    pub fn xor_cost(&self) -> usize {
        self.rows.iter().map(|r| (r.count_ones() as usize).saturating_sub(1)).sum()
    }
}

/// Packs bits into a `u128`, element `i` at bit `i`.
pub fn pack_bits(bits: &[bool]) -> u128 {
    assert!(bits.len() <= MAX_DIM);
    bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | (u128::from(b) << i))
}

pub fn unpack_bits(v: u128, len: usize) -> Vec<bool> {
    (0..len).map(|i| v >> i & 1 == 1).collect()
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({})", self.dim)?;
        for r in 0..self.dim {
            let line: String = (0..self.dim).map(|c| if self.get(r, c) { '1' } else { '.' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}
