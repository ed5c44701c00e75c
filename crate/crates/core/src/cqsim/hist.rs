use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::state::bitstring;

/// Probabilities keyed by big-endian bitstring (or any node label).
pub type Distribution = BTreeMap<String, f64>;

#[derive(Debug, Error, PartialEq)]
pub enum CsvError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing header `{0}`")]
    Header(String),
}

/// Shot counts over fixed-width outcomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    width: usize,
    counts: BTreeMap<usize, u64>,
}

impl Histogram {
    pub fn new(width: usize) -> Self {
        Histogram { width, counts: BTreeMap::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn record(&mut self, value: usize) {
        *self.counts.entry(value).or_default() += 1;
    }

    pub fn add(&mut self, value: usize, count: u64) {
        *self.counts.entry(value).or_default() += count;
    }

    pub fn get(&self, value: usize) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn shots(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `(bitstring, count)` in ascending bitstring order.
    pub fn counts(&self) -> impl Iterator<Item = (String, u64)> + '_ {
        self.counts.iter().map(|(&v, &c)| (bitstring(v, self.width), c))
    }

    pub fn raw_counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    /// Histogram of the bits at `positions` (0 = leftmost), in that order.
    pub fn marginal(&self, positions: &[usize]) -> Histogram {
        let mut out = Histogram::new(positions.len());
        for (&v, &c) in &self.counts {
            let packed = positions
                .iter()
                .fold(0, |acc, &p| (acc << 1) | (v >> (self.width - 1 - p) & 1));
            out.add(packed, c);
        }
        out
    }

    pub fn to_distribution(&self) -> Distribution {
        let total = self.shots() as f64;
        self.counts().map(|(k, c)| (k, c as f64 / total)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bitstring,count\n");
        for (k, c) in self.counts() {
            let _ = writeln!(out, "{k},{c}");
        }
        out
    }
}

/// Total-variation distance `1/2 Σ |p - q|` over the union of supports.
pub fn tv_distance(p: &Distribution, q: &Distribution) -> f64 {
    let mut sum = 0.0;
    for (k, a) in p {
        sum += (a - q.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, b) in q {
        if !p.contains_key(k) {
            sum += b.abs();
        }
    }
    sum / 2.0
}

/// Largest single-outcome deviation between two distributions.
pub fn max_deviation(p: &Distribution, q: &Distribution) -> f64 {
    p.keys()
        .chain(q.keys())
        .map(|k| (p.get(k).copied().unwrap_or(0.0) - q.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// Uniform distribution over all `2^width` bitstrings.
pub fn uniform(width: usize) -> Distribution {
    let p = 1.0 / (1u64 << width) as f64;
    (0..1usize << width).map(|v| (bitstring(v, width), p)).collect()
}

/// Dense probability vector (big-endian index) to a labelled distribution.
pub fn distribution_from_probs(probs: &[f64], width: usize) -> Distribution {
    probs.iter().enumerate().map(|(v, &p)| (bitstring(v, width), p)).collect()
}

/// Reads a two-column CSV with a header row. The second column may hold
/// counts or probabilities; the result is normalized to sum to 1.
pub fn read_distribution_csv(text: &str) -> Result<Distribution, CsvError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| CsvError::Header("<empty file>".into()))?;
    if header.split(',').count() != 2 {
        return Err(CsvError::Header(header.to_string()));
    }
    let mut dist = Distribution::new();
    for (i, line) in lines {
        let (key, value) = line.split_once(',').ok_or_else(|| CsvError::Line {
            line: i + 1,
            message: "expected two columns".into(),
        })?;
        let value: f64 = value.trim().parse().map_err(|_| CsvError::Line {
            line: i + 1,
            message: format!("not a number: `{value}`"),
        })?;
        *dist.entry(key.trim().to_string()).or_default() += value;
    }
    let total: f64 = dist.values().sum();
    if total > 0.0 {
        dist.values_mut().for_each(|v| *v /= total);
    }
    Ok(dist)
}
