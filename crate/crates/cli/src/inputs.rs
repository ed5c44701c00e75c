use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use cqhe::cqsim::{read_distribution_csv, Distribution};

/// Parses node weights, either positional (`0.75,0.25`) or sparse
/// (`0:0.75,4:0.25`).
pub fn parse_weights(spec: &str) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    for (pos, item) in spec.split(',').map(str::trim).filter(|s| !s.is_empty()).enumerate() {
        let (node, weight) = match item.split_once(':') {
            Some((n, w)) => (n.trim().parse().with_context(|| format!("bad node `{n}`"))?, w),
            None => (pos, item),
        };
        let weight: f64 = weight.trim().parse().with_context(|| format!("bad weight `{weight}`"))?;
        if !(weight >= 0.0 && weight.is_finite()) {
            bail!("weight {weight} on node {node} must be finite and non-negative");
        }
        out.push((node, weight));
    }
    if out.iter().map(|p| p.1).sum::<f64>() <= 0.0 {
        bail!("`{spec}` has no positive weight");
    }
    Ok(out)
}

/// Dense probability vector over `nodes` nodes from a weight spec.
pub fn probability_vector(spec: &str, nodes: usize) -> Result<Vec<f64>> {
    let weights = parse_weights(spec)?;
    let mut p = vec![0.0; nodes];
    for (node, w) in weights {
        *p.get_mut(node).ok_or_else(|| anyhow!("node {node} is outside 0..{nodes}"))? += w;
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    Ok(p)
}

/// Either a two-column distribution or a `step,node,probability`
/// trajectory (each step normalized on its own).
pub enum DistributionFile {
    Single(Distribution),
    Steps(BTreeMap<usize, Distribution>),
}

impl DistributionFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let header = text.lines().next().unwrap_or_default();
        match header.split(',').count() {
            2 => Ok(DistributionFile::Single(read_distribution_csv(&text).with_context(|| path.display().to_string())?)),
            3 => parse_steps(&text).with_context(|| path.display().to_string()),
            _ => bail!("{}: unrecognized header `{header}`", path.display()),
        }
    }

    /// Label width of the first entry.
    pub fn label_width(&self) -> usize {
        let first = match self {
            DistributionFile::Single(d) => d.keys().next(),
            DistributionFile::Steps(s) => s.values().next().and_then(|d| d.keys().next()),
        };
        first.map_or(0, String::len)
    }
}

fn parse_steps(text: &str) -> Result<DistributionFile> {
    let mut steps: BTreeMap<usize, Distribution> = BTreeMap::new();
    for (i, line) in text.lines().enumerate().skip(1).filter(|(_, l)| !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let [step, node, value] = cols[..] else {
            bail!("line {}: expected three columns", i + 1);
        };
        let step: usize = step.parse().with_context(|| format!("line {}: bad step", i + 1))?;
        let value: f64 = value.parse().with_context(|| format!("line {}: bad value", i + 1))?;
        *steps.entry(step).or_default().entry(node.to_string()).or_default() += value;
    }
    for dist in steps.values_mut() {
        let total: f64 = dist.values().sum();
        if total > 0.0 {
            dist.values_mut().for_each(|v| *v /= total);
        }
    }
    Ok(DistributionFile::Steps(steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_specs() {
        assert_eq!(parse_weights("0.75, 0.25").unwrap(), vec![(0, 0.75), (1, 0.25)]);
        assert_eq!(parse_weights("0:0.75,4:0.25").unwrap(), vec![(0, 0.75), (4, 0.25)]);
        assert!(parse_weights("0:-1").is_err());
        assert!(parse_weights("0,0").is_err());
        assert_eq!(probability_vector("1:3,2:1", 4).unwrap(), vec![0.0, 0.75, 0.25, 0.0]);
        assert!(probability_vector("9:1", 4).is_err());
    }
}
