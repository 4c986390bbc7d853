use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Probabilities below this are rejected rather than clamped.
const NEGATIVE_SLACK: f64 = 1e-12;
/// Allowed deviation of the total from one.
pub const SUM_TOL: f64 = 1e-9;

/// Labeled probabilities in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    entries: Vec<(String, f64)>,
}

impl OutcomeDistribution {
    /// Validates a caller-supplied distribution: entries no lower than
    /// `-1e-12` and a total within `1e-9` of one.
    pub fn new(entries: Vec<(String, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("empty distribution".into()));
        }
        if let Some((label, p)) = entries.iter().find(|(_, p)| !p.is_finite() || *p < -NEGATIVE_SLACK) {
            return Err(Error::InvalidArgument(format!("probability {p} for outcome {label:?}")));
        }
        let (labels, probs): (Vec<String>, Vec<f64>) = entries.into_iter().unzip();
        let dist = Self::from_raw(labels.iter().map(String::as_str), probs);
        let total = dist.total();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}")));
        }
        Ok(dist)
    }

    /// Builds a distribution from Born-rule values, clamping negative
    /// round-off to zero and renormalizing if anything was clamped.
    pub fn from_raw<'a>(labels: impl IntoIterator<Item = &'a str>, raw: Vec<f64>) -> Self {
        let clamped = raw.iter().any(|&p| p < 0.0);
        let mut entries: Vec<(String, f64)> = labels
            .into_iter()
            .map(str::to_string)
            .zip(raw.into_iter().map(|p| p.max(0.0)))
            .collect();
        if clamped {
            let total: f64 = entries.iter().map(|(_, p)| p).sum();
            if total > 0.0 {
                entries.iter_mut().for_each(|(_, p)| *p /= total);
            }
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(l, _)| l.as_str())
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|(_, p)| *p)
    }

    pub fn probability(&self, label: &str) -> Result<f64> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, p)| *p)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn total(&self) -> f64 {
        self.probabilities().sum()
    }

    /// Largest absolute difference between matching entries; infinite if
    /// the label sequences differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if !self.labels().eq(other.labels()) {
            return f64::INFINITY;
        }
        self.probabilities()
            .zip(other.probabilities())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Draws `n` outcomes by inverse-CDF sampling over the stored order.
///
/// The generator is ChaCha8 seeded from `seed`, so counts are reproducible
/// across runs and platforms.
pub fn sample_outcomes(dist: &OutcomeDistribution, n: u64, seed: u64) -> Vec<(String, u64)> {
    let mut counts = vec![0u64; dist.len()];
    let mut cumulative = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for p in dist.probabilities() {
        acc += p;
        cumulative.push(acc);
    }
    let last_positive = dist.entries.iter().rposition(|(_, p)| *p > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if let Some(last) = last_positive {
        for _ in 0..n {
            let u = rng.random::<f64>() * acc;
            let idx = cumulative
                .iter()
                .zip(dist.probabilities())
                .position(|(&c, p)| p > 0.0 && u < c)
                .unwrap_or(last);
            counts[idx] += 1;
        }
    }
    dist.labels().map(str::to_string).zip(counts).collect()
}
