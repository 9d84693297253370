//! Partition agreement and correlation.

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Contingency counts between a reference and an inferred partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionTable {
    /// `counts[i][j]`: nodes in truth community `i+1` and inferred community `j+1`.
    pub counts: Vec<Vec<usize>>,
    pub truth_sizes: Vec<usize>,
    pub inferred_sizes: Vec<usize>,
    pub n: usize,
}

impl ConfusionTable {
    pub fn new(truth: &Partition, inferred: &Partition) -> Result<Self> {
        if truth.n() != inferred.n() {
            return Err(Error::Shape(format!(
                "partitions cover {} and {} nodes",
                truth.n(),
                inferred.n()
            )));
        }
        let mut counts = vec![vec![0usize; inferred.c()]; truth.c()];
        for (&t, &i) in truth.labels().iter().zip(inferred.labels()) {
            counts[t - 1][i - 1] += 1;
        }
        Ok(Self {
            counts,
            truth_sizes: truth.sizes().to_vec(),
            inferred_sizes: inferred.sizes().to_vec(),
            n: truth.n(),
        })
    }
}

/// Normalized mutual information (natural log).
///
/// Empty cells contribute nothing. Two single-community partitions score 1;
/// if exactly one side has a single community the score is 0. Partitions
/// that agree up to relabeling score exactly 1. Terms are summed in sorted
/// order, so relabeling either side gives a bit-identical result, which is
/// then clamped to `[0, 1]`.
pub fn nmi(truth: &Partition, inferred: &Partition) -> Result<f64> {
    let table = ConfusionTable::new(truth, inferred)?;
    match (
        table.truth_sizes.len() <= 1,
        table.inferred_sizes.len() <= 1,
    ) {
        (true, true) => return Ok(1.0),
        (true, false) | (false, true) => return Ok(0.0),
        _ => {}
    }
    if table.truth_sizes.len() == table.inferred_sizes.len()
        && table
            .counts
            .iter()
            .all(|row| row.iter().filter(|&&x| x > 0).count() == 1)
    {
        return Ok(1.0);
    }
    let n = table.n as f64;
    let entropy_term = |sizes: &[usize]| -> f64 {
        sorted_sum(
            sizes
                .iter()
                .filter(|&&s| s > 0)
                .map(|&s| s as f64 * (s as f64 / n).ln())
                .collect(),
        )
    };
    let ht = entropy_term(&table.truth_sizes);
    let hi = entropy_term(&table.inferred_sizes);
    let mut terms = Vec::new();
    for (i, row) in table.counts.iter().enumerate() {
        for (j, &nij) in row.iter().enumerate() {
            if nij == 0 {
                continue;
            }
            let nij = nij as f64;
            let ratio = n * nij / (table.truth_sizes[i] as f64 * table.inferred_sizes[j] as f64);
            terms.push(nij * ratio.ln());
        }
    }
    // the two entropy sums are both negative, so their product is positive
    Ok((sorted_sum(terms) / (ht * hi).sqrt()).clamp(0.0, 1.0))
}

fn sorted_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// Sample Pearson correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::Shape(format!(
            "series lengths differ: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::DegenerateSeries);
    }
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateSeries);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}
