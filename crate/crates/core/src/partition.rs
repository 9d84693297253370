//! Hard partitions and membership matrices.
//!
//! Community labels are 1-based (`1..=c`); node ids are 0-based.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Assignment of every node to exactly one of `c` communities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    sizes: Vec<usize>,
}

impl Partition {
    /// Validates 1-based labels; every label in `1..=max` must be used.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let c = labels.iter().copied().max().unwrap_or(0);
        let mut sizes = vec![0usize; c];
        for (node, &label) in labels.iter().enumerate() {
            if label == 0 {
                return Err(Error::InvalidPartition(format!(
                    "node {node} has label 0; labels are 1-based"
                )));
            }
            sizes[label - 1] += 1;
        }
        if let Some(r) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::EmptyCommunity { community: r + 1 });
        }
        Ok(Self { labels, sizes })
    }

    /// Relabels arbitrary community ids to `1..=c` in order of first appearance.
    pub fn from_raw_labels<T: Ord + Copy>(raw: &[T]) -> Self {
        let mut seen = std::collections::BTreeMap::new();
        let labels = raw
            .iter()
            .map(|id| {
                let next = seen.len() + 1;
                *seen.entry(*id).or_insert(next)
            })
            .collect();
        Self::new(labels).expect("compacted labels are contiguous")
    }

    /// Every node in one community.
    pub fn single(n: usize) -> Self {
        Self {
            labels: vec![1; n],
            sizes: if n == 0 { Vec::new() } else { vec![n] },
        }
    }

    /// Every node in its own community.
    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (1..=n).collect(),
            sizes: vec![1; n],
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of communities.
    pub fn c(&self) -> usize {
        self.sizes.len()
    }

    /// 1-based community of `node`.
    pub fn label(&self, node: usize) -> usize {
        self.labels[node]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Community sizes `n_r`, indexed by `r - 1`.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn same_community(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    /// Members of each community, sorted by node id.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.c()];
        for (node, &label) in self.labels.iter().enumerate() {
            out[label - 1].push(node);
        }
        out
    }

    /// Binary indicator matrix `S` with `s_ir = 1` iff node `i` is in community `r`.
    pub fn membership(&self) -> MembershipMatrix {
        let mut s = Array2::zeros((self.n(), self.c()));
        for (node, &label) in self.labels.iter().enumerate() {
            s[[node, label - 1]] = 1.0;
        }
        MembershipMatrix {
            entries: s,
            kind: MembershipKind::Binary,
        }
    }
}

/// Convenience wrapper for [`Partition::membership`].
pub fn partition_to_membership(p: &Partition) -> MembershipMatrix {
    p.membership()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipKind {
    /// 0/1 indicator with a single 1 per row.
    Binary,
    /// Nonnegative iterate produced by a solver.
    Continuous,
    /// Indicator with column `r` divided by `sqrt(n_r)`.
    Scaled,
}

/// An `n x c` nonnegative membership matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipMatrix {
    entries: Array2<f64>,
    kind: MembershipKind,
}

impl MembershipMatrix {
    /// Wraps a nonnegative matrix as a continuous iterate.
    pub fn continuous(entries: Array2<f64>) -> Result<Self> {
        check_nonnegative(&entries)?;
        Ok(Self {
            entries,
            kind: MembershipKind::Continuous,
        })
    }

    /// Wraps a 0/1 matrix with exactly one 1 per row.
    pub fn binary(entries: Array2<f64>) -> Result<Self> {
        for (i, row) in entries.rows().into_iter().enumerate() {
            let ones = row.iter().filter(|&&x| x == 1.0).count();
            let zeros = row.iter().filter(|&&x| x == 0.0).count();
            if ones != 1 || ones + zeros != row.len() {
                return Err(Error::InvalidPartition(format!(
                    "row {i} is not a one-hot indicator"
                )));
            }
        }
        Ok(Self {
            entries,
            kind: MembershipKind::Binary,
        })
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<f64> {
        self.entries
    }

    pub fn kind(&self) -> MembershipKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn c(&self) -> usize {
        self.entries.ncols()
    }
}

/// Divides each indicator column by `sqrt(n_r)` so the columns are orthonormal.
pub fn scale_membership(s: &MembershipMatrix) -> Result<MembershipMatrix> {
    if s.kind != MembershipKind::Binary {
        return Err(Error::NotBinary);
    }
    let mut h = s.entries.clone();
    for (r, mut col) in h.columns_mut().into_iter().enumerate() {
        let size: f64 = col.sum();
        if size == 0.0 {
            return Err(Error::EmptyCommunity { community: r + 1 });
        }
        let scale = size.sqrt().recip();
        col.mapv_inplace(|x| x * scale);
    }
    Ok(MembershipMatrix {
        entries: h,
        kind: MembershipKind::Scaled,
    })
}

pub(crate) fn check_nonnegative(a: &Array2<f64>) -> Result<()> {
    for ((row, col), &value) in a.indexed_iter() {
        if !(value >= 0.0) {
            return Err(Error::NegativeInput { row, col, value });
        }
    }
    Ok(())
}
