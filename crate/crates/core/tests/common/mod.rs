#![allow(clippy::needless_range_loop)]

//! Dense reference implementations used as test oracles. They work from
//! the adjacency matrix and the textbook formulas only.
#![allow(dead_code)]

use modnmf_core::{Graph, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dense(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for &j in g.neighbors(i) {
            a[i][j] = 1.0;
        }
    }
    a
}

pub fn degrees(a: &[Vec<f64>]) -> Vec<f64> {
    a.iter().map(|row| row.iter().sum()).collect()
}

/// Erdos-Renyi graph.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edge_list(&edges, n).unwrap()
}

pub fn random_partition(n: usize, max_c: usize, rng: &mut impl Rng) -> Partition {
    let raw: Vec<usize> = (0..n).map(|_| rng.random_range(0..max_c)).collect();
    Partition::from_raw_labels(&raw)
}

/// Every set partition of `0..n` into at most `max_c` blocks, as 1-based
/// restricted growth strings.
pub fn all_partitions(n: usize, max_c: usize) -> Vec<Partition> {
    fn grow(prefix: &mut Vec<usize>, n: usize, max_c: usize, out: &mut Vec<Partition>) {
        if prefix.len() == n {
            out.push(Partition::new(prefix.clone()).unwrap());
            return;
        }
        let used = prefix.iter().copied().max().unwrap_or(0);
        for label in 1..=(used + 1).min(max_c) {
            prefix.push(label);
            grow(prefix, n, max_c, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, max_c, &mut out);
    out
}

pub fn membership(p: &Partition) -> Vec<Vec<f64>> {
    (0..p.n())
        .map(|i| (1..=p.c()).map(|r| f64::from(p.label(i) == r)).collect())
        .collect()
}

/// `(1/2m) sum_ij (A_ij - gamma (k_i + r)(k_j + r) / 2m~) delta_ij` with
/// `A_ii = r` and `2m~ = 2m + n r`.
pub fn generalized_q(g: &Graph, p: &Partition, gamma: f64, r: f64) -> f64 {
    let mut a = dense(g);
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = r;
    }
    let k = degrees(&a);
    let two_m: f64 = k.iter().sum();
    let mut acc = 0.0;
    for i in 0..g.n() {
        for j in 0..g.n() {
            if p.same_community(i, j) {
                acc += a[i][j] - gamma * k[i] * k[j] / two_m;
            }
        }
    }
    acc / two_m
}

pub fn q(g: &Graph, p: &Partition) -> f64 {
    generalized_q(g, p, 1.0, 0.0)
}

/// `sum_r (internal degree - escaping edges) / n_r`.
pub fn d(g: &Graph, p: &Partition) -> f64 {
    let a = dense(g);
    let mut acc = 0.0;
    for (r, members) in p.members().iter().enumerate() {
        let (mut inside, mut outside) = (0.0, 0.0);
        for &i in members {
            for j in 0..g.n() {
                if p.label(j) == r + 1 {
                    inside += a[i][j];
                } else {
                    outside += a[i][j];
                }
            }
        }
        acc += (inside - outside) / members.len() as f64;
    }
    acc
}

/// `sigma I + 2A - diag(k)`.
pub fn w1(g: &Graph, sigma: f64) -> Vec<Vec<f64>> {
    let a = dense(g);
    let k = degrees(&a);
    let n = g.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { sigma - k[i] } else { 2.0 * a[i][j] })
                .collect()
        })
        .collect()
}

pub fn scaled_membership(p: &Partition) -> Vec<Vec<f64>> {
    let sizes = p.sizes();
    (0..p.n())
        .map(|i| {
            (1..=p.c())
                .map(|r| {
                    if p.label(i) == r {
                        1.0 / (sizes[r - 1] as f64).sqrt()
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

pub fn frobenius(w: &[Vec<f64>], m: &[Vec<f64>]) -> f64 {
    let n = w.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mm: f64 = m[i].iter().zip(&m[j]).map(|(a, b)| a * b).sum();
            acc += (w[i][j] - mm).powi(2);
        }
    }
    acc
}

pub fn norm_sq(w: &[Vec<f64>]) -> f64 {
    w.iter().flatten().map(|x| x * x).sum()
}

/// `Tr(M^T W M)`.
pub fn trace_form(w: &[Vec<f64>], m: &[Vec<f64>]) -> f64 {
    let n = w.len();
    let c = m.first().map_or(0, Vec::len);
    let mut acc = 0.0;
    for r in 0..c {
        for i in 0..n {
            for j in 0..n {
                acc += m[i][r] * w[i][j] * m[j][r];
            }
        }
    }
    acc
}

/// Mutual information over the geometric mean of the entropies.
pub fn nmi(a: &Partition, b: &Partition) -> f64 {
    let n = a.n() as f64;
    let entropy = |sizes: &[usize]| -> f64 {
        sizes
            .iter()
            .map(|&s| s as f64 / n)
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.ln())
            .sum()
    };
    let (ha, hb) = (entropy(a.sizes()), entropy(b.sizes()));
    let mut joint = vec![vec![0usize; b.c()]; a.c()];
    for i in 0..a.n() {
        joint[a.label(i) - 1][b.label(i) - 1] += 1;
    }
    let flat: Vec<usize> = joint.into_iter().flatten().collect();
    let mi = ha + hb - entropy(&flat);
    if ha == 0.0 && hb == 0.0 {
        1.0
    } else if ha == 0.0 || hb == 0.0 {
        0.0
    } else {
        mi / (ha * hb).sqrt()
    }
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Average ranks (ties share the mean rank).
pub fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let mean = (i + j) as f64 / 2.0;
        for &k in &order[i..=j] {
            out[k] = mean;
        }
        i = j + 1;
    }
    out
}

pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    pearson(&ranks(xs), &ranks(ys))
}

pub fn two_triangles() -> Graph {
    Graph::from_edge_list(&[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], 6).unwrap()
}
