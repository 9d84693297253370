//! Community detection: multiplicative-update symmetric NMF and a fast greedy
//! modularity baseline.

use std::collections::BTreeMap;

use ndarray::{Array2, Zip};
use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::objectives::{
    build_w1, build_w_star, frobenius_norm_sq, frobenius_objective, SigmaChoice, TargetMatrix,
};
use crate::partition::{MembershipMatrix, Partition};
use crate::rng;

/// Settings shared by the NMF detectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Number of columns of `S`.
    pub communities: usize,
    pub iters: usize,
    /// Random restarts; the run with the lowest final objective wins.
    pub runs: usize,
    pub seed: u64,
    /// Added to the update denominator.
    pub eps: f64,
}

impl SolverConfig {
    pub fn new(communities: usize) -> Self {
        Self {
            communities,
            iters: 500,
            runs: 10,
            seed: 0,
            eps: 1e-12,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_iters(mut self, iters: usize) -> Self {
        self.iters = iters;
        self
    }

    pub fn with_runs(mut self, runs: usize) -> Self {
        self.runs = runs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.communities == 0 || self.iters == 0 || self.runs == 0 {
            return Err(Error::Param(
                "communities, iters and runs must all be >= 1".into(),
            ));
        }
        if !(self.eps > 0.0) {
            return Err(Error::Param(format!("eps must be > 0, got {}", self.eps)));
        }
        Ok(())
    }
}

/// Outcome of a symmetric NMF solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace {
    /// `||W - S S^T||_F^2` before each update.
    pub objectives: Vec<f64>,
    /// Objective of the returned `S`.
    pub final_objective: f64,
    pub membership: MembershipMatrix,
    /// Restart that produced this result.
    pub run: usize,
}

/// i.i.d. `uniform(0, 1) + eps` entries.
pub fn random_init(n: usize, c: usize, seed: u64, eps: f64) -> Array2<f64> {
    let mut rng = rng::stream(seed);
    Array2::from_shape_simple_fn((n, c), || rng.random::<f64>() + eps)
}

/// One multiplicative update `S <- S * (W S) / (S S^T S + eps)`, in place.
///
/// Returns the objective of `S` *before* the update, computed from the same
/// `W S` product as `||W||^2 - 2 <S, W S> + ||S^T S||^2`.
fn update(w: &Array2<f64>, w_norm_sq: f64, s: &mut Array2<f64>, eps: f64) -> f64 {
    let ws = w.dot(&*s);
    let gram = s.t().dot(&*s);
    let denom = s.dot(&gram);
    let cross: f64 = Zip::from(&*s).and(&ws).fold(0.0, |acc, &a, &b| acc + a * b);
    let objective = (w_norm_sq - 2.0 * cross + frobenius_norm_sq(&gram)).max(0.0);
    Zip::from(s)
        .and(&ws)
        .and(&denom)
        .for_each(|x, &num, &den| *x *= num / (den + eps));
    objective
}

/// Runs `iters` multiplicative updates from an explicit starting point.
pub fn symnmf_from(
    w: &TargetMatrix,
    init: Array2<f64>,
    iters: usize,
    eps: f64,
) -> Result<SolveTrace> {
    let init = MembershipMatrix::continuous(init)?;
    if init.n() != w.n() {
        return Err(Error::Shape(format!(
            "target is {0}x{0} but the initial S has {1} rows",
            w.n(),
            init.n()
        )));
    }
    let w_norm_sq = frobenius_norm_sq(w.entries());
    let mut s = init.into_entries();
    let objectives = (0..iters)
        .map(|_| update(w.entries(), w_norm_sq, &mut s, eps))
        .collect();
    let membership = MembershipMatrix::continuous(s)?;
    let final_objective = frobenius_objective(w, &membership)?;
    Ok(SolveTrace {
        objectives,
        final_objective,
        membership,
        run: 0,
    })
}

/// A single randomly initialized solve seeded by `cfg.seed`.
pub fn symnmf_multiplicative(w: &TargetMatrix, cfg: &SolverConfig) -> Result<SolveTrace> {
    cfg.validate()?;
    let init = random_init(w.n(), cfg.communities, cfg.seed, cfg.eps);
    symnmf_from(w, init, cfg.iters, cfg.eps)
}

/// `cfg.runs` independent solves; restart `i` is seeded with
/// `derive_seed(cfg.seed, i)`. Lowest final objective wins, ties to the lowest
/// restart index.
pub fn symnmf_best_of(w: &TargetMatrix, cfg: &SolverConfig) -> Result<SolveTrace> {
    cfg.validate()?;
    let traces: Vec<SolveTrace> = (0..cfg.runs)
        .into_par_iter()
        .map(|run| {
            let seeded = SolverConfig {
                seed: rng::derive_seed(cfg.seed, run as u64),
                ..cfg.clone()
            };
            symnmf_multiplicative(w, &seeded).map(|t| SolveTrace { run, ..t })
        })
        .collect::<Result<_>>()?;
    Ok(traces
        .into_iter()
        .reduce(|best, t| {
            if t.final_objective < best.final_objective {
                t
            } else {
                best
            }
        })
        .expect("runs >= 1"))
}

/// Row-wise argmax of `S`, ties to the lowest column; unused columns are
/// dropped so labels stay contiguous.
pub fn extract_partition(s: &MembershipMatrix) -> Result<Partition> {
    let entries = s.entries();
    let mut columns = Vec::with_capacity(s.n());
    for (node, row) in entries.rows().into_iter().enumerate() {
        let mut best = 0;
        for (r, &x) in row.iter().enumerate() {
            if x > row[best] {
                best = r;
            }
        }
        if !(row[best] > 0.0) {
            return Err(Error::AmbiguousRow { node });
        }
        columns.push(best);
    }
    let mut used = vec![false; s.c()];
    for &r in &columns {
        used[r] = true;
    }
    let mut relabel = vec![0; s.c()];
    let mut next = 0;
    for (r, &u) in used.iter().enumerate() {
        if u {
            next += 1;
            relabel[r] = next;
        }
    }
    Partition::new(columns.into_iter().map(|r| relabel[r]).collect())
}

/// Modularity route: factorize `W* = B^-1 A`.
pub fn detect_q_nmf(g: &Graph, cfg: &SolverConfig) -> Result<(Partition, SolveTrace)> {
    cfg.validate()?;
    let w = build_w_star(g)?;
    let trace = symnmf_best_of(&w, cfg)?;
    Ok((extract_partition(&trace.membership)?, trace))
}

/// Modularity-density route: factorize `W1 = sigma I + 2A - B`.
pub fn detect_d_nmf(
    g: &Graph,
    cfg: &SolverConfig,
    sigma: SigmaChoice,
) -> Result<(Partition, SolveTrace)> {
    cfg.validate()?;
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let w = build_w1(g, sigma)?;
    let trace = symnmf_best_of(&w, cfg)?;
    Ok((extract_partition(&trace.membership)?, trace))
}

/// Clauset-Newman-Moore agglomeration.
///
/// Starting from singletons, repeatedly merges the connected pair of
/// communities with the largest modularity gain until no merge improves `Q`.
/// Gains are compared in exact integer form, `2m e_ij - a_i a_j`, where
/// `e_ij` counts edges between the two communities and `a_i` is a degree sum;
/// ties go to the lexicographically smallest `(i, j)`.
pub fn fast_greedy(g: &Graph) -> Result<Partition> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = g.n();
    let two_m = 2 * g.m() as i128;
    let mut links: Vec<BTreeMap<usize, i128>> = (0..n)
        .map(|u| g.neighbors(u).iter().map(|&v| (v, 1)).collect())
        .collect();
    let mut degree: Vec<i128> = (0..n).map(|u| g.degree(u) as i128).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut alive = vec![true; n];

    loop {
        let mut best: Option<(i128, usize, usize)> = None;
        for i in (0..n).filter(|&i| alive[i]) {
            for (&j, &e) in links[i].range(i + 1..) {
                let gain = two_m * e - degree[i] * degree[j];
                if best.is_none_or(|(b, _, _)| gain > b) {
                    best = Some((gain, i, j));
                }
            }
        }
        let Some((gain, i, j)) = best else { break };
        if gain <= 0 {
            break;
        }
        // merge j into i
        let absorbed = std::mem::take(&mut links[j]);
        for (k, e) in absorbed {
            links[k].remove(&j);
            if k == i {
                continue;
            }
            *links[i].entry(k).or_insert(0) += e;
            *links[k].entry(i).or_insert(0) += e;
        }
        degree[i] += degree[j];
        alive[j] = false;
        parent[j] = i;
    }

    let root = |mut v: usize| {
        while parent[v] != v {
            v = parent[v];
        }
        v
    };
    let roots: Vec<usize> = (0..n).map(root).collect();
    Ok(Partition::from_raw_labels(&roots))
}
