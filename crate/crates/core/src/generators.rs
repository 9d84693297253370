//! Seeded synthetic networks with planted communities.
//!
//! * [`sample_sbm`]: stochastic block model with fixed block sizes.
//! * [`sample_gn`]: the 128-node, four-block special case with mean degree 16.
//! * [`sample_lfr`]: a simplified LFR benchmark (power-law degrees and
//!   community sizes, mixing parameter `mu`). It is not the reference LFR
//!   tool; use [`crate::io::load_lfr_pair`] to ingest that tool's output.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::rng::{self, Rng};

/// Block sizes and the symmetric matrix of edge probabilities between blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct SbmParams {
    sizes: Vec<usize>,
    theta: Vec<Vec<f64>>,
}

impl SbmParams {
    pub fn new(sizes: Vec<usize>, theta: Vec<Vec<f64>>) -> Result<Self> {
        let c = sizes.len();
        if c == 0 || sizes.contains(&0) {
            return Err(Error::Param("block sizes must be >= 1".into()));
        }
        if theta.len() != c || theta.iter().any(|row| row.len() != c) {
            return Err(Error::Param(format!("theta must be {c}x{c}")));
        }
        for (r, row) in theta.iter().enumerate() {
            for (s, &p) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Param(format!(
                        "theta[{r}][{s}] = {p} outside [0, 1]"
                    )));
                }
                if p != theta[s][r] {
                    return Err(Error::Param("theta must be symmetric".into()));
                }
            }
        }
        Ok(Self { sizes, theta })
    }

    /// `theta_in` on the diagonal, `theta_out` everywhere else.
    pub fn planted(sizes: Vec<usize>, theta_in: f64, theta_out: f64) -> Result<Self> {
        let c = sizes.len();
        let theta = (0..c)
            .map(|r| {
                (0..c)
                    .map(|s| if r == s { theta_in } else { theta_out })
                    .collect()
            })
            .collect();
        Self::new(sizes, theta)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn theta(&self) -> &[Vec<f64>] {
        &self.theta
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Expected number of edges.
    pub fn expected_edges(&self) -> f64 {
        let mut total = 0.0;
        for r in 0..self.sizes.len() {
            let nr = self.sizes[r] as f64;
            total += self.theta[r][r] * nr * (nr - 1.0) / 2.0;
            for s in r + 1..self.sizes.len() {
                total += self.theta[r][s] * nr * self.sizes[s] as f64;
            }
        }
        total
    }

    /// Variance of the edge count (sum of independent Bernoulli variances).
    pub fn edge_variance(&self) -> f64 {
        let mut total = 0.0;
        for r in 0..self.sizes.len() {
            let nr = self.sizes[r] as f64;
            let p = self.theta[r][r];
            total += p * (1.0 - p) * nr * (nr - 1.0) / 2.0;
            for s in r + 1..self.sizes.len() {
                let p = self.theta[r][s];
                total += p * (1.0 - p) * nr * self.sizes[s] as f64;
            }
        }
        total
    }
}

/// Samples an SBM network. Nodes are laid out block by block, so block `r`
/// holds a contiguous id range and carries label `r + 1`.
pub fn sample_sbm(params: &SbmParams, seed: u64) -> (Graph, Partition) {
    let mut rng = rng::stream(seed);
    let labels: Vec<usize> = params
        .sizes
        .iter()
        .enumerate()
        .flat_map(|(r, &size)| std::iter::repeat_n(r, size))
        .collect();
    let n = labels.len();
    let mut neighbors = vec![Vec::new(); n];
    for i in 0..n {
        let row = &params.theta[labels[i]];
        for j in i + 1..n {
            if rng.random::<f64>() < row[labels[j]] {
                neighbors[i].push(j);
                neighbors[j].push(i);
            }
        }
    }
    // pushes happen in increasing j for each i, so lists are already sorted
    let graph = Graph::from_sorted_neighbors(neighbors);
    let partition = Partition::new(labels.into_iter().map(|r| r + 1).collect())
        .expect("every block is nonempty");
    (graph, partition)
}

/// Girvan-Newman benchmark: 128 nodes, 4 blocks of 32, `Z_in + Z_out = 16`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnParams {
    z_out: f64,
}

impl GnParams {
    pub const NODES: usize = 128;
    pub const BLOCKS: usize = 4;
    pub const MEAN_DEGREE: f64 = 16.0;

    pub fn new(z_out: f64) -> Result<Self> {
        if !(0.0..=Self::MEAN_DEGREE).contains(&z_out) {
            return Err(Error::Param(format!("z_out = {z_out} outside [0, 16]")));
        }
        Ok(Self { z_out })
    }

    pub fn z_out(&self) -> f64 {
        self.z_out
    }

    pub fn z_in(&self) -> f64 {
        Self::MEAN_DEGREE - self.z_out
    }

    pub fn to_sbm(&self) -> SbmParams {
        let block = Self::NODES / Self::BLOCKS;
        let theta_in = self.z_in() / block as f64;
        let theta_out = self.z_out / (Self::NODES - block) as f64;
        SbmParams::planted(vec![block; Self::BLOCKS], theta_in, theta_out)
            .expect("GN probabilities are in range")
    }
}

pub fn sample_gn(z_out: f64, seed: u64) -> Result<(Graph, Partition)> {
    Ok(sample_sbm(&GnParams::new(z_out)?.to_sbm(), seed))
}

/// Simplified LFR parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LfrParams {
    pub n: usize,
    /// Fraction of each node's edges that leave its community.
    pub mu: f64,
    /// Target mean degree.
    pub k: f64,
    pub maxk: usize,
    pub minc: usize,
    pub maxc: usize,
    /// Degree distribution exponent.
    pub gamma_exp: f64,
    /// Community size distribution exponent.
    pub beta_exp: f64,
}

impl LfrParams {
    pub fn new(n: usize, mu: f64, k: f64, maxk: usize, minc: usize, maxc: usize) -> Result<Self> {
        let params = Self {
            n,
            mu,
            k,
            maxk,
            minc,
            maxc,
            gamma_exp: 2.0,
            beta_exp: 1.0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Param(msg));
        if !(0.0..=1.0).contains(&self.mu) {
            return fail(format!("mu = {} outside [0, 1]", self.mu));
        }
        if self.minc == 0 || self.minc > self.maxc || self.maxc > self.n {
            return fail(format!(
                "need 1 <= minc <= maxc <= n, got minc={} maxc={} n={}",
                self.minc, self.maxc, self.n
            ));
        }
        if !(self.k >= 1.0) || self.k > self.maxk as f64 || self.maxk >= self.n {
            return fail(format!(
                "need 1 <= k <= maxk < n, got k={} maxk={} n={}",
                self.k, self.maxk, self.n
            ));
        }
        if !(self.gamma_exp > 0.0) || !(self.beta_exp > 0.0) {
            return fail("power-law exponents must be positive".into());
        }
        Ok(())
    }
}

/// Continuous power law `x^-exponent` truncated to `[lo, hi]`.
#[derive(Debug, Clone, Copy)]
struct PowerLaw {
    lo: f64,
    hi: f64,
    exponent: f64,
}

impl PowerLaw {
    fn mean(&self) -> f64 {
        let (a, b, g) = (self.lo, self.hi, self.exponent);
        if b <= a {
            return a;
        }
        // integral of x^(p) over [a, b], with the log case at p = -1
        let integral = |p: f64| {
            if (p + 1.0).abs() < 1e-12 {
                (b / a).ln()
            } else {
                (b.powf(p + 1.0) - a.powf(p + 1.0)) / (p + 1.0)
            }
        };
        integral(1.0 - g) / integral(-g)
    }

    fn sample(&self, rng: &mut Rng) -> f64 {
        let (a, b, g) = (self.lo, self.hi, self.exponent);
        let u: f64 = rng.random();
        if (g - 1.0).abs() < 1e-12 {
            a * (b / a).powf(u)
        } else {
            let e = 1.0 - g;
            (a.powf(e) + u * (b.powf(e) - a.powf(e))).powf(e.recip())
        }
    }
}

/// Lower cutoff so the truncated power law on `[lo, maxk]` has the requested mean.
fn solve_min_degree(k: f64, maxk: f64, exponent: f64) -> f64 {
    let mean = |lo: f64| {
        PowerLaw {
            lo,
            hi: maxk,
            exponent,
        }
        .mean()
    };
    let (mut lo, mut hi) = (1.0f64.min(maxk), maxk);
    if mean(lo) >= k {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean(mid) < k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const ASSIGNMENT_RETRIES: usize = 20;
const MATCHING_ROUNDS: usize = 50;

/// Samples a simplified LFR network.
///
/// Degrees follow a power law with exponent `gamma_exp` on `[kmin, maxk]`
/// (`kmin` solved so the mean is `k`); community sizes follow a power law with
/// exponent `beta_exp` on `[minc, maxc]`. Each node keeps `ceil((1 - mu) k_i)`
/// stubs inside its community; internal and external stubs are paired by
/// configuration-model matching, rejecting self-loops and repeated edges.
/// Stubs still unmatched after a bounded number of reshuffles are dropped.
pub fn sample_lfr(params: &LfrParams, seed: u64) -> Result<(Graph, Partition)> {
    params.validate()?;
    let mut rng = rng::stream(seed);
    let n = params.n;

    let degree_law = PowerLaw {
        lo: solve_min_degree(params.k, params.maxk as f64, params.gamma_exp),
        hi: params.maxk as f64,
        exponent: params.gamma_exp,
    };
    let mut degrees: Vec<usize> = (0..n)
        .map(|_| (degree_law.sample(&mut rng).round() as usize).clamp(1, params.maxk))
        .collect();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        match degrees.iter().position(|&d| d < params.maxk) {
            Some(i) => degrees[i] += 1,
            None => degrees[0] -= 1,
        }
    }

    let sizes = sample_community_sizes(params, &mut rng)?;

    let mut internal: Vec<usize> = degrees
        .iter()
        .map(|&d| (((1.0 - params.mu) * d as f64 - 1e-9).ceil().max(0.0) as usize).min(d))
        .collect();

    let labels = assign_communities(&internal, &sizes, &mut rng)?;
    let c = sizes.len();
    let mut members = vec![Vec::new(); c];
    for (node, &r) in labels.iter().enumerate() {
        members[r].push(node);
    }

    let mut edges = BTreeSet::new();
    for community in &members {
        let stub_total: usize = community.iter().map(|&v| internal[v]).sum();
        if stub_total % 2 == 1 {
            // an odd stub total cannot be paired; drop one internal stub
            let &v = community
                .iter()
                .max_by_key(|&&v| (internal[v], std::cmp::Reverse(v)))
                .expect("communities are nonempty");
            internal[v] -= 1;
            degrees[v] -= 1;
        }
        let stubs: Vec<usize> = community
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, internal[v]))
            .collect();
        match_stubs(stubs, &mut rng, &mut edges, |_, _| true);
    }
    let external: Vec<usize> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v, degrees[v] - internal[v]))
        .collect();
    match_stubs(external, &mut rng, &mut edges, |u, v| {
        labels[u] != labels[v]
    });

    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    let graph = Graph::from_edge_list(&edges, n)?;
    let partition = Partition::new(labels.iter().map(|r| r + 1).collect())?;
    Ok((graph, partition))
}

fn sample_community_sizes(params: &LfrParams, rng: &mut Rng) -> Result<Vec<usize>> {
    let law = PowerLaw {
        lo: params.minc as f64,
        hi: params.maxc as f64,
        exponent: params.beta_exp,
    };
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < params.n {
        let size = (law.sample(rng).round() as usize).clamp(params.minc, params.maxc);
        sizes.push(size);
        total += size;
    }
    let last = sizes.last_mut().expect("n >= 1");
    *last -= total - params.n;
    if *last < params.minc {
        // spread a too-small remainder over communities that still have room
        let mut spare = sizes.pop().expect("nonempty");
        let mut progressed = true;
        while spare > 0 && progressed {
            progressed = false;
            for size in sizes.iter_mut() {
                if spare > 0 && *size < params.maxc {
                    *size += 1;
                    spare -= 1;
                    progressed = true;
                }
            }
        }
        if spare > 0 || sizes.is_empty() {
            return Err(Error::Generation(
                "community sizes cannot cover n within [minc, maxc]".into(),
            ));
        }
    }
    Ok(sizes)
}

/// Places nodes (largest internal degree first) into communities large enough
/// to host their internal stubs.
fn assign_communities(internal: &[usize], sizes: &[usize], rng: &mut Rng) -> Result<Vec<usize>> {
    let mut order: Vec<usize> = (0..internal.len()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(internal[v]), v));
    'attempt: for _ in 0..ASSIGNMENT_RETRIES {
        let mut room = sizes.to_vec();
        let mut labels = vec![usize::MAX; internal.len()];
        for &v in &order {
            let eligible: Vec<usize> = (0..sizes.len())
                .filter(|&r| room[r] > 0 && sizes[r] > internal[v])
                .collect();
            let Some(&r) = eligible.choose(rng) else {
                continue 'attempt;
            };
            room[r] -= 1;
            labels[v] = r;
        }
        return Ok(labels);
    }
    Err(Error::Generation(format!(
        "no feasible community assignment after {ASSIGNMENT_RETRIES} attempts"
    )))
}

/// Configuration-model pairing of `stubs`; rejected pairs are reshuffled for a
/// bounded number of rounds and then dropped.
fn match_stubs(
    mut stubs: Vec<usize>,
    rng: &mut Rng,
    edges: &mut BTreeSet<(usize, usize)>,
    allowed: impl Fn(usize, usize) -> bool,
) {
    for _ in 0..MATCHING_ROUNDS {
        if stubs.len() < 2 {
            return;
        }
        stubs.shuffle(rng);
        let mut leftover = Vec::new();
        for pair in stubs.chunks(2) {
            let &[u, v] = pair else {
                leftover.extend_from_slice(pair);
                continue;
            };
            let key = (u.min(v), u.max(v));
            if u != v && allowed(u, v) && !edges.contains(&key) {
                edges.insert(key);
            } else {
                leftover.extend_from_slice(pair);
            }
        }
        if leftover.len() == stubs.len() && leftover.len() <= 2 {
            return;
        }
        stubs = leftover;
    }
}
