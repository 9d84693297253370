//! Partition quality functions and the NMF target matrices built from a graph.
//!
//! Notation follows the usual conventions: `A` is the adjacency matrix, `k_i`
//! the degree of node `i`, `m` the edge count, `S` the `n x c` indicator
//! matrix and `H` its column-normalized form. All sums run in a fixed order so
//! results are bit-reproducible for a given input.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{scale_membership, MembershipKind, MembershipMatrix, Partition};

fn check_sizes(g: &Graph, p: &Partition) -> Result<()> {
    if g.n() != p.n() {
        return Err(Error::Shape(format!(
            "graph has {} nodes but partition labels {}",
            g.n(),
            p.n()
        )));
    }
    Ok(())
}

/// Per-community `(ordered internal edge count, degree sum)`.
///
/// The internal count is `s_r^T A s_r`, i.e. each internal edge counted twice.
fn community_totals(g: &Graph, p: &Partition) -> (Vec<usize>, Vec<usize>) {
    let c = p.c();
    let mut internal = vec![0usize; c];
    let mut degree = vec![0usize; c];
    for u in 0..g.n() {
        let r = p.label(u) - 1;
        degree[r] += g.degree(u);
        internal[r] += g
            .neighbors(u)
            .iter()
            .filter(|&&v| p.label(v) - 1 == r)
            .count();
    }
    (internal, degree)
}

/// `(1/2m~) sum_ij (A~_ij - gamma k~_i k~_j / 2m~) delta(g_i, g_j)` with
/// `A~ = A + shift I`, `k~ = k + shift`, `2m~ = 2m + n shift`.
///
/// `gamma = 1, shift = 0` is plain modularity; both reductions take the same
/// floating-point path and therefore agree bit for bit.
fn generalized_modularity(g: &Graph, p: &Partition, gamma: f64, shift: f64) -> Result<f64> {
    check_sizes(g, p)?;
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let (internal, degree) = community_totals(g, p);
    let two_m = (2 * g.m()) as f64 + g.n() as f64 * shift;
    let mut acc = 0.0;
    for ((&inside, &deg), &size) in internal.iter().zip(&degree).zip(p.sizes()) {
        let within = inside as f64 + size as f64 * shift;
        let deg = deg as f64 + size as f64 * shift;
        acc += within - gamma * deg * deg / two_m;
    }
    Ok(acc / two_m)
}

/// Newman-Girvan modularity `Q`.
pub fn modularity_q(g: &Graph, p: &Partition) -> Result<f64> {
    generalized_modularity(g, p, 1.0, 0.0)
}

/// `Q* = (2m)^2 Q = sum_r (2m s_r^T A s_r - (b^T s_r)^2)`, evaluated in exact
/// integer arithmetic.
pub fn modularity_q_star(g: &Graph, p: &Partition) -> Result<f64> {
    check_sizes(g, p)?;
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let (internal, degree) = community_totals(g, p);
    let two_m = 2 * g.m() as i128;
    let total: i128 = internal
        .iter()
        .zip(&degree)
        .map(|(&inside, &deg)| two_m * inside as i128 - (deg as i128) * (deg as i128))
        .sum();
    Ok(total as f64)
}

/// Reichardt-Bornholdt modularity with resolution `gamma`.
pub fn q_rb(g: &Graph, p: &Partition, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::Param(format!("gamma must be >= 0, got {gamma}")));
    }
    generalized_modularity(g, p, gamma, 0.0)
}

/// Arenas-Fernandez-Gomez modularity: every node gets a self-loop of weight `r`.
pub fn q_afg(g: &Graph, p: &Partition, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Param(format!("r must be >= 0, got {r}")));
    }
    generalized_modularity(g, p, 1.0, r)
}

/// Modularity density `D = sum_r (d_r^stay - d_r^escape) / n_r`.
pub fn modularity_density(g: &Graph, p: &Partition) -> Result<f64> {
    check_sizes(g, p)?;
    let (internal, degree) = community_totals(g, p);
    let mut acc = 0.0;
    for (r, ((&stay, &deg), &size)) in internal.iter().zip(&degree).zip(p.sizes()).enumerate() {
        if size == 0 {
            return Err(Error::EmptyCommunity { community: r + 1 });
        }
        let escape = deg - stay;
        acc += (stay as f64 - escape as f64) / size as f64;
    }
    Ok(acc)
}

/// `D` through the quadratic form `sum_r s_r^T (2A - B) s_r / n_r`.
pub fn modularity_density_quadratic(g: &Graph, p: &Partition) -> Result<f64> {
    check_sizes(g, p)?;
    let mut acc = 0.0;
    for members in p.members() {
        // s^T (2A - B) s with s the indicator of `members`
        let mut form = 0.0;
        for &i in &members {
            for &j in &members {
                let mut entry = if g.has_edge(i, j) { 2.0 } else { 0.0 };
                if i == j {
                    entry -= g.degree(i) as f64;
                }
                form += entry;
            }
        }
        acc += form / members.len() as f64;
    }
    Ok(acc)
}

/// `Tr(H^T W1 H) - sigma c`, which equals `D` for every admissible sigma.
pub fn modularity_density_trace(g: &Graph, p: &Partition, sigma: SigmaChoice) -> Result<f64> {
    check_sizes(g, p)?;
    let w1 = build_w1(g, sigma)?;
    let h = scale_membership(&p.membership())?;
    Ok(trace_quadratic(w1.entries(), h.entries())? - w1.sigma().unwrap_or(0.0) * p.c() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetKind {
    /// `W* = B^-1 A`.
    WStar,
    /// `W1 = sigma I + 2A - B`.
    W1 {
        sigma: f64,
    },
    Generic,
}

/// Nonnegative square matrix factorized by the symmetric NMF solver.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetMatrix {
    entries: Array2<f64>,
    kind: TargetKind,
}

impl TargetMatrix {
    /// Wraps an arbitrary square nonnegative matrix.
    pub fn generic(entries: Array2<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::Shape(format!(
                "target must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        crate::partition::check_nonnegative(&entries)?;
        Ok(Self {
            entries,
            kind: TargetKind::Generic,
        })
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn kind(&self) -> TargetKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// Diagonal shift for `W1` targets.
    pub fn sigma(&self) -> Option<f64> {
        match self.kind {
            TargetKind::W1 { sigma } => Some(sigma),
            _ => None,
        }
    }
}

/// Row-normalized adjacency `W* = B^-1 A`; every row sums to one.
pub fn build_w_star(g: &Graph) -> Result<TargetMatrix> {
    if let Some(node) = g.first_isolated() {
        return Err(Error::IsolatedNode { node });
    }
    let n = g.n();
    let mut w = Array2::zeros((n, n));
    for u in 0..n {
        let inv = (g.degree(u) as f64).recip();
        for &v in g.neighbors(u) {
            w[[u, v]] = inv;
        }
    }
    Ok(TargetMatrix {
        entries: w,
        kind: TargetKind::WStar,
    })
}

/// How the diagonal shift of `W1` is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaChoice {
    /// The maximum degree: the smallest shift keeping `W1` nonnegative.
    Auto,
    /// Maximum degree plus a fixed offset.
    AutoPlus(f64),
    Fixed(f64),
}

impl SigmaChoice {
    pub fn resolve(self, max_degree: usize) -> f64 {
        match self {
            SigmaChoice::Auto => max_degree as f64,
            SigmaChoice::AutoPlus(offset) => max_degree as f64 + offset,
            SigmaChoice::Fixed(sigma) => sigma,
        }
    }
}

impl std::fmt::Display for SigmaChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SigmaChoice::Auto => write!(f, "auto"),
            SigmaChoice::AutoPlus(offset) => write!(f, "auto+{offset}"),
            SigmaChoice::Fixed(sigma) => write!(f, "{sigma}"),
        }
    }
}

impl std::str::FromStr for SigmaChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || {
            Error::Param(format!(
                "bad sigma {s:?}; expected auto, auto+X or a number"
            ))
        };
        if s == "auto" {
            Ok(SigmaChoice::Auto)
        } else if let Some(rest) = s.strip_prefix("auto+") {
            rest.trim()
                .parse()
                .map(SigmaChoice::AutoPlus)
                .map_err(|_| bad())
        } else {
            s.parse().map(SigmaChoice::Fixed).map_err(|_| bad())
        }
    }
}

/// `W1 = sigma I + 2A - B`.
pub fn build_w1(g: &Graph, sigma: SigmaChoice) -> Result<TargetMatrix> {
    let max_degree = g.max_degree();
    let sigma = sigma.resolve(max_degree);
    if !(sigma >= max_degree as f64) {
        return Err(Error::SigmaTooSmall { sigma, max_degree });
    }
    let n = g.n();
    let mut w = Array2::zeros((n, n));
    for u in 0..n {
        w[[u, u]] = sigma - g.degree(u) as f64;
        for &v in g.neighbors(u) {
            w[[u, v]] = 2.0;
        }
    }
    Ok(TargetMatrix {
        entries: w,
        kind: TargetKind::W1 { sigma },
    })
}

/// `Tr(M^T W M)`.
pub fn trace_quadratic(w: &Array2<f64>, m: &Array2<f64>) -> Result<f64> {
    let n = w.nrows();
    if w.ncols() != n || m.nrows() != n {
        return Err(Error::Shape(format!(
            "W is {}x{} but M has {} rows",
            w.nrows(),
            w.ncols(),
            m.nrows()
        )));
    }
    let mut acc = 0.0;
    for r in 0..m.ncols() {
        for i in 0..n {
            let mi = m[[i, r]];
            if mi == 0.0 {
                continue;
            }
            let mut row = 0.0;
            for j in 0..n {
                row += w[[i, j]] * m[[j, r]];
            }
            acc += mi * row;
        }
    }
    Ok(acc)
}

/// Neumaier-compensated running sum. Large targets (n in the thousands)
/// sum millions of terms, and the D identity residual is checked at 1e-6.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Squared Frobenius norm.
pub fn frobenius_norm_sq(w: &Array2<f64>) -> f64 {
    let mut acc = CompensatedSum::default();
    for x in w {
        acc.add(x * x);
    }
    acc.value()
}

/// `||W - M M^T||_F^2`, summed entrywise in row-major order with
/// compensated accumulation.
pub fn frobenius_objective(w: &TargetMatrix, m: &MembershipMatrix) -> Result<f64> {
    let (w, m) = (w.entries(), m.entries());
    let n = w.nrows();
    if m.nrows() != n {
        return Err(Error::Shape(format!(
            "target is {n}x{n} but membership has {} rows",
            m.nrows()
        )));
    }
    let mut acc = CompensatedSum::default();
    for i in 0..n {
        let mi = m.row(i);
        for j in 0..n {
            let approx: f64 = mi.iter().zip(m.row(j).iter()).map(|(a, b)| a * b).sum();
            let diff = w[[i, j]] - approx;
            acc.add(diff * diff);
        }
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullKind {
    /// `k_i k_j / 2m`; not constant, so it has no KL form.
    ConfigProduct,
    /// `P = k^2 / 2m` with `k` the mean degree.
    Constant,
    /// `P* = gamma P`.
    ScaledConstant,
    /// `P~ = (k + r)^2 / (2m + n r)`.
    AfgConstant,
}

/// Null model `P_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullModel {
    pub kind: NullKind,
    /// Constant value of `P_ij` (unused for the configuration product).
    pub value: f64,
    pub gamma: f64,
    /// Self-loop weight `r` of the AFG variant.
    pub shift: f64,
}

impl NullModel {
    pub fn config_product() -> Self {
        Self {
            kind: NullKind::ConfigProduct,
            value: f64::NAN,
            gamma: 1.0,
            shift: 0.0,
        }
    }

    /// A constant null with an explicit value.
    pub fn constant_value(value: f64) -> Result<Self> {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::InvalidNull(value));
        }
        Ok(Self {
            kind: NullKind::Constant,
            value,
            gamma: 1.0,
            shift: 0.0,
        })
    }

    /// `P - P log P`; positive whenever `0 < P < e`.
    pub fn sigma1(&self) -> f64 {
        self.value - self.value * self.value.ln()
    }
}

/// Which modularity variant a constant null model / KL objective belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KlVariant {
    Base,
    Rb { gamma: f64 },
    Afg { r: f64 },
}

impl KlVariant {
    /// The modularity variant paired with this KL objective.
    pub fn quality(self, g: &Graph, p: &Partition) -> Result<f64> {
        match self {
            KlVariant::Base => modularity_q(g, p),
            KlVariant::Rb { gamma } => q_rb(g, p, gamma),
            KlVariant::Afg { r } => q_afg(g, p, r),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KlVariant::Base => "base",
            KlVariant::Rb { .. } => "rb",
            KlVariant::Afg { .. } => "afg",
        }
    }

    pub fn parameter(self) -> f64 {
        match self {
            KlVariant::Base => 0.0,
            KlVariant::Rb { gamma } => gamma,
            KlVariant::Afg { r } => r,
        }
    }
}

/// Constant null model built from the mean degree `k = 2m/n`.
pub fn constant_null(g: &Graph, variant: KlVariant) -> Result<NullModel> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let (gamma, shift, kind) = match variant {
        KlVariant::Base => (1.0, 0.0, NullKind::Constant),
        KlVariant::Rb { gamma } => (gamma, 0.0, NullKind::ScaledConstant),
        KlVariant::Afg { r } => (1.0, r, NullKind::AfgConstant),
    };
    if !(gamma > 0.0) {
        return Err(Error::Param(format!("gamma must be > 0, got {gamma}")));
    }
    if !(shift >= 0.0) {
        return Err(Error::Param(format!("r must be >= 0, got {shift}")));
    }
    let two_m = (2 * g.m()) as f64;
    let k = g.mean_degree() + shift;
    let value = gamma * (k * k / (two_m + g.n() as f64 * shift));
    Ok(NullModel {
        kind,
        value,
        gamma,
        shift,
    })
}

/// Generalized KL divergence between `A` and `P (S S^T)` restricted to pairs
/// with `(S S^T)_ij > 0`, scaled by `1/2m` (or `1/2m~` for the AFG variant,
/// where `A` also carries `r` on the diagonal). `0 log 0 = 0`.
pub fn kl_objective(g: &Graph, null: &NullModel, s: &MembershipMatrix) -> Result<f64> {
    if null.kind == NullKind::ConfigProduct || !(null.value > 0.0) {
        return Err(Error::InvalidNull(null.value));
    }
    if s.kind() != MembershipKind::Binary {
        return Err(Error::NotBinary);
    }
    let n = g.n();
    if s.n() != n {
        return Err(Error::Shape(format!(
            "graph has {n} nodes but membership has {} rows",
            s.n()
        )));
    }
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let shift = if null.kind == NullKind::AfgConstant {
        null.shift
    } else {
        0.0
    };
    let p = null.value;
    let s = s.entries();
    let mut acc = 0.0;
    for i in 0..n {
        let si = s.row(i);
        for j in 0..n {
            let overlap: f64 = si.iter().zip(s.row(j).iter()).map(|(a, b)| a * b).sum();
            if overlap <= 0.0 {
                continue;
            }
            let a = if i == j {
                shift
            } else if g.has_edge(i, j) {
                1.0
            } else {
                0.0
            };
            let fit = p * overlap;
            let log_term = if a > 0.0 { a * (a / fit).ln() } else { 0.0 };
            acc += log_term - a + fit;
        }
    }
    let two_m = (2 * g.m()) as f64 + n as f64 * shift;
    Ok(acc / two_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn two_triangles() -> Graph {
        Graph::from_edge_list(&[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)], 6).unwrap()
    }

    fn planted() -> Partition {
        Partition::new(vec![1, 1, 1, 2, 2, 2]).unwrap()
    }

    /// Direct pair sum of `(1/2m) sum_ij (A_ij - gamma k_i k_j/2m) delta`,
    /// with optional self-loop shift.
    fn pair_sum_q(g: &Graph, p: &Partition, gamma: f64, shift: f64) -> f64 {
        let n = g.n();
        let k: Vec<f64> = (0..n).map(|i| g.degree(i) as f64 + shift).collect();
        let two_m: f64 = k.iter().sum();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if p.label(i) != p.label(j) {
                    continue;
                }
                let a = if i == j {
                    shift
                } else if g.has_edge(i, j) {
                    1.0
                } else {
                    0.0
                };
                acc += a - gamma * k[i] * k[j] / two_m;
            }
        }
        acc / two_m
    }

    #[test]
    fn q_on_two_triangles() {
        let g = two_triangles();
        assert_eq!(modularity_q(&g, &planted()).unwrap(), 0.5);
        assert_eq!(modularity_q(&g, &Partition::single(6)).unwrap(), 0.0);
        let split = Partition::new(vec![1, 2, 2, 2, 2, 2]).unwrap();
        let oracle = pair_sum_q(&g, &split, 1.0, 0.0);
        assert!((modularity_q(&g, &split).unwrap() - oracle).abs() < 1e-14);
    }

    #[test]
    fn q_star_scales_q() {
        let g = two_triangles();
        assert_eq!(modularity_q_star(&g, &planted()).unwrap(), 72.0);
        assert_eq!(modularity_q_star(&g, &Partition::single(6)).unwrap(), 0.0);
    }

    #[test]
    fn empty_graph_has_no_modularity() {
        let g = Graph::from_edge_list(&[], 3).unwrap();
        assert!(matches!(
            modularity_q(&g, &Partition::single(3)),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn density_examples() {
        let g = two_triangles();
        assert_eq!(modularity_density(&g, &planted()).unwrap(), 4.0);
        assert_eq!(modularity_density(&g, &Partition::single(6)).unwrap(), 2.0);
        let k3 = Graph::from_edge_list(&[(0, 1), (0, 2), (1, 2)], 3).unwrap();
        assert_eq!(modularity_density(&k3, &Partition::single(3)).unwrap(), 2.0);
        for p in [planted(), Partition::single(6)] {
            let d = modularity_density(&g, &p).unwrap();
            assert!((modularity_density_quadratic(&g, &p).unwrap() - d).abs() < 1e-12);
            for sigma in [SigmaChoice::Auto, SigmaChoice::AutoPlus(7.5)] {
                assert!((modularity_density_trace(&g, &p, sigma).unwrap() - d).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn resolution_variants() {
        let g = two_triangles();
        let p = planted();
        assert_eq!(q_rb(&g, &p, 1.0).unwrap(), modularity_q(&g, &p).unwrap());
        // within-edge term 12/12, null term 2 * (36 + 36) / 144 = 1
        assert_eq!(q_rb(&g, &p, 2.0).unwrap(), 0.0);
        assert!((q_rb(&g, &p, 2.0).unwrap() - pair_sum_q(&g, &p, 2.0, 0.0)).abs() < 1e-15);
        assert_eq!(q_rb(&g, &p, 0.0).unwrap(), 1.0);
        assert_eq!(q_afg(&g, &p, 0.0).unwrap(), modularity_q(&g, &p).unwrap());
        let oracle = pair_sum_q(&g, &p, 1.0, 1.0);
        assert!((q_afg(&g, &p, 1.0).unwrap() - oracle).abs() < 1e-14);
        // 2m~ = 18, each community: within 6 + 3, degree 9 -> (9 - 81/18) * 2 / 18
        assert!((oracle - 0.5).abs() < 1e-15);
        assert!(q_afg(&g, &Partition::single(6), 1.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn w_star_rows() {
        let g = two_triangles();
        let w = build_w_star(&g).unwrap();
        assert_eq!(w.entries(), &(g.adjacency_dense() / 2.0));

        let star = Graph::from_edge_list(&[(0, 1), (0, 2), (0, 3)], 4).unwrap();
        let w = build_w_star(&star).unwrap();
        for j in 1..4 {
            assert_eq!(w.entries()[[0, j]], 1.0 / 3.0);
            assert_eq!(w.entries()[[j, 0]], 1.0);
        }
        for row in w.entries().rows() {
            assert!((row.sum() - 1.0).abs() < 1e-12);
        }

        let isolated = Graph::from_edge_list(&[(0, 1)], 3).unwrap();
        assert!(matches!(
            build_w_star(&isolated),
            Err(Error::IsolatedNode { node: 2 })
        ));
    }

    #[test]
    fn w1_construction() {
        let g = two_triangles();
        let a2 = g.adjacency_dense() * 2.0;
        let w = build_w1(&g, SigmaChoice::Fixed(2.0)).unwrap();
        assert_eq!(w.entries(), &a2);
        assert_eq!(build_w1(&g, SigmaChoice::Auto).unwrap().entries(), &a2);
        let shifted = build_w1(&g, SigmaChoice::Fixed(7.0)).unwrap();
        assert_eq!(shifted.entries(), &(a2 + Array2::<f64>::eye(6) * 5.0));
        assert!(matches!(
            build_w1(&g, SigmaChoice::Fixed(1.0)),
            Err(Error::SigmaTooSmall { .. })
        ));
    }

    #[test]
    fn frobenius_examples() {
        let g = two_triangles();
        let s = planted().membership();
        let exact = TargetMatrix::generic(s.entries().dot(&s.entries().t())).unwrap();
        assert_eq!(frobenius_objective(&exact, &s).unwrap(), 0.0);

        let w1 = build_w1(&g, SigmaChoice::Fixed(2.0)).unwrap();
        let h = scale_membership(&s).unwrap();
        // entrywise: W1 - HH^T has 12 entries 2 - 1/3, 6 diagonal -1/3, 18 off-block 0
        let oracle = 12.0 * (5.0f64 / 3.0).powi(2) + 6.0 / 9.0;
        let value = frobenius_objective(&w1, &h).unwrap();
        assert!((value - 34.0).abs() < 1e-12);
        assert!((value - oracle).abs() < 1e-12);

        let zero = TargetMatrix::generic(Array2::zeros((2, 2))).unwrap();
        let ones = Partition::single(2).membership();
        assert_eq!(frobenius_objective(&zero, &ones).unwrap(), 4.0);

        let wrong = Partition::single(3).membership();
        assert!(matches!(
            frobenius_objective(&zero, &wrong),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn kl_on_two_triangles() {
        let g = two_triangles();
        let null = constant_null(&g, KlVariant::Base).unwrap();
        assert!((null.value - 1.0 / 3.0).abs() < 1e-15);
        let kl = kl_objective(&g, &null, &planted().membership()).unwrap();
        assert!((kl - (3.0f64.ln() - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn kl_perfect_fit_is_zero() {
        // Clique community, P = 1: every off-diagonal term is 1 log 1 - 1 + 1 = 0,
        // the diagonal leaves P = 1 per node. Remove it with an AFG shift of 1.
        let k3 = Graph::from_edge_list(&[(0, 1), (0, 2), (1, 2)], 3).unwrap();
        let null = NullModel {
            kind: NullKind::AfgConstant,
            value: 1.0,
            gamma: 1.0,
            shift: 1.0,
        };
        let kl = kl_objective(&k3, &null, &Partition::single(3).membership()).unwrap();
        assert!(kl.abs() < 1e-15);
    }

    #[test]
    fn kl_edgeless_community() {
        // Community {0,1} has no internal edge; only the +P terms of its four
        // ordered pairs survive. Community {2,3} holds the single edge.
        let g = Graph::from_edge_list(&[(2, 3)], 4).unwrap();
        let p = Partition::new(vec![1, 1, 2, 2]).unwrap();
        let null = NullModel::constant_value(1.0 / 3.0).unwrap();
        let kl = kl_objective(&g, &null, &p.membership()).unwrap();
        let empty_part = 4.0 / 3.0;
        let edge_part = 2.0 * (3.0f64.ln() - 1.0 + 1.0 / 3.0) + 2.0 / 3.0;
        assert!((kl - (empty_part + edge_part) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn kl_rejects_bad_null() {
        assert!(matches!(
            NullModel::constant_value(0.0),
            Err(Error::InvalidNull(_))
        ));
        let g = two_triangles();
        assert!(kl_objective(&g, &NullModel::config_product(), &planted().membership()).is_err());
    }

    #[test]
    fn constant_null_variants() {
        let g = two_triangles();
        let base = constant_null(&g, KlVariant::Base).unwrap();
        let rb = constant_null(&g, KlVariant::Rb { gamma: 1.0 }).unwrap();
        let afg0 = constant_null(&g, KlVariant::Afg { r: 0.0 }).unwrap();
        assert_eq!(base.value, rb.value);
        assert_eq!(base.value, afg0.value);
        let afg1 = constant_null(&g, KlVariant::Afg { r: 1.0 }).unwrap();
        assert!((afg1.value - 9.0 / 18.0).abs() < 1e-15);
        assert!(base.sigma1() > 0.0);
        let empty = Graph::from_edge_list(&[], 2).unwrap();
        assert!(matches!(
            constant_null(&empty, KlVariant::Base),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn sigma_parsing() {
        assert_eq!("auto".parse::<SigmaChoice>().unwrap(), SigmaChoice::Auto);
        assert_eq!(
            "auto+10".parse::<SigmaChoice>().unwrap(),
            SigmaChoice::AutoPlus(10.0)
        );
        assert_eq!(
            "3.5".parse::<SigmaChoice>().unwrap(),
            SigmaChoice::Fixed(3.5)
        );
        assert!("big".parse::<SigmaChoice>().is_err());
    }

    #[test]
    fn trace_quadratic_matches_dense_product() {
        let w = array![[1.0, 2.0], [3.0, 4.0]];
        let m = array![[1.0, 0.5], [0.0, 2.0]];
        let dense = m.t().dot(&w).dot(&m);
        let trace: f64 = (0..2).map(|i| dense[[i, i]]).sum();
        assert!((trace_quadratic(&w, &m).unwrap() - trace).abs() < 1e-12);
    }
}
