//! Undirected simple graphs.
//!
//! Adjacency is stored as sorted neighbor lists. Solvers that need the dense
//! matrix call [`Graph::adjacency_dense`]; the experiments never exceed a few
//! thousand nodes so the dense form stays affordable.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    neighbors: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Builds a graph from an edge list where every undirected edge appears once.
    ///
    /// Self-loops, repeated edges (in either orientation) and ids `>= n` are
    /// rejected.
    pub fn from_edge_list(edges: &[(usize, usize)], n: usize) -> Result<Self> {
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::Index { node: u, n });
            }
            if v >= n {
                return Err(Error::Index { node: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop { node: u });
            }
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for (u, list) in neighbors.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(Error::DuplicateEdge { u: a, v: b });
            }
        }
        Ok(Self {
            neighbors,
            m: edges.len(),
        })
    }

    /// Graph from already-validated sorted neighbor lists.
    pub(crate) fn from_sorted_neighbors(neighbors: Vec<Vec<usize>>) -> Self {
        let twice_m: usize = neighbors.iter().map(Vec::len).sum();
        debug_assert!(twice_m.is_multiple_of(2));
        Self {
            neighbors,
            m: twice_m / 2,
        }
    }

    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, node: usize) -> usize {
        self.neighbors[node].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            (2 * self.m) as f64 / self.n() as f64
        }
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }

    /// First node with degree zero, if any.
    pub fn first_isolated(&self) -> Option<usize> {
        self.neighbors.iter().position(Vec::is_empty)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Dense 0/1 adjacency matrix.
    pub fn adjacency_dense(&self) -> Array2<f64> {
        let n = self.n();
        let mut a = Array2::zeros((n, n));
        for (u, list) in self.neighbors.iter().enumerate() {
            for &v in list {
                a[[u, v]] = 1.0;
            }
        }
        a
    }
}
