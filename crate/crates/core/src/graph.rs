//! Regular graphs with a stable, lexicographic edge order.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A d-regular graph on vertices `1..=n`. Edges are stored as ordered pairs
/// `(a, b)` with `a < b`, in lexicographic order; edge indices are 1-based
/// so that edge `j` carries coded unit `c_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularGraph {
    n: usize,
    d: usize,
    edges: Vec<(usize, usize)>,
}

impl RegularGraph {
    /// Validates degree regularity, edge count, ordering, and absence of
    /// self-loops or duplicates.
    pub fn new(n: usize, d: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        edges.sort_unstable();
        if n * d % 2 != 0 {
            return Err(Error::OddProduct(n * d));
        }
        let mut seen = BTreeSet::new();
        let mut degree = vec![0usize; n + 1];
        for &(a, b) in &edges {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::BadIndex(format!("vertex in edge ({a},{b})")));
            }
            if a >= b {
                return Err(Error::BadParams(format!("edge ({a},{b}) not ordered")));
            }
            if !seen.insert((a, b)) {
                return Err(Error::BadParams(format!("duplicate edge ({a},{b})")));
            }
            degree[a] += 1;
            degree[b] += 1;
        }
        if edges.len() != n * d / 2 {
            return Err(Error::BadParams(format!(
                "expected {} edges, got {}",
                n * d / 2,
                edges.len()
            )));
        }
        for v in 1..=n {
            if degree[v] != d {
                return Err(Error::BadParams(format!(
                    "vertex {v} has degree {} != {d}",
                    degree[v]
                )));
            }
        }
        Ok(RegularGraph { n, d, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// 1-based indices of the edges incident to `v`, ascending.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// 1-based index of the edge joining `a` and `b`, if present.
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).ok().map(|i| i + 1)
    }
}

/// The complete graph K_n.
pub fn complete_graph(n: usize) -> Result<RegularGraph> {
    if n < 2 {
        return Err(Error::BadParams(format!("complete graph needs n >= 2, got {n}")));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for a in 1..=n {
        for b in a + 1..=n {
            edges.push((a, b));
        }
    }
    RegularGraph::new(n, n - 1, edges)
}

/// Circulant d-regular graph: vertex i is adjacent to i±1, ..., i±⌊d/2⌋
/// (mod n), plus the diameter i ↔ i + n/2 when d is odd (n must be even).
pub fn circulant_regular_graph(n: usize, d: usize) -> Result<RegularGraph> {
    if n * d % 2 != 0 {
        return Err(Error::OddProduct(n * d));
    }
    if d > n - 1 {
        return Err(Error::DegreeTooLarge { n, d });
    }
    let mut set = BTreeSet::new();
    let wrap = |v: usize| (v - 1) % n + 1;
    for i in 1..=n {
        for off in 1..=d / 2 {
            let j = wrap(i + off);
            set.insert((i.min(j), i.max(j)));
        }
        if d % 2 == 1 {
            let j = wrap(i + n / 2);
            set.insert((i.min(j), i.max(j)));
        }
    }
    RegularGraph::new(n, d, set.into_iter().collect())
}
