//! Regular-graph MBR code: coded units live on the edges of a d-regular
//! graph, each node stores the units of its incident edges, and repair is
//! uncoded — each neighbor hands over the unit on the shared edge.

use std::collections::{BTreeMap, BTreeSet};

use crate::analysis::{mds_rows_check, DEFAULT_SUBSET_BUDGET};
use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldSpec};
use crate::graph::{circulant_regular_graph, complete_graph, RegularGraph};
use crate::matrix::{cauchy_matrix, vandermonde_matrix, MatrixFq};

/// Which structured matrix backs the encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixKind {
    Cauchy,
    /// Row evaluation points; defaults to `1..=rows` when `None`.
    Vandermonde { points: Option<Vec<u64>> },
}

impl MatrixKind {
    pub fn name(&self) -> &'static str {
        match self {
            MatrixKind::Cauchy => "cauchy",
            MatrixKind::Vandermonde { .. } => "vandermonde",
        }
    }
}

/// The stored content of one node: coded units keyed by 1-based edge index,
/// ascending. Unit count equals α = d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeContent {
    pub node: usize,
    pub units: Vec<(usize, FieldElement)>,
}

/// One repair download: `helper` supplies the coded unit on `edge`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HelperUnit {
    pub helper: usize,
    pub edge: usize,
    pub value: FieldElement,
}

/// A fully built regular-graph MBR code instance.
#[derive(Debug, Clone)]
pub struct GraphCode {
    n: usize,
    k: usize,
    d: usize,
    field: FieldSpec,
    graph: RegularGraph,
    g: MatrixFq,
    kind: MatrixKind,
    /// placement[i] = incident edge indices of node i+1, each of length d.
    placement: Vec<Vec<usize>>,
}

impl GraphCode {
    /// Builds the code: graph (default: complete if d = n−1, else
    /// circulant), encoding matrix of shape (nd/2) × M with
    /// M = kd − C(k,2), and the per-node placement map. The MDS rows
    /// property is verified at build time.
    pub fn build(
        n: usize,
        k: usize,
        d: usize,
        field: FieldSpec,
        kind: MatrixKind,
        graph: Option<RegularGraph>,
    ) -> Result<Self> {
        if !(1 <= k && k <= d && d <= n.saturating_sub(1)) {
            return Err(Error::BadParams(format!(
                "need 1 <= k <= d <= n-1, got n={n} k={k} d={d}"
            )));
        }
        if n * d % 2 != 0 {
            return Err(Error::OddProduct(n * d));
        }
        let graph = match graph {
            Some(g) => {
                if g.n() != n || g.d() != d {
                    return Err(Error::BadParams(format!(
                        "supplied graph is ({}, {})-regular, expected ({n}, {d})",
                        g.n(),
                        g.d()
                    )));
                }
                g
            }
            None if d == n - 1 => complete_graph(n)?,
            None => circulant_regular_graph(n, d)?,
        };
        let rows = n * d / 2;
        let m = Self::file_size_for(k, d);
        let g = match &kind {
            MatrixKind::Cauchy => cauchy_matrix(field, rows, m, None)?,
            MatrixKind::Vandermonde { points } => {
                let pts: Vec<u64> = match points {
                    Some(p) => p.clone(),
                    None => {
                        if field.q() <= rows as u64 {
                            return Err(Error::FieldTooSmall {
                                needed: rows as u64 + 1,
                                q: field.q(),
                            });
                        }
                        (1..=rows as u64).collect()
                    }
                };
                if pts.len() != rows {
                    return Err(Error::BadParams(format!(
                        "expected {rows} points, got {}",
                        pts.len()
                    )));
                }
                vandermonde_matrix(field, &pts, m)?
            }
        };
        if !mds_rows_check(&g, m, DEFAULT_SUBSET_BUDGET)? {
            return Err(Error::MdsViolation);
        }
        let placement = (1..=n).map(|v| graph.incident_edges(v)).collect();
        Ok(GraphCode {
            n,
            k,
            d,
            field,
            graph,
            g,
            kind,
            placement,
        })
    }

    pub fn file_size_for(k: usize, d: usize) -> usize {
        k * d - k * (k - 1) / 2
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn field(&self) -> FieldSpec {
        self.field
    }
    pub fn file_size(&self) -> usize {
        Self::file_size_for(self.k, self.d)
    }
    pub fn graph(&self) -> &RegularGraph {
        &self.graph
    }
    pub fn generator(&self) -> &MatrixFq {
        &self.g
    }
    pub fn kind(&self) -> &MatrixKind {
        &self.kind
    }
    pub fn placement(&self, node: usize) -> Result<&[usize]> {
        self.check_node(node)?;
        Ok(&self.placement[node - 1])
    }

    fn check_node(&self, node: usize) -> Result<()> {
        if node == 0 || node > self.n {
            return Err(Error::BadIndex(format!("node {node} not in 1..={}", self.n)));
        }
        Ok(())
    }

    fn check_file(&self, file: &[FieldElement]) -> Result<()> {
        if file.len() != self.file_size() {
            return Err(Error::LengthMismatch {
                expected: self.file_size(),
                got: file.len(),
            });
        }
        if file.iter().any(|e| e.field() != self.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Encodes the file into per-node contents: c = G fᵗ, node i stores the
    /// units of its incident edges.
    pub fn encode(&self, file: &[FieldElement]) -> Result<Vec<NodeContent>> {
        self.check_file(file)?;
        let coded = self.g.mul_vec(file)?;
        Ok((1..=self.n)
            .map(|node| NodeContent {
                node,
                units: self.placement[node - 1]
                    .iter()
                    .map(|&e| (e, coded[e - 1]))
                    .collect(),
            })
            .collect())
    }

    /// Recovers the file from the contents of any k distinct nodes.
    pub fn reconstruct(&self, contents: &[NodeContent]) -> Result<Vec<FieldElement>> {
        let ids: BTreeSet<usize> = contents.iter().map(|c| c.node).collect();
        if ids.len() != contents.len() || contents.len() != self.k {
            return Err(Error::BadIndex(format!(
                "need {} distinct node contents, got {}",
                self.k,
                contents.len()
            )));
        }
        for c in contents {
            self.check_node(c.node)?;
        }
        let mut units: BTreeMap<usize, FieldElement> = BTreeMap::new();
        for c in contents {
            for &(edge, value) in &c.units {
                if edge == 0 || edge > self.graph.edge_count() {
                    return Err(Error::BadIndex(format!("edge {edge}")));
                }
                units.insert(edge, value);
            }
        }
        let m = self.file_size();
        if units.len() < m {
            return Err(Error::Underdetermined {
                rank: units.len(),
                cols: m,
            });
        }
        let edge_rows: Vec<usize> = units.keys().map(|&e| e - 1).collect();
        let sub = self.g.select_rows(&edge_rows)?;
        let rhs: Vec<FieldElement> = units.values().copied().collect();
        let x = sub.solve(&MatrixFq::column(self.field, &rhs)?)?;
        Ok((0..m).map(|i| x.get(i, 0)).collect())
    }

    /// Exact uncoded repair: the helpers must be precisely the graph
    /// neighbors of the failed node, each supplying the unit on the shared
    /// edge (β = 1 per helper).
    pub fn repair(&self, failed: usize, helpers: &[HelperUnit]) -> Result<NodeContent> {
        self.check_node(failed)?;
        let neighbors: BTreeSet<usize> = self.graph.neighbors(failed).into_iter().collect();
        let supplied: BTreeSet<usize> = helpers.iter().map(|h| h.helper).collect();
        if supplied.len() != helpers.len() || supplied != neighbors {
            return Err(Error::WrongHelpers(format!(
                "expected neighbors {neighbors:?} of node {failed}, got {supplied:?}"
            )));
        }
        let mut units = Vec::with_capacity(self.d);
        for h in helpers {
            let shared = self
                .graph
                .edge_index(h.helper, failed)
                .expect("helper is a neighbor");
            if h.edge != shared {
                return Err(Error::WrongUnit {
                    helper: h.helper,
                    failed,
                    edge: h.edge,
                });
            }
            units.push((h.edge, h.value));
        }
        units.sort_by_key(|&(e, _)| e);
        Ok(NodeContent {
            node: failed,
            units,
        })
    }

    /// Rows of G observed by eavesdropping the given nodes: the union of
    /// their incident edges, deduplicated, in edge-index order.
    pub fn eavesdrop(&self, nodes: &[usize]) -> Result<(MatrixFq, Vec<usize>)> {
        if nodes.is_empty() {
            return Err(Error::BadIndex("empty eavesdrop set".into()));
        }
        let mut edges = BTreeSet::new();
        for &node in nodes {
            self.check_node(node)?;
            edges.extend(self.placement[node - 1].iter().copied());
        }
        let edges: Vec<usize> = edges.into_iter().collect();
        let rows: Vec<usize> = edges.iter().map(|&e| e - 1).collect();
        Ok((self.g.select_rows(&rows)?, edges))
    }
}
