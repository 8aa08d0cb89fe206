//! A common interface over the two code families, so the security analyzer
//! and the simulator can treat a code as "something an adversary observes
//! rows of".

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldSpec};
use crate::graph_code::{GraphCode, HelperUnit, NodeContent};
use crate::matrix::MatrixFq;
use crate::pm_code::PmCode;
use crate::security::{theorem1_level, theorem2_level};

/// What the analyzer needs from a code: parameters, the adversary's row
/// matrix for a node subset, and the closed-form block-level prediction.
pub trait DssCode {
    fn family(&self) -> &'static str;
    fn n(&self) -> usize;
    fn k(&self) -> usize;
    fn d(&self) -> usize;
    fn field(&self) -> FieldSpec;
    fn file_size(&self) -> usize;

    /// The matrix A with A fᵗ = everything the adversary sees when
    /// observing `nodes` (any order, duplicates ignored).
    fn observation_matrix(&self, nodes: &[usize]) -> Result<MatrixFq>;

    /// Closed-form block level for an adversary of strength ℓ; 0 once
    /// ℓ ≥ k (the whole file is revealed).
    fn formula_level(&self, ell: usize) -> usize;
}

impl DssCode for GraphCode {
    fn family(&self) -> &'static str {
        "graph"
    }
    fn n(&self) -> usize {
        GraphCode::n(self)
    }
    fn k(&self) -> usize {
        GraphCode::k(self)
    }
    fn d(&self) -> usize {
        GraphCode::d(self)
    }
    fn field(&self) -> FieldSpec {
        GraphCode::field(self)
    }
    fn file_size(&self) -> usize {
        GraphCode::file_size(self)
    }
    fn observation_matrix(&self, nodes: &[usize]) -> Result<MatrixFq> {
        self.eavesdrop(nodes).map(|(m, _)| m)
    }
    fn formula_level(&self, ell: usize) -> usize {
        if ell >= self.k() {
            0
        } else {
            theorem1_level(self.k(), GraphCode::d(self), ell).expect("ell < k <= d")
        }
    }
}

impl DssCode for PmCode {
    fn family(&self) -> &'static str {
        "pm"
    }
    fn n(&self) -> usize {
        PmCode::n(self)
    }
    fn k(&self) -> usize {
        PmCode::k(self)
    }
    fn d(&self) -> usize {
        PmCode::d(self)
    }
    fn field(&self) -> FieldSpec {
        PmCode::field(self)
    }
    fn file_size(&self) -> usize {
        PmCode::file_size(self)
    }
    fn observation_matrix(&self, nodes: &[usize]) -> Result<MatrixFq> {
        self.eavesdrop(nodes).map(|sys| sys.ebar().clone())
    }
    fn formula_level(&self, ell: usize) -> usize {
        if ell >= self.k() {
            0
        } else {
            theorem2_level(self.k(), ell).expect("ell < k")
        }
    }
}

/// The stored content of one node, tagged by family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeData {
    Graph(NodeContent),
    Pm(Vec<FieldElement>),
}

/// Either code family behind one dispatching surface; what the simulator
/// holds.
#[derive(Debug, Clone)]
pub enum AnyCode {
    Graph(GraphCode),
    Pm(PmCode),
}

impl From<GraphCode> for AnyCode {
    fn from(c: GraphCode) -> Self {
        AnyCode::Graph(c)
    }
}

impl From<PmCode> for AnyCode {
    fn from(c: PmCode) -> Self {
        AnyCode::Pm(c)
    }
}

fn wrong_family() -> Error {
    Error::BadParams("node content belongs to a different code family".into())
}

impl AnyCode {
    pub fn encode(&self, file: &[FieldElement]) -> Result<Vec<NodeData>> {
        match self {
            AnyCode::Graph(c) => Ok(c.encode(file)?.into_iter().map(NodeData::Graph).collect()),
            AnyCode::Pm(c) => Ok(c.encode(file)?.into_iter().map(NodeData::Pm).collect()),
        }
    }

    pub fn reconstruct(&self, contents: &[(usize, NodeData)]) -> Result<Vec<FieldElement>> {
        match self {
            AnyCode::Graph(c) => {
                let picked: Vec<NodeContent> = contents
                    .iter()
                    .map(|(id, data)| match data {
                        NodeData::Graph(nc) if nc.node == *id => Ok(nc.clone()),
                        NodeData::Graph(_) => {
                            Err(Error::BadIndex("content labeled with another node".into()))
                        }
                        _ => Err(wrong_family()),
                    })
                    .collect::<Result<_>>()?;
                c.reconstruct(&picked)
            }
            AnyCode::Pm(c) => {
                let picked: Vec<(usize, Vec<FieldElement>)> = contents
                    .iter()
                    .map(|(id, data)| match data {
                        NodeData::Pm(row) => Ok((*id, row.clone())),
                        _ => Err(wrong_family()),
                    })
                    .collect::<Result<_>>()?;
                c.reconstruct(&picked)
            }
        }
    }

    /// The default helper set for repairing `failed`, given which nodes are
    /// alive: the graph family must use exactly the failed node's neighbors;
    /// the product-matrix family takes the d lowest-numbered alive nodes.
    pub fn default_helpers(&self, failed: usize, alive: &BTreeSet<usize>) -> Result<Vec<usize>> {
        match self {
            AnyCode::Graph(c) => {
                let neighbors = c.graph().neighbors(failed);
                if let Some(&dead) = neighbors.iter().find(|h| !alive.contains(h)) {
                    return Err(Error::InsufficientAlive(format!(
                        "required helper {dead} is not alive"
                    )));
                }
                Ok(neighbors)
            }
            AnyCode::Pm(c) => {
                let helpers: Vec<usize> = alive
                    .iter()
                    .copied()
                    .filter(|&h| h != failed)
                    .take(c.d())
                    .collect();
                if helpers.len() < c.d() {
                    return Err(Error::InsufficientAlive(format!(
                        "need {} alive helpers, found {}",
                        c.d(),
                        helpers.len()
                    )));
                }
                Ok(helpers)
            }
        }
    }

    /// Repairs `failed` from the stored contents of the given helpers,
    /// computing each helper's β = 1 download internally.
    pub fn repair(
        &self,
        failed: usize,
        helper_contents: &[(usize, NodeData)],
    ) -> Result<NodeData> {
        match self {
            AnyCode::Graph(c) => {
                let mut units = Vec::with_capacity(helper_contents.len());
                for (id, data) in helper_contents {
                    let NodeData::Graph(nc) = data else {
                        return Err(wrong_family());
                    };
                    let edge = c.graph().edge_index(*id, failed).ok_or_else(|| {
                        Error::WrongHelpers(format!(
                            "node {id} is not a neighbor of node {failed}"
                        ))
                    })?;
                    let value = nc
                        .units
                        .iter()
                        .find(|(e, _)| *e == edge)
                        .map(|(_, v)| *v)
                        .ok_or_else(|| Error::BadIndex(format!("edge {edge} missing")))?;
                    units.push(HelperUnit {
                        helper: *id,
                        edge,
                        value,
                    });
                }
                Ok(NodeData::Graph(c.repair(failed, &units)?))
            }
            AnyCode::Pm(c) => {
                let mut scalars = Vec::with_capacity(helper_contents.len());
                for (id, data) in helper_contents {
                    let NodeData::Pm(row) = data else {
                        return Err(wrong_family());
                    };
                    scalars.push((*id, c.repair_helper(*id, failed, row)?));
                }
                Ok(NodeData::Pm(c.repair(failed, &scalars)?))
            }
        }
    }
}

impl DssCode for AnyCode {
    fn family(&self) -> &'static str {
        match self {
            AnyCode::Graph(c) => c.family(),
            AnyCode::Pm(c) => c.family(),
        }
    }
    fn n(&self) -> usize {
        match self {
            AnyCode::Graph(c) => DssCode::n(c),
            AnyCode::Pm(c) => DssCode::n(c),
        }
    }
    fn k(&self) -> usize {
        match self {
            AnyCode::Graph(c) => DssCode::k(c),
            AnyCode::Pm(c) => DssCode::k(c),
        }
    }
    fn d(&self) -> usize {
        match self {
            AnyCode::Graph(c) => DssCode::d(c),
            AnyCode::Pm(c) => DssCode::d(c),
        }
    }
    fn field(&self) -> FieldSpec {
        match self {
            AnyCode::Graph(c) => DssCode::field(c),
            AnyCode::Pm(c) => DssCode::field(c),
        }
    }
    fn file_size(&self) -> usize {
        match self {
            AnyCode::Graph(c) => DssCode::file_size(c),
            AnyCode::Pm(c) => DssCode::file_size(c),
        }
    }
    fn observation_matrix(&self, nodes: &[usize]) -> Result<MatrixFq> {
        match self {
            AnyCode::Graph(c) => c.observation_matrix(nodes),
            AnyCode::Pm(c) => c.observation_matrix(nodes),
        }
    }
    fn formula_level(&self, ell: usize) -> usize {
        match self {
            AnyCode::Graph(c) => c.formula_level(ell),
            AnyCode::Pm(c) => c.formula_level(ell),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::DEFAULT_SUBSET_BUDGET;
    use crate::graph_code::MatrixKind;

    fn graph423() -> AnyCode {
        GraphCode::build(
            4,
            2,
            3,
            FieldSpec::new(13).unwrap(),
            MatrixKind::Cauchy,
            None,
        )
        .unwrap()
        .into()
    }

    fn pm433() -> AnyCode {
        PmCode::build(
            4,
            3,
            3,
            FieldSpec::new(7).unwrap(),
            MatrixKind::Cauchy,
            DEFAULT_SUBSET_BUDGET,
        )
        .unwrap()
        .into()
    }

    #[test]
    fn formula_levels() {
        let g = graph423();
        assert_eq!(
            (0..4).map(|l| g.formula_level(l)).collect::<Vec<_>>(),
            [5, 2, 0, 0]
        );
        let p = pm433();
        assert_eq!(
            (0..5).map(|l| p.formula_level(l)).collect::<Vec<_>>(),
            [3, 2, 1, 0, 0]
        );
    }

    #[test]
    fn observation_shapes() {
        let g = graph423();
        assert_eq!(g.observation_matrix(&[1]).unwrap().rows(), 3);
        let p = pm433();
        // Ē for one node: d rows, M columns.
        let obs = p.observation_matrix(&[2]).unwrap();
        assert_eq!((obs.rows(), obs.cols()), (3, 6));
    }

    #[test]
    fn unified_round_trips() {
        use std::collections::BTreeSet;
        for code in [graph423(), pm433()] {
            let field = code.field();
            let file: Vec<FieldElement> = (0..code.file_size())
                .map(|i| field.elem(i as u64 + 1))
                .collect();
            let contents = code.encode(&file).unwrap();
            let k = code.k();
            let picked: Vec<(usize, NodeData)> = (1..=k)
                .map(|id| (id, contents[id - 1].clone()))
                .collect();
            assert_eq!(code.reconstruct(&picked).unwrap(), file);

            let alive: BTreeSet<usize> = (1..=code.n()).collect();
            let failed = code.n();
            let helpers = code.default_helpers(failed, &alive).unwrap();
            let helper_contents: Vec<(usize, NodeData)> = helpers
                .iter()
                .map(|&h| (h, contents[h - 1].clone()))
                .collect();
            assert_eq!(
                code.repair(failed, &helper_contents).unwrap(),
                contents[failed - 1]
            );
        }
    }
}
