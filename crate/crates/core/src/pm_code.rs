//! Product-matrix MBR code: node i stores row i of Ψ·M, where M is the
//! symmetric message matrix [[S, T], [Tᵗ, 0]]. Includes the block matrix
//! that turns the eavesdropper's matrix equations into one linear system.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldSpec};
use crate::graph_code::MatrixKind;
use crate::matrix::{cauchy_matrix, vandermonde_matrix, MatrixFq};

/// The index set I = {(i,j) : 1 <= i <= k, i <= j <= d} in lexicographic
/// order; data unit f_(i,j) sits at both the (i,j) and (j,i) entries of the
/// message matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSetI {
    k: usize,
    d: usize,
    elements: Vec<(usize, usize)>,
}

impl IndexSetI {
    pub fn new(k: usize, d: usize) -> Result<Self> {
        if k == 0 || k > d {
            return Err(Error::BadParams(format!("need 1 <= k <= d, got k={k} d={d}")));
        }
        let elements = (1..=k)
            .flat_map(|i| (i..=d).map(move |j| (i, j)))
            .collect();
        Ok(IndexSetI { k, d, elements })
    }

    pub fn k(&self) -> usize {
        self.k
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn elements(&self) -> &[(usize, usize)] {
        &self.elements
    }
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// 0-based position of (i,j) within the lexicographic order.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        self.elements.binary_search(&(i, j)).ok()
    }
}

/// The d×d symmetric message matrix with a zero lower-right block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageMatrix {
    m: MatrixFq,
}

impl MessageMatrix {
    pub fn matrix(&self) -> &MatrixFq {
        &self.m
    }
}

/// Packs a file of M elements into the message matrix.
pub fn pack_message(index: &IndexSetI, file: &[FieldElement]) -> Result<MessageMatrix> {
    if file.len() != index.len() {
        return Err(Error::LengthMismatch {
            expected: index.len(),
            got: file.len(),
        });
    }
    let field = file
        .first()
        .map(|e| e.field())
        .ok_or_else(|| Error::BadParams("empty file".into()))?;
    let d = index.d();
    let mut m = MatrixFq::zero(field, d, d);
    for (pos, &(i, j)) in index.elements().iter().enumerate() {
        m.set(i - 1, j - 1, file[pos]);
        m.set(j - 1, i - 1, file[pos]);
    }
    Ok(MessageMatrix { m })
}

/// Exact inverse of [`pack_message`].
pub fn unpack_message(index: &IndexSetI, msg: &MessageMatrix) -> Vec<FieldElement> {
    index
        .elements()
        .iter()
        .map(|&(i, j)| msg.m.get(i - 1, j - 1))
        .collect()
}

/// How the independence properties of Ψ were verified at build time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyVerification {
    Exhaustive,
    Sampled { checked: usize },
}

/// The eavesdropper's linear system for a node subset: Ē is the
/// (dℓ) × M block matrix with Ē fᵗ equal to the stacked columns of E·M(f).
#[derive(Debug, Clone)]
pub struct EavesdropSystem {
    nodes: Vec<usize>,
    ebar: MatrixFq,
    d: usize,
}

impl EavesdropSystem {
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn ebar(&self) -> &MatrixFq {
        &self.ebar
    }

    /// Stacks the observed node contents (rows of H = E·M) into the vector
    /// H̄ = (H[1]ᵗ, ..., H[d]ᵗ)ᵗ matching the row order of Ē.
    pub fn stack_observations(&self, contents: &[Vec<FieldElement>]) -> Result<Vec<FieldElement>> {
        let ell = self.nodes.len();
        if contents.len() != ell {
            return Err(Error::LengthMismatch {
                expected: ell,
                got: contents.len(),
            });
        }
        for c in contents {
            if c.len() != self.d {
                return Err(Error::LengthMismatch {
                    expected: self.d,
                    got: c.len(),
                });
            }
        }
        let mut out = Vec::with_capacity(self.d * ell);
        for j in 0..self.d {
            for row in contents {
                out.push(row[j]);
            }
        }
        Ok(out)
    }
}

/// A fully built product-matrix MBR code instance.
#[derive(Debug, Clone)]
pub struct PmCode {
    n: usize,
    k: usize,
    d: usize,
    field: FieldSpec,
    psi: MatrixFq,
    kind: MatrixKind,
    index: IndexSetI,
    verification: PropertyVerification,
}

impl PmCode {
    /// Builds Ψ = [Φ Δ] (n × d) and verifies, exhaustively within the
    /// subset budget, that any d rows of Ψ and any k rows of Φ are linearly
    /// independent.
    pub fn build(
        n: usize,
        k: usize,
        d: usize,
        field: FieldSpec,
        kind: MatrixKind,
        subset_budget: u64,
    ) -> Result<Self> {
        if !(1 <= k && k <= d && d <= n.saturating_sub(1)) {
            return Err(Error::BadParams(format!(
                "need 1 <= k <= d <= n-1, got n={n} k={k} d={d}"
            )));
        }
        let psi = match &kind {
            MatrixKind::Cauchy => {
                if (n + d) as u64 > field.q() {
                    return Err(Error::FieldTooSmall {
                        needed: (n + d) as u64,
                        q: field.q(),
                    });
                }
                cauchy_matrix(field, n, d, None)?
            }
            MatrixKind::Vandermonde { points } => {
                let pts: Vec<u64> = match points {
                    Some(p) => p.clone(),
                    None => {
                        if field.q() <= n as u64 {
                            return Err(Error::FieldTooSmall {
                                needed: n as u64 + 1,
                                q: field.q(),
                            });
                        }
                        (1..=n as u64).collect()
                    }
                };
                if pts.len() != n {
                    return Err(Error::BadParams(format!(
                        "expected {n} points, got {}",
                        pts.len()
                    )));
                }
                vandermonde_matrix(field, &pts, d)?
            }
        };
        let phi = psi.select_cols(&(0..k).collect::<Vec<_>>())?;
        let v1 = check_row_subsets(&psi, d, subset_budget, 0x5051)?;
        let v2 = check_row_subsets(&phi, k, subset_budget, 0x5052)?;
        let verification = match (v1, v2) {
            (PropertyVerification::Exhaustive, PropertyVerification::Exhaustive) => {
                PropertyVerification::Exhaustive
            }
            (a, b) => {
                let checked = |v| match v {
                    PropertyVerification::Exhaustive => 0,
                    PropertyVerification::Sampled { checked } => checked,
                };
                PropertyVerification::Sampled {
                    checked: checked(a) + checked(b),
                }
            }
        };
        Ok(PmCode {
            n,
            k,
            d,
            field,
            psi,
            kind,
            index: IndexSetI::new(k, d)?,
            verification,
        })
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
        self.index.len()
    }
    pub fn psi(&self) -> &MatrixFq {
        &self.psi
    }
    pub fn kind(&self) -> &MatrixKind {
        &self.kind
    }
    pub fn index(&self) -> &IndexSetI {
        &self.index
    }
    pub fn verification(&self) -> PropertyVerification {
        self.verification
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

    /// Node i stores row i of Ψ·M(file); α = d elements per node.
    pub fn encode(&self, file: &[FieldElement]) -> Result<Vec<Vec<FieldElement>>> {
        self.check_file(file)?;
        let msg = pack_message(&self.index, file)?;
        let stored = self.psi.mul(msg.matrix())?;
        Ok((0..self.n).map(|i| stored.row(i)).collect())
    }

    /// Recovers the file from any k node contents: invert Φ_DC to get T,
    /// then S.
    pub fn reconstruct(
        &self,
        contents: &[(usize, Vec<FieldElement>)],
    ) -> Result<Vec<FieldElement>> {
        let ids: BTreeSet<usize> = contents.iter().map(|(id, _)| *id).collect();
        if ids.len() != contents.len() || contents.len() != self.k {
            return Err(Error::BadIndex(format!(
                "need {} distinct node contents, got {}",
                self.k,
                contents.len()
            )));
        }
        for (id, row) in contents {
            self.check_node(*id)?;
            if row.len() != self.d {
                return Err(Error::LengthMismatch {
                    expected: self.d,
                    got: row.len(),
                });
            }
        }
        let (k, d) = (self.k, self.d);
        let rows: Vec<usize> = contents.iter().map(|(id, _)| id - 1).collect();
        let psi_dc = self.psi.select_rows(&rows)?;
        let phi_dc = psi_dc.select_cols(&(0..k).collect::<Vec<_>>())?;
        let delta_dc = psi_dc.select_cols(&(k..d).collect::<Vec<_>>())?;
        let mut collected = MatrixFq::zero(self.field, k, d);
        for (r, (_, row)) in contents.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                collected.set(r, c, v);
            }
        }
        let left = collected.select_cols(&(0..k).collect::<Vec<_>>())?;
        let right = collected.select_cols(&(k..d).collect::<Vec<_>>())?;
        let phi_inv = phi_dc.inverse()?;
        // right = Φ_DC · T, left = Φ_DC · S + Δ_DC · Tᵗ.
        let t = phi_inv.mul(&right)?;
        let s = phi_inv.mul(&left.sub_mat(&delta_dc.mul(&t.transpose())?)?)?;
        let mut msg = MatrixFq::zero(self.field, d, d);
        for i in 0..k {
            for j in 0..k {
                msg.set(i, j, s.get(i, j));
            }
            for j in k..d {
                msg.set(i, j, t.get(i, j - k));
                msg.set(j, i, t.get(i, j - k));
            }
        }
        Ok(unpack_message(&self.index, &MessageMatrix { m: msg }))
    }

    /// The scalar a helper sends toward repairing `failed`:
    /// helper_content · ψ_failedᵗ.
    pub fn repair_helper(
        &self,
        helper: usize,
        failed: usize,
        helper_content: &[FieldElement],
    ) -> Result<FieldElement> {
        self.check_node(helper)?;
        self.check_node(failed)?;
        if helper == failed {
            return Err(Error::BadIndex(format!(
                "helper and failed node are both {helper}"
            )));
        }
        if helper_content.len() != self.d {
            return Err(Error::LengthMismatch {
                expected: self.d,
                got: helper_content.len(),
            });
        }
        let mut acc = self.field.zero();
        for (j, &v) in helper_content.iter().enumerate() {
            acc = acc + v * self.psi.get(failed - 1, j);
        }
        Ok(acc)
    }

    /// Solves Ψ_H x = σ for x = M ψ_fᵗ; the repaired content is xᵗ by
    /// symmetry of M.
    pub fn repair(
        &self,
        failed: usize,
        helper_scalars: &[(usize, FieldElement)],
    ) -> Result<Vec<FieldElement>> {
        self.check_node(failed)?;
        let ids: BTreeSet<usize> = helper_scalars.iter().map(|(id, _)| *id).collect();
        if helper_scalars.len() != self.d || ids.len() != self.d || ids.contains(&failed) {
            return Err(Error::WrongHelperCount {
                expected: self.d,
                got: helper_scalars.len(),
            });
        }
        for (id, _) in helper_scalars {
            self.check_node(*id)?;
        }
        let rows: Vec<usize> = helper_scalars.iter().map(|(id, _)| id - 1).collect();
        let psi_h = self.psi.select_rows(&rows)?;
        let sigma: Vec<FieldElement> = helper_scalars.iter().map(|(_, s)| *s).collect();
        let x = psi_h.solve(&MatrixFq::column(self.field, &sigma)?)?;
        Ok((0..self.d).map(|i| x.get(i, 0)).collect())
    }

    /// Builds the eavesdropper's block matrix Ē for a node subset: block
    /// (j, ξ) equals column E[i] of E when ξ = (i,j) or ξ = (j,i), else 0.
    pub fn eavesdrop(&self, nodes: &[usize]) -> Result<EavesdropSystem> {
        if nodes.is_empty() {
            return Err(Error::BadIndex("empty eavesdrop set".into()));
        }
        let uniq: BTreeSet<usize> = nodes.iter().copied().collect();
        for &node in &uniq {
            self.check_node(node)?;
        }
        let nodes: Vec<usize> = uniq.into_iter().collect();
        let ell = nodes.len();
        let rows: Vec<usize> = nodes.iter().map(|&id| id - 1).collect();
        let e = self.psi.select_rows(&rows)?;
        let m = self.file_size();
        let mut ebar = MatrixFq::zero(self.field, self.d * ell, m);
        for (pos, &(i, j)) in self.index.elements().iter().enumerate() {
            // f_(i,j) appears in column j (via E[i]) and, when i != j, in
            // column i (via E[j]).
            for r in 0..ell {
                ebar.set((j - 1) * ell + r, pos, e.get(r, i - 1));
                if i != j {
                    ebar.set((i - 1) * ell + r, pos, e.get(r, j - 1));
                }
            }
        }
        Ok(EavesdropSystem {
            nodes,
            ebar,
            d: self.d,
        })
    }
}

impl MatrixFq {
    // Entry-wise difference; lives here for the reconstruction algebra.
    fn sub_mat(&self, other: &MatrixFq) -> Result<MatrixFq> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::DimensionMismatch("sub".into()));
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(MatrixFq::from_fn(
            self.field(),
            self.rows(),
            self.cols(),
            |i, j| self.get(i, j) - other.get(i, j),
        ))
    }
}

fn check_row_subsets(
    m: &MatrixFq,
    size: usize,
    budget: u64,
    seed: u64,
) -> Result<PropertyVerification> {
    let total: u128 = {
        let (n, k) = (m.rows(), size);
        if k > n {
            0
        } else {
            let k = k.min(n - k);
            let mut acc: u128 = 1;
            for i in 0..k {
                acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
            }
            acc
        }
    };
    if total <= budget as u128 {
        for rows in (0..m.rows()).combinations(size) {
            if m.select_rows(&rows)?.rank() < size {
                return Err(Error::PropertyViolation(format!(
                    "rows {rows:?} are dependent"
                )));
            }
        }
        Ok(PropertyVerification::Exhaustive)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = budget as usize;
        for _ in 0..samples {
            let rows = sample(&mut rng, m.rows(), size).into_vec();
            if m.select_rows(&rows)?.rank() < size {
                return Err(Error::PropertyViolation(format!(
                    "rows {rows:?} are dependent"
                )));
            }
        }
        Ok(PropertyVerification::Sampled { checked: samples })
    }
}
