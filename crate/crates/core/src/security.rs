//! Block-security analysis: the block level of an adversary's observed
//! linear code, closed-form predictions, capacity bounds, secure wrapping
//! with random units, and exact information-theoretic cross-checks by
//! integer counting.

use std::collections::HashMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{min_weight_witness, CodeView};
use crate::code::DssCode;
use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldSpec};
use crate::matrix::MatrixFq;

/// Minimum-weight evidence: `coefficients` combine the observed rows into
/// `codeword`, whose support names the revealed data units (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub coefficients: Vec<u64>,
    pub support: Vec<usize>,
}

/// What an adversary observing a node subset can and cannot deduce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecurityReport {
    pub nodes: Vec<usize>,
    pub observed_rows: usize,
    pub rank: usize,
    /// `None` when the observed row space is the zero code.
    pub min_distance: Option<usize>,
    pub block_level: usize,
    pub full_reconstruction: bool,
    pub witness: Option<Witness>,
    /// Only populated for randomness-wrapped codes.
    pub perfectly_secure: Option<bool>,
}

/// Block level via the minimum distance of the observed row space:
/// b = d_min − 1, or the full file size when nothing (nonzero) is observed.
pub fn block_security_level(
    nodes: &[usize],
    observed: &MatrixFq,
    budget: u64,
) -> Result<SecurityReport> {
    let m = observed.cols();
    let rank = observed.rank();
    if rank == 0 {
        return Ok(SecurityReport {
            nodes: nodes.to_vec(),
            observed_rows: observed.rows(),
            rank,
            min_distance: None,
            block_level: m,
            full_reconstruction: false,
            witness: None,
            perfectly_secure: None,
        });
    }
    let (dist, w) = min_weight_witness(&CodeView::new(observed.clone()), budget)?;
    Ok(SecurityReport {
        nodes: nodes.to_vec(),
        observed_rows: observed.rows(),
        rank,
        min_distance: Some(dist),
        block_level: dist - 1,
        full_reconstruction: rank >= m,
        witness: Some(Witness {
            coefficients: w.coefficients.iter().map(|e| e.value()).collect(),
            support: w.support.clone(),
        }),
        perfectly_secure: None,
    })
}

/// Closed-form block level of the regular-graph family:
/// (kd − C(k,2)) − (ℓd − C(ℓ,2)).
pub fn theorem1_level(k: usize, d: usize, ell: usize) -> Result<usize> {
    if k == 0 || k > d || ell >= k {
        return Err(Error::BadParams(format!(
            "need 0 <= ell < k <= d, got k={k} d={d} ell={ell}"
        )));
    }
    let tri = |x: usize| x * x.saturating_sub(1) / 2;
    Ok((k * d - tri(k)) - (ell * d - tri(ell)))
}

/// Closed-form block level of the product-matrix family: k − ℓ.
pub fn theorem2_level(k: usize, ell: usize) -> Result<usize> {
    if k == 0 || ell >= k {
        return Err(Error::BadParams(format!(
            "need 0 <= ell < k, got k={k} ell={ell}"
        )));
    }
    Ok(k - ell)
}

/// Maximum storable file size: Σ_{i=1}^{k} min{(d−i+1)β, α}.
pub fn dimakis_bound(k: usize, d: usize, alpha: usize, beta: usize) -> Result<usize> {
    if k == 0 || alpha == 0 || beta == 0 || k > d {
        return Err(Error::BadParams(format!(
            "need positive parameters with k <= d, got k={k} d={d} alpha={alpha} beta={beta}"
        )));
    }
    Ok((1..=k).map(|i| ((d - i + 1) * beta).min(alpha)).sum())
}

/// Maximum file size storable with no leakage to an ℓ-node eavesdropper:
/// Σ_{i=ℓ+1}^{k} min{(d−i+1)β, α}.
pub fn pawar_bound(k: usize, d: usize, alpha: usize, beta: usize, ell: usize) -> Result<usize> {
    if ell >= k {
        return Err(Error::BadParams(format!("need ell < k, got k={k} ell={ell}")));
    }
    dimakis_bound(k, d, alpha, beta)?;
    Ok((ell + 1..=k).map(|i| ((d - i + 1) * beta).min(alpha)).sum())
}

/// All three capacity bounds for one parameter set; `reduced` is the MBR
/// closed form and is only populated when α = d, β = 1 (where it provably
/// equals `pawar`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub alpha: usize,
    pub beta: usize,
    pub ell: usize,
    pub dimakis: usize,
    pub pawar: usize,
    pub reduced: Option<usize>,
}

impl BoundsReport {
    pub fn new(n: usize, k: usize, d: usize, alpha: usize, beta: usize, ell: usize) -> Result<Self> {
        if d + 1 > n {
            return Err(Error::BadParams(format!("need d <= n-1, got n={n} d={d}")));
        }
        let dimakis = dimakis_bound(k, d, alpha, beta)?;
        let pawar = pawar_bound(k, d, alpha, beta, ell)?;
        let reduced = if alpha == d && beta == 1 {
            // (k−ℓ)(d − (k+ℓ−1)/2), kept in integers.
            let r = (k - ell) * (2 * d - k - ell + 1) / 2;
            assert_eq!(r, pawar, "MBR reduced form must agree with the sum");
            Some(r)
        } else {
            None
        };
        Ok(BoundsReport {
            n,
            k,
            d,
            alpha,
            beta,
            ell,
            dimakis,
            pawar,
            reduced,
        })
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i as u128 + 1);
    }
    acc
}

/// How an audit walks the ℓ-subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuditMode {
    Exhaustive,
    Sampled { samples: usize },
}

/// Worst case over ℓ-subsets, with how much of the space was examined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub ell: usize,
    pub mode: AuditMode,
    pub worst: SecurityReport,
    pub examined: u64,
    pub total_subsets: u128,
}

/// Worst-case (minimum) block level over node subsets of size ℓ. Exhaustive
/// mode visits every subset (within `subset_budget`); sampled mode draws
/// seeded random subsets. Ties keep the lexicographically smallest subset.
pub fn audit(
    code: &dyn DssCode,
    ell: usize,
    mode: AuditMode,
    enum_budget: u64,
    subset_budget: u64,
    seed: u64,
) -> Result<AuditReport> {
    let n = code.n();
    if ell > n {
        return Err(Error::BadParams(format!("ell={ell} exceeds n={n}")));
    }
    let m = code.file_size();
    if ell == 0 {
        return Ok(AuditReport {
            ell,
            mode,
            worst: SecurityReport {
                nodes: vec![],
                observed_rows: 0,
                rank: 0,
                min_distance: None,
                block_level: m,
                full_reconstruction: false,
                witness: None,
                perfectly_secure: None,
            },
            examined: 0,
            total_subsets: 1,
        });
    }
    let total = binomial(n, ell);
    let mut worst: Option<SecurityReport> = None;
    let mut examined = 0u64;
    let mut visit = |subset: &[usize]| -> Result<()> {
        let obs = code.observation_matrix(subset)?;
        let report = block_security_level(subset, &obs, enum_budget)?;
        examined += 1;
        if worst
            .as_ref()
            .map_or(true, |w| report.block_level < w.block_level)
        {
            worst = Some(report);
        }
        Ok(())
    };
    match mode {
        AuditMode::Exhaustive => {
            if total > subset_budget as u128 {
                return Err(Error::TooLarge {
                    count: total,
                    budget: subset_budget,
                });
            }
            for subset in (1..=n).combinations(ell) {
                visit(&subset)?;
            }
        }
        AuditMode::Sampled { samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let mut subset: Vec<usize> = rand::seq::index::sample(&mut rng, n, ell)
                    .into_iter()
                    .map(|i| i + 1)
                    .collect();
                subset.sort_unstable();
                visit(&subset)?;
            }
        }
    }
    Ok(AuditReport {
        ell,
        mode,
        worst: worst.expect("at least one subset visited"),
        examined,
        total_subsets: total,
    })
}

/// One row of a degradation profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub ell: usize,
    pub formula_b: usize,
    /// `None` when the exhaustive audit exceeded a budget.
    pub audited_b: Option<usize>,
}

/// Formula and audited worst-case block levels for ℓ = 0..=ℓ_max. Budget
/// overruns skip only the audited column.
pub fn degradation_profile(
    code: &dyn DssCode,
    ell_max: usize,
    enum_budget: u64,
    subset_budget: u64,
) -> Result<Vec<ProfileRow>> {
    if ell_max > code.n() {
        return Err(Error::BadParams(format!(
            "ell_max={ell_max} exceeds n={}",
            code.n()
        )));
    }
    (0..=ell_max)
        .map(|ell| {
            let audited_b = match audit(
                code,
                ell,
                AuditMode::Exhaustive,
                enum_budget,
                subset_budget,
                0,
            ) {
                Ok(r) => Some(r.worst.block_level),
                Err(Error::TooLarge { .. }) | Err(Error::BudgetExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(ProfileRow {
                ell,
                formula_b: code.formula_level(ell),
                audited_b,
            })
        })
        .collect()
}

/// Perfect secrecy against adversaries of strength λ, obtained by spending
/// the first R = λd − C(λ,2) file coordinates on uniform random units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecureWrap {
    lambda: usize,
    random_units: usize,
    secret_units: usize,
}

impl SecureWrap {
    pub fn new(code: &dyn DssCode, lambda: usize) -> Result<Self> {
        if lambda >= code.k() {
            return Err(Error::BadParams(format!(
                "need lambda < k, got lambda={lambda} k={}",
                code.k()
            )));
        }
        let r = lambda * code.d() - lambda * lambda.saturating_sub(1) / 2;
        Ok(SecureWrap {
            lambda,
            random_units: r,
            secret_units: code.file_size() - r,
        })
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }
    pub fn random_units(&self) -> usize {
        self.random_units
    }
    pub fn secret_units(&self) -> usize {
        self.secret_units
    }

    /// Prepends R seeded uniform random units to the secret, producing the
    /// full file the base code encodes.
    pub fn assemble_file(
        &self,
        field: FieldSpec,
        secret: &[FieldElement],
        seed: u64,
    ) -> Result<Vec<FieldElement>> {
        if secret.len() != self.secret_units {
            return Err(Error::LengthMismatch {
                expected: self.secret_units,
                got: secret.len(),
            });
        }
        if secret.iter().any(|e| e.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut file: Vec<FieldElement> = (0..self.random_units)
            .map(|_| field.elem(rng.gen_range(0..field.q())))
            .collect();
        file.extend_from_slice(secret);
        Ok(file)
    }
}

/// Rank criterion for a wrapped code: the observation leaks nothing about
/// the secret iff the observed rows restricted to the R random columns have
/// the same rank as the full observed rows (every observed combination is a
/// random-unit coset).
pub fn perfect_secrecy_check(
    code: &dyn DssCode,
    wrap: &SecureWrap,
    nodes: &[usize],
) -> Result<bool> {
    let obs = code.observation_matrix(nodes)?;
    let random_cols: Vec<usize> = (0..wrap.random_units()).collect();
    let restricted = obs.select_cols(&random_cols)?;
    Ok(restricted.rank() == obs.rank())
}

/// Precomputed observation classes over every file in F_q^m: entry f of
/// `keys` identifies which observation file number f produces. Built once,
/// reused across many projection checks.
pub struct ObservationTable {
    q: u64,
    m: usize,
    files: u64,
    classes: usize,
    class_idx: Vec<u32>,
}

/// Exact verdict of a counting check: MI is zero iff, within every
/// observation class, the projected values are exactly uniform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiOutcome {
    pub zero: bool,
    pub observation_classes: usize,
    pub projection_values: u64,
    pub min_count: u64,
    pub max_count: u64,
}

fn checked_pow(q: u64, e: usize, budget: u64) -> Result<u64> {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc *= q as u128;
        if acc > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed: acc,
                budget,
            });
        }
    }
    Ok(acc as u64)
}

// Base-q counter over file coordinates; returns false after the last file.
fn odometer(digits: &mut [u64], q: u64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

impl ObservationTable {
    /// Enumerates all q^m files (m = column count of `observed`) and records
    /// each file's observation class. Errors when q^m exceeds `budget`.
    pub fn new(observed: &MatrixFq, budget: u64) -> Result<Self> {
        let q = observed.field().q();
        let m = observed.cols();
        let files = checked_pow(q, m, budget)?;
        // A row basis keeps the class key small: q^rank <= q^m values.
        let mut basis_rows: Vec<Vec<u64>> = Vec::new();
        let mut basis = MatrixFq::zero(observed.field(), 0, m);
        for i in 0..observed.rows() {
            let row = observed.select_rows(&[i])?;
            let candidate = basis.vstack(&row)?;
            if candidate.rank() > basis.rank() {
                basis_rows.push(row.row(0).iter().map(|e| e.value()).collect());
                basis = candidate;
            }
        }
        let mut class_of: HashMap<u64, u32> = HashMap::new();
        let mut class_idx = vec![0u32; files as usize];
        let mut digits = vec![0u64; m];
        let mut idx = 0usize;
        loop {
            let mut key = 0u64;
            for row in basis_rows.iter().rev() {
                let dot: u64 = row
                    .iter()
                    .zip(&digits)
                    .map(|(&a, &b)| a * b % q)
                    .sum::<u64>()
                    % q;
                key = key * q + dot;
            }
            let next = class_of.len() as u32;
            class_idx[idx] = *class_of.entry(key).or_insert(next);
            idx += 1;
            if !odometer(&mut digits, q) {
                break;
            }
        }
        Ok(ObservationTable {
            q,
            m,
            files,
            classes: class_of.len(),
            class_idx,
        })
    }

    pub fn files(&self) -> u64 {
        self.files
    }

    /// Joint counting of (observation class, projected value) over all
    /// files, where the projection rows act on the file coordinates. Uniform
    /// conditionals mean zero mutual information.
    pub fn projection_uniform(&self, projection: &[Vec<u64>]) -> Result<MiOutcome> {
        let q = self.q;
        let t = projection.len();
        for row in projection {
            if row.len() != self.m {
                return Err(Error::LengthMismatch {
                    expected: self.m,
                    got: row.len(),
                });
            }
        }
        let proj: Vec<Vec<u64>> = projection
            .iter()
            .map(|row| row.iter().map(|&v| v % q).collect())
            .collect();
        let qt = checked_pow(q, t, u64::MAX)?;
        let classes = self.classes;
        let mut joint = vec![0u64; classes * qt as usize];
        let mut digits = vec![0u64; self.m];
        let mut f = 0usize;
        loop {
            let mut pkey = 0u64;
            for row in proj.iter().rev() {
                let dot: u64 = row
                    .iter()
                    .zip(&digits)
                    .map(|(&a, &b)| a * b % q)
                    .sum::<u64>()
                    % q;
                pkey = pkey * q + dot;
            }
            joint[self.class_idx[f] as usize * qt as usize + pkey as usize] += 1;
            f += 1;
            if !odometer(&mut digits, q) {
                break;
            }
        }
        let mut zero = true;
        let mut min_count = u64::MAX;
        let mut max_count = 0u64;
        for c in 0..classes {
            let cells = &joint[c * qt as usize..(c + 1) * qt as usize];
            let total: u64 = cells.iter().sum();
            if total == 0 {
                continue;
            }
            let expect = total / qt;
            for &cell in cells {
                min_count = min_count.min(cell);
                max_count = max_count.max(cell);
                if cell != expect || total % qt != 0 {
                    zero = false;
                }
            }
        }
        Ok(MiOutcome {
            zero,
            observation_classes: classes,
            projection_values: qt,
            min_count: if min_count == u64::MAX { 0 } else { min_count },
            max_count,
        })
    }
}

/// Exhaustive mutual-information indicator between the data units in `b`
/// (1-based coordinates) and the observation `observed`: zero iff those
/// units stay uniform given every possible observation.
pub fn exhaustive_mi_check(observed: &MatrixFq, b: &[usize], budget: u64) -> Result<MiOutcome> {
    let m = observed.cols();
    let mut projection = Vec::with_capacity(b.len());
    for &i in b {
        if i == 0 || i > m {
            return Err(Error::BadIndex(format!("data unit {i} not in 1..={m}")));
        }
        let mut row = vec![0u64; m];
        row[i - 1] = 1;
        projection.push(row);
    }
    ObservationTable::new(observed, budget)?.projection_uniform(&projection)
}

/// The solution-count view for one combination vector v: zero iff, for every
/// observation, each target value of v·f is attained by equally many files.
pub fn solution_count_uniform(observed: &MatrixFq, v: &[u64], budget: u64) -> Result<MiOutcome> {
    ObservationTable::new(observed, budget)?.projection_uniform(&[v.to_vec()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{DEFAULT_ENUM_BUDGET, DEFAULT_SUBSET_BUDGET};
    use crate::code::AnyCode;
    use crate::graph_code::{GraphCode, MatrixKind};
    use crate::matrix::vandermonde_matrix;
    use crate::pm_code::PmCode;

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

    #[test]
    fn closed_form_levels() {
        assert_eq!(theorem1_level(5, 6, 2).unwrap(), 9);
        assert_eq!(theorem1_level(5, 6, 0).unwrap(), 20);
        assert_eq!(theorem1_level(2, 3, 1).unwrap(), 2);
        assert!(theorem1_level(3, 3, 3).is_err());
        assert_eq!(theorem2_level(5, 1).unwrap(), 4);
        assert_eq!(theorem2_level(3, 0).unwrap(), 3);
        assert_eq!(theorem2_level(3, 2).unwrap(), 1);
        assert!(theorem2_level(3, 3).is_err());
    }

    #[test]
    fn capacity_bounds() {
        assert_eq!(dimakis_bound(5, 6, 6, 1).unwrap(), 20);
        assert_eq!(dimakis_bound(1, 3, 3, 1).unwrap(), 3);
        assert_eq!(dimakis_bound(2, 3, 3, 1).unwrap(), 5);
        assert_eq!(pawar_bound(5, 6, 6, 1, 2).unwrap(), 9);
        assert_eq!(
            pawar_bound(5, 6, 6, 1, 0).unwrap(),
            dimakis_bound(5, 6, 6, 1).unwrap()
        );
        assert_eq!(pawar_bound(2, 3, 3, 1, 1).unwrap(), 2);
        // The MBR reduced form agrees with the sum everywhere in range.
        for d in 1..=8usize {
            for k in 1..=d {
                for ell in 0..k {
                    let r = BoundsReport::new(d + 1, k, d, d, 1, ell).unwrap();
                    assert_eq!(r.reduced, Some(r.pawar), "k={k} d={d} ell={ell}");
                }
            }
        }
        // Off the MBR point the reduced form is not reported.
        let r = BoundsReport::new(7, 3, 4, 2, 1, 1).unwrap();
        assert_eq!(r.reduced, None);
    }

    #[test]
    fn level_of_leaky_vandermonde_rows() {
        let f13 = FieldSpec::new(13).unwrap();
        let g = vandermonde_matrix(f13, &[1, 3, 5, 7, 9, 11], 5).unwrap();
        let obs = g.select_rows(&[0, 1, 4]).unwrap();
        let report = block_security_level(&[1, 2, 5], &obs, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(report.min_distance, Some(1));
        assert_eq!(report.block_level, 0);
        let w = report.witness.unwrap();
        assert_eq!(w.coefficients, vec![9, 1, 3]);
        assert_eq!(w.support, vec![3]);
        assert!(!report.full_reconstruction);
    }

    #[test]
    fn level_of_zero_and_full_observations() {
        let f13 = FieldSpec::new(13).unwrap();
        let zero = MatrixFq::zero(f13, 2, 5);
        let report = block_security_level(&[1, 2], &zero, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(report.block_level, 5);
        assert_eq!(report.min_distance, None);

        let full = MatrixFq::identity(f13, 3);
        let report = block_security_level(&[1], &full, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(report.full_reconstruction);
        assert_eq!(report.block_level, 0);
    }

    #[test]
    fn audits_on_small_codes() {
        let code = graph423();
        let r = audit(
            &code,
            1,
            AuditMode::Exhaustive,
            DEFAULT_ENUM_BUDGET,
            DEFAULT_SUBSET_BUDGET,
            0,
        )
        .unwrap();
        assert_eq!(r.worst.block_level, 2);
        assert_eq!(r.examined, 4);
        assert_eq!(r.total_subsets, 4);

        let r0 = audit(
            &code,
            0,
            AuditMode::Exhaustive,
            DEFAULT_ENUM_BUDGET,
            DEFAULT_SUBSET_BUDGET,
            0,
        )
        .unwrap();
        assert_eq!(r0.worst.block_level, 5);
        assert!(r0.worst.witness.is_none());

        // A leaky Vandermonde graph code: node 1 holds the rows evaluated at
        // points 1, 3, 9, whose row space contains a weight-1 codeword.
        let vdm: AnyCode = GraphCode::build(
            4,
            2,
            3,
            FieldSpec::new(13).unwrap(),
            MatrixKind::Vandermonde {
                points: Some(vec![1, 3, 9, 5, 7, 11]),
            },
            None,
        )
        .unwrap()
        .into();
        let r = audit(
            &vdm,
            1,
            AuditMode::Exhaustive,
            DEFAULT_ENUM_BUDGET,
            DEFAULT_SUBSET_BUDGET,
            0,
        )
        .unwrap();
        assert_eq!(r.worst.block_level, 0);
        assert_eq!(r.worst.nodes, vec![1]);
        let w = r.worst.witness.as_ref().unwrap();
        assert_eq!(w.coefficients, vec![9, 1, 3]);
        assert_eq!(w.support, vec![3]);

        // Sampled mode is deterministic for a fixed seed.
        let s1 = audit(&code, 1, AuditMode::Sampled { samples: 8 }, DEFAULT_ENUM_BUDGET, DEFAULT_SUBSET_BUDGET, 42).unwrap();
        let s2 = audit(&code, 1, AuditMode::Sampled { samples: 8 }, DEFAULT_ENUM_BUDGET, DEFAULT_SUBSET_BUDGET, 42).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1.worst.block_level, 2);
    }

    #[test]
    fn profile_of_graph_and_pm() {
        let code = graph423();
        let rows = degradation_profile(&code, 4, DEFAULT_ENUM_BUDGET, DEFAULT_SUBSET_BUDGET).unwrap();
        let formula: Vec<usize> = rows.iter().map(|r| r.formula_b).collect();
        assert_eq!(formula, [5, 2, 0, 0, 0]);
        for r in &rows {
            assert_eq!(r.audited_b, Some(r.formula_b), "ell={}", r.ell);
        }

        let pm: AnyCode = PmCode::build(
            4,
            3,
            3,
            FieldSpec::new(7).unwrap(),
            MatrixKind::Cauchy,
            DEFAULT_SUBSET_BUDGET,
        )
        .unwrap()
        .into();
        let rows = degradation_profile(&pm, 4, DEFAULT_ENUM_BUDGET, DEFAULT_SUBSET_BUDGET).unwrap();
        let formula: Vec<usize> = rows.iter().map(|r| r.formula_b).collect();
        assert_eq!(formula, [3, 2, 1, 0, 0]);
        // The formula is tight for every ell >= 1 within budget.
        for r in rows.iter().skip(1) {
            assert_eq!(r.audited_b, Some(r.formula_b), "ell={}", r.ell);
        }
    }

    #[test]
    fn wrap_sizes_and_assembly() {
        let code = graph423();
        let wrap = SecureWrap::new(&code, 1).unwrap();
        assert_eq!(wrap.random_units(), 3);
        assert_eq!(wrap.secret_units(), 2);
        let field = FieldSpec::new(13).unwrap();
        let secret = vec![field.elem(4), field.elem(11)];
        let file = wrap.assemble_file(field, &secret, 99).unwrap();
        assert_eq!(file.len(), 5);
        assert_eq!(&file[3..], &secret[..]);
        assert_eq!(wrap.assemble_file(field, &secret, 99).unwrap(), file);

        let identity = SecureWrap::new(&code, 0).unwrap();
        assert_eq!(identity.random_units(), 0);
        let file = identity
            .assemble_file(field, &[field.elem(1); 5], 0)
            .unwrap();
        assert_eq!(file, vec![field.elem(1); 5]);

        assert!(SecureWrap::new(&code, 2).is_err());
    }

    #[test]
    fn rank_criterion_for_wraps() {
        let code = graph423();
        let wrap = SecureWrap::new(&code, 1).unwrap();
        for node in 1..=4 {
            assert!(perfect_secrecy_check(&code, &wrap, &[node]).unwrap());
        }
        // Two nodes reconstruct the file: no secrecy left.
        assert!(!perfect_secrecy_check(&code, &wrap, &[1, 2]).unwrap());
        // The identity wrap protects nothing.
        let identity = SecureWrap::new(&code, 0).unwrap();
        assert!(!perfect_secrecy_check(&code, &identity, &[1]).unwrap());
    }

    #[test]
    fn counting_checks_on_a_tiny_code() {
        // 2x3 observation over F_3: rows (1,0,1) and (0,1,1). Rank 2, so
        // single units stay hidden but x1+x2+2*x3 is revealed.
        let f3 = FieldSpec::new(3).unwrap();
        let obs = MatrixFq::from_rows(f3, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert!(exhaustive_mi_check(&obs, &[], 1000).unwrap().zero);
        for unit in 1..=3 {
            assert!(exhaustive_mi_check(&obs, &[unit], 1000).unwrap().zero);
        }
        assert!(!exhaustive_mi_check(&obs, &[1, 2], 1000).unwrap().zero);
        // v in the row space has non-uniform solution counts; outside, uniform.
        assert!(!solution_count_uniform(&obs, &[1, 1, 2], 1000).unwrap().zero);
        assert!(solution_count_uniform(&obs, &[1, 0, 0], 1000).unwrap().zero);
        // Budget guard.
        assert!(matches!(
            exhaustive_mi_check(&obs, &[1], 8),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn counting_agrees_with_block_level() {
        // Cross-oracle: for one observed node of the Cauchy graph code,
        // MI is zero exactly up to the block level.
        let code = graph423();
        let obs = code.observation_matrix(&[1]).unwrap();
        let report = block_security_level(&[1], &obs, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(report.block_level, 2);
        let table = ObservationTable::new(&obs, DEFAULT_ENUM_BUDGET).unwrap();
        for b in (1..=5usize).combinations(2) {
            let proj: Vec<Vec<u64>> = b
                .iter()
                .map(|&i| {
                    let mut row = vec![0u64; 5];
                    row[i - 1] = 1;
                    row
                })
                .collect();
            assert!(table.projection_uniform(&proj).unwrap().zero, "B={b:?}");
        }
        let support = report.witness.unwrap().support;
        assert_eq!(support.len(), 3);
        let proj: Vec<Vec<u64>> = support
            .iter()
            .map(|&i| {
                let mut row = vec![0u64; 5];
                row[i - 1] = 1;
                row
            })
            .collect();
        assert!(!table.projection_uniform(&proj).unwrap().zero);
    }
}
