//! Code-analysis oracles: brute-force minimum distance, MDS row checks,
//! coordinate determinability.
//!
//! These are deliberately exhaustive. Correctness at desk scale beats speed;
//! everything here respects an explicit enumeration budget.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::ff::FieldElement;
use crate::matrix::MatrixFq;

/// Default cap on projective enumeration (normalized codewords).
pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;
/// Default cap on row/node subset enumeration.
pub const DEFAULT_SUBSET_BUDGET: u64 = 100_000;

/// A linear code presented by a generating set of rows (not required to be
/// independent).
#[derive(Debug, Clone)]
pub struct CodeView {
    generator: MatrixFq,
}

impl CodeView {
    pub fn new(generator: MatrixFq) -> Self {
        CodeView { generator }
    }

    pub fn generator(&self) -> &MatrixFq {
        &self.generator
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }
}

/// A minimum-weight codeword together with the combination that produces it.
///
/// Canonical form: the codeword's first nonzero coordinate is scaled to 1,
/// and among minimizers the enumeration picks the one whose coefficient
/// vector has the earliest leading position (then smallest tail). `support`
/// holds 1-based coordinate indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightWitness {
    pub coefficients: Vec<FieldElement>,
    pub codeword: Vec<FieldElement>,
    pub support: Vec<usize>,
}

/// Minimum Hamming weight over all nonzero codewords of the row space,
/// enumerated projectively (first nonzero coefficient normalized to 1).
pub fn min_distance(code: &CodeView, budget: u64) -> Result<usize> {
    enumerate_min_weight(code, budget).map(|(d, _)| d)
}

/// As [`min_distance`], but also returns the canonical witness.
pub fn min_weight_witness(code: &CodeView, budget: u64) -> Result<(usize, WeightWitness)> {
    enumerate_min_weight(code, budget)
}

fn projective_count(q: u64, r: usize) -> u128 {
    // (q^r - 1) / (q - 1), capped to avoid overflow on absurd inputs.
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for _ in 0..r {
        total += power;
        power = power.saturating_mul(q as u128);
        if total > u128::from(u64::MAX) {
            break;
        }
    }
    total
}

fn enumerate_min_weight(code: &CodeView, budget: u64) -> Result<(usize, WeightWitness)> {
    let full = &code.generator;
    let field = full.field();
    let q = field.q();
    let n = full.cols();
    if full.rows() == 0 || full.is_zero() {
        return Err(Error::ZeroCode);
    }
    // Enumerate only over an independent row subset (the earliest rows that
    // grow the rank); dependent rows add no codewords, only cost.
    let mut kept: Vec<usize> = Vec::new();
    let mut basis = MatrixFq::zero(field, 0, n);
    for i in 0..full.rows() {
        let candidate = basis.vstack(&full.select_rows(&[i])?)?;
        if candidate.rank() > basis.rank() {
            kept.push(i);
            basis = candidate;
        }
    }
    let g = &basis;
    let r = g.rows();
    let count = projective_count(q, r);
    if count > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: count,
            budget,
        });
    }

    let mut best: Option<(usize, Vec<FieldElement>, Vec<FieldElement>)> = None;
    let mut alpha = vec![field.zero(); r];
    let mut codeword = vec![field.zero(); n];
    for pivot in 0..r {
        // alpha = (0,...,0,1,t_1,...,t_{r-pivot-1}); tail counts in base q.
        let tail = r - pivot - 1;
        let mut digits = vec![0u64; tail];
        loop {
            for a in alpha.iter_mut() {
                *a = field.zero();
            }
            alpha[pivot] = field.one();
            for (t, &d) in digits.iter().enumerate() {
                alpha[pivot + 1 + t] = field.elem(d);
            }
            for j in 0..n {
                let mut acc = g.get(pivot, j);
                for t in 0..tail {
                    if !alpha[pivot + 1 + t].is_zero() {
                        acc = acc + alpha[pivot + 1 + t] * g.get(pivot + 1 + t, j);
                    }
                }
                codeword[j] = acc;
            }
            let weight = codeword.iter().filter(|e| !e.is_zero()).count();
            if weight > 0 && best.as_ref().map_or(true, |(w, _, _)| weight < *w) {
                best = Some((weight, alpha.clone(), codeword.clone()));
                if weight == 1 {
                    // Cannot improve; finish this pivot's canonical scan early.
                    break;
                }
            }
            // Increment the base-q counter.
            let mut carry = true;
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d == q {
                    *d = 0;
                } else {
                    carry = false;
                    break;
                }
            }
            if carry {
                break;
            }
        }
        if matches!(best, Some((1, _, _))) {
            break;
        }
    }

    let (weight, alpha, codeword) = best.ok_or(Error::ZeroCode)?;
    // Rescale so the codeword's first nonzero coordinate is 1.
    let lead = codeword.iter().find(|e| !e.is_zero()).expect("nonzero");
    let scale = lead.inv()?;
    // Place the scaled combination back at the kept rows; dropped
    // (dependent) rows get zero coefficients.
    let mut coefficients = vec![field.zero(); full.rows()];
    for (&row, &a) in kept.iter().zip(alpha.iter()) {
        coefficients[row] = a * scale;
    }
    let codeword: Vec<_> = codeword.iter().map(|&c| c * scale).collect();
    let support = codeword
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .map(|(j, _)| j + 1)
        .collect();
    Ok((
        weight,
        WeightWitness {
            coefficients,
            codeword,
            support,
        },
    ))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// True iff every `m`-subset of the rows of `g` has rank `m`.
pub fn mds_rows_check(g: &MatrixFq, m: usize, budget: u64) -> Result<bool> {
    if m > g.rows() || m > g.cols() {
        return Err(Error::BadParams(format!(
            "m = {m} exceeds matrix dimensions {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    let count = binomial(g.rows(), m);
    if count > budget as u128 {
        return Err(Error::TooLarge { count, budget });
    }
    for rows in (0..g.rows()).combinations(m) {
        if g.select_rows(&rows)?.rank() < m {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff every codeword of the row space that vanishes outside the
/// coordinate set `u` (1-based) also vanishes on `u` — equivalently, the
/// generator restricted to the complement of `u` has the same rank as the
/// full generator.
pub fn determinability_check(code: &CodeView, u: &[usize]) -> Result<bool> {
    let n = code.length();
    for &i in u {
        if i == 0 || i > n {
            return Err(Error::BadIndex(format!("coordinate {i} not in 1..={n}")));
        }
    }
    let outside: Vec<usize> = (0..n).filter(|j| !u.contains(&(j + 1))).collect();
    let g = code.generator();
    let restricted = g.select_cols(&outside)?;
    Ok(restricted.rank() == g.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldSpec;
    use crate::matrix::{cauchy_matrix, tests::vandermonde_f13_6x5, vandermonde_matrix};

    fn f13() -> FieldSpec {
        FieldSpec::new(13).unwrap()
    }

    #[test]
    fn min_distance_identity_rows() {
        let f5 = FieldSpec::new(5).unwrap();
        let code = CodeView::new(MatrixFq::identity(f5, 3));
        assert_eq!(min_distance(&code, DEFAULT_ENUM_BUDGET).unwrap(), 1);
    }

    #[test]
    fn min_distance_vandermonde_leak() {
        let e = vandermonde_f13_6x5().select_rows(&[0, 1, 4]).unwrap();
        let code = CodeView::new(e);
        let (d, w) = min_weight_witness(&code, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d, 1);
        let coeffs: Vec<u64> = w.coefficients.iter().map(|e| e.value()).collect();
        assert_eq!(coeffs, [9, 1, 3]);
        let cw: Vec<u64> = w.codeword.iter().map(|e| e.value()).collect();
        assert_eq!(cw, [0, 0, 1, 0, 0]);
        assert_eq!(w.support, [3]);
    }

    #[test]
    fn min_distance_cauchy_is_singleton_tight() {
        // Any 3 rows of a 6x5 Cauchy over F_13 generate a [5,3] MDS code.
        let c = cauchy_matrix(f13(), 6, 5, None).unwrap();
        let code = CodeView::new(c.select_rows(&[0, 2, 5]).unwrap());
        assert_eq!(min_distance(&code, DEFAULT_ENUM_BUDGET).unwrap(), 3);
    }

    #[test]
    fn witness_tie_break_identity() {
        let f5 = FieldSpec::new(5).unwrap();
        let code = CodeView::new(MatrixFq::identity(f5, 2));
        let (d, w) = min_weight_witness(&code, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d, 1);
        let coeffs: Vec<u64> = w.coefficients.iter().map(|e| e.value()).collect();
        assert_eq!(coeffs, [1, 0]);
        assert_eq!(w.support, [1]);
    }

    #[test]
    fn witness_weight_matches_on_mds_generator() {
        let f7 = FieldSpec::new(7).unwrap();
        let c = cauchy_matrix(f7, 2, 4, None).unwrap();
        let (d, w) = min_weight_witness(&CodeView::new(c), DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(d, 3);
        assert_eq!(w.support.len(), 3);
    }

    #[test]
    fn zero_code_and_budget_errors() {
        let f5 = FieldSpec::new(5).unwrap();
        let code = CodeView::new(MatrixFq::zero(f5, 2, 4));
        assert_eq!(min_distance(&code, DEFAULT_ENUM_BUDGET), Err(Error::ZeroCode));
        let code = CodeView::new(MatrixFq::identity(f5, 12));
        assert!(matches!(
            min_distance(&code, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn mds_rows_cases() {
        let c = cauchy_matrix(f13(), 6, 5, None).unwrap();
        assert!(mds_rows_check(&c, 5, DEFAULT_SUBSET_BUDGET).unwrap());
        // Vandermonde rows are MDS at full size; only interior submatrices fail.
        let v = vandermonde_f13_6x5();
        assert!(mds_rows_check(&v, 5, DEFAULT_SUBSET_BUDGET).unwrap());
        let repeated = vandermonde_matrix(f13(), &[1, 3], 2)
            .unwrap()
            .vstack(&vandermonde_matrix(f13(), &[1], 2).unwrap())
            .unwrap();
        assert!(!mds_rows_check(&repeated, 2, DEFAULT_SUBSET_BUDGET).unwrap());
    }

    #[test]
    fn determinability_cases() {
        let f5 = FieldSpec::new(5).unwrap();
        let id = CodeView::new(MatrixFq::identity(f5, 2));
        assert!(determinability_check(&id, &[]).unwrap());
        assert!(!determinability_check(&id, &[1]).unwrap());
        assert!(matches!(
            determinability_check(&id, &[3]),
            Err(Error::BadIndex(_))
        ));
    }

    #[test]
    fn determinability_agrees_with_min_distance() {
        use itertools::Itertools;
        // Cross-oracle agreement on a small MDS instance.
        let c = cauchy_matrix(f13(), 4, 6, None).unwrap();
        let code = CodeView::new(c);
        let d = min_distance(&code, DEFAULT_ENUM_BUDGET).unwrap();
        for w in 1..=code.length() {
            let all_pass = (1..=code.length())
                .combinations(w - 1)
                .all(|u| determinability_check(&code, &u).unwrap());
            assert_eq!(all_pass, d >= w, "w = {w}");
        }
    }
}
