//! Exact `(k+1) × (k+1)` minors of the holomorphic pencil `Σ r_i A_i`.
//!
//! Entries of the pencil are linear forms in `r`, so every minor is a
//! homogeneous polynomial of degree `k + 1`; `V_A^k` is their common zero
//! locus. For a separable ensemble the pencil factors as `B G(r)` with
//! `G(r)` diagonal, and each minor is `det(B_{R,S}) Π_{u∈S} ℓ_u(r)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{frobenius, numerical_rank_scaled, CMatrix, CVector, RankInfo, RankPolicy};
use crate::pencil::{PencilBlocks, ProjectivePoint};
use crate::poly::MultiPoly;
use crate::state::ProductEnsemble;

/// Size limits for exact minor generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinorCaps {
    /// Upper bound on `C(n, k+1) · C(t, k+1)`.
    pub max_minors: u128,
    /// Largest minor order `k + 1`.
    pub max_order: usize,
    /// Largest number of variables `m`.
    pub max_vars: usize,
}

impl Default for MinorCaps {
    fn default() -> Self {
        MinorCaps {
            max_minors: 10_000,
            max_order: 4,
            max_vars: 5,
        }
    }
}

/// One minor together with the rows and columns it was taken from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub poly: MultiPoly,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_determinant(entries: &[Vec<MultiPoly>]) -> MultiPoly {
    let size = entries.len();
    assert!(entries.iter().all(|row| row.len() == size), "square matrix");
    let cols: Vec<usize> = (0..size).collect();
    expand(entries, 0, &cols)
}

fn expand(entries: &[Vec<MultiPoly>], row: usize, cols: &[usize]) -> MultiPoly {
    if cols.len() == 1 {
        return entries[row][cols[0]].clone();
    }
    let vars = entries[0][0].vars();
    let degree = entries.iter().skip(row).map(|r| r[0].degree()).sum();
    let mut acc = MultiPoly::zero(vars, degree);
    for (pos, &c) in cols.iter().enumerate() {
        let entry = &entries[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let sub = expand(entries, row + 1, &rest);
        let term = entry * &sub;
        acc = if pos % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

/// The pencil as an `n × t` matrix of linear forms in `r_1, …, r_m`.
pub fn pencil_entries(pb: &PencilBlocks) -> Vec<Vec<MultiPoly>> {
    let (m, n, t) = (pb.dim_a(), pb.dim_b(), pb.terms());
    (0..n)
        .map(|j| {
            (0..t)
                .map(|u| {
                    let coeffs: Vec<_> = (0..m).map(|i| pb.blocks()[i][(j, u)]).collect();
                    MultiPoly::linear(&coeffs)
                })
                .collect()
        })
        .collect()
}

type Subsets = Vec<Vec<usize>>;

fn check_caps(pb: &PencilBlocks, k: usize, caps: &MinorCaps) -> Result<Option<(Subsets, Subsets)>> {
    let (m, n, t) = (pb.dim_a(), pb.dim_b(), pb.terms());
    if k >= n {
        return Err(Error::KOutOfRange { k, max: n - 1 });
    }
    let order = k + 1;
    if order > t {
        // Pencil rank never exceeds t ≤ k: no minors, V^k is everything.
        return Ok(None);
    }
    let count = binomial(n, order) * binomial(t, order);
    if count > caps.max_minors || order > caps.max_order || m > caps.max_vars {
        return Err(Error::CombinatorialBlowup {
            count,
            cap: caps.max_minors,
        });
    }
    Ok(Some((subsets(n, order), subsets(t, order))))
}

/// All `(k+1)`-minors of `Σ r_i A_i`, ordered by (row set, column set).
///
/// Returns an empty list when `k + 1` exceeds the number of ensemble terms.
pub fn pencil_minor_polys(pb: &PencilBlocks, k: usize, caps: &MinorCaps) -> Result<Vec<Minor>> {
    let Some((row_sets, col_sets)) = check_caps(pb, k, caps)? else {
        return Ok(Vec::new());
    };
    let entries = pencil_entries(pb);
    let pairs: Vec<(&Vec<usize>, &Vec<usize>)> = row_sets
        .iter()
        .flat_map(|r| col_sets.iter().map(move |c| (r, c)))
        .collect();
    Ok(pairs
        .into_par_iter()
        .map(|(rows, cols)| {
            let sub: Vec<Vec<MultiPoly>> = rows
                .iter()
                .map(|&j| cols.iter().map(|&u| entries[j][u].clone()).collect())
                .collect();
            Minor {
                rows: rows.clone(),
                cols: cols.clone(),
                poly: cofactor_determinant(&sub),
            }
        })
        .collect())
}

/// Submatrix of `mat` on the given rows and columns.
pub fn submatrix(mat: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |a, b| mat[(rows[a], cols[b])])
}

/// `|r| ‖A‖_F`, an upper bound on `‖Σ r_i A_i‖`.
pub fn pencil_reference(pb: &PencilBlocks, r: &ProjectivePoint) -> f64 {
    r.coords().norm() * frobenius(&pb.stacked())
}

/// Rank of `Σ r_i A_i` with the threshold anchored at [`pencil_reference`].
pub fn pencil_rank(
    pb: &PencilBlocks,
    r: &ProjectivePoint,
    policy: &RankPolicy,
) -> Result<RankInfo> {
    let x = pb.eval(r)?;
    Ok(numerical_rank_scaled(&x, policy, pencil_reference(pb, r)))
}

/// Vanishing bound for `(k+1)`-minors at `r`.
///
/// By Cauchy–Binet, `Σ |minors|^2` is the elementary symmetric function of
/// the squared singular values, so at a point where the pencil has
/// numerical rank ≤ k every minor is bounded by
/// `sqrt(C(min(n,t), k+1)) · σ_ref^k · τ`.
pub fn minor_vanishing_bound(
    pb: &PencilBlocks,
    r: &ProjectivePoint,
    k: usize,
    policy: &RankPolicy,
) -> Result<f64> {
    let info = pencil_rank(pb, r, policy)?;
    let sigma = info
        .singular_values
        .first()
        .copied()
        .unwrap_or(0.0)
        .max(pencil_reference(pb, r));
    let count = binomial(pb.dim_b().min(pb.terms()), k + 1) as f64;
    Ok(count.sqrt() * sigma.powi(k as i32) * info.threshold)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureViolation {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub k: usize,
    pub minors_checked: usize,
    pub max_residual: f64,
    pub violations: Vec<StructureViolation>,
}

impl StructureReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const STRUCTURE_TOL: f64 = 1e-10;

/// Verifies that every minor of a separable pencil equals
/// `det(B_{R,S}) · Π_{u∈S} ℓ_u(r)` with `ℓ_u(r) = Σ_i r_i a_u^i`.
///
/// Residuals are coefficient-wise, relative to `max(1, ‖A‖_max^{k+1})`.
pub fn separable_minor_structure(
    pe: &ProductEnsemble,
    k: usize,
    caps: &MinorCaps,
) -> Result<StructureReport> {
    let ensemble = pe.to_ensemble()?;
    let pb = PencilBlocks::from_ensemble(&ensemble);
    let minors = pencil_minor_polys(&pb, k, caps)?;
    let b = pe.b_matrix();
    let forms: Vec<MultiPoly> = pe
        .factors_a()
        .iter()
        .map(|a: &CVector| MultiPoly::linear(a.as_slice()))
        .collect();
    let entry_scale = pb
        .blocks()
        .iter()
        .flat_map(|blk| blk.iter().map(|z| z.norm()))
        .fold(0.0, f64::max);
    let scale = entry_scale.powi(k as i32 + 1).max(1.0);

    let mut report = StructureReport {
        k,
        minors_checked: minors.len(),
        max_residual: 0.0,
        violations: Vec::new(),
    };
    for minor in &minors {
        let det_b = submatrix(&b, &minor.rows, &minor.cols).determinant();
        let mut expected = MultiPoly::constant(pb.dim_a(), det_b);
        for &u in &minor.cols {
            expected = &expected * &forms[u];
        }
        let mut expected = if expected.is_zero() {
            MultiPoly::zero(pb.dim_a(), k + 1)
        } else {
            expected
        };
        expected.prune(scale);
        let residual = minor.poly.max_coef_diff(&expected) / scale;
        report.max_residual = report.max_residual.max(residual);
        if residual > STRUCTURE_TOL {
            report.violations.push(StructureViolation {
                rows: minor.rows.clone(),
                cols: minor.cols.clone(),
                residual,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ONE, ZERO};
    use crate::random::{self, seeded_rng};
    use crate::state::Ensemble;
    use num_complex::Complex64;

    #[test]
    fn subsets_and_binomials() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(binomial(9, 3), 84);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn pure_state_linear_minors_are_the_column_forms() {
        let mut rng = seeded_rng(1);
        let v = random::pure_state(3, 4, &mut rng);
        let pb = PencilBlocks::from_ensemble(&v.to_ensemble());
        let minors = pencil_minor_polys(&pb, 0, &MinorCaps::default()).unwrap();
        assert_eq!(minors.len(), 4);
        for (j, minor) in minors.iter().enumerate() {
            // Row j: a_1j r_1 + a_2j r_2 + a_3j r_3.
            let coeffs: Vec<Complex64> = (0..3).map(|i| v.amplitude(i, j)).collect();
            assert!(minor.poly.max_coef_diff(&MultiPoly::linear(&coeffs)) < 1e-15);
        }
    }

    #[test]
    fn zero_pencil_has_zero_minors() {
        let entries = vec![vec![MultiPoly::zero(2, 1); 2]; 2];
        assert!(cofactor_determinant(&entries).is_zero());
    }

    #[test]
    fn too_few_terms_gives_no_minors() {
        let v = CVector::from_vec(vec![ONE, ZERO, ZERO, ZERO]);
        let pb =
            PencilBlocks::from_ensemble(&Ensemble::from_vectors(2, 2, vec![1.0], &[v]).unwrap());
        assert!(pencil_minor_polys(&pb, 1, &MinorCaps::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn minors_match_numeric_determinants() {
        let mut rng = seeded_rng(2);
        let e = random::ensemble(2, 2, 3, &mut rng);
        let pb = PencilBlocks::from_ensemble(&e);
        let minors = pencil_minor_polys(&pb, 1, &MinorCaps::default()).unwrap();
        assert_eq!(minors.len(), 3);
        for _ in 0..20 {
            let r = random::projective_point(2, &mut rng);
            let x = pb.eval(&r).unwrap();
            for minor in &minors {
                let numeric = submatrix(&x, &minor.rows, &minor.cols).determinant();
                let symbolic = minor.poly.eval(r.coords().as_slice());
                assert!((numeric - symbolic).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn caps_are_enforced() {
        let mut rng = seeded_rng(3);
        let pb = PencilBlocks::from_ensemble(&random::ensemble(2, 4, 8, &mut rng));
        let tight = MinorCaps {
            max_minors: 10,
            ..Default::default()
        };
        assert!(matches!(
            pencil_minor_polys(&pb, 1, &tight),
            Err(Error::CombinatorialBlowup {
                count: 168,
                cap: 10
            })
        ));
        assert!(matches!(
            pencil_minor_polys(&pb, 4, &MinorCaps::default()),
            Err(Error::KOutOfRange { .. })
        ));
    }

    #[test]
    fn single_product_term_structure() {
        let mut rng = seeded_rng(4);
        let pe = random::product_ensemble(2, 2, 1, &mut rng);
        let rep = separable_minor_structure(&pe, 0, &MinorCaps::default()).unwrap();
        assert_eq!(rep.minors_checked, 2);
        assert!(rep.holds(), "{rep:?}");
    }

    #[test]
    fn random_separable_structure() {
        let mut rng = seeded_rng(5);
        for (m, n, s, k) in [(2, 2, 2, 1), (3, 3, 3, 2), (3, 2, 4, 1), (2, 3, 3, 0)] {
            let pe = random::product_ensemble(m, n, s, &mut rng);
            let rep = separable_minor_structure(&pe, k, &MinorCaps::default()).unwrap();
            assert!(rep.holds(), "{m}x{n} s={s} k={k}: {rep:?}");
            assert!(rep.max_residual <= 1e-10);
        }
    }

    #[test]
    fn vanishing_bound_separates_planted_point() {
        let mut rng = seeded_rng(6);
        let p = random::projective_point(3, &mut rng);
        let e = random::ensemble_through_point(3, 3, 3, 1, &p, &mut rng);
        let pb = PencilBlocks::from_ensemble(&e);
        let minors = pencil_minor_polys(&pb, 1, &MinorCaps::default()).unwrap();
        let bound = minor_vanishing_bound(&pb, &p, 1, &RankPolicy::default()).unwrap();
        assert!(minors
            .iter()
            .all(|mi| mi.poly.eval_vec(p.coords()).norm() <= bound));
        let q = random::projective_point(3, &mut rng);
        let bound_q = minor_vanishing_bound(&pb, &q, 1, &RankPolicy::default()).unwrap();
        assert!(minors
            .iter()
            .any(|mi| mi.poly.eval_vec(q.coords()).norm() > bound_q));
    }
}
