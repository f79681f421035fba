//! Dense complex linear algebra helpers and the numerical-rank policy.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Relative tolerance used by every rank decision.
///
/// A singular value counts towards the rank when it exceeds
/// `rel_eps * max(rows, cols) * σ_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankPolicy {
    pub rel_eps: f64,
}

impl Default for RankPolicy {
    fn default() -> Self {
        RankPolicy { rel_eps: 1e-10 }
    }
}

impl RankPolicy {
    pub fn new(rel_eps: f64) -> Result<Self> {
        if !(rel_eps > 0.0 && rel_eps <= 1e-2) {
            return Err(Error::InvalidConfig(format!(
                "rel_eps must lie in (0, 1e-2], got {rel_eps}"
            )));
        }
        Ok(RankPolicy { rel_eps })
    }

    pub fn threshold(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        self.rel_eps * rows.max(cols) as f64 * sigma_max
    }
}

/// Outcome of a numerical rank computation.
#[derive(Debug, Clone, PartialEq)]
pub struct RankInfo {
    pub rank: usize,
    pub threshold: f64,
    /// Singular values, descending.
    pub singular_values: Vec<f64>,
    /// `σ_rank / σ_{rank+1}`; infinite when either side of the cut is empty
    /// or the first discarded value is exactly zero.
    pub gap_ratio: f64,
    /// Distance of the cut from the threshold, `min(σ_rank / τ, τ / σ_{rank+1})`.
    /// Values close to 1 mean the rank decision is fragile.
    pub margin: f64,
}

impl RankInfo {
    pub fn from_singular_values(
        sv: Vec<f64>,
        rows: usize,
        cols: usize,
        policy: &RankPolicy,
    ) -> Self {
        Self::from_singular_values_scaled(sv, rows, cols, policy, 0.0)
    }

    pub fn from_singular_values_scaled(
        sv: Vec<f64>,
        rows: usize,
        cols: usize,
        policy: &RankPolicy,
        reference: f64,
    ) -> Self {
        let smax = sv.first().copied().unwrap_or(0.0).max(reference);
        let threshold = policy.threshold(rows, cols, smax);
        let rank = sv.iter().take_while(|&&s| s > threshold).count();
        let kept = if rank > 0 { Some(sv[rank - 1]) } else { None };
        let dropped = sv.get(rank).copied();
        let gap_ratio = match (kept, dropped) {
            (Some(a), Some(b)) if b > 0.0 => a / b,
            _ => f64::INFINITY,
        };
        let above = kept.map_or(f64::INFINITY, |a| a / threshold);
        let below = match dropped {
            Some(b) if b > 0.0 => threshold / b,
            _ => f64::INFINITY,
        };
        RankInfo {
            rank,
            threshold,
            singular_values: sv,
            gap_ratio,
            margin: above.min(below),
        }
    }
}

/// Singular values of `mat` in descending order.
pub fn singular_values(mat: &CMatrix) -> Vec<f64> {
    if mat.nrows() == 0 || mat.ncols() == 0 {
        return Vec::new();
    }
    let svd = SVD::new(mat.clone(), false, false);
    svd.singular_values.iter().copied().collect()
}

pub fn numerical_rank(mat: &CMatrix, policy: &RankPolicy) -> RankInfo {
    RankInfo::from_singular_values(singular_values(mat), mat.nrows(), mat.ncols(), policy)
}

/// Like [`numerical_rank`], with the threshold measured against
/// `max(σ_max, reference)`.
///
/// `reference` is an a-priori bound on the norm of the matrix family being
/// tested (for example `|r|^2 ‖ρ‖` for `M(r)`), so a matrix that vanishes up
/// to rounding gets rank 0 instead of being judged against its own noise.
pub fn numerical_rank_scaled(mat: &CMatrix, policy: &RankPolicy, reference: f64) -> RankInfo {
    RankInfo::from_singular_values_scaled(
        singular_values(mat),
        mat.nrows(),
        mat.ncols(),
        policy,
        reference,
    )
}

pub fn frobenius(mat: &CMatrix) -> f64 {
    mat.norm()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(mat: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(mat.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(mat.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

pub fn hermitian_eigenvalues(mat: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = SymmetricEigen::new(mat.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

pub fn max_abs(mat: &CMatrix) -> f64 {
    mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn check_finite(mat: &CMatrix) -> Result<()> {
    for c in 0..mat.ncols() {
        for r in 0..mat.nrows() {
            let z = mat[(r, c)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: r, col: c });
            }
        }
    }
    Ok(())
}

/// `max |U U^† - I|`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let prod = u * u.adjoint();
    max_abs_diff(&prod, &CMatrix::identity(n, n))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Orthonormal basis of the kernel of `mat` (columns of the returned
/// matrix), using the same threshold as [`numerical_rank`].
pub fn kernel_basis(mat: &CMatrix, policy: &RankPolicy) -> CMatrix {
    let (rows, cols) = mat.shape();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    // Pad to at least `cols` rows so the thin SVD yields a full right basis.
    let padded = if rows < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(mat);
        p
    } else {
        mat.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let info = RankInfo::from_singular_values(sv, rows, cols, policy);
    let null = cols - info.rank;
    CMatrix::from_fn(cols, null, |r, c| v_t[(info.rank + c, r)].conj())
}
