//! Bipartite states on `C^m ⊗ C^n`.
//!
//! Basis order is `|11>, …, |1n>, …, |m1>, …, |mn>`: the global index of
//! `|ij>` (zero-based `i < m`, `j < n`) is `i * n + j`. Block `ρ_ij` is the
//! `n × n` submatrix with rows `i*n..(i+1)*n` and columns `j*n..(j+1)*n`.
//! All block and factor indices in this crate are zero-based.

use crate::error::{Error, Result};
use crate::linalg::{
    check_finite, hermitian_eigen, hermitian_eigenvalues, max_abs, max_abs_diff, CMatrix, CVector,
    RankPolicy,
};

pub const HERMITIAN_REL_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-10;
pub const MIN_WEIGHT: f64 = 1e-14;

/// Validated density matrix with bipartite shape `(m, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: usize,
    n: usize,
    mat: CMatrix,
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::ShapeMismatch(format!(
            "subsystem dimensions must be positive, got ({m}, {n})"
        )));
    }
    Ok(())
}

/// Checks every density-matrix invariant and wraps `mat`; never repairs.
pub fn validate_density(mat: CMatrix, m: usize, n: usize) -> Result<DensityMatrix> {
    check_dims(m, n)?;
    let dim = m * n;
    if mat.shape() != (dim, dim) {
        return Err(Error::ShapeMismatch(format!(
            "expected {dim}x{dim} matrix for ({m}, {n}), got {}x{}",
            mat.nrows(),
            mat.ncols()
        )));
    }
    check_finite(&mat)?;
    let scale = max_abs(&mat);
    let deviation = max_abs_diff(&mat, &mat.adjoint());
    let bound = HERMITIAN_REL_TOL * scale;
    if deviation > bound {
        return Err(Error::NotHermitian { deviation, bound });
    }
    let hermitian = (&mat + mat.adjoint()).scale(0.5);
    let min_eigenvalue = hermitian_eigenvalues(&hermitian)[0];
    if min_eigenvalue < -PSD_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue,
            bound: -PSD_TOL,
        });
    }
    let trace = mat.trace().re;
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceNotOne {
            trace,
            tolerance: TRACE_TOL,
        });
    }
    Ok(DensityMatrix { m, n, mat })
}

impl DensityMatrix {
    pub fn new(mat: CMatrix, m: usize, n: usize) -> Result<Self> {
        validate_density(mat, m, n)
    }

    /// `I_{mn} / (mn)`.
    pub fn maximally_mixed(m: usize, n: usize) -> Self {
        let dim = m * n;
        DensityMatrix {
            m,
            n,
            mat: CMatrix::identity(dim, dim).unscale(dim as f64),
        }
    }

    pub fn dim_a(&self) -> usize {
        self.m
    }

    pub fn dim_b(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// The `n × n` block `ρ_ij` (zero-based).
    pub fn block(&self, i: usize, j: usize) -> Result<CMatrix> {
        if i >= self.m || j >= self.m {
            return Err(Error::IndexOutOfRange { i, j, m: self.m });
        }
        Ok(self.block_unchecked(i, j))
    }

    pub(crate) fn block_unchecked(&self, i: usize, j: usize) -> CMatrix {
        let n = self.n;
        self.mat.view((i * n, j * n), (n, n)).into_owned()
    }

    /// Exchanges the tensor factors: `|ij> → |ji>`.
    pub fn swap(&self) -> DensityMatrix {
        DensityMatrix {
            m: self.n,
            n: self.m,
            mat: swap_factors(&self.mat, self.m, self.n),
        }
    }

    /// Partial transpose over factor B: `<ij|ρ^{T_B}|kl> = <il|ρ|kj>`.
    pub fn partial_transpose_b(&self) -> CMatrix {
        let (m, n) = (self.m, self.n);
        CMatrix::from_fn(m * n, m * n, |row, col| {
            let (i, j) = (row / n, row % n);
            let (k, l) = (col / n, col % n);
            self.mat[(i * n + l, k * n + j)]
        })
    }

    /// Spectral ensemble: eigenvectors with eigenvalue above
    /// `rel_eps * mn * λ_max`, weighted by their eigenvalues.
    pub fn eigen_ensemble(&self, policy: &RankPolicy) -> Ensemble {
        let (values, vectors) = hermitian_eigen(&self.mat);
        let lmax = values.last().copied().unwrap_or(0.0);
        let cut = policy
            .threshold(self.mat.nrows(), self.mat.ncols(), lmax)
            .max(MIN_WEIGHT);
        let keep: Vec<usize> = (0..values.len())
            .rev()
            .filter(|&i| values[i] > cut)
            .collect();
        let weights = keep.iter().map(|&i| values[i]).collect();
        let cols = CMatrix::from_fn(self.mat.nrows(), keep.len(), |r, c| vectors[(r, keep[c])]);
        Ensemble {
            m: self.m,
            n: self.n,
            weights,
            vectors: cols,
        }
    }
}

/// Reorders a bipartite operator from `(m, n)` to `(n, m)` factor order.
pub fn swap_factors(mat: &CMatrix, m: usize, n: usize) -> CMatrix {
    // New index of |ij> is j*m + i; output entry (ji, lk) = input (ij, kl).
    CMatrix::from_fn(m * n, m * n, |row, col| {
        let (j, i) = (row / m, row % m);
        let (l, k) = (col / m, col % m);
        mat[(i * n + j, k * n + l)]
    })
}

/// Weighted set of unit vectors realizing `ρ = A P A^†`.
///
/// Column `l` of `vectors` is `v_l`; weights are strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    m: usize,
    n: usize,
    weights: Vec<f64>,
    vectors: CMatrix,
}

impl Ensemble {
    pub fn new(m: usize, n: usize, weights: Vec<f64>, vectors: CMatrix) -> Result<Self> {
        check_dims(m, n)?;
        if vectors.nrows() != m * n {
            return Err(Error::ShapeMismatch(format!(
                "ensemble vectors must have length {}, got {}",
                m * n,
                vectors.nrows()
            )));
        }
        if vectors.ncols() != weights.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for {} vectors",
                weights.len(),
                vectors.ncols()
            )));
        }
        if weights.is_empty() {
            return Err(Error::ShapeMismatch("ensemble has no terms".into()));
        }
        check_finite(&vectors)?;
        for (index, &weight) in weights.iter().enumerate() {
            if weight.is_nan() || weight <= MIN_WEIGHT {
                return Err(Error::NonPositiveWeight {
                    index,
                    weight,
                    min: MIN_WEIGHT,
                });
            }
        }
        let sum: f64 = weights.iter().sum();
        if sum > 1.0 + TRACE_TOL {
            return Err(Error::WeightSumTooLarge { sum });
        }
        for (index, col) in vectors.column_iter().enumerate() {
            let norm = col.norm();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized {
                    index,
                    norm,
                    tolerance: NORM_TOL,
                });
            }
        }
        Ok(Ensemble {
            m,
            n,
            weights,
            vectors,
        })
    }

    pub fn from_vectors(
        m: usize,
        n: usize,
        weights: Vec<f64>,
        vectors: &[CVector],
    ) -> Result<Self> {
        let dim = m * n;
        if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::ShapeMismatch(format!(
                "ensemble vectors must have length {dim}, got {}",
                bad.len()
            )));
        }
        let cols = if vectors.is_empty() {
            CMatrix::zeros(dim, 0)
        } else {
            CMatrix::from_columns(vectors)
        };
        Ensemble::new(m, n, weights, cols)
    }

    pub fn dim_a(&self) -> usize {
        self.m
    }

    pub fn dim_b(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The `mn × t` coefficient matrix `A`.
    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// `A P A^†` without validation (trace equals the weight sum).
    pub fn gram(&self) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (mut col, &p) in scaled.column_iter_mut().zip(&self.weights) {
            col *= num_complex::Complex64::from(p);
        }
        let g = &scaled * self.vectors.adjoint();
        (&g + g.adjoint()).scale(0.5)
    }

    /// Number of linearly independent ensemble vectors.
    pub fn vector_rank(&self, policy: &RankPolicy) -> usize {
        crate::linalg::numerical_rank(&self.vectors, policy).rank
    }
}

/// `ρ = A P A^†`; fails validation unless the weights sum to one.
pub fn density_from_ensemble(e: &Ensemble) -> Result<DensityMatrix> {
    validate_density(e.gram(), e.m, e.n)
}

/// Checks that the image of `ρ` is spanned by the ensemble vectors by
/// comparing the numerical rank of `ρ` with that of `A`.
pub fn image_rank_check(e: &Ensemble, policy: &RankPolicy) -> bool {
    let rho_rank = crate::linalg::numerical_rank(&e.gram(), policy).rank;
    rho_rank == e.vector_rank(policy)
}

/// Mixture of product projectors `Σ q_u P_{a_u ⊗ b_u}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductEnsemble {
    m: usize,
    n: usize,
    weights: Vec<f64>,
    factors_a: Vec<CVector>,
    factors_b: Vec<CVector>,
}

impl ProductEnsemble {
    pub fn new(
        m: usize,
        n: usize,
        weights: Vec<f64>,
        factors_a: Vec<CVector>,
        factors_b: Vec<CVector>,
    ) -> Result<Self> {
        check_dims(m, n)?;
        if factors_a.len() != weights.len() || factors_b.len() != weights.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights, {} A-factors, {} B-factors",
                weights.len(),
                factors_a.len(),
                factors_b.len()
            )));
        }
        for a in &factors_a {
            if a.len() != m {
                return Err(Error::ShapeMismatch(format!(
                    "A-factor of length {} for m = {m}",
                    a.len()
                )));
            }
        }
        for b in &factors_b {
            if b.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "B-factor of length {} for n = {n}",
                    b.len()
                )));
            }
        }
        for (index, v) in factors_a.iter().chain(&factors_b).enumerate() {
            let norm = v.norm();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized {
                    index: index % weights.len().max(1),
                    norm,
                    tolerance: NORM_TOL,
                });
            }
        }
        let pe = ProductEnsemble {
            m,
            n,
            weights,
            factors_a,
            factors_b,
        };
        // Weight checks are shared with Ensemble.
        pe.to_ensemble()?;
        Ok(pe)
    }

    pub fn dim_a(&self) -> usize {
        self.m
    }

    pub fn dim_b(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn factors_a(&self) -> &[CVector] {
        &self.factors_a
    }

    pub fn factors_b(&self) -> &[CVector] {
        &self.factors_b
    }

    /// The `n × s` matrix `B` whose columns are the B-factors.
    pub fn b_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.n, self.len(), |j, u| self.factors_b[u][j])
    }

    pub fn to_ensemble(&self) -> Result<Ensemble> {
        product_ensemble_to_ensemble(self)
    }
}

/// Ensemble whose vectors are the Kronecker products `a_u ⊗ b_u`.
pub fn product_ensemble_to_ensemble(pe: &ProductEnsemble) -> Result<Ensemble> {
    let vectors: Vec<CVector> = pe
        .factors_a
        .iter()
        .zip(&pe.factors_b)
        .map(|(a, b)| a.kronecker(b))
        .collect();
    Ensemble::from_vectors(pe.m, pe.n, pe.weights.clone(), &vectors)
}

/// Pure state `v = Σ a_ij |ij>` with unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    m: usize,
    n: usize,
    amplitudes: CVector,
}

impl PureState {
    pub fn new(m: usize, n: usize, amplitudes: CVector) -> Result<Self> {
        check_dims(m, n)?;
        if amplitudes.len() != m * n {
            return Err(Error::ShapeMismatch(format!(
                "expected {} amplitudes, got {}",
                m * n,
                amplitudes.len()
            )));
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                index: 0,
                norm,
                tolerance: NORM_TOL,
            });
        }
        Ok(PureState { m, n, amplitudes })
    }

    /// `a ⊗ b` for unit vectors `a ∈ C^m`, `b ∈ C^n`.
    pub fn product(a: &CVector, b: &CVector) -> Result<Self> {
        PureState::new(a.len(), b.len(), a.kronecker(b))
    }

    pub fn dim_a(&self) -> usize {
        self.m
    }

    pub fn dim_b(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Amplitude `a_ij` (zero-based).
    pub fn amplitude(&self, i: usize, j: usize) -> num_complex::Complex64 {
        self.amplitudes[i * self.n + j]
    }

    pub fn swap(&self) -> PureState {
        let (m, n) = (self.m, self.n);
        let amps = CVector::from_fn(m * n, |idx, _| {
            let (j, i) = (idx / m, idx % m);
            self.amplitudes[i * n + j]
        });
        PureState {
            m: n,
            n: m,
            amplitudes: amps,
        }
    }

    pub fn projector(&self) -> DensityMatrix {
        let p = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix {
            m: self.m,
            n: self.n,
            mat: (&p + p.adjoint()).scale(0.5),
        }
    }

    /// Single-term ensemble `{(1, v)}`.
    pub fn to_ensemble(&self) -> Ensemble {
        Ensemble {
            m: self.m,
            n: self.n,
            weights: vec![1.0],
            vectors: CMatrix::from_columns(std::slice::from_ref(&self.amplitudes)),
        }
    }

    /// Extracts the pure state of a rank-one density matrix.
    pub fn from_density(rho: &DensityMatrix, policy: &RankPolicy) -> Result<Self> {
        let e = rho.eigen_ensemble(policy);
        if e.len() != 1 {
            return Err(Error::NotPure { rank: e.len() });
        }
        let v = e.vectors.column(0).into_owned();
        PureState::new(rho.m, rho.n, v.unscale(v.norm()))
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm_sqr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;
    use crate::linalg::{numerical_rank, ONE};
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn basis(dim: usize, k: usize) -> CVector {
        CVector::from_fn(dim, |i, _| if i == k { ONE } else { ZERO })
    }

    fn bell() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(2, 2, CVector::from_vec(vec![c(h), ZERO, ZERO, c(h)])).unwrap()
    }

    #[test]
    fn maximally_mixed_is_valid() {
        let mat = CMatrix::identity(4, 4).unscale(4.0);
        assert!(validate_density(mat, 2, 2).is_ok());
    }

    #[test]
    fn product_projector_is_valid() {
        let p = basis(4, 0) * basis(4, 0).adjoint();
        assert!(validate_density(p, 2, 2).is_ok());
    }

    #[test]
    fn negative_eigenvalue_is_rejected() {
        let diag = [1.0, -1e-3, 0.0, 0.0];
        let s: f64 = diag.iter().sum();
        let mat = CMatrix::from_fn(4, 4, |r, col| if r == col { c(diag[r] / s) } else { ZERO });
        match validate_density(mat, 2, 2) {
            Err(Error::NotPositive { min_eigenvalue, .. }) => assert!(min_eigenvalue < -9e-4),
            other => panic!("expected NotPositive, got {other:?}"),
        }
    }

    #[test]
    fn other_invariant_violations_are_named() {
        let mut mat = CMatrix::identity(4, 4).unscale(4.0);
        mat[(0, 1)] = c(0.1);
        assert!(matches!(
            validate_density(mat, 2, 2),
            Err(Error::NotHermitian { .. })
        ));
        let mat = CMatrix::identity(4, 4).unscale(2.0);
        assert!(matches!(
            validate_density(mat, 2, 2),
            Err(Error::TraceNotOne { .. })
        ));
        let mat = CMatrix::identity(4, 4).unscale(4.0);
        assert!(matches!(
            validate_density(mat, 2, 3),
            Err(Error::ShapeMismatch(_))
        ));
        let mut mat = CMatrix::identity(4, 4).unscale(4.0);
        mat[(2, 2)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            validate_density(mat, 2, 2),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn single_vector_ensemble_gives_projector() {
        let v = bell();
        let rho = density_from_ensemble(&v.to_ensemble()).unwrap();
        let expected = v.amplitudes() * v.amplitudes().adjoint();
        assert!(max_abs_diff(rho.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn orthonormal_basis_ensemble_is_maximally_mixed() {
        let (m, n) = (2, 3);
        let vecs: Vec<CVector> = (0..6).map(|k| basis(6, k)).collect();
        let e = Ensemble::from_vectors(m, n, vec![1.0 / 6.0; 6], &vecs).unwrap();
        let rho = density_from_ensemble(&e).unwrap();
        assert!(max_abs_diff(rho.matrix(), DensityMatrix::maximally_mixed(m, n).matrix()) < 1e-15);
    }

    #[test]
    fn ensemble_rejects_bad_weights_and_vectors() {
        let v = vec![basis(4, 0)];
        assert!(matches!(
            Ensemble::from_vectors(2, 2, vec![0.0], &v),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            Ensemble::from_vectors(2, 2, vec![1e-15], &v),
            Err(Error::NonPositiveWeight { .. })
        ));
        let v2 = vec![basis(4, 0), basis(4, 1)];
        assert!(matches!(
            Ensemble::from_vectors(2, 2, vec![0.7, 0.7], &v2),
            Err(Error::WeightSumTooLarge { .. })
        ));
        let long = vec![basis(4, 0).scale(2.0)];
        assert!(matches!(
            Ensemble::from_vectors(2, 2, vec![1.0], &long),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn blocks_of_maximally_mixed() {
        let rho = DensityMatrix::maximally_mixed(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                let b = rho.block(i, j).unwrap();
                let expected = if i == j {
                    CMatrix::identity(2, 2).unscale(4.0)
                } else {
                    CMatrix::zeros(2, 2)
                };
                assert_eq!(b, expected);
            }
        }
        assert!(matches!(
            rho.block(2, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn bell_off_diagonal_block() {
        // Only <11|ρ|22> = 1/2 lands in block ρ_12: local row |1>, local column |2>.
        let rho = bell().projector();
        let b = rho.block(0, 1).unwrap();
        let mut expected = CMatrix::zeros(2, 2);
        expected[(0, 1)] = c(0.5);
        assert!(max_abs_diff(&b, &expected) < 1e-15);
        let b_rev = rho.block(1, 0).unwrap();
        assert!(max_abs_diff(&b_rev, &b.adjoint()) < 1e-15);
    }

    #[test]
    fn product_ensemble_vectors() {
        let a = basis(2, 0);
        let b = basis(2, 1);
        let pe = ProductEnsemble::new(2, 2, vec![1.0], vec![a], vec![b]).unwrap();
        let e = pe.to_ensemble().unwrap();
        assert_eq!(e.vectors().column(0).into_owned(), basis(4, 1));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = CVector::from_vec(vec![c(h), c(h)]);
        let pe = ProductEnsemble::new(2, 2, vec![1.0], vec![a], vec![basis(2, 0)]).unwrap();
        let v = pe.to_ensemble().unwrap().vectors().column(0).into_owned();
        let expected = CVector::from_vec(vec![c(h), ZERO, c(h), ZERO]);
        assert!((v - expected).norm() < 1e-15);
    }

    #[test]
    fn swap_relabels_product_projector() {
        // |12> on 2⊗3 (index 1) becomes |21> on 3⊗2 (index 2).
        let v = PureState::product(&basis(2, 0), &basis(3, 1)).unwrap();
        let swapped = v.projector().swap();
        let expected = basis(6, 2) * basis(6, 2).adjoint();
        assert_eq!(swapped.dim_a(), 3);
        assert!(max_abs_diff(swapped.matrix(), &expected) < 1e-15);
        assert_eq!(v.swap().amplitudes(), &basis(6, 2));
    }

    #[test]
    fn partial_transpose_of_bell_has_negative_eigenvalue() {
        let pt = bell().projector().partial_transpose_b();
        let eig = hermitian_eigenvalues(&pt);
        assert!((eig[0] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn image_rank_dependent_columns() {
        let v = bell().amplitudes().clone();
        let e = Ensemble::from_vectors(2, 2, vec![0.5, 0.5], &[v.clone(), v]).unwrap();
        assert!(image_rank_check(&e, &RankPolicy::default()));
        assert_eq!(e.vector_rank(&RankPolicy::default()), 1);
    }

    #[test]
    fn eigen_ensemble_reproduces_state() {
        let rho = bell().projector();
        let e = rho.eigen_ensemble(&RankPolicy::default());
        assert_eq!(e.len(), 1);
        assert!(max_abs_diff(&e.gram(), rho.matrix()) < 1e-14);
        let pure = PureState::from_density(&rho, &RankPolicy::default()).unwrap();
        assert!((pure.fidelity(&bell()) - 1.0).abs() < 1e-14);
        let mixed = DensityMatrix::maximally_mixed(2, 2);
        assert!(matches!(
            PureState::from_density(&mixed, &RankPolicy::default()),
            Err(Error::NotPure { rank: 4 })
        ));
        assert_eq!(
            numerical_rank(mixed.matrix(), &RankPolicy::default()).rank,
            4
        );
    }
}
