//! The two pencils attached to a bipartite state.
//!
//! `M(r) = Σ_ij r_i r_j* ρ_ij` is evaluated straight from the blocks of `ρ`
//! and is therefore independent of any decomposition. For an ensemble
//! `ρ = A P A^†` with `A` split into row blocks `A_1, …, A_m` (each `n × t`),
//! the holomorphic pencil `X(r) = Σ r_i A_i` satisfies `M(r) = X(r) P X(r)^†`
//! and has the same rank as `M(r)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_abs_diff, CMatrix, CVector, ZERO};
use crate::state::{DensityMatrix, Ensemble, PureState};

/// Anti-Hermitian residue tolerated in `M(r)` before symmetrization.
pub const HERMITIZE_TOL: f64 = 1e-10;

/// Representative of a point of `CP^{m-1}`, scaled so that its
/// largest-modulus coordinate has modulus one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    coords: CVector,
}

impl ProjectivePoint {
    pub fn new(coords: CVector) -> Result<Self> {
        let largest = coords.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !largest.is_finite() {
            return Err(Error::Parse(
                "projective point has non-finite coordinates".into(),
            ));
        }
        if largest == 0.0 {
            return Err(Error::ZeroPoint);
        }
        Ok(ProjectivePoint {
            coords: coords.unscale(largest),
        })
    }

    pub fn from_slice(coords: &[Complex64]) -> Result<Self> {
        ProjectivePoint::new(CVector::from_column_slice(coords))
    }

    /// Standard basis point `e_i` (zero-based) of `CP^{dim-1}`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut coords = CVector::zeros(dim);
        coords[i] = Complex64::new(1.0, 0.0);
        ProjectivePoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &CVector {
        &self.coords
    }

    /// Euclidean-normalized representative.
    pub fn unit(&self) -> CVector {
        self.coords.unscale(self.coords.norm())
    }

    /// `1 - |<a|b>|^2` for unit representatives; zero iff the points agree.
    pub fn distance_sq(&self, other: &ProjectivePoint) -> f64 {
        (1.0 - self.unit().dotc(&other.unit()).norm_sqr()).max(0.0)
    }
}

/// Row blocks `A_1, …, A_m` of an ensemble matrix together with its weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilBlocks {
    m: usize,
    n: usize,
    blocks: Vec<CMatrix>,
    weights: Vec<f64>,
}

impl PencilBlocks {
    pub fn from_ensemble(e: &Ensemble) -> Self {
        let (m, n, t) = (e.dim_a(), e.dim_b(), e.len());
        let blocks = (0..m)
            .map(|w| e.vectors().view((w * n, 0), (n, t)).into_owned())
            .collect();
        PencilBlocks {
            m,
            n,
            blocks,
            weights: e.weights().to_vec(),
        }
    }

    pub fn dim_a(&self) -> usize {
        self.m
    }

    pub fn dim_b(&self) -> usize {
        self.n
    }

    /// Number of ensemble terms `t` (columns of each block).
    pub fn terms(&self) -> usize {
        self.weights.len()
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Vertical stack of the blocks, i.e. the ensemble matrix `A`.
    pub fn stacked(&self) -> CMatrix {
        let t = self.terms();
        let mut a = CMatrix::zeros(self.m * self.n, t);
        for (w, b) in self.blocks.iter().enumerate() {
            a.view_mut((w * self.n, 0), (self.n, t)).copy_from(b);
        }
        a
    }

    /// `A_i P A_j^†`, which equals `ρ_ij`.
    pub fn block_product(&self, i: usize, j: usize) -> CMatrix {
        let mut left = self.blocks[i].clone();
        for (mut col, &p) in left.column_iter_mut().zip(&self.weights) {
            col *= Complex64::from(p);
        }
        left * self.blocks[j].adjoint()
    }

    /// `X(r) = Σ r_i A_i`.
    pub fn eval(&self, r: &ProjectivePoint) -> Result<CMatrix> {
        self.eval_coords(r.coords())
    }

    pub fn eval_coords(&self, r: &CVector) -> Result<CMatrix> {
        if r.len() != self.m {
            return Err(Error::ShapeMismatch(format!(
                "point has {} coordinates, pencil has {} blocks",
                r.len(),
                self.m
            )));
        }
        let mut x = CMatrix::zeros(self.n, self.terms());
        for (b, &ri) in self.blocks.iter().zip(r.iter()) {
            x += b * ri;
        }
        Ok(x)
    }

    /// `X(r) P X(r)^†`.
    pub fn weighted_gram(&self, r: &ProjectivePoint) -> Result<CMatrix> {
        let x = self.eval(r)?;
        let mut scaled = x.clone();
        for (mut col, &p) in scaled.column_iter_mut().zip(&self.weights) {
            col *= Complex64::from(p);
        }
        Ok(scaled * x.adjoint())
    }
}

pub fn pencil_blocks(e: &Ensemble) -> PencilBlocks {
    PencilBlocks::from_ensemble(e)
}

pub fn eval_holomorphic_pencil(pb: &PencilBlocks, r: &ProjectivePoint) -> Result<CMatrix> {
    pb.eval(r)
}

/// `M(r) = Σ_ij r_i r_j* ρ_ij`, symmetrized after checking that the
/// anti-Hermitian residue is below [`HERMITIZE_TOL`].
pub fn eval_m(rho: &DensityMatrix, r: &ProjectivePoint) -> Result<CMatrix> {
    eval_m_coords(rho, r.coords())
}

pub fn eval_m_coords(rho: &DensityMatrix, r: &CVector) -> Result<CMatrix> {
    let (m, n) = (rho.dim_a(), rho.dim_b());
    if r.len() != m {
        return Err(Error::ShapeMismatch(format!(
            "point has {} coordinates, state has m = {m}",
            r.len()
        )));
    }
    let mut acc = CMatrix::zeros(n, n);
    let mat = rho.matrix();
    for i in 0..m {
        if r[i] == ZERO {
            continue;
        }
        for j in 0..m {
            if r[j] == ZERO {
                continue;
            }
            let coef = r[i] * r[j].conj();
            acc += mat.view((i * n, j * n), (n, n)) * coef;
        }
    }
    let residue = max_abs_diff(&acc, &acc.adjoint()) / 2.0;
    let scale = max_abs(&acc).max(1.0);
    if residue > HERMITIZE_TOL * scale {
        return Err(Error::NotHermitian {
            deviation: residue,
            bound: HERMITIZE_TOL * scale,
        });
    }
    Ok((&acc + acc.adjoint()).scale(0.5))
}

/// The B-side form `Σ_kl r'_k r'_l* (swap ρ)_kl`, an `m × m` matrix.
pub fn eval_m_b(rho: &DensityMatrix, r: &ProjectivePoint) -> Result<CMatrix> {
    eval_m(&rho.swap(), r)
}

/// Coefficients of the pure-state column `R(r)`: entry `(j, i) = a_ij`, so
/// `R(r) = entries · r` and `M(r) = R(r) R(r)^†` for the projector onto `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureCoefficientMatrix {
    entries: CMatrix,
}

impl PureCoefficientMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn eval(&self, r: &ProjectivePoint) -> Result<CVector> {
        if r.dim() != self.entries.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "point has {} coordinates, expected {}",
                r.dim(),
                self.entries.ncols()
            )));
        }
        Ok(&self.entries * r.coords())
    }
}

pub fn pure_coefficients(v: &PureState) -> PureCoefficientMatrix {
    let entries = CMatrix::from_fn(v.dim_b(), v.dim_a(), |j, i| v.amplitude(i, j));
    PureCoefficientMatrix { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{numerical_rank, RankPolicy, ONE};
    use crate::random::{self, seeded_rng};
    use crate::state::density_from_ensemble;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn canonical_normalization() {
        let p = ProjectivePoint::from_slice(&[c(0.0, 2.0), c(1.0, 0.0)]).unwrap();
        assert!((p.coords()[0].norm() - 1.0).abs() < 1e-15);
        assert!((p.coords()[1].norm() - 0.5).abs() < 1e-15);
        assert!(matches!(
            ProjectivePoint::from_slice(&[ZERO, ZERO]),
            Err(Error::ZeroPoint)
        ));
    }

    #[test]
    fn basis_ensemble_blocks() {
        let v = PureState::new(2, 2, CVector::from_vec(vec![ONE, ZERO, ZERO, ZERO])).unwrap();
        let pb = pencil_blocks(&v.to_ensemble());
        assert_eq!(
            pb.blocks()[0],
            CMatrix::from_column_slice(2, 1, &[ONE, ZERO])
        );
        assert_eq!(pb.blocks()[1], CMatrix::zeros(2, 1));
        assert_eq!(pb.stacked(), v.to_ensemble().vectors().clone());
    }

    #[test]
    fn maximally_mixed_blocks() {
        let (m, n) = (2, 3);
        let vecs: Vec<CVector> = (0..6)
            .map(|k| CVector::from_fn(6, |i, _| if i == k { ONE } else { ZERO }))
            .collect();
        let e = Ensemble::from_vectors(m, n, vec![1.0 / 6.0; 6], &vecs).unwrap();
        let pb = pencil_blocks(&e);
        for i in 0..m {
            for j in 0..m {
                let expected = if i == j {
                    CMatrix::identity(n, n).unscale(6.0)
                } else {
                    CMatrix::zeros(n, n)
                };
                assert!(max_abs_diff(&pb.block_product(i, j), &expected) < 1e-15);
            }
        }
    }

    #[test]
    fn random_block_identity() {
        let mut rng = seeded_rng(1);
        let e = random::ensemble(3, 2, 4, &mut rng);
        let rho = density_from_ensemble(&e).unwrap();
        let pb = pencil_blocks(&e);
        for i in 0..3 {
            for j in 0..3 {
                // Brute-force Σ_l p_l A_i[:, l] A_j[:, l]^†.
                let mut expected = CMatrix::zeros(2, 2);
                for l in 0..4 {
                    let ci = pb.blocks()[i].column(l).into_owned();
                    let cj = pb.blocks()[j].column(l).into_owned();
                    expected += (&ci * cj.adjoint()) * Complex64::from(pb.weights()[l]);
                }
                assert!(max_abs_diff(&pb.block_product(i, j), &expected) < 1e-12);
                assert!(max_abs_diff(&rho.block(i, j).unwrap(), &expected) < 1e-12);
            }
        }
    }

    #[test]
    fn holomorphic_pencil_is_linear() {
        let mut rng = seeded_rng(2);
        let pb = pencil_blocks(&random::ensemble(2, 3, 2, &mut rng));
        let e1 = ProjectivePoint::basis(2, 0);
        assert_eq!(pb.eval(&e1).unwrap(), pb.blocks()[0]);
        let both = ProjectivePoint::from_slice(&[ONE, ONE]).unwrap();
        let sum = &pb.blocks()[0] + &pb.blocks()[1];
        assert!(max_abs_diff(&pb.eval(&both).unwrap(), &sum) < 1e-15);
    }

    #[test]
    fn hermitian_form_matches_factorization() {
        let mut rng = seeded_rng(3);
        for _ in 0..20 {
            let e = random::ensemble(3, 3, 5, &mut rng);
            let rho = density_from_ensemble(&e).unwrap();
            let pb = pencil_blocks(&e);
            let r = random::projective_point(3, &mut rng);
            let direct = eval_m(&rho, &r).unwrap();
            let factored = pb.weighted_gram(&r).unwrap();
            assert!(max_abs_diff(&direct, &factored) <= 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_form() {
        let rho = DensityMatrix::maximally_mixed(3, 2);
        let r = ProjectivePoint::from_slice(&[c(1.0, 0.0), c(0.0, 0.5), c(-0.25, 0.25)]).unwrap();
        let norm_sq = r.coords().norm_squared();
        let m = eval_m(&rho, &r).unwrap();
        let expected = CMatrix::identity(2, 2) * Complex64::from(norm_sq / 6.0);
        assert!(max_abs_diff(&m, &expected) < 1e-15);
        assert_eq!(numerical_rank(&m, &RankPolicy::default()).rank, 2);
        let mb = eval_m_b(
            &rho,
            &ProjectivePoint::from_slice(&[ONE, c(0.3, 0.2)]).unwrap(),
        )
        .unwrap();
        assert_eq!(numerical_rank(&mb, &RankPolicy::default()).rank, 3);
    }

    #[test]
    fn basis_point_selects_diagonal_block() {
        let mut rng = seeded_rng(4);
        let rho = random::density(3, 2, 3, &mut rng);
        for i in 0..3 {
            let m = eval_m(&rho, &ProjectivePoint::basis(3, i)).unwrap();
            assert!(max_abs_diff(&m, &rho.block(i, i).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn swap_symmetric_state_has_equal_forms() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(
            2,
            2,
            CVector::from_vec(vec![c(h, 0.0), ZERO, ZERO, c(h, 0.0)]),
        )
        .unwrap();
        let rho = bell.projector();
        let mut rng = seeded_rng(5);
        for _ in 0..10 {
            let r = random::projective_point(2, &mut rng);
            let ma = eval_m(&rho, &r).unwrap();
            let mb = eval_m_b(&rho, &r).unwrap();
            assert!(max_abs_diff(&ma, &mb) < 1e-15);
        }
    }

    #[test]
    fn pure_coefficient_matrix() {
        let v = PureState::new(2, 2, CVector::from_vec(vec![ONE, ZERO, ZERO, ZERO])).unwrap();
        let mut expected = CMatrix::zeros(2, 2);
        expected[(0, 0)] = ONE;
        assert_eq!(pure_coefficients(&v).entries(), &expected);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(
            2,
            2,
            CVector::from_vec(vec![c(h, 0.0), ZERO, ZERO, c(h, 0.0)]),
        )
        .unwrap();
        let expected = CMatrix::identity(2, 2) * c(h, 0.0);
        assert!(max_abs_diff(pure_coefficients(&bell).entries(), &expected) < 1e-16);
    }

    #[test]
    fn pure_form_factorizes() {
        let mut rng = seeded_rng(6);
        let v = random::pure_state(3, 4, &mut rng);
        let rho = v.projector();
        let coeffs = pure_coefficients(&v);
        for _ in 0..10 {
            let r = random::projective_point(3, &mut rng);
            let col = coeffs.eval(&r).unwrap();
            let outer = &col * col.adjoint();
            let m = eval_m(&rho, &r).unwrap();
            assert!(max_abs_diff(&m, &outer) <= 1e-12);
            assert!(numerical_rank(&m, &RankPolicy::default()).rank <= 1);
        }
    }
}
