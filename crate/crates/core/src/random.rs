//! Seeded random states, points and unitaries.
//!
//! Every generator takes an explicit RNG or seed. Parallel loops derive one
//! ChaCha stream per task with [`task_rng`], so results do not depend on
//! scheduling.

use nalgebra::QR;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, CVector};
use crate::pencil::ProjectivePoint;
use crate::state::{DensityMatrix, Ensemble, ProductEnsemble, PureState};

pub type DetRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` of the generator seeded with `seed`.
pub fn task_rng(seed: u64, index: u64) -> DetRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    CVector::from_fn(dim, |_, _| complex_gaussian(rng))
}

/// Uniformly distributed unit vector in `C^dim`.
pub fn unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    loop {
        let v = gaussian_vector(dim, rng);
        let norm = v.norm();
        if norm > 1e-12 {
            return v.unscale(norm);
        }
    }
}

/// Haar-distributed unitary: QR of a Ginibre sample with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let qr = QR::new(ginibre(dim, dim, rng));
    let mut q = qr.q();
    let r = qr.r();
    for (c, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(c, c)];
        let norm = d.norm();
        let phase = if norm > 0.0 {
            d / norm
        } else {
            Complex64::new(1.0, 0.0)
        };
        col *= phase;
    }
    q
}

pub fn haar_unitary(dim: usize, seed: u64) -> CMatrix {
    haar_unitary_with(dim, &mut seeded_rng(seed))
}

/// Point of `CP^{m-1}` distributed according to the Fubini–Study measure.
pub fn projective_point<R: Rng + ?Sized>(m: usize, rng: &mut R) -> ProjectivePoint {
    loop {
        if let Ok(p) = ProjectivePoint::new(gaussian_vector(m, rng)) {
            return p;
        }
    }
}

fn random_weights<R: Rng + ?Sized>(t: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..t).map(|_| rng.random_range(0.1..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / sum).collect()
}

/// `t` random unit vectors with random weights summing to one.
pub fn ensemble<R: Rng + ?Sized>(m: usize, n: usize, t: usize, rng: &mut R) -> Ensemble {
    let vectors: Vec<CVector> = (0..t).map(|_| unit_vector(m * n, rng)).collect();
    Ensemble::from_vectors(m, n, random_weights(t, rng), &vectors).expect("valid random ensemble")
}

/// Random ensemble in which the holomorphic pencil at `point` has rank at
/// most `rank`, so `point` lies on `V_A^rank`.
pub fn ensemble_through_point<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    t: usize,
    rank: usize,
    point: &ProjectivePoint,
    rng: &mut R,
) -> Ensemble {
    let r = point.coords();
    let pivot = (0..m)
        .max_by(|&a, &b| r[a].norm().total_cmp(&r[b].norm()))
        .unwrap();
    let mut blocks: Vec<CMatrix> = (0..m).map(|_| ginibre(n, t, rng)).collect();
    let target = ginibre(n, rank, rng) * ginibre(rank, t, rng);
    let mut rest = CMatrix::zeros(n, t);
    for (i, b) in blocks.iter().enumerate() {
        if i != pivot {
            rest += b * r[i];
        }
    }
    blocks[pivot] = (target - rest) / r[pivot];
    let mut a = CMatrix::zeros(m * n, t);
    for (i, b) in blocks.iter().enumerate() {
        a.view_mut((i * n, 0), (n, t)).copy_from(b);
    }
    // Rescaling columns keeps the rank of Σ r_i A_i.
    for mut col in a.column_iter_mut() {
        let norm = col.norm();
        col.unscale_mut(norm);
    }
    Ensemble::new(m, n, random_weights(t, rng), a).expect("valid planted ensemble")
}

pub fn product_ensemble<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    s: usize,
    rng: &mut R,
) -> ProductEnsemble {
    let a = (0..s).map(|_| unit_vector(m, rng)).collect();
    let b = (0..s).map(|_| unit_vector(n, rng)).collect();
    ProductEnsemble::new(m, n, random_weights(s, rng), a, b).expect("valid random product ensemble")
}

/// Density matrix of rank `rank` (generically) from a random ensemble.
pub fn density<R: Rng + ?Sized>(m: usize, n: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    crate::state::density_from_ensemble(&ensemble(m, n, rank, rng)).expect("valid random density")
}

pub fn pure_state<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> PureState {
    PureState::new(m, n, unit_vector(m * n, rng)).expect("unit vector")
}

/// Pure state with Schmidt rank exactly `d`, built as `Σ_{i<d} s_i e_i ⊗ e'_i`
/// in Haar-random local bases with coefficients bounded away from zero.
pub fn pure_state_with_schmidt_rank<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    d: usize,
    rng: &mut R,
) -> PureState {
    assert!(
        d >= 1 && d <= m.min(n),
        "Schmidt rank {d} impossible on {m}x{n}"
    );
    let ua = haar_unitary_with(m, rng);
    let ub = haar_unitary_with(n, rng);
    let coeffs: Vec<f64> = (0..d).map(|_| rng.random_range(0.2..1.0)).collect();
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut amps = CVector::zeros(m * n);
    for (i, c) in coeffs.iter().enumerate() {
        let term = ua.column(i).kronecker(&ub.column(i));
        amps += term * Complex64::new(c / norm, 0.0);
    }
    let amps = amps.unscale(amps.norm());
    PureState::new(m, n, amps).expect("unit vector")
}
