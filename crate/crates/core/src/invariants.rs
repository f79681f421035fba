//! Membership in `V_A^k` / `V_B^k`, Schmidt numbers of pure states and
//! covariance of the varieties under local unitaries.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{
    frobenius, kernel_basis, kron, numerical_rank, numerical_rank_scaled, unitarity_deviation,
    CMatrix, CVector, RankPolicy,
};
use crate::pencil::{eval_m, eval_m_b, pure_coefficients, ProjectivePoint};
use crate::random::{haar_unitary_with, projective_point, task_rng};
use crate::state::{validate_density, DensityMatrix, PureState};

pub const UNITARY_TOL: f64 = 1e-12;

/// Samples whose rank margin falls below this ratio are reported as
/// near-threshold instead of being counted as agreements or disagreements.
pub const DEFAULT_NEAR_THRESHOLD_BAND: f64 = 10.0;

/// Serializes non-finite floats as the string `"inf"` so reports stay valid JSON.
pub(crate) fn serialize_margin<S: Serializer>(
    x: &f64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str("inf")
    }
}

/// Local unitary `U_A ⊗ U_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    ua: CMatrix,
    ub: CMatrix,
}

impl LocalUnitary {
    pub fn new(ua: CMatrix, ub: CMatrix) -> Result<Self> {
        for u in [&ua, &ub] {
            if !u.is_square() {
                return Err(Error::ShapeMismatch(format!(
                    "{}x{} local factor",
                    u.nrows(),
                    u.ncols()
                )));
            }
            let deviation = unitarity_deviation(u);
            if deviation > UNITARY_TOL {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(LocalUnitary { ua, ub })
    }

    pub fn identity(m: usize, n: usize) -> Self {
        LocalUnitary {
            ua: CMatrix::identity(m, m),
            ub: CMatrix::identity(n, n),
        }
    }

    /// Haar-random factors drawn from `rng`.
    pub fn haar<R: rand::Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Self {
        let ua = haar_unitary_with(m, rng);
        let ub = haar_unitary_with(n, rng);
        LocalUnitary { ua, ub }
    }

    pub fn ua(&self) -> &CMatrix {
        &self.ua
    }

    pub fn ub(&self) -> &CMatrix {
        &self.ub
    }

    pub fn full(&self) -> CMatrix {
        kron(&self.ua, &self.ub)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipResult {
    pub member: bool,
    pub rank: usize,
    /// Rank margin, see [`crate::RankInfo::margin`].
    #[serde(serialize_with = "serialize_margin")]
    pub margin: f64,
    pub k: usize,
}

fn membership(mat: &CMatrix, reference: f64, k: usize, policy: &RankPolicy) -> MembershipResult {
    let info = numerical_rank_scaled(mat, policy, reference);
    MembershipResult {
        member: info.rank <= k,
        rank: info.rank,
        margin: info.margin,
        k,
    }
}

/// A-priori bound `|r|^2 ‖ρ‖_F ≥ ‖M(r)‖` used as the rank reference scale.
pub fn form_reference(rho: &DensityMatrix, r: &ProjectivePoint) -> f64 {
    r.coords().norm_squared() * frobenius(rho.matrix())
}

/// Is `r` in `V_A^k(ρ)`, i.e. `rank M(r) ≤ k`?
pub fn member_va(
    rho: &DensityMatrix,
    r: &ProjectivePoint,
    k: usize,
    policy: &RankPolicy,
) -> Result<MembershipResult> {
    let n = rho.dim_b();
    if k >= n {
        return Err(Error::KOutOfRange { k, max: n - 1 });
    }
    Ok(membership(
        &eval_m(rho, r)?,
        form_reference(rho, r),
        k,
        policy,
    ))
}

/// Is `r'` in `V_B^k(ρ)`?
pub fn member_vb(
    rho: &DensityMatrix,
    r: &ProjectivePoint,
    k: usize,
    policy: &RankPolicy,
) -> Result<MembershipResult> {
    let m = rho.dim_a();
    if k >= m {
        return Err(Error::KOutOfRange { k, max: m - 1 });
    }
    Ok(membership(
        &eval_m_b(rho, r)?,
        form_reference(rho, r),
        k,
        policy,
    ))
}

/// Schmidt data of a pure state read from its kernel variety `V^0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtReport {
    pub d: usize,
    /// Projective dimension of `V^0`; `None` when the variety is empty.
    #[serde(serialize_with = "serialize_v0_dim")]
    pub v0_dim: Option<usize>,
    /// Nonzero Schmidt coefficients, descending.
    pub schmidt_coefficients: Vec<f64>,
    /// True when `m > n` and the factors were exchanged, so `v0_dim`
    /// refers to `V_B^0` of the original state.
    pub swapped: bool,
}

fn serialize_v0_dim<S: Serializer>(
    v: &Option<usize>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(d) => s.serialize_u64(*d as u64),
        None => s.serialize_str("EMPTY"),
    }
}

pub fn schmidt_number(v: &PureState, policy: &RankPolicy) -> SchmidtReport {
    let swapped = v.dim_a() > v.dim_b();
    let oriented = if swapped { v.swap() } else { v.clone() };
    let m = oriented.dim_a();
    let coeffs = pure_coefficients(&oriented);
    let info = numerical_rank(coeffs.entries(), policy);
    let d = info.rank;
    SchmidtReport {
        d,
        v0_dim: if d == m { None } else { Some(m - 1 - d) },
        schmidt_coefficients: info.singular_values[..d].to_vec(),
        swapped,
    }
}

/// Orthonormal basis of `V_A^0(P_v)`: the kernel of the coefficient matrix
/// of the linear forms `R(r)`.
pub fn v0_kernel_basis(v: &PureState, policy: &RankPolicy) -> Vec<ProjectivePoint> {
    let kernel = kernel_basis(pure_coefficients(v).entries(), policy);
    kernel
        .column_iter()
        .map(|c| ProjectivePoint::new(c.into_owned()).expect("kernel vectors are unit"))
        .collect()
}

/// For a Schmidt-rank-one state, unit factors `(a, b)` with `v ≈ a ⊗ b`.
pub fn recover_product_factors(v: &PureState, policy: &RankPolicy) -> Option<(CVector, CVector)> {
    // Coefficient matrix entries (j, i) = a_i b_j, i.e. C = b a^T.
    let c = pure_coefficients(v).entries().clone();
    let svd = nalgebra::SVD::new(c.clone(), true, true);
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let info = crate::linalg::RankInfo::from_singular_values(sv, c.nrows(), c.ncols(), policy);
    if info.rank != 1 {
        return None;
    }
    let u = svd.u.as_ref()?;
    let v_t = svd.v_t.as_ref()?;
    let b = u.column(0).into_owned();
    // Row 0 of V^† is w^†; C = σ b w^† gives a^T = σ w^†.
    let a = CVector::from_fn(c.ncols(), |i, _| v_t[(0, i)]);
    let a = a.unscale(a.norm());
    Some((a, b))
}

/// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)^†`.
pub fn transform_local(rho: &DensityMatrix, t: &LocalUnitary) -> Result<DensityMatrix> {
    if t.ua.nrows() != rho.dim_a() || t.ub.nrows() != rho.dim_b() {
        return Err(Error::ShapeMismatch(format!(
            "local unitary acts on {}x{}, state is {}x{}",
            t.ua.nrows(),
            t.ub.nrows(),
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    let u = t.full();
    let out = &u * rho.matrix() * u.adjoint();
    validate_density((&out + out.adjoint()).scale(0.5), rho.dim_a(), rho.dim_b())
}

/// `r'_l = Σ_i r_i u_il`, canonically normalized.
pub fn pushforward_point(r: &ProjectivePoint, ua: &CMatrix) -> Result<ProjectivePoint> {
    if ua.nrows() != r.dim() || ua.ncols() != r.dim() {
        return Err(Error::ShapeMismatch(format!(
            "point of dimension {} and {}x{} unitary",
            r.dim(),
            ua.nrows(),
            ua.ncols()
        )));
    }
    ProjectivePoint::new(ua.transpose() * r.coords())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceSample {
    pub transformed: bool,
    pub original: bool,
    pub margin: f64,
}

impl CovarianceSample {
    pub fn agrees(&self) -> bool {
        self.transformed == self.original
    }
}

/// Compares `r ∈ V_A^k(T ρ)` with `r' ∈ V_A^k(ρ)` for the pushed-forward `r'`.
pub fn covariance_sample(
    rho: &DensityMatrix,
    transformed: &DensityMatrix,
    t: &LocalUnitary,
    r: &ProjectivePoint,
    k: usize,
    policy: &RankPolicy,
) -> Result<CovarianceSample> {
    let lhs = member_va(transformed, r, k, policy)?;
    let rhs = member_va(rho, &pushforward_point(r, &t.ua)?, k, policy)?;
    Ok(CovarianceSample {
        transformed: lhs.member,
        original: rhs.member,
        margin: lhs.margin.min(rhs.margin),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub agree: usize,
    pub disagree: usize,
    pub near_threshold: usize,
    #[serde(serialize_with = "serialize_margin")]
    pub min_margin: f64,
}

impl CovarianceReport {
    pub fn samples(&self) -> usize {
        self.agree + self.disagree + self.near_threshold
    }

    pub fn accumulate(&mut self, sample: &CovarianceSample, band: f64) {
        self.min_margin = self.min_margin.min(sample.margin);
        if sample.margin < band {
            self.near_threshold += 1;
        } else if sample.agrees() {
            self.agree += 1;
        } else {
            self.disagree += 1;
        }
    }
}

impl Default for CovarianceReport {
    fn default() -> Self {
        CovarianceReport {
            agree: 0,
            disagree: 0,
            near_threshold: 0,
            min_margin: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceOptions {
    pub samples: usize,
    pub seed: u64,
    pub band: f64,
}

impl Default for CovarianceOptions {
    fn default() -> Self {
        CovarianceOptions {
            samples: 100,
            seed: 42,
            band: DEFAULT_NEAR_THRESHOLD_BAND,
        }
    }
}

/// Statistical check of `V_A^k(Tρ) = U_A^{-1}(V_A^k(ρ))` over sampled points.
///
/// Sample `i` draws its point from stream `i` of `seed`, so the report does
/// not depend on thread scheduling.
pub fn check_covariance(
    rho: &DensityMatrix,
    t: &LocalUnitary,
    k: usize,
    opts: &CovarianceOptions,
    policy: &RankPolicy,
) -> Result<CovarianceReport> {
    if opts.samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    let transformed = transform_local(rho, t)?;
    let samples: Vec<CovarianceSample> = (0..opts.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(opts.seed, i as u64);
            let r = projective_point(rho.dim_a(), &mut rng);
            covariance_sample(rho, &transformed, t, &r, k, policy)
        })
        .collect::<Result<_>>()?;
    let mut report = CovarianceReport::default();
    for s in &samples {
        report.accumulate(s, opts.band);
    }
    Ok(report)
}
