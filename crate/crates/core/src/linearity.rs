//! Sampling diagnostic for the linearity of `V_A^k`.
//!
//! For a separable decomposition every minor of the pencil is a product of
//! linear forms, and `V_A^k` is a finite union of linear subspaces. A minor
//! that provably does not split, together with a point pair `p, q ∈ V`
//! whose midpoint leaves `V` at the quadratic rate of a curved sheet, shows
//! that `V_A^k` is not linear, hence that the state is entangled. Nothing
//! here ever concludes separability.

use nalgebra::SVD;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{factor_into_linear_forms, FactorOptions, FactorStatus, PlaneEvidence};
use crate::invariants::{serialize_margin, DEFAULT_NEAR_THRESHOLD_BAND};
use crate::linalg::{max_abs_diff, CMatrix, CVector, RankPolicy};
use crate::minors::{pencil_minor_polys, pencil_rank, Minor, MinorCaps};
use crate::pencil::{PencilBlocks, ProjectivePoint};
use crate::poly::MultiPoly;
use crate::random::{gaussian_vector, seeded_rng, unit_vector, DetRng};
use crate::state::{density_from_ensemble, DensityMatrix, Ensemble};

/// Largest allowed `max |ρ - Σ p_u |ψ_u><ψ_u||`.
pub const ENSEMBLE_TOL: f64 = 1e-10;
/// Step from `p` towards the second point of a witness.
pub const WITNESS_STEP: f64 = 1e-2;
/// Accepted range for the ratio of midpoint deviations at steps `δ` and `δ/2`.
pub const CURVATURE_RATIO: (f64, f64) = (2.5, 6.5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    ConsistentWithSeparable,
    NonlinearVarietyWitness,
    Inconclusive,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MinorTally {
    pub total: usize,
    pub zero: usize,
    pub factored: usize,
    pub not_product: usize,
    pub inconclusive: usize,
}

/// Data backing a `NonlinearVarietyWitness` verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub p: Vec<Complex64>,
    pub q: Vec<Complex64>,
    pub midpoint: Vec<Complex64>,
    pub p_rank: usize,
    pub q_rank: usize,
    pub midpoint_rank: usize,
    #[serde(serialize_with = "serialize_margin")]
    pub midpoint_margin: f64,
    /// `σ_{k+1}` of the pencil at the midpoint, relative to the pencil scale,
    /// for steps `δ` and `δ/2`.
    pub deviation: f64,
    pub deviation_half: f64,
    /// Rows and columns of the minor that does not split.
    pub minor_rows: Vec<usize>,
    pub minor_cols: Vec<usize>,
    pub certificate: Vec<PlaneEvidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearityReport {
    pub verdict: Verdict,
    pub k: usize,
    pub ensemble_terms: usize,
    pub ensemble_weights: Vec<f64>,
    pub minors: MinorTally,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearityOptions {
    pub trials: usize,
    pub seed: u64,
    pub policy: RankPolicy,
    pub caps: MinorCaps,
}

impl Default for LinearityOptions {
    fn default() -> Self {
        LinearityOptions {
            trials: 20,
            seed: 42,
            policy: RankPolicy::default(),
            caps: MinorCaps::default(),
        }
    }
}

pub fn check_ensemble(rho: &DensityMatrix, ensemble: &Ensemble) -> Result<()> {
    if ensemble.dim_a() != rho.dim_a() || ensemble.dim_b() != rho.dim_b() {
        return Err(Error::ShapeMismatch(format!(
            "ensemble is {}x{}, state is {}x{}",
            ensemble.dim_a(),
            ensemble.dim_b(),
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    let deviation = max_abs_diff(density_from_ensemble(ensemble)?.matrix(), rho.matrix());
    if deviation > ENSEMBLE_TOL {
        return Err(Error::EnsembleMismatch { deviation });
    }
    Ok(())
}

pub fn linearity_diagnostic(
    rho: &DensityMatrix,
    ensemble: &Ensemble,
    k: usize,
    opts: &LinearityOptions,
) -> Result<LinearityReport> {
    check_ensemble(rho, ensemble)?;
    let pb = PencilBlocks::from_ensemble(ensemble);
    let minors = pencil_minor_polys(&pb, k, &opts.caps)?;
    let factor_opts = FactorOptions {
        seed: opts.seed,
        ..FactorOptions::default()
    };

    let mut tally = MinorTally {
        total: minors.len(),
        ..MinorTally::default()
    };
    let mut obstruction: Option<(&Minor, Vec<PlaneEvidence>)> = None;
    for minor in &minors {
        if minor.poly.is_zero() {
            tally.zero += 1;
            continue;
        }
        let res = factor_into_linear_forms(&minor.poly, &factor_opts)?;
        match res.status {
            FactorStatus::Factored => tally.factored += 1,
            FactorStatus::Inconclusive => tally.inconclusive += 1,
            FactorStatus::NotProductOfLinearForms => {
                tally.not_product += 1;
                obstruction.get_or_insert((minor, res.certificate));
            }
        }
    }

    let mut report = LinearityReport {
        verdict: Verdict::Inconclusive,
        k,
        ensemble_terms: ensemble.len(),
        ensemble_weights: ensemble.weights().to_vec(),
        minors: tally,
        witness: None,
    };
    if report.minors.not_product == 0 && report.minors.inconclusive == 0 {
        report.verdict = Verdict::ConsistentWithSeparable;
        return Ok(report);
    }
    if let Some((minor, certificate)) = obstruction {
        let search = WitnessSearch::new(&pb, &minors, k, opts.policy);
        let mut rng = seeded_rng(opts.seed);
        for _ in 0..opts.trials {
            if let Some(mut w) = search.attempt(&mut rng)? {
                w.minor_rows = minor.rows.clone();
                w.minor_cols = minor.cols.clone();
                w.certificate = certificate;
                report.verdict = Verdict::NonlinearVarietyWitness;
                report.witness = Some(w);
                break;
            }
        }
    }
    Ok(report)
}

struct Equation {
    poly: MultiPoly,
    gradient: Vec<MultiPoly>,
}

struct WitnessSearch<'a> {
    pb: &'a PencilBlocks,
    equations: Vec<Equation>,
    k: usize,
    policy: RankPolicy,
}

impl<'a> WitnessSearch<'a> {
    fn new(pb: &'a PencilBlocks, minors: &[Minor], k: usize, policy: RankPolicy) -> Self {
        let equations = minors
            .iter()
            .filter(|mi| !mi.poly.is_zero())
            .map(|mi| {
                let poly = mi.poly.scale(Complex64::from(1.0 / mi.poly.max_coef()));
                let gradient = (0..poly.vars()).map(|i| poly.derivative(i)).collect();
                Equation { poly, gradient }
            })
            .collect();
        WitnessSearch {
            pb,
            equations,
            k,
            policy,
        }
    }

    /// Gauss–Newton on the normalized minors plus the affine constraints
    /// `C r = d`. Returns a point where every minor is at rounding level.
    fn solve(&self, start: &CVector, c: &CMatrix, d: &CVector) -> Option<CVector> {
        let m = start.len();
        let rows = self.equations.len() + c.nrows();
        let mut r = start.clone();
        for _ in 0..60 {
            let mut f = CVector::zeros(rows);
            let mut jac = CMatrix::zeros(rows, m);
            for (a, eq) in self.equations.iter().enumerate() {
                f[a] = eq.poly.eval(r.as_slice());
                for i in 0..m {
                    jac[(a, i)] = eq.gradient[i].eval(r.as_slice());
                }
            }
            let off = self.equations.len();
            let lin = c * &r - d;
            for a in 0..c.nrows() {
                f[off + a] = lin[a];
                for i in 0..m {
                    jac[(off + a, i)] = c[(a, i)];
                }
            }
            if f.norm()
                < 1e-14
                    * (1.0 + r.norm())
                        .powi(self.equations.first().map_or(1, |e| e.poly.degree()) as i32)
            {
                return Some(r);
            }
            let svd = SVD::new(jac, true, true);
            let step = svd.solve(&(-f), 1e-12).ok()?;
            r += &step;
            if !r.iter().all(|z| z.re.is_finite() && z.im.is_finite()) || r.norm() > 1e6 {
                return None;
            }
        }
        None
    }

    fn rank_at(&self, r: &CVector) -> Result<(usize, f64, f64)> {
        let pt = ProjectivePoint::new(r.clone())?;
        let info = pencil_rank(self.pb, &pt, &self.policy)?;
        let scale = info
            .singular_values
            .first()
            .copied()
            .unwrap_or(0.0)
            .max(f64::MIN_POSITIVE);
        let next = info.singular_values.get(self.k).copied().unwrap_or(0.0);
        Ok((info.rank, info.margin, next / scale))
    }

    /// A point of `V` near `p` on the slice `p^† r = p^† p`, `w^† (r - p) = δ`.
    fn neighbour(&self, p: &CVector, w: &CVector, delta: f64) -> Option<CVector> {
        let m = p.len();
        let c = CMatrix::from_fn(2, m, |a, i| if a == 0 { p[i].conj() } else { w[i].conj() });
        let d = CVector::from_vec(vec![p.dotc(p), w.dotc(p) + Complex64::from(delta)]);
        self.solve(&(p + w * Complex64::from(delta)), &c, &d)
    }

    fn attempt(&self, rng: &mut DetRng) -> Result<Option<Witness>> {
        let m = self.pb.dim_a();
        let band = DEFAULT_NEAR_THRESHOLD_BAND;
        let start = unit_vector(m, rng);
        let chart = gaussian_vector(m, rng);
        let c = CMatrix::from_fn(1, m, |_, i| chart[i].conj());
        let d = CVector::from_vec(vec![chart.dotc(&start)]);
        let Some(p) = self.solve(&start, &c, &d) else {
            return Ok(None);
        };
        let p = &p / Complex64::from(p.norm());
        let (p_rank, p_margin, _) = self.rank_at(&p)?;
        if p_rank > self.k || p_margin < band {
            return Ok(None);
        }
        // Direction orthogonal to p.
        let mut w = gaussian_vector(m, rng);
        w -= &p * p.dotc(&w);
        w /= Complex64::from(w.norm());
        if rng.random::<bool>() {
            w = -w;
        }

        let mut deviations = [0.0; 2];
        let mut first = None;
        for (slot, delta) in [WITNESS_STEP, WITNESS_STEP / 2.0].into_iter().enumerate() {
            let Some(q) = self.neighbour(&p, &w, delta) else {
                return Ok(None);
            };
            let (q_rank, q_margin, _) = self.rank_at(&q)?;
            if q_rank > self.k || q_margin < band {
                return Ok(None);
            }
            let mid = (&p + &q) * Complex64::from(0.5);
            let (mid_rank, mid_margin, dev) = self.rank_at(&mid)?;
            if mid_rank <= self.k || mid_margin < band {
                return Ok(None);
            }
            deviations[slot] = dev;
            if slot == 0 {
                first = Some((q, q_rank, mid, mid_rank, mid_margin));
            }
        }
        let ratio = deviations[0] / deviations[1];
        if !(CURVATURE_RATIO.0..=CURVATURE_RATIO.1).contains(&ratio) {
            return Ok(None);
        }
        let (q, q_rank, mid, mid_rank, mid_margin) = first.expect("first step recorded");
        Ok(Some(Witness {
            p: p.as_slice().to_vec(),
            q: q.as_slice().to_vec(),
            midpoint: mid.as_slice().to_vec(),
            p_rank,
            q_rank,
            midpoint_rank: mid_rank,
            midpoint_margin: mid_margin,
            deviation: deviations[0],
            deviation_half: deviations[1],
            minor_rows: Vec::new(),
            minor_cols: Vec::new(),
            certificate: Vec::new(),
        }))
    }
}
