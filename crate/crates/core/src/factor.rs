//! Splitting homogeneous polynomials into linear forms.
//!
//! Binary forms always split over `C`; their factors come from the roots of
//! the dehomogenized univariate polynomial. For three or more variables,
//! candidate factors are read off restrictions to random planes: a root `z`
//! of the restriction that lies on the hyperplane `ℓ = 0` of a factor of
//! multiplicity `e` has `∇(D_w^{e-1} p)(z) ∝ ℓ`. Every candidate is accepted
//! only after exact division leaves a negligible remainder, so `Factored` is
//! always backed by re-expansion. `NotProductOfLinearForms` is reported only
//! when, on at least three independent planes, a simple and well separated
//! root produced a candidate whose division remainder is clearly nonzero.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{CVector, ZERO};
use crate::poly::{LinearForm, MultiPoly};
use crate::random::{gaussian_vector, seeded_rng};

/// Relative remainder below which a candidate divides the polynomial.
pub const DIVISION_ACCEPT: f64 = 1e-9;
/// Relative remainder above which a failed division counts as evidence.
pub const DIVISION_REJECT: f64 = 1e-6;
/// Largest accepted re-expansion residual for `Factored`.
pub const FACTOR_RESIDUAL_TOL: f64 = 1e-9;
/// Chordal distance under which roots on a plane are merged.
const CLUSTER_DIST: f64 = 1e-3;
/// A root counts as well separated beyond this chordal distance.
const SEPARATION: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FactorStatus {
    Factored,
    NotProductOfLinearForms,
    Inconclusive,
}

/// Failed lifting on one plane: a simple root, the candidate form read from
/// the gradient there and the relative division remainder it left.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaneEvidence {
    pub plane: [Vec<Complex64>; 2],
    pub root: Vec<Complex64>,
    pub candidate: Vec<Complex64>,
    pub remainder: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationResult {
    pub status: FactorStatus,
    pub constant: Complex64,
    #[serde(serialize_with = "serialize_forms")]
    pub factors: Vec<LinearForm>,
    /// `max |c Π ℓ - p| / max |p|` over coefficients, for the factors found.
    pub residual: f64,
    /// Division certificate, present for `NotProductOfLinearForms`.
    pub certificate: Vec<PlaneEvidence>,
}

fn serialize_forms<S: serde::Serializer>(
    forms: &[LinearForm],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(forms.len()))?;
    for f in forms {
        seq.serialize_element(f.coefficients().as_slice())?;
    }
    seq.end()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorOptions {
    pub seed: u64,
    /// Random planes tried per factor before giving up.
    pub planes: usize,
    /// Independent failing planes required for a certificate.
    pub certificate_planes: usize,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            seed: 42,
            planes: 6,
            certificate_planes: 3,
        }
    }
}

// ---------------------------------------------------------------------------
// Univariate roots

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of `Σ c_j t^j` (coefficients ascending, leading one nonzero) by
/// Aberth–Ehrlich iteration followed by Newton polishing.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Vec::new();
    }
    let lead = coeffs[d];
    assert!(lead != ZERO, "leading coefficient must be nonzero");
    if d == 1 {
        return vec![-coeffs[0] / lead];
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    // Initial guesses on a circle of radius |c_0|^(1/d), offset to break symmetry.
    let radius = monic[0].norm().powf(1.0 / d as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            Complex64::from_polar(
                radius,
                2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4,
            )
        })
        .collect();
    for _ in 0..2000 {
        let mut biggest: f64 = 0.0;
        for k in 0..d {
            let (p, dp) = horner(&monic, z[k]);
            if p == ZERO {
                continue;
            }
            let ratio = if dp == ZERO {
                Complex64::new(1e-8, 1e-8)
            } else {
                p / dp
            };
            let sum: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| {
                    let diff = z[k] - z[j];
                    if diff == ZERO {
                        ZERO
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let step = if denom == ZERO { ratio } else { ratio / denom };
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                biggest = biggest.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if biggest < 1e-15 {
            break;
        }
    }
    // Polish isolated roots only: moving members of a cluster one at a time
    // would spoil the accuracy of the cluster mean.
    let snapshot = z.clone();
    for (k, root) in z.iter_mut().enumerate() {
        let isolated = snapshot
            .iter()
            .enumerate()
            .all(|(j, other)| j == k || (*root - other).norm() > 1e-3 * (1.0 + root.norm()));
        if isolated {
            polish(&monic, root);
        }
    }
    z
}

/// Replaces every cluster of `e` nearby roots by a single root of the
/// `(e-1)`-th derivative, refined by Newton from the cluster mean, repeated
/// `e` times. That root is simple, so it is accurate to working precision.
pub fn merge_root_clusters(coeffs: &[Complex64], roots: &[Complex64]) -> Vec<Complex64> {
    let mut taken = vec![false; roots.len()];
    let mut out = Vec::with_capacity(roots.len());
    for i in 0..roots.len() {
        if taken[i] {
            continue;
        }
        let members: Vec<usize> = (i..roots.len())
            .filter(|&j| !taken[j] && (roots[j] - roots[i]).norm() < 1e-3 * (1.0 + roots[i].norm()))
            .collect();
        for &j in &members {
            taken[j] = true;
        }
        let e = members.len();
        let mean = members.iter().map(|&j| roots[j]).sum::<Complex64>() / e as f64;
        let refined = if e == 1 {
            roots[i]
        } else {
            refine_multiple(coeffs, mean, e - 1)
        };
        out.extend(std::iter::repeat_n(refined, e));
    }
    out
}

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c * j as f64)
        .collect()
}

fn refine_multiple(coeffs: &[Complex64], start: Complex64, order: usize) -> Complex64 {
    let mut root = start;
    if start.norm() > 1.0 {
        // Work with s = 1/t on the reversed polynomial.
        let mut rev: Vec<Complex64> = coeffs.iter().rev().copied().collect();
        for _ in 0..order {
            rev = derivative(&rev);
        }
        let mut s = start.inv();
        newton(&rev, &mut s);
        if s != ZERO {
            root = s.inv();
        }
    } else {
        let mut d = coeffs.to_vec();
        for _ in 0..order {
            d = derivative(&d);
        }
        newton(&d, &mut root);
    }
    root
}

/// Newton steps on `p` (or on the reversed polynomial for roots outside the
/// unit disc) while they reduce the residual.
fn polish(coeffs: &[Complex64], root: &mut Complex64) {
    if root.norm() > 1.0 {
        let rev: Vec<Complex64> = coeffs.iter().rev().copied().collect();
        let mut s = root.inv();
        newton(&rev, &mut s);
        if s != ZERO {
            *root = s.inv();
        }
    } else {
        newton(coeffs, root);
    }
}

fn newton(coeffs: &[Complex64], z: &mut Complex64) {
    let (mut p, _) = horner(coeffs, *z);
    for _ in 0..4 {
        let (_, dp) = horner(coeffs, *z);
        if dp == ZERO {
            return;
        }
        let cand = *z - p / dp;
        let (pc, _) = horner(coeffs, cand);
        if pc.norm() < p.norm() {
            *z = cand;
            p = pc;
        } else {
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Binary forms

/// Roots of a nonzero binary form as unit vectors `(r_1, r_2)`, listed with
/// multiplicity, and its leading nonzero coefficient.
fn binary_roots(p: &MultiPoly, merge: bool) -> (Complex64, Vec<[Complex64; 2]>) {
    debug_assert_eq!(p.vars(), 2);
    let deg = p.degree();
    // c_j multiplies r_1^j r_2^(deg - j).
    let c: Vec<Complex64> = (0..=deg)
        .map(|j| p.coefficient(&[j as u32, (deg - j) as u32]))
        .collect();
    let lo = c.iter().position(|z| *z != ZERO).expect("nonzero form");
    let hi = c.iter().rposition(|z| *z != ZERO).expect("nonzero form");
    let mut roots = Vec::with_capacity(deg);
    let one = Complex64::new(1.0, 0.0);
    // r_1^lo: root (0, 1); r_2^(deg - hi): root (1, 0).
    roots.extend(std::iter::repeat_n([ZERO, one], lo));
    roots.extend(std::iter::repeat_n([one, ZERO], deg - hi));
    let mut affine = polynomial_roots(&c[lo..=hi]);
    if merge {
        affine = merge_root_clusters(&c[lo..=hi], &affine);
    }
    for t in affine {
        let norm = (t.norm_sqr() + 1.0).sqrt();
        roots.push([t / norm, one / norm]);
    }
    (c[hi], roots)
}

fn chordal(a: &[Complex64; 2], b: &[Complex64; 2]) -> f64 {
    let inner = a[0].conj() * b[0] + a[1].conj() * b[1];
    (1.0 - inner.norm_sqr()).max(0.0).sqrt()
}

fn factor_binary(p: &MultiPoly) -> FactorizationResult {
    // Merging is right for true multiple roots and wrong for distinct roots
    // closer than the cluster radius. Keep whichever reproduces `p` better.
    let (_, raw) = binary_roots(p, false);
    let (_, merged) = binary_roots(p, true);
    let raw = finish(p, forms_vanishing_at(&raw), Vec::new());
    let clustered = finish(p, forms_vanishing_at(&merged), Vec::new());
    if clustered.residual < raw.residual {
        clustered
    } else {
        raw
    }
}

/// The form vanishing at `(a, b)` is `b r_1 - a r_2`.
fn forms_vanishing_at(roots: &[[Complex64; 2]]) -> Vec<LinearForm> {
    roots
        .iter()
        .map(|[a, b]| {
            LinearForm::new(CVector::from_vec(vec![*b, -*a]))
                .expect("unit root")
                .0
        })
        .collect()
}

fn expand_product(vars: usize, constant: Complex64, factors: &[LinearForm]) -> MultiPoly {
    factors
        .iter()
        .fold(MultiPoly::constant(vars, constant), |acc, f| {
            &acc * &f.to_poly()
        })
}

/// Fits the constant by least squares against `p` and checks the residual.
fn finish(
    p: &MultiPoly,
    factors: Vec<LinearForm>,
    certificate: Vec<PlaneEvidence>,
) -> FactorizationResult {
    let unit = expand_product(p.vars(), Complex64::new(1.0, 0.0), &factors);
    let (num, den) = unit.terms().fold((ZERO, 0.0), |(n, d), (e, c)| {
        (n + c.conj() * p.coefficient(e), d + c.norm_sqr())
    });
    let constant = if den > 0.0 { num / den } else { ZERO };
    let rebuilt = unit.scale(constant);
    let residual = rebuilt.max_coef_diff(p) / p.max_coef().max(f64::MIN_POSITIVE);
    let status = if residual <= FACTOR_RESIDUAL_TOL {
        FactorStatus::Factored
    } else {
        FactorStatus::Inconclusive
    };
    FactorizationResult {
        status,
        constant,
        factors,
        residual,
        certificate,
    }
}

// ---------------------------------------------------------------------------
// General case

struct Cluster {
    point: [Complex64; 2],
    size: usize,
    separation: f64,
}

fn cluster_roots(roots: &[[Complex64; 2]]) -> Vec<Cluster> {
    let mut assigned = vec![false; roots.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..roots.len() {
        if assigned[i] {
            continue;
        }
        let mut group = vec![i];
        assigned[i] = true;
        for j in i + 1..roots.len() {
            if !assigned[j] && chordal(&roots[i], &roots[j]) < CLUSTER_DIST {
                assigned[j] = true;
                group.push(j);
            }
        }
        groups.push(group);
    }
    let centers: Vec<[Complex64; 2]> = groups
        .iter()
        .map(|g| {
            let first = roots[g[0]];
            let mut acc = [ZERO, ZERO];
            for &i in g {
                let r = roots[i];
                let inner = first[0].conj() * r[0] + first[1].conj() * r[1];
                let phase = if inner.norm() > 0.0 {
                    inner.conj() / inner.norm()
                } else {
                    Complex64::new(1.0, 0.0)
                };
                acc[0] += r[0] * phase;
                acc[1] += r[1] * phase;
            }
            let norm = (acc[0].norm_sqr() + acc[1].norm_sqr()).sqrt();
            [acc[0] / norm, acc[1] / norm]
        })
        .collect();
    groups
        .iter()
        .enumerate()
        .map(|(gi, g)| {
            let separation = centers
                .iter()
                .enumerate()
                .filter(|&(gj, _)| gj != gi)
                .map(|(_, c)| chordal(&centers[gi], c))
                .fold(f64::INFINITY, f64::min);
            Cluster {
                point: centers[gi],
                size: g.len(),
                separation,
            }
        })
        .collect()
}

fn restrict_to_plane(p: &MultiPoly, x: &CVector, y: &CVector) -> MultiPoly {
    let images: Vec<MultiPoly> = (0..p.vars())
        .map(|i| MultiPoly::linear(&[x[i], y[i]]))
        .collect();
    p.compose_linear(&images)
}

fn relative_remainder(p: &MultiPoly, form: &LinearForm) -> (MultiPoly, f64) {
    let (q, rem) = p.div_rem_linear(form);
    (q, rem.max_coef() / p.max_coef().max(f64::MIN_POSITIVE))
}

/// Factors a homogeneous polynomial of positive degree into linear forms.
pub fn factor_into_linear_forms(
    p: &MultiPoly,
    opts: &FactorOptions,
) -> Result<FactorizationResult> {
    if p.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    let vars = p.vars();
    if p.is_zero() {
        return Ok(FactorizationResult {
            status: FactorStatus::Factored,
            constant: ZERO,
            factors: Vec::new(),
            residual: 0.0,
            certificate: Vec::new(),
        });
    }
    match vars {
        0 => Err(Error::DegreeZero),
        1 => {
            let (form, _) = LinearForm::new(CVector::from_vec(vec![Complex64::new(1.0, 0.0)]))?;
            Ok(finish(p, vec![form; p.degree()], Vec::new()))
        }
        2 => Ok(factor_binary(p)),
        _ => Ok(factor_general(p, opts)),
    }
}

fn factor_general(p: &MultiPoly, opts: &FactorOptions) -> FactorizationResult {
    let vars = p.vars();
    let mut rng = seeded_rng(opts.seed);
    let mut rest = p.clone();
    let mut factors: Vec<LinearForm> = Vec::new();

    'outer: while rest.degree() > 0 {
        if rest.degree() == 1 {
            let coeffs = CVector::from_fn(vars, |i, _| {
                let mut e = vec![0u32; vars];
                e[i] = 1;
                rest.coefficient(&e)
            });
            if let Ok((form, _)) = LinearForm::new(coeffs) {
                factors.push(form);
            }
            break;
        }
        let mut evidence: Vec<PlaneEvidence> = Vec::new();
        for _ in 0..opts.planes {
            let x = gaussian_vector(vars, &mut rng);
            let y = gaussian_vector(vars, &mut rng);
            let g = restrict_to_plane(&rest, &x, &y);
            if g.is_zero() {
                continue;
            }
            let (_, roots) = binary_roots(&g, true);
            let mut clusters = cluster_roots(&roots);
            clusters.sort_by(|a, b| {
                a.size
                    .cmp(&b.size)
                    .then(b.separation.total_cmp(&a.separation))
            });
            let mut plane_evidence = None;
            for cl in &clusters {
                let z: Vec<Complex64> = (0..vars)
                    .map(|i| cl.point[0] * x[i] + cl.point[1] * y[i])
                    .collect();
                let w = gaussian_vector(vars, &mut rng);
                let mut probe = rest.clone();
                for _ in 1..cl.size {
                    probe = probe.directional_derivative(w.as_slice());
                }
                let grad = probe.gradient_at(&z);
                let grad_scale = grad.norm() / probe.max_coef().max(f64::MIN_POSITIVE);
                let Ok((form, _)) = LinearForm::new(grad.clone()) else {
                    continue;
                };
                let (quot, rel) = relative_remainder(&rest, &form);
                if rel <= DIVISION_ACCEPT {
                    factors.push(form.clone());
                    rest = quot;
                    // Strip further copies of the same factor.
                    while rest.degree() > 0 {
                        let (q2, rel2) = relative_remainder(&rest, &form);
                        if rel2 > DIVISION_ACCEPT {
                            break;
                        }
                        factors.push(form.clone());
                        rest = q2;
                    }
                    continue 'outer;
                }
                if cl.size == 1
                    && cl.separation >= SEPARATION
                    && grad_scale > 1e-8
                    && rel > DIVISION_REJECT
                {
                    plane_evidence.get_or_insert(PlaneEvidence {
                        plane: [x.as_slice().to_vec(), y.as_slice().to_vec()],
                        root: z.clone(),
                        candidate: form.coefficients().as_slice().to_vec(),
                        remainder: rel,
                    });
                }
            }
            if let Some(ev) = plane_evidence {
                evidence.push(ev);
            }
        }
        let status = if evidence.len() >= opts.certificate_planes {
            FactorStatus::NotProductOfLinearForms
        } else {
            FactorStatus::Inconclusive
        };
        let partial = expand_product(vars, Complex64::new(1.0, 0.0), &factors);
        let residual = (&partial * &rest).max_coef_diff(p) / p.max_coef();
        return FactorizationResult {
            status,
            constant: Complex64::new(1.0, 0.0),
            factors,
            residual,
            certificate: if status == FactorStatus::NotProductOfLinearForms {
                evidence
            } else {
                Vec::new()
            },
        };
    }
    finish(p, factors, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{complex_gaussian, seeded_rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quadric() -> MultiPoly {
        MultiPoly::from_terms(
            3,
            2,
            vec![(vec![1, 1, 0], c(1.0, 0.0)), (vec![0, 0, 2], c(-1.0, 0.0))],
        )
        .unwrap()
    }

    #[test]
    fn univariate_roots() {
        // (t - 1)(t + 2)(t - i) = t^3 + (1 - i) t^2 + (-2 - i) t + 2i
        let roots = polynomial_roots(&[c(0.0, 2.0), c(-2.0, -1.0), c(1.0, -1.0), c(1.0, 0.0)]);
        for want in [c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0)] {
            assert!(roots.iter().any(|r| (r - want).norm() < 1e-12), "{roots:?}");
        }
    }

    #[test]
    fn constructed_binary_product() {
        let a = MultiPoly::linear(&[c(1.0, 0.0), c(1.0, 0.0)]);
        let b = MultiPoly::linear(&[c(1.0, 0.0), c(-2.0, 0.0)]);
        let p = &a * &b;
        let res = factor_into_linear_forms(&p, &FactorOptions::default()).unwrap();
        assert_eq!(res.status, FactorStatus::Factored);
        assert_eq!(res.factors.len(), 2);
        assert!(res.residual <= 1e-12);
    }

    #[test]
    fn binary_forms_with_roots_at_zero_and_infinity() {
        // r1^2 r2 (r1 - 3 r2)
        let p = &(&MultiPoly::var(2, 0).pow(2) * &MultiPoly::var(2, 1))
            * &MultiPoly::linear(&[c(1.0, 0.0), c(-3.0, 0.0)]);
        let res = factor_into_linear_forms(&p, &FactorOptions::default()).unwrap();
        assert_eq!(res.status, FactorStatus::Factored);
        assert_eq!(res.factors.len(), 4);
        assert!(res.residual <= 1e-12);
    }

    #[test]
    fn random_binary_forms_always_split() {
        let mut rng = seeded_rng(1);
        for degree in 1..=6 {
            for _ in 0..10 {
                let terms: Vec<(Vec<u32>, Complex64)> = (0..=degree)
                    .map(|j| {
                        (
                            vec![j as u32, (degree - j) as u32],
                            complex_gaussian(&mut rng),
                        )
                    })
                    .collect();
                let p = MultiPoly::from_terms(2, degree, terms).unwrap();
                let res = factor_into_linear_forms(&p, &FactorOptions::default()).unwrap();
                assert_eq!(
                    res.status,
                    FactorStatus::Factored,
                    "degree {degree}: {}",
                    res.residual
                );
                assert_eq!(res.factors.len(), degree);
            }
        }
    }

    #[test]
    fn repeated_binary_root() {
        let l = MultiPoly::linear(&[c(0.3, 1.0), c(-1.0, 0.2)]);
        let p = &l.pow(3) * &MultiPoly::linear(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let res = factor_into_linear_forms(&p, &FactorOptions::default()).unwrap();
        assert_eq!(res.status, FactorStatus::Factored);
        assert!(res.residual <= 1e-9);
    }

    #[test]
    fn irreducible_quadric_is_certified() {
        let res = factor_into_linear_forms(&quadric(), &FactorOptions::default()).unwrap();
        assert_eq!(res.status, FactorStatus::NotProductOfLinearForms);
        assert!(res.certificate.len() >= 3);
        for ev in &res.certificate {
            assert!(ev.remainder > DIVISION_REJECT);
        }
    }

    #[test]
    fn products_of_forms_in_three_and_four_variables() {
        let mut rng = seeded_rng(2);
        for vars in [3, 4] {
            for degree in 1..=4 {
                let forms: Vec<MultiPoly> = (0..degree)
                    .map(|_| MultiPoly::linear(gaussian_vector(vars, &mut rng).as_slice()))
                    .collect();
                let p = forms
                    .iter()
                    .fold(MultiPoly::constant(vars, c(0.5, -1.5)), |acc, f| &acc * f);
                let res = factor_into_linear_forms(&p, &FactorOptions::default()).unwrap();
                assert_eq!(
                    res.status,
                    FactorStatus::Factored,
                    "vars {vars} degree {degree}"
                );
                assert_eq!(res.factors.len(), degree);
                assert!(res.residual <= 1e-9);
            }
        }
    }

    #[test]
    fn repeated_factor_in_three_variables() {
        let l = MultiPoly::linear(&[c(1.0, 0.0), c(0.5, 0.5), c(-0.2, 1.0)]);
        let m = MultiPoly::linear(&[c(0.0, 1.0), c(1.0, 0.0), c(0.3, 0.0)]);
        let p = &l.pow(2) * &m;
        let res = factor_into_linear_forms(&p, &FactorOptions::default()).unwrap();
        assert_eq!(res.status, FactorStatus::Factored);
        assert_eq!(res.factors.len(), 3);
    }

    #[test]
    fn high_multiplicity_in_five_variables() {
        let mut rng = seeded_rng(3);
        let l = MultiPoly::linear(gaussian_vector(5, &mut rng).as_slice());
        let m = MultiPoly::linear(gaussian_vector(5, &mut rng).as_slice());
        for (a, b) in [(3, 1), (4, 0), (2, 2)] {
            let p = &l.pow(a) * &m.pow(b);
            let res = factor_into_linear_forms(&p, &FactorOptions::default()).unwrap();
            assert_eq!(
                res.status,
                FactorStatus::Factored,
                "{a} {b}: {}",
                res.residual
            );
            assert_eq!(res.factors.len(), 4);
        }
    }

    #[test]
    fn linear_times_quadric_is_not_a_product() {
        let p = &quadric() * &MultiPoly::linear(&[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0)]);
        let res = factor_into_linear_forms(&p, &FactorOptions::default()).unwrap();
        assert_eq!(res.status, FactorStatus::NotProductOfLinearForms);
        assert_eq!(res.factors.len(), 1);
    }

    #[test]
    fn degree_zero_is_an_error() {
        let p = MultiPoly::constant(3, c(2.0, 0.0));
        assert!(matches!(
            factor_into_linear_forms(&p, &FactorOptions::default()),
            Err(Error::DegreeZero)
        ));
    }

    #[test]
    fn zero_polynomial_factors_with_zero_constant() {
        let res =
            factor_into_linear_forms(&MultiPoly::zero(3, 2), &FactorOptions::default()).unwrap();
        assert_eq!(res.status, FactorStatus::Factored);
        assert_eq!(res.constant, ZERO);
    }
}
