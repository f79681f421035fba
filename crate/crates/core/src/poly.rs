//! Sparse homogeneous polynomials with complex coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CVector, ZERO};

/// Coefficients at or below this fraction of the operands' scale are dropped
/// after every arithmetic step.
pub const PRUNE_REL: f64 = 1e-14;

pub type Exponents = Vec<u32>;

/// Homogeneous polynomial in `vars` variables, stored as a sorted map from
/// exponent vectors to nonzero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    vars: usize,
    degree: usize,
    terms: BTreeMap<Exponents, Complex64>,
}

fn max_modulus<'a>(it: impl Iterator<Item = &'a Complex64>) -> f64 {
    it.map(|c| c.norm()).fold(0.0, f64::max)
}

impl MultiPoly {
    pub fn zero(vars: usize, degree: usize) -> Self {
        MultiPoly {
            vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Complex64) -> Self {
        let mut p = MultiPoly::zero(vars, 0);
        if c != ZERO {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    /// The variable `r_i` (zero-based).
    pub fn var(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        let mut p = MultiPoly::zero(vars, 1);
        p.terms.insert(e, Complex64::new(1.0, 0.0));
        p
    }

    /// `Σ c_i r_i`.
    pub fn linear(coeffs: &[Complex64]) -> Self {
        let vars = coeffs.len();
        let mut p = MultiPoly::zero(vars, 1);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != ZERO {
                let mut e = vec![0; vars];
                e[i] = 1;
                p.terms.insert(e, c);
            }
        }
        p
    }

    /// Builds a polynomial from explicit terms, summing repeated exponents.
    pub fn from_terms(
        vars: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Exponents, Complex64)>,
    ) -> Result<Self> {
        let mut p = MultiPoly::zero(vars, degree);
        for (e, c) in terms {
            if e.len() != vars {
                return Err(Error::ShapeMismatch(format!(
                    "exponent vector of length {} for {vars} variables",
                    e.len()
                )));
            }
            let d: u32 = e.iter().sum();
            if d as usize != degree {
                return Err(Error::ShapeMismatch(format!(
                    "term of degree {d} in a homogeneous polynomial of degree {degree}"
                )));
            }
            *p.terms.entry(e).or_insert(ZERO) += c;
        }
        p.terms.retain(|_, c| *c != ZERO);
        Ok(p)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Complex64 {
        self.terms.get(exps).copied().unwrap_or(ZERO)
    }

    /// Largest coefficient modulus.
    pub fn max_coef(&self) -> f64 {
        max_modulus(self.terms.values())
    }

    /// Drops coefficients with modulus at most `PRUNE_REL * scale`.
    pub fn prune(&mut self, scale: f64) {
        let cut = PRUNE_REL * scale;
        self.terms.retain(|_, c| c.norm() > cut);
    }

    pub fn scale(&self, c: Complex64) -> MultiPoly {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out.terms.retain(|_, v| *v != ZERO);
        out
    }

    pub fn eval(&self, r: &[Complex64]) -> Complex64 {
        assert_eq!(r.len(), self.vars, "point dimension");
        self.terms
            .iter()
            .map(|(e, &c)| {
                e.iter().zip(r).fold(
                    c,
                    |acc, (&k, &x)| if k == 0 { acc } else { acc * x.powu(k) },
                )
            })
            .sum()
    }

    pub fn eval_vec(&self, r: &CVector) -> Complex64 {
        self.eval(r.as_slice())
    }

    /// `∂/∂r_i`.
    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars, self.degree.saturating_sub(1));
        for (e, &c) in &self.terms {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                out.terms.insert(d, c * e[i] as f64);
            }
        }
        out
    }

    /// `Σ w_i ∂/∂r_i`.
    pub fn directional_derivative(&self, w: &[Complex64]) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars, self.degree.saturating_sub(1));
        for (i, &wi) in w.iter().enumerate() {
            if wi != ZERO {
                out = &out + &self.derivative(i).scale(wi);
            }
        }
        out
    }

    /// Holomorphic gradient at `z`.
    pub fn gradient_at(&self, z: &[Complex64]) -> CVector {
        CVector::from_fn(self.vars, |i, _| self.derivative(i).eval(z))
    }

    /// `p^k`.
    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut out = MultiPoly::constant(self.vars, Complex64::new(1.0, 0.0));
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitutes `r_i ← images[i]`, where every image is a linear form in
    /// a (possibly different) set of variables.
    pub fn compose_linear(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.vars, "one image per variable");
        let new_vars = images.first().map_or(0, |p| p.vars);
        let mut out = MultiPoly::zero(new_vars, self.degree);
        for (e, &c) in &self.terms {
            let mut term = MultiPoly::constant(new_vars, c);
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    term = &term * &img.pow(k);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Division with remainder by a linear form `ℓ`, eliminating the
    /// variable with the largest `|ℓ_i|`. The remainder is free of that
    /// variable and vanishes iff `ℓ` divides `self`.
    pub fn div_rem_linear(&self, l: &LinearForm) -> (MultiPoly, MultiPoly) {
        let lc = l.coefficients();
        let pivot = l.pivot();
        let inv = lc[pivot].inv();
        let scale = self.max_coef();
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<Exponents, Complex64> = BTreeMap::new();
        loop {
            // Highest power of the pivot variable first.
            let next = rem
                .iter()
                .filter(|(e, _)| e[pivot] > 0)
                .max_by(|(a, _), (b, _)| a[pivot].cmp(&b[pivot]).then_with(|| b.cmp(a)))
                .map(|(e, &c)| (e.clone(), c));
            let Some((e, c)) = next else { break };
            let mut mono = e.clone();
            mono[pivot] -= 1;
            let q = c * inv;
            *quot.entry(mono.clone()).or_insert(ZERO) += q;
            rem.remove(&e);
            for (i, &li) in lc.iter().enumerate() {
                if i == pivot || li == ZERO {
                    continue;
                }
                let mut t = mono.clone();
                t[i] += 1;
                let entry = rem.entry(t.clone()).or_insert(ZERO);
                *entry -= q * li;
                if entry.norm() <= PRUNE_REL * scale {
                    rem.remove(&t);
                }
            }
        }
        let mut q = MultiPoly {
            vars: self.vars,
            degree: self.degree.saturating_sub(1),
            terms: quot,
        };
        q.prune(scale);
        let r = MultiPoly {
            vars: self.vars,
            degree: self.degree,
            terms: rem,
        };
        (q, r)
    }

    /// `max |a_e - b_e|` over all exponents.
    pub fn max_coef_diff(&self, other: &MultiPoly) -> f64 {
        let mut worst: f64 = 0.0;
        for (e, &c) in &self.terms {
            worst = worst.max((c - other.coefficient(e)).norm());
        }
        for (e, &c) in &other.terms {
            if !self.terms.contains_key(e) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable count");
        if self.is_zero() && self.degree != rhs.degree {
            return rhs.clone();
        }
        if rhs.is_zero() && self.degree != rhs.degree {
            return self.clone();
        }
        assert_eq!(
            self.degree, rhs.degree,
            "adding polynomials of different degree"
        );
        let scale = self.max_coef().max(rhs.max_coef());
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            *out.terms.entry(e.clone()).or_insert(ZERO) += c;
        }
        out.prune(scale);
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable count");
        let mut out = MultiPoly::zero(self.vars, self.degree + rhs.degree);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *out.terms.entry(e).or_insert(ZERO) += ca * cb;
            }
        }
        out.prune(self.max_coef() * rhs.max_coef());
        out
    }
}

/// Nonzero linear form scaled so that its largest-modulus coefficient is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm {
    coeffs: CVector,
}

impl LinearForm {
    /// Returns the canonical form and the factor `c` with `coeffs = c · form`.
    pub fn new(coeffs: CVector) -> Result<(Self, Complex64)> {
        let pivot = (0..coeffs.len())
            .max_by(|&a, &b| coeffs[a].norm().total_cmp(&coeffs[b].norm()))
            .ok_or(Error::ZeroPoint)?;
        let c = coeffs[pivot];
        if c.norm() == 0.0 || !c.norm().is_finite() {
            return Err(Error::ZeroPoint);
        }
        let mut form = coeffs.map(|z| z / c);
        form[pivot] = Complex64::new(1.0, 0.0);
        Ok((LinearForm { coeffs: form }, c))
    }

    pub fn coefficients(&self) -> &CVector {
        &self.coeffs
    }

    pub fn vars(&self) -> usize {
        self.coeffs.len()
    }

    /// Index of the (first) coefficient equal to 1.
    pub fn pivot(&self) -> usize {
        (0..self.coeffs.len())
            .max_by(|&a, &b| {
                self.coeffs[a]
                    .norm()
                    .total_cmp(&self.coeffs[b].norm())
                    .then_with(|| b.cmp(&a))
            })
            .expect("nonempty form")
    }

    pub fn eval(&self, r: &[Complex64]) -> Complex64 {
        self.coeffs.iter().zip(r).map(|(a, b)| a * b).sum()
    }

    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::linear(self.coeffs.as_slice())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TermJson {
    exps: Vec<u32>,
    coef: Complex64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PolyJson {
    vars: usize,
    degree: usize,
    terms: Vec<TermJson>,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            vars: self.vars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| TermJson {
                    exps: e.clone(),
                    coef: c,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        MultiPoly::from_terms(
            raw.vars,
            raw.degree,
            raw.terms.into_iter().map(|t| (t.exps, t.coef)),
        )
        .map_err(serde::de::Error::custom)
    }
}
