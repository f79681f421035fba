//! Sampling `M(r)` along a projective line, for plotting.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::member_va;
use crate::linalg::{hermitian_eigenvalues, CVector, RankPolicy};
use crate::pencil::{eval_m_coords, ProjectivePoint};
use crate::state::DensityMatrix;

/// The line `r(θ) = cos θ · p + sin θ · e^{iφ} q`, `θ ∈ [0, π/2]`, with `p`
/// and `q` taken at unit norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineSpec {
    pub p: Vec<Complex64>,
    pub q: Vec<Complex64>,
    #[serde(default)]
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceRow {
    pub theta: f64,
    pub min_eigenvalue: f64,
    pub rank: usize,
    pub member: bool,
}

impl LineSpec {
    pub fn point_at(&self, theta: f64) -> Result<ProjectivePoint> {
        if self.p.len() != self.q.len() {
            return Err(Error::ShapeMismatch(format!(
                "line endpoints have {} and {} coordinates",
                self.p.len(),
                self.q.len()
            )));
        }
        let p = ProjectivePoint::from_slice(&self.p)?.unit();
        let q = ProjectivePoint::from_slice(&self.q)?.unit();
        let r: CVector =
            p * Complex64::from(theta.cos()) + q * Complex64::from_polar(theta.sin(), self.phi);
        let norm = r.norm();
        if norm == 0.0 {
            return Err(Error::ZeroPoint);
        }
        ProjectivePoint::new(r / Complex64::from(norm))
    }
}

/// Evaluates `M(r(θ))` on `samples` evenly spaced angles, endpoints included.
pub fn slice_line(
    rho: &DensityMatrix,
    k: usize,
    line: &LineSpec,
    samples: usize,
    policy: &RankPolicy,
) -> Result<Vec<SliceRow>> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    (0..samples)
        .map(|j| {
            let theta = if samples == 1 {
                0.0
            } else {
                std::f64::consts::FRAC_PI_2 * j as f64 / (samples - 1) as f64
            };
            let r = line.point_at(theta)?;
            // Evaluate at unit norm so values along the line are comparable.
            let m = eval_m_coords(rho, &r.unit())?;
            let min_eigenvalue = hermitian_eigenvalues(&m).first().copied().unwrap_or(0.0);
            let res = member_va(rho, &r, k, policy)?;
            Ok(SliceRow {
                theta,
                min_eigenvalue,
                rank: res.rank,
                member: res.member,
            })
        })
        .collect()
}

pub fn slice_csv(rows: &[SliceRow]) -> String {
    let mut out = String::from("theta,min_eigenvalue,rank,member\n");
    for row in rows {
        out.push_str(&format!(
            "{:.12},{:.12e},{},{}\n",
            row.theta, row.min_eigenvalue, row.rank, row.member
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;
    use crate::state::PureState;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn e(m: usize, i: usize) -> Vec<Complex64> {
        (0..m).map(|j| if i == j { one() } else { ZERO }).collect()
    }

    #[test]
    fn maximally_mixed_is_flat() {
        let rho = DensityMatrix::maximally_mixed(3, 2);
        let line = LineSpec {
            p: vec![one(), Complex64::new(0.0, 1.0), ZERO],
            q: e(3, 2),
            phi: 0.3,
        };
        let rows = slice_line(&rho, 1, &line, 17, &RankPolicy::default()).unwrap();
        for row in rows {
            assert!((row.min_eigenvalue - 1.0 / 6.0).abs() < 1e-12);
            assert_eq!(row.rank, 2);
        }
    }

    #[test]
    fn product_state_vanishes_at_the_kernel_end() {
        let rho = PureState::product(&CVector::from_vec(e(2, 0)), &CVector::from_vec(e(2, 0)))
            .unwrap()
            .projector();
        let line = LineSpec {
            p: e(2, 0),
            q: e(2, 1),
            phi: 0.0,
        };
        let rows = slice_line(&rho, 0, &line, 5, &RankPolicy::default()).unwrap();
        assert_eq!(rows[0].rank, 1);
        assert!(!rows[0].member);
        let last = rows.last().unwrap();
        assert!((last.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(last.rank, 0);
        assert!(last.member);
        assert!(last.min_eigenvalue.abs() < 1e-15);
    }

    #[test]
    fn csv_has_header_and_one_line_per_sample() {
        let rho = DensityMatrix::maximally_mixed(2, 2);
        let line = LineSpec {
            p: e(2, 0),
            q: e(2, 1),
            phi: 0.0,
        };
        let csv = slice_csv(&slice_line(&rho, 0, &line, 4, &RankPolicy::default()).unwrap());
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("theta,min_eigenvalue,rank,member\n"));
    }

    #[test]
    fn mismatched_endpoints_are_rejected() {
        let line = LineSpec {
            p: e(2, 0),
            q: e(3, 1),
            phi: 0.0,
        };
        assert!(line.point_at(0.1).is_err());
    }
}
