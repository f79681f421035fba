//! Partial-transpose check, used as an independent entanglement oracle.

use serde::Serialize;

use crate::linalg::hermitian_eigenvalues;
use crate::state::DensityMatrix;

/// A partial transpose with an eigenvalue below this is NPT.
pub const NPT_THRESHOLD: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PptVerdict {
    #[serde(rename = "PPT")]
    Ppt,
    #[serde(rename = "NPT")]
    Npt,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PptReport {
    pub verdict: PptVerdict,
    pub min_eigenvalue: f64,
    /// True on 2⊗2, 2⊗3 and 3⊗2, where PPT is equivalent to separability.
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn ppt_test(rho: &DensityMatrix) -> PptReport {
    let eig = hermitian_eigenvalues(&rho.partial_transpose_b());
    let min_eigenvalue = eig.first().copied().unwrap_or(0.0);
    let verdict = if min_eigenvalue < NPT_THRESHOLD {
        PptVerdict::Npt
    } else {
        PptVerdict::Ppt
    };
    let (m, n) = (rho.dim_a(), rho.dim_b());
    let exact = m * n <= 6;
    let note =
        exact.then(|| format!("on {m}x{n}, PPT holds if and only if the state is separable"));
    PptReport {
        verdict,
        min_eigenvalue,
        exact,
        note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVector;
    use crate::random::{product_ensemble, seeded_rng};
    use crate::state::{density_from_ensemble, PureState};
    use num_complex::Complex64;

    #[test]
    fn bell_projector_is_npt() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amp = CVector::from_vec(vec![
            Complex64::from(h),
            0.0.into(),
            0.0.into(),
            Complex64::from(h),
        ]);
        let rep = ppt_test(&PureState::new(2, 2, amp).unwrap().projector());
        assert_eq!(rep.verdict, PptVerdict::Npt);
        assert!((rep.min_eigenvalue + 0.5).abs() < 1e-12);
        assert!(rep.exact);
    }

    #[test]
    fn maximally_mixed_is_ppt() {
        for (m, n) in [(2, 2), (3, 4)] {
            let rep = ppt_test(&DensityMatrix::maximally_mixed(m, n));
            assert_eq!(rep.verdict, PptVerdict::Ppt);
            assert!((rep.min_eigenvalue - 1.0 / (m * n) as f64).abs() < 1e-12);
        }
        assert!(!ppt_test(&DensityMatrix::maximally_mixed(3, 3)).exact);
    }

    #[test]
    fn separable_mixtures_are_ppt() {
        let mut rng = seeded_rng(11);
        for s in 1..5 {
            let pe = product_ensemble(2, 3, s, &mut rng);
            let rho = density_from_ensemble(&pe.to_ensemble().unwrap()).unwrap();
            assert_eq!(ppt_test(&rho).verdict, PptVerdict::Ppt);
        }
    }
}
