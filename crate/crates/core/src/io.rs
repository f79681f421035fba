//! JSON state files.
//!
//! Complex scalars are `[re, im]`. The kind of a state file is recognised by
//! its payload key:
//!
//! | key          | type              |
//! |--------------|-------------------|
//! | `matrix`     | [`DensityMatrix`] (rows) |
//! | `amplitudes` | [`PureState`] (`a_ij` at `i*n + j`) |
//! | `vectors`    | [`Ensemble`] (one row per term) |
//! | `factorsA`   | [`ProductEnsemble`] |

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, RankPolicy};
use crate::pencil::ProjectivePoint;
use crate::state::{density_from_ensemble, DensityMatrix, Ensemble, ProductEnsemble, PureState};

#[derive(Serialize, Deserialize)]
struct DensityFile {
    m: usize,
    n: usize,
    matrix: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct PureFile {
    m: usize,
    n: usize,
    amplitudes: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct EnsembleFile {
    m: usize,
    n: usize,
    weights: Vec<f64>,
    vectors: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct ProductFile {
    m: usize,
    n: usize,
    weights: Vec<f64>,
    #[serde(rename = "factorsA")]
    factors_a: Vec<Vec<Complex64>>,
    #[serde(rename = "factorsB")]
    factors_b: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct PointFile {
    coords: Vec<Complex64>,
}

/// Any of the supported state files.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFile {
    Density(DensityMatrix),
    Pure(PureState),
    Ensemble(Ensemble),
    Product(ProductEnsemble),
}

impl StateFile {
    pub fn kind(&self) -> &'static str {
        match self {
            StateFile::Density(_) => "density",
            StateFile::Pure(_) => "pure",
            StateFile::Ensemble(_) => "ensemble",
            StateFile::Product(_) => "product",
        }
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        match self {
            StateFile::Density(rho) => Ok(rho.clone()),
            StateFile::Pure(v) => Ok(v.projector()),
            StateFile::Ensemble(e) => density_from_ensemble(e),
            StateFile::Product(pe) => density_from_ensemble(&pe.to_ensemble()?),
        }
    }

    /// The stored decomposition, or the eigen-ensemble for density input.
    pub fn ensemble(&self, policy: &RankPolicy) -> Result<Ensemble> {
        match self {
            StateFile::Density(rho) => Ok(rho.eigen_ensemble(policy)),
            StateFile::Pure(v) => Ok(v.to_ensemble()),
            StateFile::Ensemble(e) => Ok(e.clone()),
            StateFile::Product(pe) => pe.to_ensemble(),
        }
    }

    /// The state as a pure state; mixed input fails with `NotPure`.
    pub fn pure(&self, policy: &RankPolicy) -> Result<PureState> {
        match self {
            StateFile::Pure(v) => Ok(v.clone()),
            other => PureState::from_density(&other.density()?, policy),
        }
    }
}

fn complex_matrix(rows: &[Vec<Complex64>], ncols: usize, what: &str) -> Result<CMatrix> {
    if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
        return Err(Error::ShapeMismatch(format!(
            "{what} row of length {}, expected {ncols}",
            bad.len()
        )));
    }
    Ok(CMatrix::from_fn(rows.len(), ncols, |r, c| rows[r][c]))
}

pub fn parse_state(text: &str) -> Result<StateFile> {
    let value: Value = serde_json::from_str(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("state file must be a JSON object".into()))?;
    if obj.contains_key("matrix") {
        let f: DensityFile = serde_json::from_value(value)?;
        let dim = f.m * f.n;
        if f.matrix.len() != dim {
            return Err(Error::ShapeMismatch(format!(
                "matrix has {} rows, expected {dim}",
                f.matrix.len()
            )));
        }
        let mat = complex_matrix(&f.matrix, dim, "matrix")?;
        Ok(StateFile::Density(DensityMatrix::new(mat, f.m, f.n)?))
    } else if obj.contains_key("amplitudes") {
        let f: PureFile = serde_json::from_value(value)?;
        Ok(StateFile::Pure(PureState::new(
            f.m,
            f.n,
            CVector::from_vec(f.amplitudes),
        )?))
    } else if obj.contains_key("factorsA") {
        let f: ProductFile = serde_json::from_value(value)?;
        let a = f.factors_a.into_iter().map(CVector::from_vec).collect();
        let b = f.factors_b.into_iter().map(CVector::from_vec).collect();
        Ok(StateFile::Product(ProductEnsemble::new(
            f.m, f.n, f.weights, a, b,
        )?))
    } else if obj.contains_key("vectors") {
        let f: EnsembleFile = serde_json::from_value(value)?;
        let vectors: Vec<CVector> = f.vectors.into_iter().map(CVector::from_vec).collect();
        Ok(StateFile::Ensemble(Ensemble::from_vectors(
            f.m, f.n, f.weights, &vectors,
        )?))
    } else {
        Err(Error::Parse(
            "unrecognised state file: expected one of matrix, amplitudes, vectors, factorsA".into(),
        ))
    }
}

pub fn read_state(path: impl AsRef<Path>) -> Result<StateFile> {
    parse_state(&std::fs::read_to_string(path)?)
}

pub fn parse_point(text: &str) -> Result<ProjectivePoint> {
    let f: PointFile = serde_json::from_str(text)?;
    ProjectivePoint::from_slice(&f.coords)
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("state files always serialize")
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    let mat = rho.matrix();
    pretty(&DensityFile {
        m: rho.dim_a(),
        n: rho.dim_b(),
        matrix: mat
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect(),
    })
}

pub fn pure_to_json(v: &PureState) -> String {
    pretty(&PureFile {
        m: v.dim_a(),
        n: v.dim_b(),
        amplitudes: v.amplitudes().iter().copied().collect(),
    })
}

pub fn ensemble_to_json(e: &Ensemble) -> String {
    pretty(&EnsembleFile {
        m: e.dim_a(),
        n: e.dim_b(),
        weights: e.weights().to_vec(),
        vectors: e
            .vectors()
            .column_iter()
            .map(|c| c.iter().copied().collect())
            .collect(),
    })
}

pub fn product_to_json(pe: &ProductEnsemble) -> String {
    pretty(&ProductFile {
        m: pe.dim_a(),
        n: pe.dim_b(),
        weights: pe.weights().to_vec(),
        factors_a: pe
            .factors_a()
            .iter()
            .map(|a| a.iter().copied().collect())
            .collect(),
        factors_b: pe
            .factors_b()
            .iter()
            .map(|b| b.iter().copied().collect())
            .collect(),
    })
}

pub fn point_to_json(r: &ProjectivePoint) -> String {
    serde_json::to_string(&PointFile {
        coords: r.coords().iter().copied().collect(),
    })
    .expect("points always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{ensemble, product_ensemble, pure_state, seeded_rng};

    #[test]
    fn density_round_trip() {
        let rho = DensityMatrix::maximally_mixed(2, 3);
        let back = parse_state(&density_to_json(&rho)).unwrap();
        assert_eq!(back, StateFile::Density(rho));
    }

    #[test]
    fn every_kind_round_trips() {
        let mut rng = seeded_rng(12);
        let v = pure_state(2, 3, &mut rng);
        assert_eq!(parse_state(&pure_to_json(&v)).unwrap(), StateFile::Pure(v));
        let e = ensemble(3, 2, 4, &mut rng);
        assert_eq!(
            parse_state(&ensemble_to_json(&e)).unwrap(),
            StateFile::Ensemble(e)
        );
        let pe = product_ensemble(2, 2, 3, &mut rng);
        assert_eq!(
            parse_state(&product_to_json(&pe)).unwrap(),
            StateFile::Product(pe)
        );
    }

    #[test]
    fn literal_bell_file() {
        let text = r#"{"m":2,"n":2,"amplitudes":[[0.7071067811865476,0],[0,0],[0,0],[0.7071067811865476,0]]}"#;
        let st = parse_state(text).unwrap();
        assert_eq!(st.kind(), "pure");
        let rho = st.density().unwrap();
        assert!((rho.matrix()[(0, 3)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn invalid_files_are_rejected() {
        assert!(matches!(parse_state("not json"), Err(Error::Parse(_))));
        assert!(matches!(parse_state(r#"{"m":2}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse_state(r#"{"m":1,"n":2,"matrix":[[[1,0],[0,0]],[[0,0],[0,0]],[[0,0],[0,0]]]}"#),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            parse_state(r#"{"m":1,"n":2,"matrix":[[[1,0],[0,0]],[[0,0],[0.5,0]]]}"#),
            Err(Error::TraceNotOne { .. })
        ));
        assert!(matches!(
            parse_state(r#"{"m":1,"n":2,"amplitudes":[[1,0],[1,0]]}"#),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn mixed_density_is_not_pure() {
        let st = StateFile::Density(DensityMatrix::maximally_mixed(2, 2));
        assert!(matches!(
            st.pure(&RankPolicy::default()),
            Err(Error::NotPure { .. })
        ));
    }

    #[test]
    fn point_round_trip() {
        let r = parse_point(r#"{"coords":[[1,0],[0,2]]}"#).unwrap();
        assert_eq!(parse_point(&point_to_json(&r)).unwrap(), r);
        assert!(matches!(
            parse_point(r#"{"coords":[[0,0]]}"#),
            Err(Error::ZeroPoint)
        ));
    }
}
