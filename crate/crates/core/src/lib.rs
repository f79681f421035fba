//! Determinantal-variety invariants of bipartite quantum states.
//!
//! A state `ρ` on `C^m ⊗ C^n` is viewed as an `m × m` array of `n × n` blocks
//! `ρ_ij`. For a point `r` of `CP^{m-1}` the Hermitian pencil
//! `M(r) = Σ r_i r_j* ρ_ij` is positive semidefinite, and
//! `V_A^k(ρ) = { r : rank M(r) ≤ k }` is an algebraic set. This crate provides
//!
//! * state construction and validation ([`state`], [`random`], [`io`]),
//! * evaluation of `M(r)` and of the holomorphic pencil `Σ r_i A_i` attached
//!   to an ensemble of `ρ` ([`pencil`]),
//! * membership oracles, Schmidt numbers of pure states and local-unitary
//!   covariance checks ([`invariants`]),
//! * exact minors of the pencil as homogeneous polynomials, their
//!   factorization into linear forms and a linearity diagnostic
//!   ([`poly`], [`minors`], [`factor`], [`linearity`]),
//! * the partial-transpose cross-check ([`ppt`]) and line slices ([`slice`]),
//! * the `detvar` command-line surface ([`cli`]).

pub mod cli;
pub mod error;
pub mod factor;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod linearity;
pub mod minors;
pub mod pencil;
pub mod poly;
pub mod ppt;
pub mod random;
pub mod slice;
pub mod state;

pub use error::{Error, Result};
pub use linalg::{numerical_rank, CMatrix, CVector, RankInfo, RankPolicy};
pub use num_complex::Complex64;
pub use pencil::{PencilBlocks, ProjectivePoint, PureCoefficientMatrix};
pub use state::{DensityMatrix, Ensemble, ProductEnsemble, PureState};
