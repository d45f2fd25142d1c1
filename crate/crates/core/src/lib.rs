//! Numerical toolkit for quaternionic ADHM data of Sp(n) instantons with
//! continuous conformal symmetries.
//!
//! The crate is organised in layers:
//!
//! * [`quat`], [`qmat`], [`cmat`], [`rmat`] — quaternion scalars and dense
//!   quaternionic / complex / real matrices, generic over the floating-point
//!   scalar through [`scalar::Real`];
//! * [`linalg`] — the numerical kernels (symmetric/Hermitian eigensolvers,
//!   one-sided Jacobi SVD, quaternionic nullspaces through the complex
//!   embedding, polar decomposition, matrix exponential);
//! * [`adhm`] — ADHM data containers, validity checking, standard-form
//!   reduction and the gauge/conformal actions;
//! * [`liealg`] — the sp(2) subalgebra catalog, exponentials and conjugation
//!   to the standard torus;
//! * [`reps`] — sp(1) and sp(1)+sp(1) representation theory with
//!   trivial-summand counting and numeric bases;
//! * [`symmetry`] — constraint assembly and solvers for every continuous
//!   symmetry class, generator rationalization, induced representations;
//! * [`fields`] — kernel frames, finite-difference connections, hyperbolic
//!   and singular monopole fields, Hopf geometry and circle holonomy;
//! * [`examples`] — the registry of worked data families used by the CLI and
//!   the test-suite.
//!
//! All production entry points work on the `f64` aliases exported at the
//! crate root ([`Quat`], [`QMat`], [`CMat`], [`RMat`]).

// Index-style loops mirror the matrix formulas throughout the numeric code.
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod adhm;
pub mod cmat;
pub mod error;
pub mod examples;
pub mod fields;
pub mod json;
pub mod liealg;
pub mod linalg;
pub mod qmat;
pub mod quat;
pub mod reps;
pub mod rmat;
pub mod scalar;
pub mod symmetry;

pub use error::CoreError;

/// Concrete scalar used by the toolkit front end.
pub type Scalar = f64;
/// Quaternion over `f64`.
pub type Quat = quat::Quaternion<f64>;
/// Dense quaternionic matrix over `f64`.
pub type QMat = qmat::QuatMatrix<f64>;
/// Dense complex matrix over `f64`.
pub type CMat = cmat::ComplexMatrix<f64>;
/// Dense real matrix over `f64`.
pub type RMat = rmat::RealMatrix<f64>;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, CoreError>;
