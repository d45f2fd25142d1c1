//! Numerical kernels: eigensolvers, SVD, nullspaces, polar factors and the
//! matrix exponential. Everything here is generic over [`crate::scalar::Real`].

pub mod eig_herm;
pub mod eig_sym;
pub mod expm;
pub mod lu;
pub mod nullspace;
pub mod polar;
pub mod psd;
pub mod svd;

pub use eig_herm::{eig_hermitian, eig_unitary_phases};
pub use eig_sym::{eig_symmetric, sym_eig_checked};
pub use expm::{exp_complex, exp_qmat};
pub use nullspace::{null_space_quat, rank_quat, solve_affine_real, AffineSolution, RANK_REL_TOL};
pub use polar::{nearest_unitary_alignment, polar_unitary_complex};
pub use psd::{psd_nullspace_complex, psd_nullspace_real};
pub use svd::{singular_values, svd_complex, svd_real};

use crate::cmat::ComplexMatrix;
use crate::qmat::QuatMatrix;
use crate::rmat::RealMatrix;
use crate::scalar::Real as RealScalar;
use crate::Result;

/// Spec-facing symmetric eigendecomposition: symmetry enforced at
/// 1e-10 * ||S||, eigenvalues ascending, S = Q diag Q^T.
pub fn sym_eig_real(s: &RealMatrix<f64>) -> Result<(Vec<f64>, RealMatrix<f64>)> {
    sym_eig_checked(s, 1e-10)
}

/// Inverse of a square quaternionic matrix through the complex embedding.
pub fn inverse_qmat<T: RealScalar>(a: &QuatMatrix<T>) -> Result<QuatMatrix<T>> {
    let inv = lu::inverse_complex(&a.embed_complex())?;
    let (q, _gap) = QuatMatrix::unembed_complex(&inv);
    Ok(q)
}

/// Inverse of a square real matrix (lifted through the complex LU).
pub fn inverse_rmat<T: RealScalar>(a: &RealMatrix<T>) -> Result<RealMatrix<T>> {
    let inv = lu::inverse_complex(&ComplexMatrix::from_real(a))?;
    Ok(inv.real_part())
}
