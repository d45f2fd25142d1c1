//! Polar decomposition by scaled Newton iteration on the complex embedding.

use crate::cmat::ComplexMatrix;
use crate::error::CoreError;
use crate::linalg::lu::lu_factor;
use crate::qmat::QuatMatrix;
use crate::scalar::Real;
use crate::Result;
use num_complex::Complex;

/// Unitary polar factor of a nonsingular complex matrix A = U P.
pub fn polar_unitary_complex<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if a.rows != a.cols {
        return Err(CoreError::DimensionMismatch(format!(
            "polar of {}x{}",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(a.clone());
    }
    let mut x = a.clone();
    for _ in 0..100 {
        let inv = lu_factor(&x)?.inverse();
        let inv_h = inv.dagger();
        let nx = x.norm_fro();
        let ni = inv_h.norm_fro();
        let gamma = (ni / nx).sqrt();
        let half = T::from_f64_lossy(0.5);
        let next = &x.scale(Complex::new(gamma * half, T::zero()))
            + &inv_h.scale(Complex::new(half / gamma, T::zero()));
        let delta = (&next - &x).norm_fro();
        x = next;
        if delta <= T::epsilon() * T::from_f64_lossy(32.0) * x.norm_fro() {
            break;
        }
    }
    Ok(x)
}

/// Symplectic (quaternion-unitary) polar factor of a nonsingular square
/// quaternionic matrix A = U P with P Hermitian positive definite.
pub fn nearest_unitary_alignment<T: Real>(a: &QuatMatrix<T>) -> Result<QuatMatrix<T>> {
    if !a.is_square() {
        return Err(CoreError::DimensionMismatch(format!(
            "polar alignment of {}x{}",
            a.rows, a.cols
        )));
    }
    let u = polar_unitary_complex(&a.embed_complex())?;
    let (q, gap) = QuatMatrix::unembed_complex(&u);
    let tol = T::from_f64_lossy(1e-10) * q.norm_fro().max(T::one());
    if gap > tol {
        return Err(CoreError::InternalConsistency(format!(
            "polar factor left the quaternionic subalgebra (gap {:e})",
            gap.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(q)
}
