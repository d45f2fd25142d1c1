//! Quaternionic nullspaces through the complex embedding, and the real
//! affine least-squares solver used by the symmetry constraint systems.

use crate::error::CoreError;
use crate::linalg::psd::psd_nullspace_real;
use crate::linalg::svd::svd_complex;
use crate::qmat::{jmap, unchi, QuatMatrix};
use crate::rmat::RealMatrix;
use crate::scalar::Real;
use crate::Result;
use num_complex::Complex;

/// Relative singular-value threshold for rank and kernel decisions.
pub const RANK_REL_TOL: f64 = 1e-10;

/// Quaternionic rank through the complex embedding (half the complex rank).
pub fn rank_quat<T: Real>(a: &QuatMatrix<T>, rel_tol: T) -> Result<usize> {
    let sv = svd_complex(&a.embed_complex()).sigma;
    let smax = sv.first().copied().unwrap_or(T::zero());
    if smax == T::zero() {
        return Ok(0);
    }
    let r = sv.iter().filter(|&&s| s > rel_tol * smax).count();
    if r % 2 != 0 {
        return Err(CoreError::Indeterminate(format!(
            "complex rank {r} of the embedding is odd"
        )));
    }
    Ok(r / 2)
}

/// Orthonormal basis V of the kernel of A^dagger: V^dagger A = 0, V^dagger V = I.
///
/// The complex kernel of embed(A^dagger) is paired under the quaternionic
/// structure map (v, v*j) and each pair collapses to one quaternionic column.
pub fn null_space_quat<T: Real>(a: &QuatMatrix<T>, expected_dim: usize) -> Result<QuatMatrix<T>> {
    let adag = a.dagger();
    let emb = adag.embed_complex(); // 2 cols(a^dagger) x 2 rows... (2k x 2(n+k)) for ADHM shapes
    let svd = svd_complex(&emb);
    let smax = svd.sigma.first().copied().unwrap_or(T::zero());
    let tol = T::from_f64_lossy(RANK_REL_TOL) * smax.max(T::epsilon());
    let kernel: Vec<&Vec<Complex<T>>> = svd
        .sigma
        .iter()
        .zip(&svd.v)
        .filter(|(s, _)| **s <= tol)
        .map(|(_, v)| v)
        .collect();
    if kernel.len() != 2 * expected_dim {
        return Err(CoreError::KernelDimension {
            expected: 2 * expected_dim,
            found: kernel.len(),
        });
    }

    // J-paired Gram-Schmidt: pick a kernel vector, orthonormalize, and add its
    // J-partner (automatically orthogonal and in the kernel).
    let mut basis: Vec<Vec<Complex<T>>> = Vec::with_capacity(2 * expected_dim);
    let mut quat_cols: Vec<Vec<crate::quat::Quaternion<T>>> = Vec::with_capacity(expected_dim);
    for cand in kernel {
        if quat_cols.len() == expected_dim {
            break;
        }
        let mut v = cand.clone();
        for b in &basis {
            let mut dot = Complex::new(T::zero(), T::zero());
            for i in 0..v.len() {
                dot += b[i].conj() * v[i];
            }
            for i in 0..v.len() {
                v[i] -= b[i] * dot;
            }
        }
        let norm: T = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::from_f64_lossy(1e-3) {
            continue;
        }
        let inv = T::one() / norm;
        for z in v.iter_mut() {
            *z *= inv;
        }
        let vj = jmap(&v);
        quat_cols.push(unchi(&v));
        basis.push(v);
        basis.push(vj);
    }
    if quat_cols.len() != expected_dim {
        return Err(CoreError::KernelDimension {
            expected: 2 * expected_dim,
            found: basis.len(),
        });
    }
    let n = a.rows;
    let v = QuatMatrix::from_fn(n, expected_dim, |i, j| quat_cols[j][i]);
    Ok(v)
}

/// Solution of an affine real system A x = c in the least-squares sense,
/// with the homogeneous kernel attached.
pub struct AffineSolution<T> {
    /// Minimum-norm particular least-squares solution.
    pub particular: Vec<T>,
    /// Orthonormal basis of ker A.
    pub kernel: Vec<Vec<T>>,
    /// ||A x - c|| at the particular solution.
    pub residual: T,
    /// ||c||, for relative feasibility decisions.
    pub rhs_norm: T,
}

/// Normal-equation least squares with pivoted-Cholesky rank detection.
/// `kernel_rel_tol` applies to the pivots of A^T A.
pub fn solve_affine_real<T: Real>(
    a: &RealMatrix<T>,
    c: &[T],
    kernel_rel_tol: T,
) -> AffineSolution<T> {
    assert_eq!(a.rows, c.len());
    let at = a.transpose();
    let gram = &at * a;
    let g = at.matvec(c);
    let f = psd_nullspace_real(&gram, kernel_rel_tol);
    let mut x = f.solve_in_range(&g);
    // Minimum norm: remove kernel components.
    for k in &f.kernel {
        let dot: T = k.iter().zip(&x).map(|(&ki, &xi)| ki * xi).sum();
        for (xi, &ki) in x.iter_mut().zip(k) {
            *xi -= ki * dot;
        }
    }
    let ax = a.matvec(&x);
    let residual = ax
        .iter()
        .zip(c)
        .map(|(&p, &q)| (p - q) * (p - q))
        .sum::<T>()
        .sqrt();
    let rhs_norm = c.iter().map(|&v| v * v).sum::<T>().sqrt();
    AffineSolution {
        particular: x,
        kernel: f.kernel,
        residual,
        rhs_norm,
    }
}
