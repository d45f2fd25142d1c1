//! Complex Hermitian eigendecomposition via the real symmetric embedding,
//! plus eigenphases of unitary (normal) matrices through a pair of commuting
//! Hermitian parts.

use crate::cmat::ComplexMatrix;
use crate::linalg::eig_sym::eig_symmetric;
use crate::scalar::Real;
use num_complex::Complex;

/// Eigendecomposition of a Hermitian complex matrix.
/// Returns eigenvalues ascending and a unitary matrix of eigenvectors.
pub fn eig_hermitian<T: Real>(h: &ComplexMatrix<T>) -> (Vec<T>, ComplexMatrix<T>) {
    assert_eq!(h.rows, h.cols);
    let n = h.rows;
    if n == 0 {
        return (vec![], ComplexMatrix::zeros(0, 0));
    }
    let emb = h.real_embedding();
    let (vals2, vecs2) = eig_symmetric(&emb);

    // Each complex eigenvector appears twice in the embedding; a complex
    // Gram-Schmidt sweep over the mapped vectors keeps exactly n of them.
    let mut kept: Vec<(T, Vec<Complex<T>>)> = Vec::with_capacity(n);
    for idx in 0..2 * n {
        if kept.len() == n {
            break;
        }
        let mut v: Vec<Complex<T>> = (0..n)
            .map(|i| Complex::new(vecs2[(i, idx)], vecs2[(i + n, idx)]))
            .collect();
        for (_, k) in &kept {
            let mut dot = Complex::new(T::zero(), T::zero());
            for i in 0..n {
                dot += k[i].conj() * v[i];
            }
            for i in 0..n {
                v[i] -= k[i] * dot;
            }
        }
        let norm: T = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm > T::from_f64_lossy(0.1) {
            let inv = T::one() / norm;
            for z in v.iter_mut() {
                *z *= inv;
            }
            kept.push((vals2[idx], v));
        }
    }
    debug_assert_eq!(kept.len(), n, "embedding eigenvectors failed to pair");
    let vals: Vec<T> = kept.iter().map(|(l, _)| *l).collect();
    let mut vecs = ComplexMatrix::zeros(n, n);
    for (j, (_, v)) in kept.iter().enumerate() {
        vecs.set_col(j, v);
    }
    (vals, vecs)
}

/// Eigenphases of a unitary matrix, ascending in (-pi, pi].
///
/// Uses the commuting Hermitian pair H1 = (U+U^H)/2, H2 = (U-U^H)/(2i):
/// eigenvectors of H1 are refined within each eigenvalue cluster by
/// diagonalizing the projected H2, and the phase is read off per eigenvector.
pub fn eig_unitary_phases<T: Real>(u: &ComplexMatrix<T>) -> Vec<T> {
    assert_eq!(u.rows, u.cols);
    let n = u.rows;
    if n == 0 {
        return vec![];
    }
    let udag = u.dagger();
    let half = T::from_f64_lossy(0.5);
    let h1 = (u + &udag).scale(Complex::new(half, T::zero()));
    let h2 = (u - &udag).scale(Complex::new(T::zero(), -half));
    let (vals1, vecs1) = eig_hermitian(&h1);

    let cluster_tol = T::from_f64_lossy(1e-8);
    let mut phases = Vec::with_capacity(n);
    let mut start = 0usize;
    while start < n {
        let mut end = start + 1;
        while end < n && (vals1[end] - vals1[end - 1]).abs() <= cluster_tol {
            end += 1;
        }
        let d = end - start;
        // Project H2 onto the cluster and diagonalize.
        let sub = ComplexMatrix::from_fn(d, d, |a, b| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in 0..n {
                for j in 0..n {
                    acc += vecs1[(i, start + a)].conj() * h2[(i, j)] * vecs1[(j, start + b)];
                }
            }
            acc
        });
        let (_, w) = eig_hermitian(&sub);
        for col in 0..d {
            // Combined eigenvector v = sum_a vecs1[:, start+a] * w[a, col]
            let v: Vec<Complex<T>> = (0..n)
                .map(|i| {
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for a in 0..d {
                        acc += vecs1[(i, start + a)] * w[(a, col)];
                    }
                    acc
                })
                .collect();
            let uv = u.matvec(&v);
            let mut lambda = Complex::new(T::zero(), T::zero());
            for i in 0..n {
                lambda += v[i].conj() * uv[i];
            }
            phases.push(lambda.im.atan2(lambda.re));
        }
        start = end;
    }
    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    phases
}
