//! Pivoted Cholesky factorization for positive semidefinite matrices with
//! rank detection and kernel extraction. The symmetry solvers and the
//! trivial-summand machinery route their (well-gapped) Gram matrices through
//! this instead of a full eigendecomposition.

use crate::cmat::ComplexMatrix;
use crate::linalg::svd::Entry;
use crate::rmat::RealMatrix;
use crate::scalar::Real;
use num_complex::Complex;

pub struct PsdFactor<T, E> {
    pub n: usize,
    pub rank: usize,
    /// Permutation: row i of the permuted matrix is row perm[i] of the input.
    pub perm: Vec<usize>,
    /// Lower-trapezoidal factor columns (length n each, zeros above the pivot).
    pub l_cols: Vec<Vec<E>>,
    /// Orthonormal kernel basis of the input matrix (length-n vectors).
    pub kernel: Vec<Vec<E>>,
    _marker: std::marker::PhantomData<T>,
}

trait EntrySub<T: Real>: Entry<T> {
    fn sub(self, o: Self) -> Self;
    fn div(self, o: Self) -> Self;
}

impl<T: Real> EntrySub<T> for T {
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
}

impl<T: Real> EntrySub<T> for Complex<T> {
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
}

fn real_diag<T: Real, E: Entry<T>>(e: E) -> T {
    // Hermitian diagonal entries are real; the norm keeps the magnitude and
    // the pivot test guards the PSD sign.
    e.norm_sqr().sqrt()
}

/// Flat row-major in-place pivoted Cholesky. Returns (rank, perm, l_cols).
fn psd_factor<T: Real, E: EntrySub<T>>(
    h: &mut [E],
    n: usize,
    rel_tol: T,
) -> (usize, Vec<usize>, Vec<Vec<E>>) {
    let mut perm: Vec<usize> = (0..n).collect();
    let d0 = (0..n)
        .map(|i| real_diag::<T, E>(h[i * n + i]))
        .fold(T::zero(), |a, b| a.max(b));
    let thresh = rel_tol * d0.max(T::epsilon());
    let mut l_cols: Vec<Vec<E>> = Vec::new();
    let mut rank = 0usize;

    for t in 0..n {
        // Pivot on the largest remaining diagonal.
        let mut m = t;
        let mut best = real_diag::<T, E>(h[t * n + t]);
        for i in (t + 1)..n {
            let v = real_diag::<T, E>(h[i * n + i]);
            if v > best {
                best = v;
                m = i;
            }
        }
        if best <= thresh {
            break;
        }
        if m != t {
            for j in 0..n {
                h.swap(t * n + j, m * n + j);
            }
            for i in 0..n {
                h.swap(i * n + t, i * n + m);
            }
            perm.swap(t, m);
            for col in l_cols.iter_mut() {
                col.swap(t, m);
            }
        }
        let piv = real_diag::<T, E>(h[t * n + t]).sqrt();
        let inv_piv = T::one() / piv;
        let mut col = vec![E::zero(); n];
        for (i, c) in col.iter_mut().enumerate().take(n).skip(t) {
            *c = h[i * n + t].scale(inv_piv);
        }
        // Rank-one downdate of the trailing block (contiguous inner loop).
        let col_conj: Vec<E> = col[(t + 1)..n].iter().map(|e| e.conj()).collect();
        for i in (t + 1)..n {
            let ci = col[i];
            let row = &mut h[(i * n + t + 1)..(i * n + n)];
            for (rj, cj) in row.iter_mut().zip(&col_conj) {
                *rj = rj.sub(ci.mul(*cj));
            }
        }
        l_cols.push(col);
        rank = t + 1;
    }
    (rank, perm, l_cols)
}

fn kernel_from_factor<T: Real, E: EntrySub<T>>(
    n: usize,
    rank: usize,
    perm: &[usize],
    l_cols: &[Vec<E>],
) -> Vec<Vec<E>> {
    let kdim = n - rank;
    let mut kernel = Vec::with_capacity(kdim);
    for j in 0..kdim {
        // Permuted coordinates: x2 = e_j, solve L11^H x1 = -L21^H e_j.
        let row = rank + j;
        let b: Vec<E> = (0..rank).map(|t| l_cols[t][row].conj()).collect();
        let mut x1 = vec![E::zero(); rank];
        for t in (0..rank).rev() {
            let mut acc = b[t];
            for i in (t + 1)..rank {
                acc = acc.add(l_cols[t][i].conj().mul(x1[i]));
            }
            let diag = l_cols[t][t].conj();
            x1[t] = acc.scale(-T::one()).div(diag);
        }
        let mut v = vec![E::zero(); n];
        for (t, &x) in x1.iter().enumerate() {
            v[perm[t]] = x;
        }
        v[perm[row]] = E::one();
        kernel.push(v);
    }
    // Orthonormalize (modified Gram-Schmidt; the kernel is tiny).
    let mut out: Vec<Vec<E>> = Vec::with_capacity(kdim);
    for mut v in kernel {
        for k in &out {
            let mut dot = E::zero();
            for i in 0..n {
                dot = dot.add(k[i].conj().mul(v[i]));
            }
            for i in 0..n {
                let upd = k[i].mul(dot);
                v[i] = v[i].sub(upd);
            }
        }
        let norm: T = v.iter().map(|e| e.norm_sqr()).sum::<T>().sqrt();
        if norm > T::epsilon().sqrt() {
            let inv = T::one() / norm;
            out.push(v.into_iter().map(|e| e.scale(inv)).collect());
        }
    }
    out
}

pub fn psd_nullspace_real<T: Real>(h: &RealMatrix<T>, rel_tol: T) -> PsdFactor<T, T> {
    assert!(h.is_square());
    let n = h.rows;
    let mut work = h.data.clone();
    let (rank, perm, l_cols) = psd_factor::<T, T>(&mut work, n, rel_tol);
    let kernel = kernel_from_factor::<T, T>(n, rank, &perm, &l_cols);
    PsdFactor {
        n,
        rank,
        perm,
        l_cols,
        kernel,
        _marker: std::marker::PhantomData,
    }
}

pub fn psd_nullspace_complex<T: Real>(
    h: &ComplexMatrix<T>,
    rel_tol: T,
) -> PsdFactor<T, Complex<T>> {
    assert_eq!(h.rows, h.cols);
    let n = h.rows;
    let mut work = h.data.clone();
    let (rank, perm, l_cols) = psd_factor::<T, Complex<T>>(&mut work, n, rel_tol);
    let kernel = kernel_from_factor::<T, Complex<T>>(n, rank, &perm, &l_cols);
    PsdFactor {
        n,
        rank,
        perm,
        l_cols,
        kernel,
        _marker: std::marker::PhantomData,
    }
}

impl<T: Real> PsdFactor<T, T> {
    /// Solve H x = g for a consistent right-hand side, kernel part set to zero.
    pub fn solve_in_range(&self, g: &[T]) -> Vec<T> {
        let r = self.rank;
        let gp: Vec<T> = (0..r).map(|t| g[self.perm[t]]).collect();
        // L11 y = g1 (forward), L11^T x1 = y (backward).
        let mut y = vec![T::zero(); r];
        for t in 0..r {
            let mut acc = gp[t];
            for i in 0..t {
                acc -= self.l_cols[i][t] * y[i];
            }
            y[t] = acc / self.l_cols[t][t];
        }
        let mut x1 = vec![T::zero(); r];
        for t in (0..r).rev() {
            let mut acc = y[t];
            for i in (t + 1)..r {
                acc -= self.l_cols[t][i] * x1[i];
            }
            x1[t] = acc / self.l_cols[t][t];
        }
        let mut x = vec![T::zero(); self.n];
        for (t, &v) in x1.iter().enumerate() {
            x[self.perm[t]] = v;
        }
        x
    }
}
