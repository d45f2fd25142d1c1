//! Dense row-major quaternionic matrices and the 2x complex embedding.
//!
//! A quaternion entry q = alpha + beta j embeds as the 2x2 complex block
//! [[alpha, beta], [-conj(beta), conj(alpha)]]. The embedding is a ring
//! homomorphism and sends the quaternionic Hermitian conjugate to the
//! complex conjugate transpose.

use crate::cmat::ComplexMatrix;
use crate::quat::Quaternion;
use crate::rmat::RealMatrix;
use crate::scalar::Real;
use num_complex::Complex;
use std::ops::{Add, Mul, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct QuatMatrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Quaternion<T>>,
}

impl<T: Real> QuatMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Quaternion::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Quaternion::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion<T>>>) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Quaternion<T>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(r: &RealMatrix<T>) -> Self {
        Self::from_fn(r.rows, r.cols, |i, j| Quaternion::real(r[(i, j)]))
    }

    pub fn diag_scalar(n: usize, q: Quaternion<T>) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = q;
        }
        m
    }

    /// Hermitian conjugate (transpose + quaternion conjugation).
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Plain transpose without conjugation.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Real part A_0 with A = A_0 + vec(A).
    pub fn real_part(&self) -> RealMatrix<T> {
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].w)
    }

    /// Imaginary (vector) part of every entry.
    pub fn imag_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].imag())
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|q| q.scale(s)).collect(),
        }
    }

    /// Multiply every entry by q on the left: (qA)_{ij} = q * A_{ij}.
    pub fn scalar_mul_left(&self, q: Quaternion<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| q * a).collect(),
        }
    }

    /// Multiply every entry by q on the right: (Aq)_{ij} = A_{ij} * q.
    pub fn scalar_mul_right(&self, q: Quaternion<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * q).collect(),
        }
    }

    pub fn norm_fro(&self) -> T {
        self.data.iter().map(|q| q.norm_sq()).sum::<T>().sqrt()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)]
            } else {
                other[(i - self.rows, j)]
            }
        })
    }

    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(row0 + i, col0 + j)])
    }

    /// 2x2 block diagonal of two square matrices.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let n = a.rows + b.rows;
        let m = a.cols + b.cols;
        Self::from_fn(n, m, |i, j| {
            if i < a.rows && j < a.cols {
                a[(i, j)]
            } else if i >= a.rows && j >= a.cols {
                b[(i - a.rows, j - a.cols)]
            } else {
                Quaternion::zero()
            }
        })
    }

    /// Hermiticity gap max |A_{ij} - conj(A_{ji})|.
    pub fn hermiticity_gap(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// Entrywise symmetry gap max |A_{ij} - A_{ji}| (plain transpose).
    pub fn symmetry_gap(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = (self[(i, j)] - self[(j, i)]).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// Complex embedding: 2r x 2c complex matrix, blockwise per entry.
    pub fn embed_complex(&self) -> ComplexMatrix<T> {
        let (r, c) = (self.rows, self.cols);
        let mut out = ComplexMatrix::zeros(2 * r, 2 * c);
        for i in 0..r {
            for j in 0..c {
                let q = self[(i, j)];
                let a = q.alpha();
                let b = q.beta();
                out[(2 * i, 2 * j)] = a;
                out[(2 * i, 2 * j + 1)] = b;
                out[(2 * i + 1, 2 * j)] = -b.conj();
                out[(2 * i + 1, 2 * j + 1)] = a.conj();
            }
        }
        out
    }

    /// Inverse of `embed_complex`; the off-pattern residual is returned so
    /// callers can assert the input really was in the image of the embedding.
    pub fn unembed_complex(m: &ComplexMatrix<T>) -> (Self, T) {
        assert!(
            m.rows.is_multiple_of(2) && m.cols.is_multiple_of(2),
            "embedding has even dims"
        );
        let (r, c) = (m.rows / 2, m.cols / 2);
        let mut out = Self::zeros(r, c);
        let mut gap = T::zero();
        for i in 0..r {
            for j in 0..c {
                let a = m[(2 * i, 2 * j)];
                let b = m[(2 * i, 2 * j + 1)];
                let d1 = (m[(2 * i + 1, 2 * j)] + b.conj()).norm();
                let d2 = (m[(2 * i + 1, 2 * j + 1)] - a.conj()).norm();
                if d1 > gap {
                    gap = d1;
                }
                if d2 > gap {
                    gap = d2;
                }
                out[(i, j)] = Quaternion::from_complex_pair(a, b);
            }
        }
        (out, gap)
    }

    /// Spectral norm (largest singular value) through the complex embedding.
    pub fn norm_2(&self) -> T {
        let e = self.embed_complex();
        crate::linalg::svd::singular_values(&e)
            .first()
            .copied()
            .unwrap_or(T::zero())
    }
}

/// chi: column vector over H -> C^{2m}, the first column of the embedding.
/// Entry q = a + b j maps to the interleaved pair (a, -conj(b)).
pub fn chi<T: Real>(v: &[Quaternion<T>]) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(2 * v.len());
    for q in v {
        out.push(q.alpha());
        out.push(-q.beta().conj());
    }
    out
}

/// Inverse of `chi`.
pub fn unchi<T: Real>(v: &[Complex<T>]) -> Vec<Quaternion<T>> {
    assert!(v.len().is_multiple_of(2));
    let mut out = Vec::with_capacity(v.len() / 2);
    for pair in v.chunks_exact(2) {
        let a = pair[0];
        let b = -pair[1].conj();
        out.push(Quaternion::from_complex_pair(a, b));
    }
    out
}

/// The antilinear quaternionic-structure map J v = Omega conj(v) on chi
/// coordinates; chi(u * j) = jmap(chi(u)).
pub fn jmap<T: Real>(v: &[Complex<T>]) -> Vec<Complex<T>> {
    assert!(v.len().is_multiple_of(2));
    let mut out = Vec::with_capacity(v.len());
    for pair in v.chunks_exact(2) {
        out.push(pair[1].conj());
        out.push(-pair[0].conj());
    }
    out
}

impl<T: Real> std::ops::Index<(usize, usize)> for QuatMatrix<T> {
    type Output = Quaternion<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for QuatMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &QuatMatrix<T> {
    type Output = QuatMatrix<T>;
    fn add(self, rhs: Self) -> QuatMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QuatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &QuatMatrix<T> {
    type Output = QuatMatrix<T>;
    fn sub(self, rhs: Self) -> QuatMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QuatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<T: Real> Mul for &QuatMatrix<T> {
    type Output = QuatMatrix<T>;
    fn mul(self, rhs: Self) -> QuatMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "quaternionic matmul shape");
        let mut out = QuatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == Quaternion::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out[(i, j)] + a * rhs[(l, j)];
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    type Q = Quaternion<f64>;
    type M = QuatMatrix<f64>;

    #[test]
    fn embed_identity_case() {
        let m = M::from_rows(vec![vec![Q::one()]]);
        let e = m.embed_complex();
        assert_eq!(e.rows, 2);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((e[(i, j)] - Complex::new(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn embed_j_block() {
        // embed([j]) = [[0, 1], [-1, 0]]
        let m = M::from_rows(vec![vec![Q::j()]]);
        let e = m.embed_complex();
        assert!((e[(0, 0)].norm()) < 1e-15);
        assert!((e[(0, 1)] - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!((e[(1, 0)] + Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!((e[(1, 1)].norm()) < 1e-15);
    }

    #[test]
    fn dagger_antihomomorphism() {
        let a = M::from_fn(3, 2, |i, j| {
            Q::new(i as f64, j as f64 - 0.5, 0.3, -(i as f64) * 0.2)
        });
        let b = M::from_fn(2, 4, |i, j| {
            Q::new(-(j as f64), i as f64, 0.1 * (i + j) as f64, 1.0)
        });
        let lhs = (&a * &b).dagger();
        let rhs = &b.dagger() * &a.dagger();
        assert!((&lhs - &rhs).norm_fro() < 1e-13);
    }

    #[test]
    fn embed_respects_products_and_adjoints() {
        let a = M::from_fn(3, 2, |i, j| {
            Q::new(0.3 * i as f64, -0.4, 0.9 * j as f64, 0.11)
        });
        let b = M::from_fn(2, 4, |i, j| {
            Q::new(1.0, 0.2 * j as f64, -0.7, 0.5 * i as f64)
        });
        let prod = &a * &b;
        let lhs = prod.embed_complex();
        let rhs = &a.embed_complex() * &b.embed_complex();
        assert!((&lhs - &rhs).norm_fro() < 1e-13);
        let dag = a.dagger().embed_complex();
        let emb_dag = a.embed_complex().dagger();
        assert!((&dag - &emb_dag).norm_fro() < 1e-14);
    }

    #[test]
    fn chi_respects_matvec_and_jmap() {
        let a = M::from_fn(3, 3, |i, j| {
            Q::new(0.1 + i as f64, 0.2 * j as f64, -0.3, 0.4)
        });
        let v: Vec<Q> = (0..3)
            .map(|i| Q::new(1.0, -0.5 * i as f64, 0.25, 0.7))
            .collect();
        let av: Vec<Q> = {
            let vm = M::from_fn(3, 1, |i, _| v[i]);
            let prod = &a * &vm;
            (0..3).map(|i| prod[(i, 0)]).collect()
        };
        let lhs = a.embed_complex().matvec(&chi(&v));
        let rhs = chi(&av);
        let err: f64 = lhs.iter().zip(&rhs).map(|(x, y)| (x - y).norm()).sum();
        assert!(err < 1e-13);

        // chi(v * j) = J chi(v)
        let vj: Vec<Q> = v.iter().map(|&q| q * Q::j()).collect();
        let lhs2 = chi(&vj);
        let rhs2 = jmap(&chi(&v));
        let err2: f64 = lhs2.iter().zip(&rhs2).map(|(x, y)| (x - y).norm()).sum();
        assert!(err2 < 1e-15);
    }

    #[test]
    fn unembed_roundtrip() {
        let a = M::from_fn(2, 3, |i, j| Q::new(i as f64, j as f64, 0.5, -1.0));
        let (b, gap) = M::unembed_complex(&a.embed_complex());
        assert!(gap < 1e-15);
        assert!((&a - &b).norm_fro() < 1e-15);
    }
}
