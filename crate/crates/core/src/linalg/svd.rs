//! One-sided Jacobi SVD for small dense real and complex matrices.
//!
//! Column rotations orthogonalize A in place while the same rotations
//! accumulate into V, giving A = U diag(sigma) V^H with high relative
//! accuracy for the small singular values (needed by the rank and kernel
//! thresholds used throughout the toolkit).

use crate::cmat::ComplexMatrix;
use crate::rmat::RealMatrix;
use crate::scalar::Real;
use num_complex::Complex;

/// Minimal scalar-field abstraction shared by the real and complex variants.
pub trait Entry<T: Real>: Copy {
    fn zero() -> Self;
    fn one() -> Self;
    fn conj(self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn add(self, o: Self) -> Self;
    fn scale(self, s: T) -> Self;
    fn norm_sqr(self) -> T;
    fn norm(self) -> T {
        self.norm_sqr().sqrt()
    }
}

impl<T: Real> Entry<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn one() -> Self {
        T::one()
    }
    fn conj(self) -> Self {
        self
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn scale(self, s: T) -> Self {
        self * s
    }
    fn norm_sqr(self) -> T {
        self * self
    }
}

impl<T: Real> Entry<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn one() -> Self {
        Complex::new(T::one(), T::zero())
    }
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn scale(self, s: T) -> Self {
        self * s
    }
    fn norm_sqr(self) -> T {
        Complex::norm_sqr(&self)
    }
}

pub struct SvdResult<T, E> {
    /// Singular values, descending.
    pub sigma: Vec<T>,
    /// Left singular vectors as columns (only for sigma > 0; zero columns otherwise).
    pub u: Vec<Vec<E>>,
    /// Right singular vectors as columns, orthonormal (full n columns).
    pub v: Vec<Vec<E>>,
}

/// One-sided Jacobi on the columns of `a` (given as column vectors).
pub fn jacobi_svd<T: Real, E: Entry<T>>(cols: Vec<Vec<E>>) -> SvdResult<T, E> {
    let n = cols.len();
    let m = if n > 0 { cols[0].len() } else { 0 };
    let mut a = cols;
    let mut v: Vec<Vec<E>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { E::one() } else { E::zero() })
                .collect()
        })
        .collect();

    let eps = T::epsilon() * T::from_f64_lossy(8.0);
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let app: T = a[p].iter().map(|e| e.norm_sqr()).sum();
                let aqq: T = a[q].iter().map(|e| e.norm_sqr()).sum();
                let mut apq = E::zero();
                for i in 0..m {
                    apq = apq.add(a[p][i].conj().mul(a[q][i]));
                }
                let g = apq.norm();
                if g <= eps * (app * aqq).sqrt() || g == T::zero() {
                    continue;
                }
                rotated = true;
                // Absorb the phase of apq into column p, then rotate as in the
                // real symmetric 2x2 case.
                let u_phase = apq.scale(T::one() / g); // unit entry
                let tau = (aqq - app) / (g + g);
                let t = {
                    let sgn = if tau >= T::zero() {
                        T::one()
                    } else {
                        -T::one()
                    };
                    sgn / (tau.abs() + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for i in 0..m {
                    let bp = a[p][i].mul(u_phase);
                    let aq = a[q][i];
                    a[p][i] = bp.scale(c).add(aq.scale(-s));
                    a[q][i] = bp.scale(s).add(aq.scale(c));
                }
                for i in 0..n {
                    let bp = v[p][i].mul(u_phase);
                    let vq = v[q][i];
                    v[p][i] = bp.scale(c).add(vq.scale(-s));
                    v[q][i] = bp.scale(s).add(vq.scale(c));
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<T> = a
        .iter()
        .map(|col| col.iter().map(|e| e.norm_sqr()).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    let mut u = Vec::with_capacity(n);
    let mut vv = Vec::with_capacity(n);
    let mut sig = Vec::with_capacity(n);
    for &j in &order {
        let s = sigma[j];
        sig.push(s);
        if s > T::zero() {
            u.push(a[j].iter().map(|e| e.scale(T::one() / s)).collect());
        } else {
            u.push(vec![E::zero(); m]);
        }
        vv.push(v[j].clone());
    }
    sigma = sig;
    SvdResult { sigma, u, v: vv }
}

pub fn svd_complex<T: Real>(a: &ComplexMatrix<T>) -> SvdResult<T, Complex<T>> {
    let cols: Vec<Vec<Complex<T>>> = (0..a.cols).map(|j| a.col(j)).collect();
    jacobi_svd(cols)
}

pub fn svd_real<T: Real>(a: &RealMatrix<T>) -> SvdResult<T, T> {
    let cols: Vec<Vec<T>> = (0..a.cols).map(|j| a.col(j)).collect();
    jacobi_svd(cols)
}

/// Singular values of a complex matrix, descending.
pub fn singular_values<T: Real>(a: &ComplexMatrix<T>) -> Vec<T> {
    svd_complex(a).sigma
}
