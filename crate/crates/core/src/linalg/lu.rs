//! Complex LU factorization with partial pivoting: solves and inverses for
//! the small dense systems used by the polar iteration.

use crate::cmat::ComplexMatrix;
use crate::error::CoreError;
use crate::scalar::Real;
use crate::Result;
use num_complex::Complex;

pub struct Lu<T> {
    lu: ComplexMatrix<T>,
    perm: Vec<usize>,
}

pub fn lu_factor<T: Real>(a: &ComplexMatrix<T>) -> Result<Lu<T>> {
    if !matches!(a.rows.cmp(&a.cols), std::cmp::Ordering::Equal) {
        return Err(CoreError::DimensionMismatch(format!(
            "LU of {}x{}",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = a.norm_fro().max(T::one());
    for col in 0..n {
        let mut pivot = col;
        let mut best = lu[(col, col)].norm();
        for r in (col + 1)..n {
            let v = lu[(r, col)].norm();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best <= T::epsilon() * scale * T::from_f64_lossy(16.0) {
            return Err(CoreError::SingularInput(format!(
                "pivot {col} is {:e}",
                best.to_f64().unwrap_or(f64::NAN)
            )));
        }
        if pivot != col {
            for j in 0..n {
                let tmp = lu[(col, j)];
                lu[(col, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = tmp;
            }
            perm.swap(col, pivot);
        }
        let d = lu[(col, col)];
        for r in (col + 1)..n {
            let f = lu[(r, col)] / d;
            lu[(r, col)] = f;
            for j in (col + 1)..n {
                let v = lu[(r, j)] - f * lu[(col, j)];
                lu[(r, j)] = v;
            }
        }
    }
    Ok(Lu { lu, perm })
}

impl<T: Real> Lu<T> {
    pub fn solve_vec(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let v = x[i] - self.lu[(i, j)] * x[j];
                x[i] = v;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let v = x[i] - self.lu[(i, j)] * x[j];
                x[i] = v;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> ComplexMatrix<T> {
        let n = self.lu.rows;
        let mut out = ComplexMatrix::zeros(n, n);
        let mut e = vec![Complex::new(T::zero(), T::zero()); n];
        for j in 0..n {
            for v in e.iter_mut() {
                *v = Complex::new(T::zero(), T::zero());
            }
            e[j] = Complex::new(T::one(), T::zero());
            let col = self.solve_vec(&e);
            for i in 0..n {
                out[(i, j)] = col[i];
            }
        }
        out
    }
}

pub fn inverse_complex<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    Ok(lu_factor(a)?.inverse())
}
