//! Matrix exponential by scaling and squaring with a Taylor kernel; the
//! matrices here are tiny (2x2 quaternionic, so 4x4 complex).

use crate::cmat::ComplexMatrix;
use crate::qmat::QuatMatrix;
use crate::scalar::Real;
use num_complex::Complex;

pub fn exp_complex<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let norm = a.norm_fro();
    let mut squarings = 0u32;
    let mut scale = T::one();
    let half = T::from_f64_lossy(0.5);
    let mut cur = norm;
    while cur > half {
        cur *= half;
        scale *= half;
        squarings += 1;
    }
    let b = a.scale(Complex::new(scale, T::zero()));

    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    let cutoff = T::epsilon() * T::from_f64_lossy(0.01);
    for k in 1..80 {
        term = &term * &b;
        term = term.scale(Complex::new(
            T::one() / T::from_f64_lossy(k as f64),
            T::zero(),
        ));
        sum = &sum + &term;
        if term.norm_fro() <= cutoff {
            break;
        }
    }
    let mut out = sum;
    for _ in 0..squarings {
        out = &out * &out;
    }
    out
}

pub fn exp_qmat<T: Real>(a: &QuatMatrix<T>) -> QuatMatrix<T> {
    let e = exp_complex(&a.embed_complex());
    let (q, _gap) = QuatMatrix::unembed_complex(&e);
    q
}
