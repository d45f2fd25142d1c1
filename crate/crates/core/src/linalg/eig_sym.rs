//! Real symmetric eigendecomposition: Householder tridiagonalization followed
//! by implicit-shift QL iteration, eigenvalues ascending.

use crate::error::CoreError;
use crate::rmat::RealMatrix;
use crate::scalar::Real;
use crate::Result;

/// Eigendecomposition of a symmetric matrix without a symmetry check.
/// Returns (eigenvalues ascending, orthogonal matrix with eigenvectors as columns).
pub fn eig_symmetric<T: Real>(s: &RealMatrix<T>) -> (Vec<T>, RealMatrix<T>) {
    assert!(s.is_square(), "eig_symmetric needs a square matrix");
    let n = s.rows;
    if n == 0 {
        return (vec![], RealMatrix::zeros(0, 0));
    }
    let mut a = s.clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(&mut a, &mut d, &mut e);
    tqli(&mut d, &mut e, &mut a);

    // Sort ascending, permuting eigenvector columns along.
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let vals: Vec<T> = idx.iter().map(|&i| d[i]).collect();
    let vecs = RealMatrix::from_fn(n, n, |i, j| a[(i, idx[j])]);
    (vals, vecs)
}

/// Symmetric eigendecomposition with the input-symmetry contract enforced:
/// rejects S when max|S - S^T| > tol_rel * ||S||_F (or > tol_rel for S ~ 0).
pub fn sym_eig_checked<T: Real>(s: &RealMatrix<T>, tol_rel: T) -> Result<(Vec<T>, RealMatrix<T>)> {
    if !s.is_square() {
        return Err(CoreError::DimensionMismatch(format!(
            "symmetric eigensolver got {}x{}",
            s.rows, s.cols
        )));
    }
    let scale = s.norm_fro().max(T::one());
    let gap = s.asymmetry();
    if gap > tol_rel * scale {
        return Err(CoreError::SymmetryViolation {
            residual: gap.to_f64().unwrap_or(f64::NAN),
        });
    }
    // Work on the symmetrized matrix so the output is exactly consistent.
    let sym = RealMatrix::from_fn(s.rows, s.rows, |i, j| {
        (s[(i, j)] + s[(j, i)]) * T::from_f64_lossy(0.5)
    });
    Ok(eig_symmetric(&sym))
}

fn tred2<T: Real>(a: &mut RealMatrix<T>, d: &mut [T], e: &mut [T]) {
    let n = a.rows;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = T::zero();
        if l > 0 {
            let mut scale = T::zero();
            for k in 0..=l {
                scale += a[(i, k)].abs();
            }
            if scale == T::zero() {
                e[i] = a[(i, l)];
            } else {
                for k in 0..=l {
                    let v = a[(i, k)] / scale;
                    a[(i, k)] = v;
                    h += v * v;
                }
                let f = a[(i, l)];
                let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[(i, l)] = f - g;
                let mut f_acc = T::zero();
                for j in 0..=l {
                    a[(j, i)] = a[(i, j)] / h;
                    let mut g_acc = T::zero();
                    for k in 0..=j {
                        g_acc += a[(j, k)] * a[(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g_acc += a[(k, j)] * a[(i, k)];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a[(i, j)];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let upd = f * e[k] + g * a[(i, k)];
                        a[(j, k)] -= upd;
                    }
                }
            }
        } else {
            e[i] = a[(i, l)];
        }
        d[i] = h;
    }
    d[0] = T::zero();
    e[0] = T::zero();
    for i in 0..n {
        if d[i] != T::zero() {
            for j in 0..i {
                let mut g = T::zero();
                for k in 0..i {
                    g += a[(i, k)] * a[(k, j)];
                }
                for k in 0..i {
                    let upd = g * a[(k, i)];
                    a[(k, j)] -= upd;
                }
            }
        }
        d[i] = a[(i, i)];
        a[(i, i)] = T::one();
        for j in 0..i {
            a[(j, i)] = T::zero();
            a[(i, j)] = T::zero();
        }
    }
}

fn tqli<T: Real>(d: &mut [T], e: &mut [T], z: &mut RealMatrix<T>) {
    let n = d.len();
    if n == 0 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 50, "tqli: too many iterations");
            let mut g = (d[l + 1] - d[l]) / (e[l] + e[l]);
            let mut r = hypot(g, T::one());
            g = d[m] - d[l] + e[l] / (g + sign_like(r, g));
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + (c + c) * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[(k, i + 1)];
                    z[(k, i + 1)] = s * z[(k, i)] + c * f;
                    z[(k, i)] = c * z[(k, i)] - s * f;
                }
            }
            if r == T::zero() && m > l {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
}

fn hypot<T: Real>(a: T, b: T) -> T {
    let (aa, ab) = (a.abs(), b.abs());
    if aa > ab {
        let r = ab / aa;
        aa * (T::one() + r * r).sqrt()
    } else if ab != T::zero() {
        let r = aa / ab;
        ab * (T::one() + r * r).sqrt()
    } else {
        T::zero()
    }
}

fn sign_like<T: Real>(mag: T, sgn: T) -> T {
    if sgn >= T::zero() {
        mag.abs()
    } else {
        -mag.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_case() {
        let s: RealMatrix<f64> = RealMatrix::from_rows(vec![vec![2.0, 0.0], vec![0.0, 1.0]]);
        let (vals, _) = eig_symmetric(&s);
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_random() {
        // Deterministic pseudo-random symmetric matrix.
        let n = 9;
        let mut seed = 42u64;
        let mut next = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let mut s = RealMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = next();
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        let (vals, q) = eig_symmetric(&s);
        // S = Q diag(vals) Q^T
        let mut lam = RealMatrix::zeros(n, n);
        for i in 0..n {
            lam[(i, i)] = vals[i];
        }
        let recon = &(&q * &lam) * &q.transpose();
        assert!((&recon - &s).norm_fro() < 1e-12 * s.norm_fro().max(1.0));
        let orth = &q.transpose() * &q;
        assert!((&orth - &RealMatrix::identity(n)).norm_fro() < 1e-12);
        for w in vals.windows(2) {
            assert!(w[0] <= w[1] + 1e-15);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let s = RealMatrix::from_rows(vec![vec![1.0, 2.0], vec![0.0, 1.0]]);
        assert!(sym_eig_checked(&s, 1e-10).is_err());
    }

    /// Independent oracle: classical Jacobi rotations (largest off-diagonal
    /// pivot), a different algorithm from the tridiagonal QL path.
    fn jacobi_eigenvalues_oracle(s: &RealMatrix<f64>) -> Vec<f64> {
        let n = s.rows;
        let mut a = s.clone();
        for _ in 0..200 {
            let mut p = 0;
            let mut q = 1;
            let mut big = 0.0f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    if a[(i, j)].abs() > big {
                        big = a[(i, j)].abs();
                        p = i;
                        q = j;
                    }
                }
            }
            if big < 1e-14 * s.norm_fro().max(1.0) {
                break;
            }
            let theta = 0.5 * (2.0 * a[(p, q)]).atan2(a[(p, p)] - a[(q, q)]);
            let (c, sn) = (theta.cos(), theta.sin());
            let mut rot = RealMatrix::identity(n);
            rot[(p, p)] = c;
            rot[(q, q)] = c;
            rot[(p, q)] = -sn;
            rot[(q, p)] = sn;
            a = &(&rot.transpose() * &a) * &rot;
        }
        let mut vals: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
        vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
        vals
    }

    #[test]
    fn matches_jacobi_oracle() {
        let mut seed = 1234u64;
        let mut next = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for trial in 0..6 {
            let n = 3 + trial;
            let mut s = RealMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let v = next();
                    s[(i, j)] = v;
                    s[(j, i)] = v;
                }
            }
            let (vals, _) = sym_eig_checked(&s, 1e-10).unwrap();
            let oracle = jacobi_eigenvalues_oracle(&s);
            for (a, b) in vals.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-10, "n = {n}: {a} vs {b}");
            }
        }
    }
}
