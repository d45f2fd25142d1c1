//! The sp(2) algebra: anti-Hermitian 2x2 quaternionic matrices, the named
//! symmetry subalgebras, exponentials, and conjugation to the standard torus.

use crate::adhm::ConformalElement;
use crate::linalg::{eig_hermitian, exp_qmat};
use crate::qmat::{jmap, unchi};
use crate::{CoreError, QMat, Quat, Result};
use num_complex::Complex;

/// Anti-Hermitian 2x2 quaternionic matrix (element of sp(2)).
#[derive(Clone, Debug)]
pub struct Sp2Algebra(pub QMat);

impl Sp2Algebra {
    pub fn new(m: QMat) -> Result<Self> {
        if m.rows != 2 || m.cols != 2 {
            return Err(CoreError::DimensionMismatch(format!(
                "sp(2) element is {}x{}",
                m.rows, m.cols
            )));
        }
        let gap = (&m + &m.dagger()).norm_fro();
        if gap > 1e-12 * (1.0 + m.norm_fro()) {
            return Err(CoreError::InvalidData(format!(
                "not anti-Hermitian (gap {gap:e})"
            )));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &QMat {
        &self.0
    }
}

fn q2(e00: Quat, e01: Quat, e10: Quat, e11: Quat) -> QMat {
    QMat::from_rows(vec![vec![e00, e01], vec![e10, e11]])
}

fn diag2(a: Quat, b: Quat) -> QMat {
    q2(a, Quat::zero(), Quat::zero(), b)
}

/// Names of the catalog subalgebras, as used by the CLI.
pub const CATALOG_NAMES: [&str; 9] = [
    "r_t", "toral", "h311", "h41", "h5", "p311", "p41", "sp1sp1", "sp2",
];

/// Generator list of a named subalgebra of sp(2).
///
/// `r_t` takes the circle slope t and returns the single generator
/// diag(i, t i); every other name ignores t.
pub fn subalgebra(name: &str, t: Option<f64>) -> Result<Vec<QMat>> {
    let i = Quat::i();
    let j = Quat::j();
    let k = Quat::k();
    let z = Quat::zero();
    let half = 0.5;
    let s3h = 3.0f64.sqrt() / 2.0;
    let gens = match name {
        "r_t" => {
            let t = t.ok_or_else(|| CoreError::Domain("r_t requires the slope t".into()))?;
            if !(0.0..=1.0).contains(&t) {
                return Err(CoreError::Domain(format!("t = {t} outside [0, 1]")));
            }
            vec![diag2(i, i.scale(t))]
        }
        "toral" => vec![diag2(i, z), diag2(z, i)],
        "h311" => vec![
            diag2(i.scale(half), i.scale(half)),
            diag2(j.scale(half), j.scale(half)),
            diag2(k.scale(half), k.scale(half)),
        ],
        "h41" => {
            vec![
                diag2(i.scale(half), z),
                diag2(j.scale(half), z),
                diag2(k.scale(half), z),
            ]
        }
        "h5" => vec![
            diag2(i.scale(half), i.scale(1.5)),
            q2(j, Quat::real(s3h), Quat::real(-s3h), z),
            q2(k, i.scale(-s3h), i.scale(-s3h), z),
        ],
        "p311" => {
            let mut v = subalgebra("h311", None)?;
            v.push(q2(z, Quat::one(), -Quat::one(), z));
            v
        }
        "p41" => {
            let mut v = subalgebra("h41", None)?;
            v.push(diag2(z, i));
            v
        }
        "sp1sp1" => vec![
            diag2(i.scale(half), z),
            diag2(j.scale(half), z),
            diag2(k.scale(half), z),
            diag2(z, i.scale(half)),
            diag2(z, j.scale(half)),
            diag2(z, k.scale(half)),
        ],
        "sp2" => vec![
            diag2(i, z),
            diag2(j, z),
            diag2(k, z),
            diag2(z, i),
            diag2(z, j),
            diag2(z, k),
            q2(z, Quat::one(), -Quat::one(), z),
            q2(z, i, i, z),
            q2(z, j, j, z),
            q2(z, k, k, z),
        ],
        other => return Err(CoreError::UnknownName(other.to_string())),
    };
    Ok(gens)
}

/// The Manton-Sutcliffe conformal circle generator X = [0, 1; -1, 0].
pub fn ms_generator() -> QMat {
    q2(Quat::zero(), Quat::one(), -Quat::one(), Quat::zero())
}

/// The isomorphism tau: sp(1) -> h5 used by the conformal-spherical
/// equations, with the three generator images in printed order.
pub fn tau_h5() -> Vec<QMat> {
    subalgebra("h5", None).expect("catalog")
}

/// e^(theta X) as a conformal element; for X = diag(i, t i) this equals
/// diag(e^(i theta), e^(t i theta)).
pub fn exp_sp2(x: &QMat, theta: f64) -> Result<ConformalElement> {
    if x.rows != 2 || x.cols != 2 {
        return Err(CoreError::DimensionMismatch(format!(
            "sp(2) element is {}x{}",
            x.rows, x.cols
        )));
    }
    let e = exp_qmat(&x.scale(theta));
    ConformalElement::from_qmat2(&e)
}

/// Conjugate an sp(2) element to the standard torus: returns (A, a, b) with
/// A X A^dagger = diag(a i, b i) and a >= b >= 0.
///
/// The two eigenphase classes are read off the 4x4 Hermitian i*embed(X); the
/// conjugator's rows come from quaternionic right-eigenvectors recovered from
/// the complex eigenvectors of the two most negative eigenvalues.
pub fn conjugate_to_torus(x: &QMat) -> Result<(ConformalElement, f64, f64)> {
    if x.rows != 2 || x.cols != 2 {
        return Err(CoreError::DimensionMismatch(format!(
            "sp(2) element is {}x{}",
            x.rows, x.cols
        )));
    }
    let gap = (x + &x.dagger()).norm_fro();
    if gap > 1e-10 * (1.0 + x.norm_fro()) {
        return Err(CoreError::InvalidData(format!(
            "not anti-Hermitian (gap {gap:e})"
        )));
    }
    let norm = x.norm_fro();
    if norm < 1e-14 {
        return Ok((ConformalElement::identity(), 0.0, 0.0));
    }

    // H = i * embed(X) is Hermitian; embed eigenvalue (i a) maps to H-eigenvalue (-a).
    let emb = x.embed_complex();
    let h = emb.scale(Complex::new(0.0, 1.0));
    let (vals, vecs) = eig_hermitian(&h);
    let a = -vals[0];
    let b = -vals[1];

    // Eigenvector for the most negative eigenvalue -> right eigenvalue (a i).
    let v1: Vec<Complex<f64>> = (0..4).map(|r| vecs[(r, 0)]).collect();
    // Second column: orthogonalize against v1 and J v1 so that the resulting
    // quaternionic columns are orthonormal even for degenerate (a = b).
    let orthogonalize = |mut v: Vec<Complex<f64>>, v1: &[Complex<f64>]| {
        for base in [v1.to_vec(), jmap(v1)] {
            let mut dot = Complex::new(0.0, 0.0);
            for r in 0..4 {
                dot += base[r].conj() * v[r];
            }
            for r in 0..4 {
                v[r] -= base[r] * dot;
            }
        }
        v
    };
    let mut v2 = orthogonalize((0..4).map(|r| vecs[(r, 1)]).collect(), &v1);
    let mut n2: f64 = v2.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n2 < 1e-8 {
        v2 = orthogonalize((0..4).map(|r| vecs[(r, 2)]).collect(), &v1);
        n2 = v2.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    }
    for z in v2.iter_mut() {
        *z /= n2;
    }

    let u = unchi(&v1);
    let w = unchi(&v2);
    // Columns u, w: A^dagger = [u w], so A = [u w]^dagger.
    let cols = QMat::from_fn(2, 2, |r, c| if c == 0 { u[r] } else { w[r] });
    let a_mat = cols.dagger();
    let torus = &(&a_mat * x) * &a_mat.dagger();

    let off = torus[(0, 1)].norm().max(torus[(1, 0)].norm());
    let d0 = torus[(0, 0)];
    let d1 = torus[(1, 1)];
    let diag_gap = (d0 - Quat::i().scale(a))
        .norm()
        .max((d1 - Quat::i().scale(b)).norm());
    let res = off.max(diag_gap);
    if res > 1e-9 * (1.0 + norm) {
        return Err(CoreError::InternalConsistency(format!(
            "torus conjugation residual {res:e}"
        )));
    }
    Ok((ConformalElement::from_qmat2(&a_mat)?, a, b))
}

/// Bracket-closure residual of a generator list against given structure
/// constants: max over pairs of ||[X_l, X_m] - sum_p c_{lmp} X_p||.
pub fn bracket_closure_residual(
    gens: &[QMat],
    structure: &dyn Fn(usize, usize, usize) -> f64,
) -> f64 {
    let mut worst: f64 = 0.0;
    for l in 0..gens.len() {
        for m in 0..gens.len() {
            let mut comm = &(&gens[l] * &gens[m]) - &(&gens[m] * &gens[l]);
            for (p, g) in gens.iter().enumerate() {
                let c = structure(l, m, p);
                if c != 0.0 {
                    comm = &comm - &g.scale(c);
                }
            }
            worst = worst.max(comm.norm_fro());
        }
    }
    worst
}

/// Levi-Civita symbol on {0, 1, 2}.
pub fn epsilon(l: usize, m: usize, p: usize) -> f64 {
    match (l, m, p) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Structure constants of sp(1) + sp(1) in the standard six-generator basis.
pub fn epsilon_spin4(l: usize, m: usize, p: usize) -> f64 {
    if l < 3 && m < 3 && p < 3 {
        epsilon(l, m, p)
    } else if l >= 3 && m >= 3 && p >= 3 {
        epsilon(l - 3, m - 3, p - 3)
    } else {
        0.0
    }
}
