//! Representation theory of sp(1) and sp(1)+sp(1): irreducible complex and
//! real representations, tensor products, and trivial-summand counting with
//! numeric cross-checks.
//!
//! Complex irreducibles live in the standard weight basis; real forms are
//! recovered numerically from the conjugation intertwiner (fixed subspace of
//! the induced antilinear involution, doubling when the intertwiner is of
//! quaternionic type).

use crate::cmat::ComplexMatrix;
#[cfg(test)]
use crate::linalg::eig_hermitian;
use crate::linalg::{psd_nullspace_complex, psd_nullspace_real};
use crate::rmat::RealMatrix;
use crate::{CMat, CoreError, RMat, Result};
use num_complex::Complex;

pub type C64 = Complex<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algebra {
    Sp1,
    Sp1Sp1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepField {
    Real,
    Complex,
    Quaternionic,
}

/// A representation given by one generator matrix per standard-basis element
/// (3 for sp(1), 6 for sp(1)+sp(1)).
#[derive(Clone, Debug)]
pub struct Representation {
    pub algebra: Algebra,
    pub field: RepField,
    pub dim: usize,
    pub gens: GenSet,
}

#[derive(Clone, Debug)]
pub enum GenSet {
    Real(Vec<RMat>),
    Complex(Vec<CMat>),
    Quaternionic(Vec<crate::QMat>),
}

impl Representation {
    pub fn real_gens(&self) -> Result<&[RMat]> {
        match &self.gens {
            GenSet::Real(g) => Ok(g),
            _ => Err(CoreError::UnsupportedShape(
                "expected a real representation".into(),
            )),
        }
    }

    pub fn complex_gens(&self) -> Result<&[CMat]> {
        match &self.gens {
            GenSet::Complex(g) => Ok(g),
            _ => Err(CoreError::UnsupportedShape(
                "expected a complex representation".into(),
            )),
        }
    }

    /// Bracket-closure residual against the algebra's structure constants.
    pub fn bracket_residual(&self) -> f64 {
        let eps: &dyn Fn(usize, usize, usize) -> f64 = match self.algebra {
            Algebra::Sp1 => &crate::liealg::epsilon,
            Algebra::Sp1Sp1 => &crate::liealg::epsilon_spin4,
        };
        match &self.gens {
            GenSet::Real(g) => bracket_residual_generic(
                g,
                eps,
                |a, b| a * b,
                |a, b| a + b,
                |a, s| a.scale(s),
                |a| a.norm_fro(),
            ),
            GenSet::Complex(g) => bracket_residual_generic(
                g,
                eps,
                |a, b| a * b,
                |a, b| a + b,
                |a, s| a.scale(C64::new(s, 0.0)),
                |a| a.norm_fro(),
            ),
            GenSet::Quaternionic(g) => bracket_residual_generic(
                g,
                eps,
                |a, b| a * b,
                |a, b| a + b,
                |a, s| a.scale(s),
                |a| a.norm_fro(),
            ),
        }
    }
}

fn bracket_residual_generic<M: Clone>(
    gens: &[M],
    eps: &dyn Fn(usize, usize, usize) -> f64,
    mul: impl Fn(&M, &M) -> M,
    add: impl Fn(&M, &M) -> M,
    scale: impl Fn(&M, f64) -> M,
    norm: impl Fn(&M) -> f64,
) -> f64 {
    let mut worst: f64 = 0.0;
    for l in 0..gens.len() {
        for m in 0..gens.len() {
            let mut comm = add(
                &mul(&gens[l], &gens[m]),
                &scale(&mul(&gens[m], &gens[l]), -1.0),
            );
            for p in 0..gens.len() {
                let c = eps(l, m, p);
                if c != 0.0 {
                    comm = add(&comm, &scale(&gens[p], -c));
                }
            }
            worst = worst.max(norm(&comm));
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// Complex irreducibles

/// Complex irreducible sp(1) generators in the weight basis: dimension n,
/// highest weight (n-1)/2, with Y1 = i J3 diagonal.
pub fn complex_sp1_gens(n: usize) -> Vec<CMat> {
    assert!(n >= 1);
    let j = (n as f64 - 1.0) / 2.0;
    let mut jp = CMat::zeros(n, n);
    for idx in 1..n {
        let m = j - idx as f64;
        jp[(idx - 1, idx)] = C64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.dagger();
    let mut j3 = CMat::zeros(n, n);
    for idx in 0..n {
        j3[(idx, idx)] = C64::new(j - idx as f64, 0.0);
    }
    let i = C64::new(0.0, 1.0);
    let half = C64::new(0.5, 0.0);
    let y1 = j3.scale(i);
    let y2 = (&jp - &jm).scale(half);
    let y3 = (&jp + &jm).scale(i * half);
    vec![y1, y2, y3]
}

/// The unique irreducible complex n-representation of sp(1).
pub fn complex_irrep_sp1(n: usize) -> Result<Representation> {
    if n < 1 {
        return Err(CoreError::Domain(
            "representation dimension must be >= 1".into(),
        ));
    }
    Ok(Representation {
        algebra: Algebra::Sp1,
        field: RepField::Complex,
        dim: n,
        gens: GenSet::Complex(complex_sp1_gens(n)),
    })
}

/// Complex irreducible sp(1)+sp(1) generators on C^(mn):
/// rho_m (x) id + id (x) rho_n, six generators in the standard basis order.
pub fn complex_spin4_gens(m: usize, n: usize) -> Vec<CMat> {
    let gm = complex_sp1_gens(m);
    let gn = complex_sp1_gens(n);
    let eye_m = CMat::identity(m);
    let eye_n = CMat::identity(n);
    let kron = |a: &CMat, b: &CMat| -> CMat {
        CMat::from_fn(a.rows * b.rows, a.cols * b.cols, |i, jx| {
            let (ia, ib) = (i / b.rows, i % b.rows);
            let (ja, jb) = (jx / b.cols, jx % b.cols);
            a[(ia, ja)] * b[(ib, jb)]
        })
    };
    let mut out = Vec::with_capacity(6);
    for g in &gm {
        out.push(kron(g, &eye_n));
    }
    for g in &gn {
        out.push(kron(&eye_m, g));
    }
    out
}

// ---------------------------------------------------------------------------
// Real forms via the conjugation intertwiner

/// Unitary S with G_l S = S conj(G_l) for all l, and the Frobenius-Schur
/// sign epsilon with S conj(S) = epsilon I. Requires an irreducible input.
pub fn conj_intertwiner(gens: &[CMat]) -> Result<(CMat, f64)> {
    let d = gens[0].rows;
    if d == 1 {
        return Ok((CMat::identity(1), 1.0));
    }
    // Complex-linear system on vec(S), row-major; the kernel is resolved on
    // the Gram matrix (the spectral gap is representation-theoretic).
    let rows = gens.len() * d * d;
    let mut a = CMat::zeros(rows, d * d);
    for (l, g) in gens.iter().enumerate() {
        let gc = g.conj();
        for i in 0..d {
            for jx in 0..d {
                let r = l * d * d + i * d + jx;
                // sum_p G[i,p] S[p,jx] - sum_q S[i,q] conj(G)[q,jx]
                for p in 0..d {
                    let v = a[(r, p * d + jx)] + g[(i, p)];
                    a[(r, p * d + jx)] = v;
                }
                for qx in 0..d {
                    let v = a[(r, i * d + qx)] - gc[(qx, jx)];
                    a[(r, i * d + qx)] = v;
                }
            }
        }
    }
    let gram = &a.dagger() * &a;
    let kernel = psd_nullspace_complex(&gram, 1e-9).kernel;
    if kernel.len() != 1 {
        return Err(CoreError::InternalConsistency(format!(
            "conjugation intertwiner space has dimension {}, expected 1 (input reducible?)",
            kernel.len()
        )));
    }
    let mut s_mat = CMat::from_fn(d, d, |i, jx| kernel[0][i * d + jx]);
    // Normalize: S^H S = c I by Schur; rescale to unitary.
    let shs = &s_mat.dagger() * &s_mat;
    let c = (0..d).map(|i| shs[(i, i)].re).sum::<f64>() / d as f64;
    s_mat = s_mat.scale(C64::new(1.0 / c.sqrt(), 0.0));
    // Deterministic phase: first significant entry positive real.
    let mut phase = C64::new(1.0, 0.0);
    for z in &s_mat.data {
        if z.norm() > 1e-8 {
            phase = z.conj() / z.norm();
            break;
        }
    }
    s_mat = s_mat.scale(phase);
    let p = &s_mat * &s_mat.conj();
    let eps = if p[(0, 0)].re >= 0.0 { 1.0 } else { -1.0 };
    let gap = (&p - &CMat::identity(d).scale(C64::new(eps, 0.0))).norm_fro();
    if gap > 1e-8 * (d as f64) {
        return Err(CoreError::InternalConsistency(format!(
            "S conj(S) is not +-I (gap {gap:e})"
        )));
    }
    Ok((s_mat, eps))
}

/// Real form of an irreducible complex representation: dimension d for real
/// (Frobenius-Schur +1) type, 2d for quaternionic (-1) type.
pub fn real_form(gens: &[CMat]) -> Result<Vec<RMat>> {
    let d = gens[0].rows;
    let (s_mat, eps) = conj_intertwiner(gens)?;

    // The antilinear involution sigma and the working generator set.
    let (work, sigma): (Vec<CMat>, Box<dyn Fn(&[C64]) -> Vec<C64>>) = if eps > 0.0 {
        let s = s_mat.clone();
        (
            gens.to_vec(),
            Box::new(move |v: &[C64]| {
                let vc: Vec<C64> = v.iter().map(|z| z.conj()).collect();
                s.matvec(&vc)
            }),
        )
    } else {
        let doubled: Vec<CMat> = gens
            .iter()
            .map(|g| {
                CMat::from_fn(2 * d, 2 * d, |i, jx| {
                    if i < d && jx < d {
                        g[(i, jx)]
                    } else if i >= d && jx >= d {
                        g[(i - d, jx - d)]
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        let s = s_mat.clone();
        (
            doubled,
            Box::new(move |v: &[C64]| {
                let (top, bot) = v.split_at(d);
                let bc: Vec<C64> = bot.iter().map(|z| z.conj()).collect();
                let tc: Vec<C64> = top.iter().map(|z| z.conj()).collect();
                let mut out = s.matvec(&bc).iter().map(|z| -z).collect::<Vec<_>>();
                out.extend(s.matvec(&tc));
                out
            }),
        )
    };
    let dim = work[0].rows;

    // Orthonormal basis of the sigma-fixed real subspace.
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(dim);
    'cand: for c in 0..2 * dim {
        if basis.len() == dim {
            break;
        }
        let idx = c / 2;
        let unit = if c % 2 == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 1.0)
        };
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[idx] = unit;
        let sv = sigma(&v);
        for (vi, si) in v.iter_mut().zip(sv) {
            *vi += si;
        }
        for b in &basis {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..dim {
                dot += b[i].conj() * v[i];
            }
            for i in 0..dim {
                v[i] -= b[i] * dot;
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue 'cand;
        }
        for z in v.iter_mut() {
            *z /= norm;
        }
        basis.push(v);
    }
    if basis.len() != dim {
        return Err(CoreError::InternalConsistency(format!(
            "sigma-fixed subspace has dimension {} != {dim}",
            basis.len()
        )));
    }

    // Y_l = Q^H G_l Q is real antisymmetric in this basis.
    let mut out = Vec::with_capacity(work.len());
    for g in &work {
        let mut y = RealMatrix::zeros(dim, dim);
        let mut imag_gap: f64 = 0.0;
        for (bj, col) in basis.iter().enumerate() {
            let gcol = g.matvec(col);
            for (bi, row) in basis.iter().enumerate() {
                let mut dot = C64::new(0.0, 0.0);
                for i in 0..dim {
                    dot += row[i].conj() * gcol[i];
                }
                imag_gap = imag_gap.max(dot.im.abs());
                y[(bi, bj)] = dot.re;
            }
        }
        if imag_gap > 1e-9 {
            return Err(CoreError::InternalConsistency(format!(
                "real form has imaginary residue {imag_gap:e}"
            )));
        }
        out.push(y);
    }
    Ok(out)
}

/// The printed irreducible real 4-representation: left quaternion
/// multiplication by (i/2, j/2, k/2) in the basis (1, i, j, k).
pub fn varrho4_gens() -> Vec<RMat> {
    let y1 = RealMatrix::from_rows(vec![
        vec![0.0, -1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, -1.0],
        vec![0.0, 0.0, 1.0, 0.0],
    ]);
    let y2 = RealMatrix::from_rows(vec![
        vec![0.0, 0.0, -1.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, -1.0, 0.0, 0.0],
    ]);
    let y3 = RealMatrix::from_rows(vec![
        vec![0.0, 0.0, 0.0, -1.0],
        vec![0.0, 0.0, -1.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 0.0],
    ]);
    vec![y1.scale(0.5), y2.scale(0.5), y3.scale(0.5)]
}

/// The printed realization map U in SU(4) with U varrho4(v) U^dagger =
/// diag(rho2(v), rho2(v)).
pub fn varrho4_realization_u() -> CMat {
    let s = 1.0 / 2.0f64.sqrt();
    let z = C64::new(0.0, 0.0);
    let one = C64::new(s, 0.0);
    let i = C64::new(0.0, s);
    CMat::from_fn(4, 4, |r, c| match (r, c) {
        (0, 0) => one,
        (0, 1) => i,
        (1, 2) => -one,
        (1, 3) => i,
        (2, 2) => i,
        (2, 3) => -one,
        (3, 0) => i,
        (3, 1) => one,
        _ => z,
    })
}

type RealGenCache = std::sync::Mutex<std::collections::HashMap<(usize, usize), Vec<RMat>>>;

// Real forms are recomputed identically across tensor sweeps; memoize them.
// Key (n, 0) for sp(1), (a, b) with b >= 1 for spin(4).
fn real_gen_cache() -> &'static RealGenCache {
    static CACHE: std::sync::OnceLock<RealGenCache> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| std::sync::Mutex::new(std::collections::HashMap::new()))
}

/// The unique irreducible real n-representation of sp(1) (n odd or n = 0 mod 4).
pub fn real_irrep_sp1(n: usize) -> Result<Representation> {
    if n < 1 {
        return Err(CoreError::Domain(
            "representation dimension must be >= 1".into(),
        ));
    }
    if let Some(gens) = real_gen_cache().lock().unwrap().get(&(n, 0)) {
        return Ok(Representation {
            algebra: Algebra::Sp1,
            field: RepField::Real,
            dim: n,
            gens: GenSet::Real(gens.clone()),
        });
    }
    let gens = if n % 2 == 1 {
        real_form(&complex_sp1_gens(n))?
    } else if n == 4 {
        varrho4_gens()
    } else if n.is_multiple_of(4) {
        real_form(&complex_sp1_gens(n / 2))?
    } else {
        return Err(CoreError::Domain(format!(
            "no irreducible real {n}-representation: n must be odd or divisible by 4"
        )));
    };
    debug_assert_eq!(gens[0].rows, n);
    real_gen_cache()
        .lock()
        .unwrap()
        .insert((n, 0), gens.clone());
    Ok(Representation {
        algebra: Algebra::Sp1,
        field: RepField::Real,
        dim: n,
        gens: GenSet::Real(gens),
    })
}

/// Irreducible spin(4) = sp(1)+sp(1) representation with label (m, n):
/// complex dimension m n; real dimension m n (same parity) or 2 m n.
pub fn irrep_spin4(m: usize, n: usize, field: RepField) -> Result<Representation> {
    if m < 1 || n < 1 {
        return Err(CoreError::Domain("spin(4) labels must be >= 1".into()));
    }
    match field {
        RepField::Complex => Ok(Representation {
            algebra: Algebra::Sp1Sp1,
            field,
            dim: m * n,
            gens: GenSet::Complex(complex_spin4_gens(m, n)),
        }),
        RepField::Real => {
            if let Some(gens) = real_gen_cache().lock().unwrap().get(&(m, n)) {
                let dim = gens[0].rows;
                return Ok(Representation {
                    algebra: Algebra::Sp1Sp1,
                    field,
                    dim,
                    gens: GenSet::Real(gens.clone()),
                });
            }
            let gens = real_form(&complex_spin4_gens(m, n))?;
            real_gen_cache()
                .lock()
                .unwrap()
                .insert((m, n), gens.clone());
            let dim = gens[0].rows;
            Ok(Representation {
                algebra: Algebra::Sp1Sp1,
                field,
                dim,
                gens: GenSet::Real(gens),
            })
        }
        RepField::Quaternionic => Err(CoreError::UnsupportedShape(
            "quaternionic spin(4) irreps not constructed".into(),
        )),
    }
}

/// The representation (H, nu) of sp(1)+sp(1): nu(v, w) x = v x - x w in the
/// basis (1, i, j, k); isomorphic to the real (2,2) irreducible.
pub fn nu_rep_gens() -> Vec<RMat> {
    let left = varrho4_gens(); // L_{i/2}, L_{j/2}, L_{k/2}
    let r_i = RealMatrix::from_rows(vec![
        vec![0.0, -1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0],
        vec![0.0, 0.0, -1.0, 0.0],
    ]);
    let r_j = RealMatrix::from_rows(vec![
        vec![0.0, 0.0, -1.0, 0.0],
        vec![0.0, 0.0, 0.0, -1.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
    ]);
    let r_k = RealMatrix::from_rows(vec![
        vec![0.0, 0.0, 0.0, -1.0],
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.0, -1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 0.0],
    ]);
    let mut out = left;
    out.push(r_i.scale(-0.5));
    out.push(r_j.scale(-0.5));
    out.push(r_k.scale(-0.5));
    out
}

// ---------------------------------------------------------------------------
// Tensor specs and trivial summands

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// V_n, the complex irreducible of sp(1).
    Sp1Complex { n: usize, dual: bool },
    /// The real irreducible of sp(1) of dimension n (n odd or 0 mod 4).
    Sp1Real { n: usize, dual: bool },
    /// V_{a,b}, the complex irreducible of sp(1)+sp(1).
    Spin4Complex { a: usize, b: usize, dual: bool },
    /// The real irreducible of sp(1)+sp(1) with label (a, b), dim N(a, b).
    Spin4Real { a: usize, b: usize, dual: bool },
}

impl Factor {
    fn algebra(&self) -> Algebra {
        match self {
            Factor::Sp1Complex { .. } | Factor::Sp1Real { .. } => Algebra::Sp1,
            _ => Algebra::Sp1Sp1,
        }
    }

    fn is_real(&self) -> bool {
        matches!(self, Factor::Sp1Real { .. } | Factor::Spin4Real { .. })
    }

    fn dual(&self) -> bool {
        match self {
            Factor::Sp1Complex { dual, .. }
            | Factor::Sp1Real { dual, .. }
            | Factor::Spin4Complex { dual, .. }
            | Factor::Spin4Real { dual, .. } => *dual,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TensorSpec {
    pub factors: Vec<Factor>,
}

impl TensorSpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(CoreError::UnsupportedShape("empty tensor spec".into()));
        }
        let alg = factors[0].algebra();
        let real = factors[0].is_real();
        if factors
            .iter()
            .any(|f| f.algebra() != alg || f.is_real() != real)
        {
            return Err(CoreError::UnsupportedShape(
                "tensor factors must share one algebra and one field".into(),
            ));
        }
        Ok(Self { factors })
    }

    pub fn is_real(&self) -> bool {
        self.factors[0].is_real()
    }

    pub fn algebra(&self) -> Algebra {
        self.factors[0].algebra()
    }
}

/// Multiset of complex sp(1) irrep labels in the complexification of a factor.
fn complexify_sp1(n: usize, real: bool) -> Result<Vec<(usize, usize)>> {
    if !real {
        return Ok(vec![(n, 1)]);
    }
    if n % 2 == 1 {
        Ok(vec![(n, 1)])
    } else if n.is_multiple_of(4) {
        Ok(vec![(n / 2, 2)])
    } else {
        Err(CoreError::UnsupportedShape(format!(
            "no real irreducible of dimension {n}"
        )))
    }
}

fn complexify_spin4(a: usize, b: usize, real: bool) -> Vec<((usize, usize), usize)> {
    if !real || (a % 2 == b % 2) {
        vec![((a, b), 1)]
    } else {
        vec![((a, b), 2)]
    }
}

/// Clebsch-Gordan convolution of sp(1) labels.
fn cg_sp1(
    acc: &std::collections::BTreeMap<usize, usize>,
    label: usize,
    mult: usize,
) -> std::collections::BTreeMap<usize, usize> {
    let mut out = std::collections::BTreeMap::new();
    for (&a, &m) in acc {
        let lo = a.abs_diff(label) + 1;
        let hi = a + label - 1;
        let mut d = lo;
        while d <= hi {
            *out.entry(d).or_insert(0) += m * mult;
            d += 2;
        }
    }
    out
}

/// Closed-form count of trivial summands in a tensor product, by counting the
/// multiplicity of the trivial complex irrep in the complexification.
pub fn trivial_summand_count(spec: &TensorSpec) -> Result<usize> {
    use std::collections::BTreeMap;
    match spec.algebra() {
        Algebra::Sp1 => {
            let mut acc: BTreeMap<usize, usize> = BTreeMap::new();
            acc.insert(1, 1);
            for f in &spec.factors {
                let labels = match *f {
                    Factor::Sp1Complex { n, .. } => complexify_sp1(n, false)?,
                    Factor::Sp1Real { n, .. } => complexify_sp1(n, true)?,
                    _ => unreachable!(),
                };
                let mut next: BTreeMap<usize, usize> = BTreeMap::new();
                for (label, mult) in labels {
                    for (d, m) in cg_sp1(&acc, label, mult) {
                        *next.entry(d).or_insert(0) += m;
                    }
                }
                acc = next;
            }
            Ok(acc.get(&1).copied().unwrap_or(0))
        }
        Algebra::Sp1Sp1 => {
            let mut acc: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            acc.insert((1, 1), 1);
            for f in &spec.factors {
                let labels = match *f {
                    Factor::Spin4Complex { a, b, .. } => complexify_spin4(a, b, false),
                    Factor::Spin4Real { a, b, .. } => complexify_spin4(a, b, true),
                    _ => unreachable!(),
                };
                let mut next: BTreeMap<(usize, usize), usize> = BTreeMap::new();
                for ((la, lb), mult) in labels {
                    for (&(a, b), &m) in &acc {
                        let mut left: BTreeMap<usize, usize> = BTreeMap::new();
                        left.insert(a, 1);
                        let left = cg_sp1(&left, la, 1);
                        let mut right: BTreeMap<usize, usize> = BTreeMap::new();
                        right.insert(b, 1);
                        let right = cg_sp1(&right, lb, 1);
                        for (&da, &ma) in &left {
                            for (&db, &mb) in &right {
                                *next.entry((da, db)).or_insert(0) += m * mult * ma * mb;
                            }
                        }
                    }
                }
                acc = next;
            }
            Ok(acc.get(&(1, 1)).copied().unwrap_or(0))
        }
    }
}

/// A basis element of the trivially-acted subspace: coefficients over the
/// tensor index (row-major over the factor dimensions).
#[derive(Clone, Debug)]
pub struct TensorElement {
    pub shape: Vec<usize>,
    pub data: Vec<C64>,
    pub real: bool,
}

impl TensorElement {
    /// For 3-factor specs: the (mu)-th component matrix, shape d1 x d2, i.e.
    /// the slice with third index fixed to mu.
    pub fn component_matrix(&self, mu: usize) -> CMat {
        assert_eq!(self.shape.len(), 3);
        let (d1, d2, d3) = (self.shape[0], self.shape[1], self.shape[2]);
        CMat::from_fn(d1, d2, |i, jx| self.data[(i * d2 + jx) * d3 + mu])
    }
}

fn factor_gens(f: &Factor) -> Result<Vec<CMat>> {
    let mut gens = match *f {
        Factor::Sp1Complex { n, .. } => complex_sp1_gens(n),
        Factor::Sp1Real { n, .. } => real_irrep_sp1(n)?
            .real_gens()?
            .iter()
            .map(ComplexMatrix::from_real)
            .collect(),
        Factor::Spin4Complex { a, b, .. } => complex_spin4_gens(a, b),
        Factor::Spin4Real { a, b, .. } => irrep_spin4(a, b, RepField::Real)?
            .real_gens()?
            .iter()
            .map(ComplexMatrix::from_real)
            .collect(),
    };
    if f.dual() {
        for g in gens.iter_mut() {
            *g = g.transpose().scale(C64::new(-1.0, 0.0));
        }
    }
    Ok(gens)
}

/// Orthonormal basis of the subspace acted on trivially by every generator,
/// computed as the nullspace of the Casimir-type Gram of the stacked actions.
/// Errors if the numeric dimension disagrees with the closed-form count.
pub fn trivial_summand_basis(spec: &TensorSpec) -> Result<Vec<TensorElement>> {
    let per_factor: Vec<Vec<CMat>> = spec
        .factors
        .iter()
        .map(factor_gens)
        .collect::<Result<_>>()?;
    let dims: Vec<usize> = per_factor.iter().map(|g| g[0].rows).collect();
    let total: usize = dims.iter().product();
    let n_gens = per_factor[0].len();
    let real = spec.is_real();

    // Sparse row of A_l at global row r: sum over factors of the Kronecker
    // term with all other indices fixed.
    let strides: Vec<usize> = {
        let mut s = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * dims[i + 1];
        }
        s
    };
    let row_entries = |l: usize, r: usize| -> Vec<(usize, C64)> {
        let mut out: Vec<(usize, C64)> = Vec::new();
        for (f, gens) in per_factor.iter().enumerate() {
            let g = &gens[l];
            let rf = (r / strides[f]) % dims[f];
            let base = r - rf * strides[f];
            for cf in 0..dims[f] {
                let v = g[(rf, cf)];
                if v.norm_sqr() > 0.0 {
                    let col = base + cf * strides[f];
                    if let Some(e) = out.iter_mut().find(|(c, _)| *c == col) {
                        e.1 += v;
                    } else {
                        out.push((col, v));
                    }
                }
            }
        }
        out
    };

    // Gram = sum_l A_l^H A_l, accumulated row by row.
    let mut gram = CMat::zeros(total, total);
    for l in 0..n_gens {
        for r in 0..total {
            let row = row_entries(l, r);
            for &(c1, v1) in &row {
                for &(c2, v2) in &row {
                    let upd = gram[(c1, c2)] + v1.conj() * v2;
                    gram[(c1, c2)] = upd;
                }
            }
        }
    }

    let kernel: Vec<Vec<C64>> = if real {
        let f = psd_nullspace_real(&gram.real_part(), 1e-8);
        f.kernel
            .into_iter()
            .map(|v| v.into_iter().map(|x| C64::new(x, 0.0)).collect())
            .collect()
    } else {
        psd_nullspace_complex(&gram, 1e-8).kernel
    };

    let expect = trivial_summand_count(spec)?;
    if kernel.len() != expect {
        return Err(CoreError::InternalConsistency(format!(
            "numeric trivial-summand dimension {} disagrees with the closed form {expect}",
            kernel.len()
        )));
    }

    // Deterministic scale: unit norm with the first significant entry made
    // positive real (positive imaginary when the real part vanishes).
    let mut out = Vec::with_capacity(kernel.len());
    for mut v in kernel {
        let lead = v
            .iter()
            .find(|z| z.norm() > 1e-12)
            .copied()
            .unwrap_or(C64::new(1.0, 0.0));
        let phase = if lead.re.abs() > 1e-12 {
            let s = lead.conj() / lead.norm();
            if (lead * s).re > 0.0 {
                s
            } else {
                -s
            }
        } else {
            // rotate to positive imaginary

            lead.conj() / lead.norm() * C64::new(0.0, 1.0)
        };
        for z in v.iter_mut() {
            *z *= phase;
        }
        out.push(TensorElement {
            shape: dims.clone(),
            data: v,
            real,
        });
    }
    Ok(out)
}
