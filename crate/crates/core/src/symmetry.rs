//! Constraint builders, residual evaluators, and linear solvers for every
//! continuous-symmetry class, plus generator rationalization, induced
//! structure-group representations, and the Manton-Sutcliffe set test.
//!
//! Each class is an affine-linear system in the generator unknowns (so(k)
//! matrices for isometric classes, sp(n+k) matrices for conformal ones);
//! Lie-algebra-homomorphism classes additionally require the quadratic
//! bracket-compatibility equations, which are enforced by Gauss-Newton
//! refinement inside the affine solution set.

use crate::adhm::{lie_action_pair, StandardData};
use crate::liealg::{epsilon, epsilon_spin4, ms_generator, subalgebra, tau_h5};
use crate::linalg::{exp_qmat, inverse_qmat, solve_affine_real, AffineSolution};
use crate::reps::{Algebra, GenSet, RepField, Representation};
use crate::rmat::RealMatrix;
use crate::{CoreError, QMat, Quat, RMat, Result};

/// Residual level accepted for a certificate.
pub const CERT_TOL: f64 = 1e-9;
/// Relative feasibility threshold below which the linear system is solvable.
pub const FEASIBLE_TOL: f64 = 1e-10;
/// Relative residual above which the system is definitely infeasible; the
/// band between the two raises an indeterminate diagnostic.
pub const EMPTY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SymmetryKind {
    Circular { t: f64 },
    Toral,
    SimpleSpherical,
    IsoclinicSpherical,
    ConformalSpherical,
    IsoclinicSuperspherical,
    ConformalSuperspherical,
    Rotational,
    Full,
    MsCircle,
}

impl SymmetryKind {
    pub fn name(&self) -> &'static str {
        match self {
            SymmetryKind::Circular { .. } => "circular",
            SymmetryKind::Toral => "toral",
            SymmetryKind::SimpleSpherical => "simple_spherical",
            SymmetryKind::IsoclinicSpherical => "isoclinic_spherical",
            SymmetryKind::ConformalSpherical => "conformal_spherical",
            SymmetryKind::IsoclinicSuperspherical => "isoclinic_superspherical",
            SymmetryKind::ConformalSuperspherical => "conformal_superspherical",
            SymmetryKind::Rotational => "rotational",
            SymmetryKind::Full => "full",
            SymmetryKind::MsCircle => "ms_circle",
        }
    }

    /// Generators live in so(k) (isometric classes) or sp(n+k) (conformal).
    pub fn is_conformal(&self) -> bool {
        matches!(
            self,
            SymmetryKind::ConformalSpherical
                | SymmetryKind::ConformalSuperspherical
                | SymmetryKind::Full
                | SymmetryKind::MsCircle
        )
    }

    pub fn generator_count(&self) -> usize {
        match self {
            SymmetryKind::Circular { .. } | SymmetryKind::MsCircle => 1,
            SymmetryKind::Toral => 2,
            SymmetryKind::SimpleSpherical
            | SymmetryKind::IsoclinicSpherical
            | SymmetryKind::ConformalSpherical => 3,
            SymmetryKind::IsoclinicSuperspherical | SymmetryKind::ConformalSuperspherical => 4,
            SymmetryKind::Rotational => 6,
            SymmetryKind::Full => 10,
        }
    }

    /// Structure constants for the bracket-compatibility equations; None for
    /// one-generator classes.
    fn structure(&self) -> Option<Box<dyn Fn(usize, usize, usize) -> f64>> {
        match self {
            SymmetryKind::Circular { .. } | SymmetryKind::MsCircle => None,
            SymmetryKind::Toral => Some(Box::new(|_, _, _| 0.0)),
            SymmetryKind::SimpleSpherical
            | SymmetryKind::IsoclinicSpherical
            | SymmetryKind::ConformalSpherical => Some(Box::new(epsilon)),
            SymmetryKind::IsoclinicSuperspherical | SymmetryKind::ConformalSuperspherical => {
                // sp(1) + R: epsilon on the first three, the fourth central.
                Some(Box::new(|l, m, p| {
                    if l < 3 && m < 3 && p < 3 {
                        epsilon(l, m, p)
                    } else {
                        0.0
                    }
                }))
            }
            SymmetryKind::Rotational => Some(Box::new(epsilon_spin4)),
            SymmetryKind::Full => {
                let basis = subalgebra("sp2", None).expect("catalog");
                let consts = structure_constants(&basis);
                Some(Box::new(move |l, m, p| consts[l][m][p]))
            }
        }
    }
}

/// Expand brackets of an orthogonal sp(2) basis in that basis.
fn structure_constants(basis: &[QMat]) -> Vec<Vec<Vec<f64>>> {
    let dot = |x: &QMat, y: &QMat| -> f64 {
        let mut acc = 0.0;
        for (a, b) in x.data.iter().zip(&y.data) {
            acc += a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
        }
        acc
    };
    let norms: Vec<f64> = basis.iter().map(|b| dot(b, b)).collect();
    let n = basis.len();
    let mut out = vec![vec![vec![0.0; n]; n]; n];
    for l in 0..n {
        for m in 0..n {
            let comm = &(&basis[l] * &basis[m]) - &(&basis[m] * &basis[l]);
            for p in 0..n {
                out[l][m][p] = dot(&comm, &basis[p]) / norms[p];
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub enum CertGens {
    /// Real antisymmetric k x k generators.
    SoK(Vec<RMat>),
    /// Anti-Hermitian quaternionic (n+k) x (n+k) generators.
    SpNK(Vec<QMat>),
}

#[derive(Clone, Debug)]
pub struct SymmetryCertificate {
    pub kind: SymmetryKind,
    pub gens: CertGens,
    pub residual: f64,
}

// ---------------------------------------------------------------------------
// Residual evaluation

fn commutator(a: &QMat, b: &QMat) -> QMat {
    &(a * b) - &(b * a)
}

fn sp1_basis_scalars() -> [Quat; 3] {
    [
        Quat::i().scale(0.5),
        Quat::j().scale(0.5),
        Quat::k().scale(0.5),
    ]
}

/// The per-class constraint equations, as a list of matrices whose Frobenius
/// norms must vanish. Used both by `residual` and (through probing) by the
/// linear solver, so the two agree by construction.
fn constraint_matrices(
    data: &StandardData,
    kind: SymmetryKind,
    gens: &CertGens,
) -> Result<Vec<QMat>> {
    let m = &data.m;
    let r = QMat::from_real(&data.r_real());
    let upsilon = sp1_basis_scalars();
    let mut eqs: Vec<QMat> = Vec::new();

    match (kind, gens) {
        (SymmetryKind::Circular { t }, CertGens::SoK(rho)) => {
            expect_gens(rho.len(), 1, kind)?;
            let rq = QMat::from_real(&rho[0]);
            // t M i - i M + [rho, M] = 0
            let e = &(&m.scalar_mul_right(Quat::i().scale(t)) - &m.scalar_mul_left(Quat::i()))
                + &commutator(&rq, m);
            eqs.push(e);
            eqs.push(commutator(&rq, &r));
        }
        (SymmetryKind::Toral, CertGens::SoK(rho)) => {
            expect_gens(rho.len(), 2, kind)?;
            let r1 = QMat::from_real(&rho[0]);
            let r2 = QMat::from_real(&rho[1]);
            // i M = [rho1, M]; -M i = [rho2, M]
            eqs.push(&m.scalar_mul_left(Quat::i()) - &commutator(&r1, m));
            eqs.push(&m.scalar_mul_right(Quat::i()) + &commutator(&r2, m));
            eqs.push(commutator(&r1, &r));
            eqs.push(commutator(&r2, &r));
        }
        (SymmetryKind::SimpleSpherical, CertGens::SoK(rho)) => {
            expect_gens(rho.len(), 3, kind)?;
            for (l, u) in upsilon.iter().enumerate() {
                let rq = QMat::from_real(&rho[l]);
                let e = &(&m.scalar_mul_left(*u) - &m.scalar_mul_right(*u)) + &commutator(&rq, m);
                eqs.push(e);
                eqs.push(commutator(&rq, &r));
            }
        }
        (SymmetryKind::IsoclinicSpherical, CertGens::SoK(rho)) => {
            expect_gens(rho.len(), 3, kind)?;
            for (l, u) in upsilon.iter().enumerate() {
                let rq = QMat::from_real(&rho[l]);
                eqs.push(&m.scalar_mul_left(*u) + &commutator(&rq, m));
                eqs.push(commutator(&rq, &r));
            }
        }
        (SymmetryKind::IsoclinicSuperspherical, CertGens::SoK(rho)) => {
            expect_gens(rho.len(), 4, kind)?;
            for (l, u) in upsilon.iter().enumerate() {
                let rq = QMat::from_real(&rho[l]);
                eqs.push(&m.scalar_mul_left(*u) + &commutator(&rq, m));
                eqs.push(commutator(&rq, &r));
            }
            // (upsilon, t) = (0, 1): [rho_4, M] - 2 M i = 0.
            let r4 = QMat::from_real(&rho[3]);
            eqs.push(&commutator(&r4, m) - &m.scalar_mul_right(Quat::i().scale(2.0)));
            eqs.push(commutator(&r4, &r));
        }
        (SymmetryKind::Rotational, CertGens::SoK(rho)) => {
            expect_gens(rho.len(), 6, kind)?;
            for l in 0..6 {
                let rq = QMat::from_real(&rho[l]);
                let e = if l < 3 {
                    &m.scalar_mul_left(upsilon[l]) + &commutator(&rq, m)
                } else {
                    &commutator(&rq, m) - &m.scalar_mul_right(upsilon[l - 3])
                };
                eqs.push(e);
                eqs.push(commutator(&rq, &r));
            }
        }
        (
            SymmetryKind::ConformalSpherical
            | SymmetryKind::ConformalSuperspherical
            | SymmetryKind::Full
            | SymmetryKind::MsCircle,
            CertGens::SpNK(ps),
        ) => {
            let ups_list = conformal_upsilons(kind)?;
            expect_gens(ps.len(), ups_list.len(), kind)?;
            let mhat = data.mhat();
            let u = data.u();
            let (n, k) = (data.n, data.k);
            for (p, ups) in ps.iter().zip(&ups_list) {
                if p.rows != n + k || p.cols != n + k {
                    return Err(CoreError::DimensionMismatch(format!(
                        "conformal generator is {}x{}, need {}",
                        p.rows,
                        p.cols,
                        n + k
                    )));
                }
                let (mhat_u, u_u) = lie_action_pair(&mhat, &u, ups)?;
                let put = p.block(n, n, k, k); // U^T P U
                let uut = u_u.block(n, 0, k, k); // U^T U_Upsilon
                                                 // eq1: P Mhat - Mhat_U - Mhat (U^T P U) + Mhat (U^T U_U)
                eqs.push(&(&(p * &mhat) - &mhat_u) - &(&(&mhat * &put) - &(&mhat * &uut)));
                // eq2: P U - U_U - U (U^T P U) + U (U^T U_U)
                eqs.push(&(&(p * &u) - &u_u) - &(&(&u * &put) - &(&u * &uut)));
                // realness of lambda = U^T P U - U^T U_Upsilon
                let lambda = &put - &uut;
                eqs.push(lambda.imag_part());
            }
        }
        _ => {
            return Err(CoreError::DimensionMismatch(format!(
                "certificate generator family does not match kind {}",
                kind.name()
            )))
        }
    }
    Ok(eqs)
}

fn expect_gens(got: usize, want: usize, kind: SymmetryKind) -> Result<()> {
    if got != want {
        return Err(CoreError::DimensionMismatch(format!(
            "{} needs {want} generators, got {got}",
            kind.name()
        )));
    }
    Ok(())
}

/// sp(2) elements paired with the generator slots of a conformal class.
fn conformal_upsilons(kind: SymmetryKind) -> Result<Vec<QMat>> {
    Ok(match kind {
        SymmetryKind::ConformalSpherical => tau_h5(),
        SymmetryKind::ConformalSuperspherical => {
            let mut v = subalgebra("h311", None)?;
            v.push(ms_generator());
            v
        }
        SymmetryKind::Full => subalgebra("sp2", None)?,
        SymmetryKind::MsCircle => vec![ms_generator()],
        _ => return Err(CoreError::UnsupportedShape("not a conformal class".into())),
    })
}

/// Max constraint violation of a certificate: the Frobenius norm of every
/// class equation, the [rho, R] = 0 equations, and (conformal classes) the
/// realness of the induced lambda.
pub fn residual(data: &StandardData, cert: &SymmetryCertificate) -> Result<f64> {
    let eqs = constraint_matrices(data, cert.kind, &cert.gens)?;
    Ok(eqs.iter().map(|e| e.norm_fro()).fold(0.0, f64::max))
}

/// Bracket-compatibility residual of the generator family (zero for
/// one-generator classes).
pub fn bracket_residual(cert: &SymmetryCertificate) -> f64 {
    bracket_vector(cert)
        .iter()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
}

// ---------------------------------------------------------------------------
// Vectorized unknowns

/// so(k) coordinates: strictly-upper entries row-major.
fn sok_dim(k: usize) -> usize {
    k * (k - 1) / 2
}

fn sok_from_vec(k: usize, x: &[f64]) -> RMat {
    let mut m = RealMatrix::zeros(k, k);
    let mut idx = 0;
    for i in 0..k {
        for j in (i + 1)..k {
            m[(i, j)] = x[idx];
            m[(j, i)] = -x[idx];
            idx += 1;
        }
    }
    m
}

fn sok_to_vec(m: &RMat) -> Vec<f64> {
    let k = m.rows;
    let mut out = Vec::with_capacity(sok_dim(k));
    for i in 0..k {
        for j in (i + 1)..k {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// sp(m) coordinates: 3 imaginary components per diagonal entry, then 4 per
/// strictly-upper entry.
fn spm_dim(m: usize) -> usize {
    m * (2 * m + 1)
}

fn spm_from_vec(m: usize, x: &[f64]) -> QMat {
    let mut out = QMat::zeros(m, m);
    let mut idx = 0;
    for i in 0..m {
        out[(i, i)] = Quat::new(0.0, x[idx], x[idx + 1], x[idx + 2]);
        idx += 3;
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let q = Quat::new(x[idx], x[idx + 1], x[idx + 2], x[idx + 3]);
            out[(i, j)] = q;
            out[(j, i)] = -q.conj();
            idx += 4;
        }
    }
    out
}

fn spm_to_vec(q: &QMat) -> Vec<f64> {
    let m = q.rows;
    let mut out = Vec::with_capacity(spm_dim(m));
    for i in 0..m {
        let d = q[(i, i)];
        out.extend([d.x, d.y, d.z]);
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let e = q[(i, j)];
            out.extend([e.w, e.x, e.y, e.z]);
        }
    }
    out
}

fn gens_from_vec(data: &StandardData, kind: SymmetryKind, x: &[f64]) -> CertGens {
    let count = kind.generator_count();
    if kind.is_conformal() {
        let m = data.n + data.k;
        let per = spm_dim(m);
        CertGens::SpNK(
            (0..count)
                .map(|g| spm_from_vec(m, &x[g * per..(g + 1) * per]))
                .collect(),
        )
    } else {
        let per = sok_dim(data.k);
        CertGens::SoK(
            (0..count)
                .map(|g| sok_from_vec(data.k, &x[g * per..(g + 1) * per]))
                .collect(),
        )
    }
}

fn gens_to_vec(gens: &CertGens) -> Vec<f64> {
    match gens {
        CertGens::SoK(g) => g.iter().flat_map(sok_to_vec).collect(),
        CertGens::SpNK(g) => g.iter().flat_map(spm_to_vec).collect(),
    }
}

fn unknown_dim(data: &StandardData, kind: SymmetryKind) -> usize {
    if kind.is_conformal() {
        kind.generator_count() * spm_dim(data.n + data.k)
    } else {
        kind.generator_count() * sok_dim(data.k)
    }
}

fn flatten_eqs(eqs: &[QMat]) -> Vec<f64> {
    let mut out = Vec::new();
    for e in eqs {
        for q in &e.data {
            out.extend([q.w, q.x, q.y, q.z]);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Solver

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub certificates: Vec<SymmetryCertificate>,
    /// Relative least-squares residual of the linear system.
    pub linear_residual: f64,
    /// Dimension of the homogeneous kernel of the linear system.
    pub kernel_dim: usize,
    /// Raised for the indeterminate feasibility band or stalled refinement.
    pub diagnostic: Option<String>,
    particular: Vec<f64>,
    kernel: Vec<Vec<f64>>,
}

impl SolveOutcome {
    /// Distance from a candidate generator family to the affine linear
    /// solution set (used to test printed certificates against the span).
    pub fn affine_projection_residual(&self, gens: &CertGens) -> f64 {
        let x = gens_to_vec(gens);
        let mut d: Vec<f64> = x.iter().zip(&self.particular).map(|(a, b)| a - b).collect();
        for k in &self.kernel {
            let dot: f64 = k.iter().zip(&d).map(|(a, b)| a * b).sum();
            for (di, ki) in d.iter_mut().zip(k) {
                *di -= ki * dot;
            }
        }
        d.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Solve the class constraints for generator certificates.
///
/// The affine system is solved by least squares; for Lie-algebra-homomorphism
/// classes the bracket equations are then enforced by Gauss-Newton inside the
/// affine solution set, started from the minimum-norm solution and from
/// kernel-direction seeds. An empty certificate list is a valid result.
pub fn solve_generators(data: &StandardData, kind: SymmetryKind) -> Result<SolveOutcome> {
    let dim = unknown_dim(data, kind);
    let rv = |x: &[f64]| -> Result<Vec<f64>> {
        let gens = gens_from_vec(data, kind, x);
        Ok(flatten_eqs(&constraint_matrices(data, kind, &gens)?))
    };
    let zero = vec![0.0; dim];
    let r0 = rv(&zero)?;
    let rows = r0.len();
    let mut a = RealMatrix::zeros(rows, dim);
    let mut probe = zero.clone();
    for col in 0..dim {
        probe[col] = 1.0;
        let r = rv(&probe)?;
        probe[col] = 0.0;
        for i in 0..rows {
            a[(i, col)] = r[i] - r0[i];
        }
    }
    let c: Vec<f64> = r0.iter().map(|v| -v).collect();
    let sol = solve_affine_real(&a, &c, 1e-16);

    let scale = sol.rhs_norm.max(data.mhat().norm_fro()).max(1.0);
    let rel = sol.residual / scale;
    let mut outcome = SolveOutcome {
        certificates: Vec::new(),
        linear_residual: rel,
        kernel_dim: sol.kernel.len(),
        diagnostic: None,
        particular: sol.particular.clone(),
        kernel: sol.kernel.clone(),
    };
    if rel > EMPTY_TOL {
        return Ok(outcome);
    }
    if rel > FEASIBLE_TOL {
        outcome.diagnostic = Some(format!(
            "indeterminate: linear residual {rel:e} lies between the membership \
             threshold {FEASIBLE_TOL:e} and the emptiness threshold {EMPTY_TOL:e}"
        ));
        return Ok(outcome);
    }

    let has_brackets = kind.structure().is_some();
    let make_cert = |x: &[f64]| -> Result<Option<SymmetryCertificate>> {
        let gens = gens_from_vec(data, kind, x);
        let mut cert = SymmetryCertificate {
            kind,
            gens,
            residual: 0.0,
        };
        cert.residual = residual(data, &cert)?;
        let br = bracket_residual(&cert);
        let tol = CERT_TOL * scale;
        if cert.residual <= tol && br <= tol {
            Ok(Some(cert))
        } else {
            Ok(None)
        }
    };

    if !has_brackets {
        // Affine set: the particular solution plus each kernel direction.
        if let Some(cert) = make_cert(&sol.particular)? {
            outcome.certificates.push(cert);
        }
        for kdir in &sol.kernel {
            let x: Vec<f64> = sol
                .particular
                .iter()
                .zip(kdir)
                .map(|(p, h)| p + h * scale.min(1.0))
                .collect();
            if let Some(cert) = make_cert(&x)? {
                outcome.certificates.push(cert);
            }
        }
        return Ok(outcome);
    }

    let refined = refine_brackets(data, kind, &sol, scale)?;
    if refined.is_empty() {
        outcome.diagnostic = Some(
            "bracket refinement stalled above tolerance from every seed; \
             no homomorphism certificate found in the linear solution set"
                .into(),
        );
    }
    for x in refined {
        if let Some(cert) = make_cert(&x)? {
            let dup = outcome.certificates.iter().any(|cand| {
                let cv = gens_to_vec(&cand.gens);
                let d: f64 = cv
                    .iter()
                    .zip(&x)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                d <= 1e-6 * (1.0 + scale)
            });
            if !dup {
                outcome.certificates.push(cert);
            }
        }
    }
    Ok(outcome)
}

/// Gauss-Newton on the bracket equations restricted to x = x0 + K alpha.
fn refine_brackets(
    data: &StandardData,
    kind: SymmetryKind,
    sol: &AffineSolution<f64>,
    scale: f64,
) -> Result<Vec<Vec<f64>>> {
    let kd = sol.kernel.len();
    let x_of = |alpha: &[f64]| -> Vec<f64> {
        let mut x = sol.particular.clone();
        for (h, &al) in sol.kernel.iter().zip(alpha) {
            for (xi, hi) in x.iter_mut().zip(h) {
                *xi += hi * al;
            }
        }
        x
    };
    let fvec = |alpha: &[f64]| -> Vec<f64> {
        let gens = gens_from_vec(data, kind, &x_of(alpha));
        let cert = SymmetryCertificate {
            kind,
            gens,
            residual: 0.0,
        };
        bracket_vector(&cert)
    };
    let fnorm = |f: &[f64]| -> f64 { f.iter().map(|v| v * v).sum::<f64>().sqrt() };
    let target = CERT_TOL * 0.1 * scale.max(1.0);

    let mut seeds: Vec<Vec<f64>> = vec![vec![0.0; kd]];
    for i in 0..kd.min(8) {
        for s in [1.0, -1.0] {
            let mut v = vec![0.0; kd];
            v[i] = s * scale.min(1.0);
            seeds.push(v);
        }
    }

    let mut found: Vec<Vec<f64>> = Vec::new();
    'seed: for seed in seeds {
        let mut alpha = seed;
        let mut f = fvec(&alpha);
        if kd == 0 {
            if fnorm(&f) <= target {
                found.push(x_of(&alpha));
            }
            break 'seed;
        }
        for _iter in 0..60 {
            let fn0 = fnorm(&f);
            if fn0 <= target {
                found.push(x_of(&alpha));
                if found.len() > kd {
                    break 'seed;
                }
                continue 'seed;
            }
            // Central differences are exact for the quadratic bracket map.
            let delta = 1e-3;
            let mut jac = RealMatrix::zeros(f.len(), kd);
            for cidx in 0..kd {
                alpha[cidx] += delta;
                let fp = fvec(&alpha);
                alpha[cidx] -= 2.0 * delta;
                let fm = fvec(&alpha);
                alpha[cidx] += delta;
                for r in 0..f.len() {
                    jac[(r, cidx)] = (fp[r] - fm[r]) / (2.0 * delta);
                }
            }
            let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
            let step = solve_affine_real(&jac, &rhs, 1e-14);
            let mut lam = 1.0;
            let mut improved = false;
            for _ in 0..25 {
                let trial: Vec<f64> = alpha
                    .iter()
                    .zip(&step.particular)
                    .map(|(a, d)| a + lam * d)
                    .collect();
                let ft = fvec(&trial);
                if fnorm(&ft) < fn0 * (1.0 - 1e-6) || fnorm(&ft) <= target {
                    alpha = trial;
                    f = ft;
                    improved = true;
                    break;
                }
                lam *= 0.5;
            }
            if !improved {
                continue 'seed;
            }
        }
        if fnorm(&f) <= target {
            found.push(x_of(&alpha));
        }
    }
    Ok(found)
}

fn bracket_vector(cert: &SymmetryCertificate) -> Vec<f64> {
    let Some(eps) = cert.kind.structure() else {
        return vec![];
    };
    let mut out = Vec::new();
    match &cert.gens {
        CertGens::SoK(g) => {
            for l in 0..g.len() {
                for m2 in (l + 1)..g.len() {
                    let mut comm = &(&g[l] * &g[m2]) - &(&g[m2] * &g[l]);
                    for p in 0..g.len() {
                        let c = eps(l, m2, p);
                        if c != 0.0 {
                            comm = &comm - &g[p].scale(c);
                        }
                    }
                    out.extend(comm.data.iter().copied());
                }
            }
        }
        CertGens::SpNK(g) => {
            for l in 0..g.len() {
                for m2 in (l + 1)..g.len() {
                    let mut comm = commutator(&g[l], &g[m2]);
                    for p in 0..g.len() {
                        let c = eps(l, m2, p);
                        if c != 0.0 {
                            comm = &comm - &g[p].scale(c);
                        }
                    }
                    for q in &comm.data {
                        out.extend([q.w, q.x, q.y, q.z]);
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Admissible-M spaces (the operational Structure Theorems)

/// Basis of the symmetric quaternionic M solving the class equation for a
/// fixed generating representation (real so(k) generators).
pub fn solve_m_space(rep: &Representation, kind: SymmetryKind) -> Result<Vec<QMat>> {
    let gens = rep.real_gens()?;
    let k = rep.dim;
    let expected = match kind {
        SymmetryKind::Circular { .. } => 1,
        SymmetryKind::Toral => 2,
        SymmetryKind::SimpleSpherical | SymmetryKind::IsoclinicSpherical => 3,
        SymmetryKind::IsoclinicSuperspherical => 4,
        SymmetryKind::Rotational => 6,
        _ => {
            return Err(CoreError::UnsupportedShape(format!(
                "solve_m_space does not handle {}",
                kind.name()
            )))
        }
    };
    if gens.len() != expected {
        return Err(CoreError::DimensionMismatch(format!(
            "{} needs {expected} generators, representation has {}",
            kind.name(),
            gens.len()
        )));
    }
    if matches!(kind, SymmetryKind::Rotational) && rep.algebra != Algebra::Sp1Sp1 {
        return Err(CoreError::UnsupportedShape(
            "rotational needs an sp(1)+sp(1) representation".into(),
        ));
    }

    // Symmetric M coordinates: 4 reals per entry on or above the diagonal.
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let dim = 4 * pairs.len();
    let m_of = |x: &[f64]| -> QMat {
        let mut m = QMat::zeros(k, k);
        for (idx, &(i, j)) in pairs.iter().enumerate() {
            let q = Quat::new(x[4 * idx], x[4 * idx + 1], x[4 * idx + 2], x[4 * idx + 3]);
            m[(i, j)] = q;
            m[(j, i)] = q;
        }
        m
    };
    let upsilon = sp1_basis_scalars();
    let rv = |x: &[f64]| -> Vec<f64> {
        let m = m_of(x);
        let mut eqs: Vec<QMat> = Vec::new();
        match kind {
            SymmetryKind::Circular { t } => {
                let rq = QMat::from_real(&gens[0]);
                eqs.push(
                    &(&m.scalar_mul_right(Quat::i().scale(t)) - &m.scalar_mul_left(Quat::i()))
                        + &commutator(&rq, &m),
                );
            }
            SymmetryKind::Toral => {
                let r1 = QMat::from_real(&gens[0]);
                let r2 = QMat::from_real(&gens[1]);
                eqs.push(&m.scalar_mul_left(Quat::i()) - &commutator(&r1, &m));
                eqs.push(&m.scalar_mul_right(Quat::i()) + &commutator(&r2, &m));
            }
            SymmetryKind::SimpleSpherical => {
                for (l, u) in upsilon.iter().enumerate() {
                    let rq = QMat::from_real(&gens[l]);
                    eqs.push(
                        &(&m.scalar_mul_left(*u) - &m.scalar_mul_right(*u)) + &commutator(&rq, &m),
                    );
                }
            }
            SymmetryKind::IsoclinicSpherical => {
                for (l, u) in upsilon.iter().enumerate() {
                    let rq = QMat::from_real(&gens[l]);
                    eqs.push(&m.scalar_mul_left(*u) + &commutator(&rq, &m));
                }
            }
            SymmetryKind::IsoclinicSuperspherical => {
                for (l, u) in upsilon.iter().enumerate() {
                    let rq = QMat::from_real(&gens[l]);
                    eqs.push(&m.scalar_mul_left(*u) + &commutator(&rq, &m));
                }
                let r4 = QMat::from_real(&gens[3]);
                eqs.push(&commutator(&r4, &m) - &m.scalar_mul_right(Quat::i().scale(2.0)));
            }
            SymmetryKind::Rotational => {
                for l in 0..6 {
                    let rq = QMat::from_real(&gens[l]);
                    let e = if l < 3 {
                        &m.scalar_mul_left(upsilon[l]) + &commutator(&rq, &m)
                    } else {
                        &commutator(&rq, &m) - &m.scalar_mul_right(upsilon[l - 3])
                    };
                    eqs.push(e);
                }
            }
            _ => unreachable!(),
        }
        flatten_eqs(&eqs)
    };

    let zero = vec![0.0; dim];
    let r0 = rv(&zero);
    let rows = r0.len();
    let mut a = RealMatrix::zeros(rows, dim);
    let mut probe = zero;
    for col in 0..dim {
        probe[col] = 1.0;
        let r = rv(&probe);
        probe[col] = 0.0;
        for i in 0..rows {
            a[(i, col)] = r[i] - r0[i];
        }
    }
    let sol = solve_affine_real(&a, &vec![0.0; rows], 1e-12);
    Ok(sol.kernel.iter().map(|x| m_of(x)).collect())
}

/// Projection residual of a symmetric M onto the span of a computed basis.
pub fn m_space_projection_residual(basis: &[QMat], m: &QMat) -> f64 {
    let k = m.rows;
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let coords = |mat: &QMat| -> Vec<f64> {
        pairs
            .iter()
            .flat_map(|&(i, j)| {
                let q = mat[(i, j)];
                [q.w, q.x, q.y, q.z]
            })
            .collect::<Vec<f64>>()
    };
    let mv = coords(m);
    let mut d = mv;
    for b in basis {
        let bv = coords(b);
        let nb: f64 = bv.iter().map(|v| v * v).sum();
        if nb < 1e-300 {
            continue;
        }
        let dot: f64 = bv.iter().zip(&d).map(|(a, b)| a * b).sum();
        for (di, bi) in d.iter_mut().zip(&bv) {
            *di -= bi * dot / nb;
        }
    }
    d.iter().map(|v| v * v).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------------------
// Rationalization of circular generators

/// Rotation-block decomposition of rho in so(k): orthogonal basis columns
/// grouped into 2x2 blocks with frequency a > 0 plus zero directions.
struct BlockForm {
    basis: Vec<Vec<f64>>,
    /// (start column, frequency, width in {1, 2}) per block.
    blocks: Vec<(usize, f64, usize)>,
}

fn block_decompose(rho: &RMat) -> BlockForm {
    let k = rho.rows;
    let s = &rho.transpose() * rho; // -rho^2, PSD
    let (vals, vecs) = crate::linalg::eig_symmetric(&s);
    let tol = 1e-10 * vals.last().copied().unwrap_or(0.0).max(1e-300);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut blocks = Vec::new();

    let orthogonalize = |v: &mut Vec<f64>, basis: &[Vec<f64>]| {
        for b in basis {
            let dot: f64 = b.iter().zip(v.iter()).map(|(a, c)| a * c).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= bi * dot;
            }
        }
    };

    // Nonzero frequencies (descending eigenvalues of -rho^2).
    for idx in (0..k).rev() {
        if vals[idx] <= tol {
            continue;
        }
        let omega = vals[idx].sqrt();
        let mut v: Vec<f64> = (0..k).map(|r| vecs[(r, idx)]).collect();
        orthogonalize(&mut v, &basis);
        let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv < 1e-8 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= nv;
        }
        let w_raw = rho.matvec(&v);
        let mut w: Vec<f64> = w_raw.iter().map(|x| x / omega).collect();
        let dot: f64 = v.iter().zip(&w).map(|(a, c)| a * c).sum();
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi -= vi * dot;
        }
        let nw: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in w.iter_mut() {
            *x /= nw;
        }
        let start = basis.len();
        basis.push(v);
        basis.push(w);
        blocks.push((start, omega, 2));
    }
    // Zero directions.
    for idx in 0..k {
        if basis.len() == k {
            break;
        }
        let mut v: Vec<f64> = (0..k).map(|r| vecs[(r, idx)]).collect();
        orthogonalize(&mut v, &basis);
        let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv < 1e-8 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= nv;
        }
        let start = basis.len();
        basis.push(v);
        blocks.push((start, 0.0, 1));
    }
    BlockForm { basis, blocks }
}

impl BlockForm {
    fn rebuild(&self, freqs: &[f64], k: usize) -> RMat {
        let mut rho = RealMatrix::zeros(k, k);
        for (bi, &(start, _, width)) in self.blocks.iter().enumerate() {
            if width != 2 {
                continue;
            }
            let a = freqs[bi];
            let v = &self.basis[start];
            let w = &self.basis[start + 1];
            // rho v = a w, rho w = -a v
            for r in 0..k {
                for c in 0..k {
                    rho[(r, c)] += a * (w[r] * v[c] - v[r] * w[c]);
                }
            }
        }
        rho
    }

    fn m_block(&self, m: &QMat, bi: usize, bj: usize) -> QMat {
        let (si, _, wi) = self.blocks[bi];
        let (sj, _, wj) = self.blocks[bj];
        QMat::from_fn(wi, wj, |r, c| {
            let vr = &self.basis[si + r];
            let vc = &self.basis[sj + c];
            let mut acc = Quat::zero();
            for p in 0..m.rows {
                for q in 0..m.cols {
                    acc += m[(p, q)].scale(vr[p] * vc[q]);
                }
            }
            acc
        })
    }
}

/// Residual of rho_l M_lp - M_lp rho_p = i M_lp - t M_lp i for block
/// frequencies (al, ap) and the given M sub-block.
fn coupling_residual(mlp: &QMat, al: f64, ap: f64, t: f64) -> f64 {
    let jl = block_gen(mlp.rows, al);
    let jp = block_gen(mlp.cols, ap);
    let lhs = &(&jl * mlp) - &(mlp * &jp);
    let rhs = &mlp.scalar_mul_left(Quat::i()) - &mlp.scalar_mul_right(Quat::i().scale(t));
    (&lhs - &rhs).norm_fro()
}

fn block_gen(width: usize, a: f64) -> QMat {
    if width == 1 {
        QMat::zeros(1, 1)
    } else {
        let mut m = QMat::zeros(2, 2);
        m[(0, 1)] = Quat::real(-a);
        m[(1, 0)] = Quat::real(a);
        m
    }
}

/// Replace a circular-t certificate by one generating a circle representation:
/// exp(2 pi * 2b * rho') = I while the class equations keep holding.
/// t must be supplied as a reduced fraction t = t_num / t_den.
pub fn rationalize_circular_generator(
    data: &StandardData,
    rho: &RMat,
    t_num: i64,
    t_den: i64,
) -> Result<RMat> {
    if t_den <= 0 {
        return Err(CoreError::Domain("t denominator must be positive".into()));
    }
    let t = t_num as f64 / t_den as f64;
    let cert = SymmetryCertificate {
        kind: SymmetryKind::Circular { t },
        gens: CertGens::SoK(vec![rho.clone()]),
        residual: 0.0,
    };
    let res = residual(data, &cert)?;
    let scale = (1.0 + data.mhat().norm_fro()).max(1.0);
    if res > CERT_TOL * scale {
        return Err(CoreError::InvalidCertificate { residual: res });
    }

    let form = block_decompose(rho);
    let nb = form.blocks.len();
    let m_norm = data.m.norm_fro().max(1.0);
    let block_nonzero =
        |bi: usize, bj: usize| -> bool { form.m_block(&data.m, bi, bj).norm_fro() > 1e-9 * m_norm };
    let two_b = 2.0 * t_den as f64;
    let is_integral = |freq: f64| -> bool { (freq * two_b - (freq * two_b).round()).abs() < 1e-7 };

    let mut assigned: Vec<Option<f64>> = vec![None; nb];
    for (bi, &(_, freq, width)) in form.blocks.iter().enumerate() {
        if width == 1 {
            assigned[bi] = Some(0.0);
            continue;
        }
        let diag = form.m_block(&data.m, bi, bi);
        if diag.norm_fro() <= 1e-9 * m_norm {
            continue; // free
        }
        // t = 1 with M_bb proportional to I2 leaves the frequency free.
        if (t - 1.0).abs() < 1e-12 {
            let avg = (diag[(0, 0)] + diag[(1, 1)]).scale(0.5);
            let mut prop = QMat::zeros(2, 2);
            prop[(0, 0)] = avg;
            prop[(1, 1)] = avg;
            if (&diag - &prop).norm_fro() <= 1e-9 * m_norm {
                continue;
            }
        }
        // Otherwise the diagonal equation pins the frequency, already rational.
        let snapped = (freq * two_b).round() / two_b;
        if (snapped - freq).abs() > 1e-6 {
            return Err(CoreError::InternalConsistency(format!(
                "diagonal block frequency {freq} is not rational with denominator 2*{t_den}"
            )));
        }
        assigned[bi] = Some(snapped);
    }

    // Propagate along coupled blocks; free roots default to zero.
    let mut order: Vec<usize> = (0..nb).collect();
    order.sort_by_key(|&bi| assigned[bi].is_none() as usize);
    for &root in &order {
        if assigned[root].is_none() {
            assigned[root] = Some(0.0);
        }
        let mut queue = vec![root];
        while let Some(cur) = queue.pop() {
            let a_cur = assigned[cur].unwrap();
            for next in 0..nb {
                if next == cur || !block_nonzero(cur, next) {
                    continue;
                }
                let mlp = form.m_block(&data.m, cur, next);
                if let Some(a_known) = assigned[next] {
                    let r = coupling_residual(&mlp, a_cur, a_known, t);
                    if r > 1e-6 * m_norm {
                        return Err(CoreError::InternalConsistency(format!(
                            "conflicting frequency assignment between blocks {cur} and {next}"
                        )));
                    }
                    continue;
                }
                // Candidates keeping the same coupling relation class.
                let mut cands = vec![
                    (1.0 + t) - a_cur,
                    a_cur - (1.0 + t),
                    (1.0 + t) + a_cur,
                    -(1.0 + t) - a_cur,
                    (1.0 - t) - a_cur,
                    a_cur - (1.0 - t),
                    (1.0 - t) + a_cur,
                    -(1.0 - t) - a_cur,
                ];
                cands.retain(|&c| is_integral(c));
                let mut best: Option<(f64, f64)> = None;
                for cand in cands {
                    let r = coupling_residual(&mlp, a_cur, cand, t);
                    if best.as_ref().map(|(br, _)| r < *br).unwrap_or(true) {
                        best = Some((r, cand));
                    }
                }
                let (r, cand) = best.ok_or_else(|| {
                    CoreError::InternalConsistency("no rational candidate frequency".into())
                })?;
                if r > 1e-6 * m_norm {
                    return Err(CoreError::InternalConsistency(format!(
                        "no candidate frequency satisfies the coupling between \
                         {cur} and {next} (best {r:e})"
                    )));
                }
                assigned[next] = Some((cand * two_b).round() / two_b);
                queue.push(next);
            }
        }
    }

    let freqs: Vec<f64> = assigned.into_iter().map(|a| a.unwrap()).collect();
    let rho_new = form.rebuild(&freqs, data.k);

    let cert_new = SymmetryCertificate {
        kind: SymmetryKind::Circular { t },
        gens: CertGens::SoK(vec![rho_new.clone()]),
        residual: 0.0,
    };
    let res_new = residual(data, &cert_new)?;
    if res_new > CERT_TOL * scale {
        return Err(CoreError::InternalConsistency(format!(
            "rationalized generator lost the symmetry (residual {res_new:e})"
        )));
    }
    let period = exp_qmat(&QMat::from_real(&rho_new).scale(2.0 * std::f64::consts::PI * two_b));
    let gap = (&period - &QMat::identity(data.k)).norm_fro();
    if gap > 1e-10 * (data.k as f64) {
        return Err(CoreError::InternalConsistency(format!(
            "exp(2 pi 2b rho') != I (gap {gap:e})"
        )));
    }
    Ok(rho_new)
}

// ---------------------------------------------------------------------------
// Induced structure-group representations

/// Induced sp(n)-valued generators of a certificate:
/// circular: y = L (rho - t i) L^dag (L L^dag)^-1;
/// isoclinic: y_i = (L L^dag)^-1 L rho_i L^dag;
/// rotational: y_i = (L L^dag)^-1 L (pi_2(ups_i) I + rho_i) L^dag.
pub fn induced_structure_rep(
    data: &StandardData,
    cert: &SymmetryCertificate,
    t_rational: Option<(i64, i64)>,
) -> Result<Representation> {
    let res = residual(data, cert)?;
    let scale = (1.0 + data.mhat().norm_fro()).max(1.0);
    if res > CERT_TOL * scale {
        return Err(CoreError::InvalidCertificate { residual: res });
    }
    let l = &data.l;
    let lld = l * &l.dagger();
    let lld_inv = inverse_qmat(&lld)?;
    let upsilon = sp1_basis_scalars();

    let (gens, algebra): (Vec<QMat>, Algebra) = match (&cert.kind, &cert.gens) {
        (SymmetryKind::Circular { t }, CertGens::SoK(rho)) => {
            let inner = QMat::from_fn(data.k, data.k, |a, b| {
                let mut q = Quat::real(rho[0][(a, b)]);
                if a == b {
                    q -= Quat::i().scale(*t);
                }
                q
            });
            let y = &(&(l * &inner) * &l.dagger()) * &lld_inv;
            (vec![y], Algebra::Sp1)
        }
        (SymmetryKind::IsoclinicSpherical, CertGens::SoK(rho)) => {
            let ys = rho
                .iter()
                .map(|r| &(&lld_inv * &(l * &QMat::from_real(r))) * &l.dagger())
                .collect();
            (ys, Algebra::Sp1)
        }
        (SymmetryKind::Rotational, CertGens::SoK(rho)) => {
            let mut ys = Vec::with_capacity(6);
            for (idx, r) in rho.iter().enumerate() {
                let mut inner = QMat::from_real(r);
                if idx >= 3 {
                    for d in 0..data.k {
                        inner[(d, d)] += upsilon[idx - 3];
                    }
                }
                ys.push(&(&lld_inv * &(l * &inner)) * &l.dagger());
            }
            (ys, Algebra::Sp1Sp1)
        }
        _ => {
            return Err(CoreError::UnsupportedShape(format!(
                "no induced representation implemented for {}",
                cert.kind.name()
            )))
        }
    };

    // sp(n) membership: anti-Hermitian and commuting with L L^dag.
    let mut membership: f64 = 0.0;
    for y in &gens {
        membership = membership.max((y + &y.dagger()).norm_fro());
        membership = membership.max(commutator(y, &lld).norm_fro());
    }
    if membership > 1e-8 * scale {
        return Err(CoreError::InducedRepFailure {
            residual: membership,
        });
    }

    let rep = Representation {
        algebra,
        field: RepField::Quaternionic,
        dim: data.n,
        gens: GenSet::Quaternionic(gens.clone()),
    };
    if gens.len() > 1 {
        let br = rep.bracket_residual();
        if br > 1e-8 * scale {
            return Err(CoreError::InducedRepFailure { residual: br });
        }
    }

    // Circle-representation check for rational circular certificates.
    if let (SymmetryKind::Circular { .. }, Some((_, b))) = (&cert.kind, t_rational) {
        if let CertGens::SoK(rho) = &cert.gens {
            let two_b = 2.0 * b as f64;
            let per_rho =
                exp_qmat(&QMat::from_real(&rho[0]).scale(2.0 * std::f64::consts::PI * two_b));
            if (&per_rho - &QMat::identity(data.k)).norm_fro() < 1e-8 * (data.k as f64) {
                let per_y = exp_qmat(&gens[0].scale(2.0 * std::f64::consts::PI * two_b));
                let gap = (&per_y - &QMat::identity(data.n)).norm_fro();
                if gap > 1e-8 * (data.n as f64) {
                    return Err(CoreError::InducedRepFailure { residual: gap });
                }
            }
        }
    }
    Ok(rep)
}

/// Membership in the generalized Manton-Sutcliffe set: M purely imaginary and
/// R = I_k, both at 1e-10.
pub fn in_ms_set(data: &StandardData) -> bool {
    let m0_max = data.m.data.iter().map(|q| q.w.abs()).fold(0.0f64, f64::max);
    if m0_max > 1e-10 {
        return false;
    }
    let r = data.r_matrix();
    let mut gap: f64 = r.imag_part().norm_fro();
    let rr = r.real_part();
    for i in 0..data.k {
        for j in 0..data.k {
            let want = if i == j { 1.0 } else { 0.0 };
            gap = gap.max((rr[(i, j)] - want).abs());
        }
    }
    gap <= 1e-10
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn sok2(b: f64) -> RMat {
        RealMatrix::from_rows(vec![vec![0.0, b], vec![-b, 0.0]])
    }

    #[test]
    fn rotational_residual_zero_for_m0() {
        let data = examples::m0_family(&[1.0, 2.0]).unwrap();
        let cert = SymmetryCertificate {
            kind: SymmetryKind::Rotational,
            gens: CertGens::SoK(vec![RealMatrix::zeros(2, 2); 6]),
            residual: 0.0,
        };
        assert!(residual(&data, &cert).unwrap() < 1e-14);
    }

    #[test]
    fn converted_family_circular_generator() {
        // The converted family has a unique circular 1-symmetry generator of
        // rotation form [0, b; -b, 0] with |b| = 1 (derivable by hand from
        // the converted M = c [[j, k], [k, -j]]); any other b fails.
        let data = examples::not_in_ms_converted(0.5).unwrap();
        let good = SymmetryCertificate {
            kind: SymmetryKind::Circular { t: 1.0 },
            gens: CertGens::SoK(vec![sok2(1.0)]),
            residual: 0.0,
        };
        let r_good = residual(&data, &good).unwrap();
        assert!(r_good < 1e-10, "residual {r_good:e}");
        for b in [-1.0, -0.5, 0.0, 2.0] {
            let bad = SymmetryCertificate {
                kind: SymmetryKind::Circular { t: 1.0 },
                gens: CertGens::SoK(vec![sok2(b)]),
                residual: 0.0,
            };
            assert!(residual(&data, &bad).unwrap() > 1e-3, "b = {b}");
        }
        // Uniqueness: the solver finds exactly this one-point solution set.
        let out = solve_generators(&data, SymmetryKind::Circular { t: 1.0 }).unwrap();
        assert_eq!(out.kernel_dim, 0);
        assert_eq!(out.certificates.len(), 1);
    }

    #[test]
    fn printed_ms_circle_generator() {
        let data = examples::not_in_ms(0.5).unwrap();
        let rho = examples::not_in_ms_rho_tilde(0.5).unwrap();
        let cert = SymmetryCertificate {
            kind: SymmetryKind::MsCircle,
            gens: CertGens::SpNK(vec![rho]),
            residual: 0.0,
        };
        let r = residual(&data, &cert).unwrap();
        assert!(r < 1e-10, "residual {r:e}");
    }

    #[test]
    fn basic_circular_solve_nonempty() {
        let data = examples::basic().unwrap();
        for t in [0.0, 0.37, 1.0] {
            let out = solve_generators(&data, SymmetryKind::Circular { t }).unwrap();
            assert!(!out.certificates.is_empty(), "t = {t}");
            if let CertGens::SoK(g) = &out.certificates[0].gens {
                assert!(g[0].norm_fro() < 1e-12);
            }
        }
    }

    #[test]
    fn not_in_ms_simple_spherical_solve() {
        let data = examples::not_in_ms(0.5).unwrap();
        let out = solve_generators(&data, SymmetryKind::SimpleSpherical).unwrap();
        assert!(!out.certificates.is_empty());
        assert!(out.certificates[0].residual < 1e-10);
    }

    #[test]
    fn ms_circle_solve_contains_printed() {
        let data = examples::not_in_ms(0.5).unwrap();
        let out = solve_generators(&data, SymmetryKind::MsCircle).unwrap();
        assert!(!out.certificates.is_empty());
        let printed = CertGens::SpNK(vec![examples::not_in_ms_rho_tilde(0.5).unwrap()]);
        let proj = out.affine_projection_residual(&printed);
        assert!(proj < 1e-8, "projection residual {proj:e}");
    }

    #[test]
    fn m_space_trivial_rep_gives_real_symmetric() {
        // rep = trivial^k, simple spherical: solutions are the real symmetric
        // matrices, dimension k(k+1)/2.
        for k in [2usize, 3] {
            let rep = Representation {
                algebra: Algebra::Sp1,
                field: RepField::Real,
                dim: k,
                gens: GenSet::Real(vec![RealMatrix::zeros(k, k); 3]),
            };
            let basis = solve_m_space(&rep, SymmetryKind::SimpleSpherical).unwrap();
            assert_eq!(basis.len(), k * (k + 1) / 2);
            for b in &basis {
                assert!(b.imag_part().norm_fro() < 1e-10);
                assert!(b.symmetry_gap() < 1e-12);
            }
        }
    }

    #[test]
    fn rationalize_m0_irrational_to_zero() {
        let data = examples::m0_family(&[1.0, 1.0]).unwrap();
        let rho = sok2(0.3);
        let out = rationalize_circular_generator(&data, &rho, 1, 2).unwrap();
        assert!(out.norm_fro() < 1e-10);
    }

    #[test]
    fn rationalize_preserves_circle_property() {
        let data = examples::m0_family(&[1.0, 1.0]).unwrap();
        let rho = sok2(1.0);
        let out = rationalize_circular_generator(&data, &rho, 1, 1).unwrap();
        let period = exp_qmat(&QMat::from_real(&out).scale(4.0 * std::f64::consts::PI));
        assert!((&period - &QMat::identity(2)).norm_fro() < 1e-10);
    }

    #[test]
    fn induced_rep_basic_circular() {
        // Basic instanton, circular(1), rho = 0: y = -i in sp(1).
        let data = examples::basic().unwrap();
        let cert = SymmetryCertificate {
            kind: SymmetryKind::Circular { t: 1.0 },
            gens: CertGens::SoK(vec![RealMatrix::zeros(1, 1)]),
            residual: 0.0,
        };
        let rep = induced_structure_rep(&data, &cert, Some((1, 1))).unwrap();
        if let GenSet::Quaternionic(g) = &rep.gens {
            assert!((g[0][(0, 0)] + Quat::i()).norm() < 1e-13);
        } else {
            panic!("expected quaternionic generators");
        }
    }

    #[test]
    fn in_ms_set_examples() {
        assert!(in_ms_set(&examples::not_in_ms(1.0).unwrap()));
        assert!(!in_ms_set(&examples::not_in_ms(0.5).unwrap()));
        let data = examples::m0_family(&[2.0f64.sqrt(), 2.0f64.sqrt()]).unwrap();
        assert!(!in_ms_set(&data));
        assert!(in_ms_set(&examples::m0_family(&[1.0, 1.0]).unwrap()));
    }
}
