//! Gauge fields from ADHM data: kernel frames, finite-difference connections,
//! hyperbolic and singular monopole fields, Hopf-fibration geometry, circle
//! holonomy, and the closed-form reference profile.

use crate::adhm::StandardData;
use crate::linalg::{
    eig_hermitian, eig_unitary_phases, inverse_qmat, null_space_quat, polar_unitary_complex,
};
use crate::qmat::QuatMatrix;
use crate::symmetry::{
    residual as sym_residual, CertGens, SymmetryCertificate, SymmetryKind, CERT_TOL,
};
use crate::{CoreError, QMat, Quat, Result};
use num_complex::Complex;
use serde::Serialize;

/// Orthonormal kernel frame of Delta(x)^dagger at a point.
#[derive(Clone, Debug)]
pub struct KernelFrame {
    pub x: Quat,
    /// (n+k) x n with V^dagger Delta(x) = 0 and V^dagger V = I.
    pub v: QMat,
}

/// One monopole sample: the Higgs field and the three connection components.
#[derive(Clone, Debug)]
pub struct MonopoleSample {
    pub point: [f64; 3],
    pub phi: QMat,
    pub a: [QMat; 3],
}

impl MonopoleSample {
    /// Gauge-invariant norm |Phi| = sqrt(-tr(Phi^2)/n).
    pub fn phi_norm(&self) -> f64 {
        phi_norm(&self.phi)
    }

    /// Gauge-invariant eigenphase list of Phi (2n values, +- symmetric).
    pub fn eigenphases(&self) -> Vec<f64> {
        skew_eigenphases(&self.phi)
    }

    pub fn a_norms(&self) -> [f64; 3] {
        [
            self.a[0].norm_fro(),
            self.a[1].norm_fro(),
            self.a[2].norm_fro(),
        ]
    }

    pub fn to_row(&self) -> FieldRow {
        FieldRow {
            point: self.point.to_vec(),
            phi_norm: self.phi_norm(),
            eigenphases: self.eigenphases(),
            a_norms: self.a_norms().to_vec(),
        }
    }
}

/// Serialized field sample used by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct FieldRow {
    #[serde(rename = "X")]
    pub point: Vec<f64>,
    #[serde(rename = "|Phi|")]
    pub phi_norm: f64,
    pub eigenphases: Vec<f64>,
    pub a_norms: Vec<f64>,
}

/// Eigenphases of a circle holonomy in Sp(n).
#[derive(Clone, Debug, Serialize)]
pub struct HolonomySpectrum {
    pub base: [f64; 4],
    pub period: f64,
    pub steps: usize,
    /// 2n phases in (-pi, pi], ascending (quaternionic +- pairs).
    pub phases: Vec<f64>,
}

pub fn phi_norm(phi: &QMat) -> f64 {
    let sq = phi * phi;
    let mut tr = 0.0;
    for i in 0..sq.rows {
        tr += sq[(i, i)].w;
    }
    (-tr / sq.rows as f64).max(0.0).sqrt()
}

/// Sorted eigenvalue list of -i * embed(Phi) for anti-Hermitian Phi.
pub fn skew_eigenphases(phi: &QMat) -> Vec<f64> {
    let h = phi.embed_complex().scale(Complex::new(0.0, -1.0));
    eig_hermitian(&h).0
}

// ---------------------------------------------------------------------------
// Kernel frames and the finite-difference connection

/// Kernel frame at x (gauge arbitrary).
pub fn kernel_frame(data: &StandardData, x: Quat) -> Result<KernelFrame> {
    let delta = data.delta(x);
    let v = null_space_quat(&delta, data.n)?;
    Ok(KernelFrame { x, v })
}

/// Kernel frame in the canonical gauge: the bottom n x n block of V is made
/// Hermitian positive definite. This pins a smooth local gauge wherever the
/// block is nonsingular (it reproduces the explicit frame of the diagonal
/// M = 0 family) and fails with an alignment error where it degenerates.
pub fn kernel_frame_canonical(data: &StandardData, x: Quat) -> Result<KernelFrame> {
    let frame = kernel_frame(data, x)?;
    let rows = data.n + data.k;
    let bottom = frame.v.block(rows - data.n, 0, data.n, data.n);
    let emb = bottom.embed_complex();
    let u = polar_unitary_complex(&emb)
        .map_err(|e| CoreError::AlignmentFailure(format!("canonical block is singular: {e}")))?;
    let (uq, gap) = QuatMatrix::unembed_complex(&u);
    if gap > 1e-9 {
        return Err(CoreError::AlignmentFailure(format!(
            "polar factor left the quaternionic subalgebra (gap {gap:e})"
        )));
    }
    let v = &frame.v * &uq.dagger();
    Ok(KernelFrame { x, v })
}

/// Central-difference connection components A_mu(x) = V^dagger d_mu V in the
/// canonical gauge; anti-Hermitian up to O(h^2).
pub fn connection_fd(data: &StandardData, x: Quat, h: f64) -> Result<[QMat; 4]> {
    let base = kernel_frame_canonical(data, x)?;
    let dirs = [Quat::one(), Quat::i(), Quat::j(), Quat::k()];
    let mut out = Vec::with_capacity(4);
    for dir in dirs {
        let plus = kernel_frame_canonical(data, x + dir.scale(h))?;
        let minus = kernel_frame_canonical(data, x - dir.scale(h))?;
        let diff = (&plus.v - &minus.v).scale(0.5 / h);
        out.push(&base.v.dagger() * &diff);
    }
    Ok(out.try_into().expect("four components"))
}

fn check_certificate(data: &StandardData, cert: &SymmetryCertificate, want_t: f64) -> Result<QMat> {
    let SymmetryKind::Circular { t } = cert.kind else {
        return Err(CoreError::InvalidData(format!(
            "monopole construction needs a circular certificate, got {}",
            cert.kind.name()
        )));
    };
    if (t - want_t).abs() > 1e-12 {
        return Err(CoreError::InvalidData(format!(
            "circular slope t = {t}, construction needs t = {want_t}"
        )));
    }
    let res = sym_residual(data, cert)?;
    if res > CERT_TOL * (1.0 + data.mhat().norm_fro()) {
        return Err(CoreError::InvalidCertificate { residual: res });
    }
    match &cert.gens {
        CertGens::SoK(g) => Ok(QMat::from_real(&g[0])),
        CertGens::SpNK(_) => Err(CoreError::InvalidData(
            "circular certificates carry so(k) generators".into(),
        )),
    }
}

/// The endomorphism diag(L W L^dag (L L^dag)^-1, D) appearing in both
/// monopole formulas, as one (n+k) x (n+k) block matrix.
fn monopole_block(data: &StandardData, top_inner: &QMat, bottom: &QMat) -> Result<QMat> {
    let l = &data.l;
    let lld_inv = inverse_qmat(&(l * &l.dagger()))?;
    let top = &(&(l * top_inner) * &l.dagger()) * &lld_inv;
    Ok(QMat::block_diag(&top, bottom))
}

/// Hyperbolic monopole sample at half-space point X = (x0, x1, r), r > 0:
/// Phi = (1/2) V^dag diag(L(i - rho)L^dag (LL^dag)^-1, i - rho) V evaluated
/// at the quaternion x = x0 + x1 i + r j, with A_l from central differences
/// of the canonical frame along the half-space coordinates.
pub fn higgs_hyperbolic(
    data: &StandardData,
    cert: &SymmetryCertificate,
    point: [f64; 3],
    h: f64,
) -> Result<MonopoleSample> {
    let rho = check_certificate(data, cert, 1.0)?;
    let [x0, x1, r] = point;
    if r <= 0.0 {
        return Err(CoreError::Domain("half-space point needs r > 0".into()));
    }
    let at = |p: [f64; 3]| Quat::new(p[0], p[1], p[2], 0.0);
    let x = at(point);
    let frame = kernel_frame_canonical(data, x)?;

    let mut top_inner = rho.scale(-1.0);
    let mut bottom = rho.scale(-1.0);
    for d in 0..data.k {
        top_inner[(d, d)] += Quat::i();
        bottom[(d, d)] += Quat::i();
    }
    let block = monopole_block(data, &top_inner, &bottom)?;
    let phi = (&(&frame.v.dagger() * &block) * &frame.v).scale(0.5);

    // A_l = V^dag d_l V along (x0, x1, r).
    let mut a = Vec::with_capacity(3);
    for l_idx in 0..3 {
        let mut pp = point;
        pp[l_idx] += h;
        let mut pm = point;
        pm[l_idx] -= h;
        let vp = kernel_frame_canonical(data, at(pp))?;
        let vm = kernel_frame_canonical(data, at(pm))?;
        let diff = (&vp.v - &vm.v).scale(0.5 / h);
        a.push(&frame.v.dagger() * &diff);
    }
    let _ = (x0, x1);
    Ok(MonopoleSample {
        point,
        phi,
        a: a.try_into().expect("three components"),
    })
}

/// Deterministic local section of the Hopf fibration: x with pi(x) = X and
/// |x|^2 = |X|, rotated by the circle offset theta0.
pub fn hopf_section(point: [f64; 3], theta0: f64) -> Result<Quat> {
    let norm = (point[0] * point[0] + point[1] * point[1] + point[2] * point[2]).sqrt();
    if norm < 1e-300 {
        return Err(CoreError::Domain(
            "the fibration section needs X != 0".into(),
        ));
    }
    let nhat = Quat::new(0.0, point[0] / norm, point[1] / norm, point[2] / norm);
    // Unit u with u^dag i u = nhat: u = q^dag for q i q^dag = nhat.
    let u = if (nhat + Quat::i()).norm() < 1e-8 {
        Quat::j()
    } else {
        let q = Quat::one() - nhat * Quat::i();
        q.normalized().conj()
    };
    let phase = Quat::new(theta0.cos(), theta0.sin(), 0.0, 0.0);
    Ok(phase * u.scale(norm.sqrt()))
}

/// The Hopf map pi(x) = x^dag i x (a pure quaternion).
pub fn hopf_map(x: Quat) -> Quat {
    x.conj() * Quat::i() * x
}

/// The circle-invariant one-form xi = 2(-x1 dx0 + x0 dx1 - x3 dx2 + x2 dx3)
/// evaluated on a tangent 4-vector.
pub fn xi_form(x: Quat, v: [f64; 4]) -> f64 {
    2.0 * (-x.x * v[0] + x.w * v[1] - x.z * v[2] + x.y * v[3])
}

/// Differential of the Hopf map at x applied to a tangent 4-vector.
fn hopf_differential(x: Quat, v: [f64; 4]) -> Quat {
    let vq = Quat::new(v[0], v[1], v[2], v[3]);
    vq.conj() * Quat::i() * x + x.conj() * Quat::i() * vq
}

/// Singular monopole sample at X in sp(1) minus the origin:
/// Phi = 1/(2|X|) V(x_X)^dag diag(-L rho L^dag (LL^dag)^-1, i - rho) V(x_X),
/// with A_l assembled from the horizontal lifts of the coordinate fields.
pub fn higgs_singular(
    data: &StandardData,
    cert: &SymmetryCertificate,
    point: [f64; 3],
    theta0: f64,
    h: f64,
) -> Result<MonopoleSample> {
    let rho = check_certificate(data, cert, 0.0)?;
    let norm = (point[0] * point[0] + point[1] * point[1] + point[2] * point[2]).sqrt();
    if norm < 1e-300 {
        return Err(CoreError::Domain(
            "singular monopole point must be nonzero".into(),
        ));
    }
    let x = hopf_section(point, theta0)?;
    // Section consistency: pi(x_X) = X.
    let pi = hopf_map(x);
    let gap = (pi - Quat::new(0.0, point[0], point[1], point[2])).norm();
    if gap > 1e-10 * (1.0 + norm) {
        return Err(CoreError::InternalConsistency(format!(
            "section inconsistency: |pi(x_X) - X| = {gap:e}"
        )));
    }

    let frame = kernel_frame_canonical(data, x)?;
    let top_inner = rho.scale(-1.0);
    let mut bottom = rho.scale(-1.0);
    for d in 0..data.k {
        bottom[(d, d)] += Quat::i();
    }
    let block = monopole_block(data, &top_inner, &bottom)?;
    let phi = (&(&frame.v.dagger() * &block) * &frame.v).scale(0.5 / norm);

    // Horizontal lifts of d/dX_l, scaled by 1/(2|X|).
    let conn = connection_fd(data, x, h)?;
    let (x0, x1, x2, x3) = (x.w, x.x, x.y, x.z);
    let lifts = [[x0, x1, -x2, -x3], [-x3, x2, x1, -x0], [x2, x3, x0, x1]];
    let mut a = Vec::with_capacity(3);
    for (l_idx, lift) in lifts.iter().enumerate() {
        let w: Vec<f64> = lift.iter().map(|c| c / (2.0 * norm)).collect();
        // Self-consistency of the lift: d pi (w) = e_l and xi(w) = 0.
        let dpi = hopf_differential(x, [w[0], w[1], w[2], w[3]]);
        let mut want = Quat::zero();
        match l_idx {
            0 => want.x = 1.0,
            1 => want.y = 1.0,
            _ => want.z = 1.0,
        }
        let dgap = (dpi - want).norm();
        let xgap = xi_form(x, [w[0], w[1], w[2], w[3]]).abs();
        if dgap > 1e-8 * (1.0 + norm) || xgap > 1e-8 * (1.0 + norm) {
            return Err(CoreError::InternalConsistency(format!(
                "lift {l_idx} fails d(pi) = d/dX (gap {dgap:e}) or xi = 0 (gap {xgap:e})"
            )));
        }
        let mut acc = QMat::zeros(data.n, data.n);
        for (mu, conn_mu) in conn.iter().enumerate() {
            acc = &acc + &conn_mu.scale(w[mu]);
        }
        a.push(acc);
    }
    Ok(MonopoleSample {
        point,
        phi,
        a: a.try_into().expect("three components"),
    })
}

// ---------------------------------------------------------------------------
// Orbit holonomy

/// Parallel transport of the kernel frame around the closed orbit
/// theta -> e^(theta Upsilon).x, with per-step polar alignment of the
/// frame overlaps (second-order accurate, gauge-covariant).
pub fn orbit_holonomy(
    data: &StandardData,
    upsilon: &QMat,
    x: Quat,
    steps: usize,
) -> Result<HolonomySpectrum> {
    if steps < 8 {
        return Err(CoreError::Domain("holonomy needs at least 8 steps".into()));
    }
    let point_at = |theta: f64| -> Result<Quat> {
        let e = crate::liealg::exp_sp2(upsilon, theta)?;
        e.apply_point(x)
            .ok_or_else(|| CoreError::Domain("the orbit passes through infinity".into()))
    };
    // Smallest closing period among 2 pi / {4, 2, 1}.
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut period = None;
    for div in [4.0, 2.0, 1.0] {
        let p = two_pi / div;
        let gap = (point_at(p)? - x).norm();
        if gap <= 1e-9 * (1.0 + x.norm()) {
            period = Some(p);
            break;
        }
    }
    let Some(period) = period else {
        let gap = (point_at(two_pi)? - x).norm();
        return Err(CoreError::NonClosingOrbit { gap });
    };

    let frames: Vec<QMat> = (0..steps)
        .map(|l| {
            let theta = period * l as f64 / steps as f64;
            Ok(kernel_frame(data, point_at(theta)?)?.v)
        })
        .collect::<Result<_>>()?;

    let mut hol = QMat::identity(data.n);
    for l in 0..steps {
        let next = &frames[(l + 1) % steps];
        let overlap = &next.dagger() * &frames[l];
        let u = polar_unitary_complex(&overlap.embed_complex()).map_err(|e| {
            CoreError::AlignmentFailure(format!("frame overlap degenerate at step {l}: {e}"))
        })?;
        let (uq, _) = QuatMatrix::unembed_complex(&u);
        hol = &uq * &hol;
    }

    let phases = eig_unitary_phases(&hol.embed_complex());
    Ok(HolonomySpectrum {
        base: [x.w, x.x, x.y, x.z],
        period,
        steps,
        phases,
    })
}

// ---------------------------------------------------------------------------
// Closed-form reference profile

/// Closed-form |Phi|(r) of the spherically symmetric one-parameter family:
/// C/2 * (s + 1)/(s - 1) - (r^2 + 1)/(4 r) with s = ((1+r)/(1-r))^(2C).
/// Defined for r in (0,1) u (1,inf); r > 1 needs 2C integral.
pub fn chakrabarti_profile(c: f64, r: f64) -> Result<f64> {
    if c <= 1.0 {
        return Err(CoreError::Domain("the profile needs C > 1".into()));
    }
    if r <= 0.0 || (r - 1.0).abs() < 1e-14 {
        return Err(CoreError::Domain("r must lie in (0,1) or (1,inf)".into()));
    }
    let p = 2.0 * c;
    let integral = (p - p.round()).abs() < 1e-12;
    if r > 1.0 && !integral {
        return Err(CoreError::Domain(
            "for non-integral 2C the profile is only defined for r < 1".into(),
        ));
    }
    let ratio = (1.0 + r) / (1.0 - r);
    let s = if integral {
        let k = p.round() as i32;
        ratio.powi(k)
    } else {
        ratio.powf(p)
    };
    Ok(c / 2.0 * (s + 1.0) / (s - 1.0) - (r * r + 1.0) / (4.0 * r))
}

/// Monopole mass of the profile family.
pub fn chakrabarti_mass(c: f64) -> f64 {
    (c - 1.0) / 2.0
}

/// Convenience: re-gauge a frame by a constant symplectic matrix (tests use
/// this to assert gauge covariance of the field quantities).
pub fn regauge_frame(frame: &KernelFrame, g: &QMat) -> KernelFrame {
    KernelFrame {
        x: frame.x,
        v: &frame.v * g,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::linalg::exp_qmat;
    use crate::rmat::RealMatrix;

    fn circ_cert(data: &StandardData, t: f64) -> SymmetryCertificate {
        SymmetryCertificate {
            kind: SymmetryKind::Circular { t },
            gens: CertGens::SoK(vec![RealMatrix::zeros(data.k, data.k)]),
            residual: 0.0,
        }
    }

    #[test]
    fn hopf_map_values() {
        assert!((hopf_map(Quat::one()) - Quat::i()).norm() < 1e-15);
        assert!((hopf_map(Quat::j()) + Quat::i()).norm() < 1e-15);
        // |pi(x)| = |x|^2.
        let x = Quat::new(0.3, -0.7, 0.2, 0.9);
        assert!((hopf_map(x).norm() - x.norm_sq()).abs() < 1e-13);
    }

    #[test]
    fn hopf_equivariance_samples() {
        let mut seed = 17u64;
        let mut next = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for _ in 0..200 {
            let theta = next() * 6.0;
            let x = Quat::new(next(), next(), next(), next());
            let p = Quat::new(next(), next(), next(), next()).normalized();
            let phase = Quat::new(theta.cos(), theta.sin(), 0.0, 0.0);
            let lhs = hopf_map(phase * x * p.conj());
            let rhs = p * hopf_map(x) * p.conj();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn xi_form_values() {
        // x = 1, v = d/dtheta = (0, 1, 0, 0): xi = 2.
        assert!((xi_form(Quat::one(), [0.0, 1.0, 0.0, 0.0]) - 2.0).abs() < 1e-15);
        // Orthogonal direction vanishes.
        assert!(xi_form(Quat::one(), [1.0, 0.0, 0.0, 0.0]).abs() < 1e-15);
        // xi(v) = 2 <v, d/dtheta> with d/dtheta = (-x1, x0, -x3, x2).
        let x = Quat::new(0.4, -0.2, 0.8, 0.1);
        let v = [0.3, 0.5, -0.6, 0.2];
        let dtheta = [-x.x, x.w, -x.z, x.y];
        let want = 2.0 * v.iter().zip(&dtheta).map(|(a, b)| a * b).sum::<f64>();
        assert!((xi_form(x, v) - want).abs() < 1e-14);
    }

    #[test]
    fn kernel_frame_m0_matches_explicit_projector() {
        // M = 0, L = diag(alpha): frame spans the explicit v_l columns.
        let alphas = [1.0, 2.0];
        let data = examples::m0_family(&alphas).unwrap();
        let x = Quat::new(0.4, -0.3, 0.7, 0.2);
        let frame = kernel_frame(&data, x).unwrap();
        let explicit = QMat::from_fn(4, 2, |i, j| {
            let nl = 1.0 / (alphas[j] * alphas[j] + x.norm_sq()).sqrt();
            if i < 2 {
                if i == j {
                    x.conj().scale(nl)
                } else {
                    Quat::zero()
                }
            } else if i - 2 == j {
                Quat::real(alphas[j] * nl)
            } else {
                Quat::zero()
            }
        });
        // V^dag Delta = 0 and V^dag V = I hold for both; compare projectors.
        let p1 = &frame.v * &frame.v.dagger();
        let p2 = &explicit * &explicit.dagger();
        assert!((&p1 - &p2).norm_fro() < 1e-11);
        // The canonical frame reproduces the explicit one exactly.
        let canon = kernel_frame_canonical(&data, x).unwrap();
        assert!((&canon.v - &explicit).norm_fro() < 1e-10);
    }

    #[test]
    fn connection_fd_m0_closed_form() {
        let alphas = [1.0, 2.0];
        let data = examples::m0_family(&alphas).unwrap();
        let x = Quat::new(0.5, -0.2, 0.3, 0.8);
        let h = 1e-4;
        let conn = connection_fd(&data, x, h).unwrap();
        // Closed form (x dx^dag - dx x^dag)/2 * diag(1/(|x|^2 + alpha_l^2)).
        let dirs = [Quat::one(), Quat::i(), Quat::j(), Quat::k()];
        for (mu, dir) in dirs.iter().enumerate() {
            let core = (x * dir.conj() - *dir * x.conj()).scale(0.5);
            let want = QMat::from_fn(2, 2, |i, j| {
                if i == j {
                    core.scale(1.0 / (x.norm_sq() + alphas[i] * alphas[i]))
                } else {
                    Quat::zero()
                }
            });
            assert!(
                (&conn[mu] - &want).norm_fro() < 1e-6,
                "mu = {mu}: {:e}",
                (&conn[mu] - &want).norm_fro()
            );
            // Anti-Hermitian within O(h^2).
            assert!((&conn[mu] + &conn[mu].dagger()).norm_fro() < 1e-7);
        }
    }

    #[test]
    fn connection_fd_basic_at_zero() {
        let data = examples::basic().unwrap();
        let conn = connection_fd(&data, Quat::zero(), 1e-4).unwrap();
        for c in &conn {
            assert!(c.norm_fro() < 1e-8);
        }
    }

    #[test]
    fn higgs_hyperbolic_basic_profile() {
        let data = examples::basic().unwrap();
        let cert = circ_cert(&data, 1.0);
        // Center of the basic hyperbolic monopole: |Phi|(0,0,1) = 0.
        let s = higgs_hyperbolic(&data, &cert, [0.0, 0.0, 1.0], 1e-4).unwrap();
        assert!(s.phi_norm() < 1e-12, "|Phi| = {}", s.phi_norm());
        // Against the hand-evaluated closed form |Phi| = |q| / (2 (1 + |x|^2))
        // with q = x i x^dag + i at x = r j: |Phi|(0,0,r) = (r^2-1)/(2(r^2+1)).
        for r in [0.5, 3.0] {
            let s = higgs_hyperbolic(&data, &cert, [0.0, 0.0, r], 1e-4).unwrap();
            let want = ((r * r - 1.0) / (2.0 * (r * r + 1.0))).abs();
            assert!((s.phi_norm() - want).abs() < 1e-10, "r = {r}");
        }
        // Anti-Hermitian Higgs field.
        let s = higgs_hyperbolic(&data, &cert, [0.3, -0.2, 0.8], 1e-4).unwrap();
        assert!((&s.phi + &s.phi.dagger()).norm_fro() < 1e-12);
    }

    #[test]
    fn higgs_hyperbolic_theta_independent() {
        // Recomputing Phi at the rotated quaternion e^(i theta/2) x e^(-i theta/2)
        // through the full 4d frame reproduces the eigenphases.
        let data = examples::not_in_ms_converted(0.5).unwrap();
        let rho = RealMatrix::from_rows(vec![vec![0.0, 1.0], vec![-1.0, 0.0]]);
        let cert = SymmetryCertificate {
            kind: SymmetryKind::Circular { t: 1.0 },
            gens: CertGens::SoK(vec![rho.clone()]),
            residual: 0.0,
        };
        let point = [0.4, -0.1, 0.7];
        let s = higgs_hyperbolic(&data, &cert, point, 1e-4).unwrap();

        // Manual recomputation at the rotated point.
        let theta: f64 = 1.1;
        let half = Quat::new((theta / 2.0).cos(), (theta / 2.0).sin(), 0.0, 0.0);
        let x = Quat::new(point[0], point[1], point[2], 0.0);
        let x_rot = half * x * half.conj();
        let frame = kernel_frame(&data, x_rot).unwrap();
        let mut top_inner = QMat::from_real(&rho).scale(-1.0);
        let mut bottom = QMat::from_real(&rho).scale(-1.0);
        for d in 0..2 {
            top_inner[(d, d)] += Quat::i();
            bottom[(d, d)] += Quat::i();
        }
        let block = monopole_block(&data, &top_inner, &bottom).unwrap();
        let phi_rot = (&(&frame.v.dagger() * &block) * &frame.v).scale(0.5);
        let p1 = s.eigenphases();
        let p2 = skew_eigenphases(&phi_rot);
        for (a, b) in p1.iter().zip(&p2) {
            assert!((a - b).abs() < 1e-9, "{p1:?} vs {p2:?}");
        }
        // The commutator identity behind the construction: [LL^dag, L e^(-i th/2) e^(rho th/2) L^dag] = 0.
        let lld = &data.l * &data.l.dagger();
        let krot = exp_qmat(&QMat::from_real(&rho).scale(theta / 2.0));
        let inner = &data.l.scalar_mul_left(half.conj()) * &(&krot * &data.l.dagger());
        let comm = &(&lld * &inner) - &(&inner * &lld);
        assert!(comm.norm_fro() < 1e-12);
    }

    #[test]
    fn higgs_singular_basic() {
        let data = examples::basic().unwrap();
        let cert = circ_cert(&data, 0.0);
        // pi(x_X) = X and |X| = |x_X|^2 across sample points.
        for point in [[0.3, -0.4, 0.5], [1.0, 0.0, 0.0], [0.0, 0.0, -2.0]] {
            let x = hopf_section(point, 0.7).unwrap();
            let pi = hopf_map(x);
            let gap = (pi - Quat::new(0.0, point[0], point[1], point[2])).norm();
            assert!(gap < 1e-12, "{point:?}: {gap:e}");
            let norm = (point.iter().map(|v| v * v).sum::<f64>()).sqrt();
            assert!((x.norm_sq() - norm).abs() < 1e-12);
        }
        // |Phi| depends only on |X| for the basic instanton: 1/(2|X|(1+|X|)).
        let radius = 0.8;
        for dir in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.36, -0.48, 0.8]] {
            let point = [dir[0] * radius, dir[1] * radius, dir[2] * radius];
            let s = higgs_singular(&data, &cert, point, 0.0, 1e-4).unwrap();
            let want = 1.0 / (2.0 * radius * (1.0 + radius));
            assert!((s.phi_norm() - want).abs() < 1e-10, "{dir:?}");
        }
        // Two sections differing by a circle offset give equal eigenphases.
        let p = [0.3, 0.5, -0.2];
        let s1 = higgs_singular(&data, &cert, p, 0.0, 1e-4).unwrap();
        let s2 = higgs_singular(&data, &cert, p, 1.3, 1e-4).unwrap();
        for (a, b) in s1.eigenphases().iter().zip(s2.eigenphases().iter()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn holonomy_ms_orbit_basic() {
        // The Manton-Sutcliffe orbit through a ball point closes at period pi
        // and has +- symmetric phases; the holonomy is invariant under
        // re-basing along the orbit.
        let data = examples::basic().unwrap();
        let ms = crate::liealg::ms_generator();
        let x = Quat::new(0.0, 0.3, 0.2, -0.1);
        let spec = orbit_holonomy(&data, &ms, x, 96).unwrap();
        assert!((spec.period - std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(spec.phases.len(), 2);
        assert!((spec.phases[0] + spec.phases[1]).abs() < 1e-8);

        let e = crate::liealg::exp_sp2(&ms, 0.37).unwrap();
        let x2 = e.apply_point(x).unwrap();
        let spec2 = orbit_holonomy(&data, &ms, x2, 96).unwrap();
        for (a, b) in spec.phases.iter().zip(&spec2.phases) {
            assert!((a - b).abs() < 1e-4, "{a} vs {b}");
        }
    }

    #[test]
    fn holonomy_cyclic_start_invariance() {
        // Re-basing the orbit at one of its own sample points permutes the
        // same transport links cyclically: the eigenphases are unchanged.
        let data = examples::not_in_ms_converted(0.5).unwrap();
        let ms = crate::liealg::ms_generator();
        let x = Quat::new(0.0, 0.4, -0.2, 0.3);
        let steps = 48;
        let base = orbit_holonomy(&data, &ms, x, steps).unwrap();
        for offset in [5usize, 17] {
            let theta = base.period * offset as f64 / steps as f64;
            let shifted = crate::liealg::exp_sp2(&ms, theta)
                .unwrap()
                .apply_point(x)
                .unwrap();
            let spec = orbit_holonomy(&data, &ms, shifted, steps).unwrap();
            for (a, b) in base.phases.iter().zip(&spec.phases) {
                assert!((a - b).abs() < 1e-8, "offset {offset}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn holonomy_rejects_open_orbit() {
        // diag(i, t i) with irrational t does not close.
        let data = examples::basic().unwrap();
        let ups = QMat::from_rows(vec![
            vec![Quat::i(), Quat::zero()],
            vec![
                Quat::zero(),
                Quat::i().scale(1.0 / std::f64::consts::SQRT_2),
            ],
        ]);
        let x = Quat::new(0.2, 0.1, 0.4, 0.0);
        assert!(matches!(
            orbit_holonomy(&data, &ups, x, 64),
            Err(CoreError::NonClosingOrbit { .. })
        ));
    }

    #[test]
    fn chakrabarti_values() {
        // C = 3/2, r = 1/2: the closed form equals (5r - r^3)/(4r^2 + 12) = 2.375/13.
        let v = chakrabarti_profile(1.5, 0.5).unwrap();
        assert!((v - 2.375 / 13.0).abs() < 1e-14);
        // General formula vs the printed simplification on a grid.
        for i in 1..20 {
            let r = i as f64 / 20.0;
            let general = chakrabarti_profile(1.5, r).unwrap();
            let simple = (5.0 * r - r * r * r) / (4.0 * r * r + 12.0);
            assert!((general - simple).abs() < 1e-12, "r = {r}");
        }
        // C = 2 satisfies |Phi|(r) = |Phi|(1/r); C = 3/2 violates it.
        let lhs = chakrabarti_profile(2.0, 0.5).unwrap();
        let rhs = chakrabarti_profile(2.0, 2.0).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        let l2 = chakrabarti_profile(1.5, 0.5).unwrap();
        let r2 = chakrabarti_profile(1.5, 2.0).unwrap();
        assert!((l2 - r2).abs() > 0.01);
        // Mass and domain errors.
        assert!((chakrabarti_mass(1.5) - 0.25).abs() < 1e-15);
        assert!(chakrabarti_profile(1.5, 1.0).is_err());
        assert!(chakrabarti_profile(1.25, 2.0).is_err());
    }

    #[test]
    fn gauge_covariance_of_fields() {
        // Re-gauging the frame by a constant symplectic matrix conjugates
        // Phi; the eigenphases and |Phi| are unchanged.
        let data = examples::m0_family(&[1.0, 2.0]).unwrap();
        let x = Quat::new(0.2, 0.5, -0.1, 0.3);
        let frame = kernel_frame(&data, x).unwrap();
        let g = exp_qmat(&QMat::from_rows(vec![
            vec![
                Quat::new(0.0, 0.4, 0.0, -0.1),
                Quat::new(0.3, 0.2, 0.0, 0.0),
            ],
            vec![
                Quat::new(-0.3, 0.2, 0.0, 0.0),
                Quat::new(0.0, 0.0, 0.7, 0.2),
            ],
        ]));
        let frame2 = regauge_frame(&frame, &g);
        let mut bottom = QMat::zeros(2, 2);
        for d in 0..2 {
            bottom[(d, d)] = Quat::i();
        }
        let block = monopole_block(&data, &QMat::diag_scalar(2, Quat::i()), &bottom).unwrap();
        let phi1 = &(&frame.v.dagger() * &block) * &frame.v;
        let phi2 = &(&frame2.v.dagger() * &block) * &frame2.v;
        assert!((phi_norm(&phi1) - phi_norm(&phi2)).abs() < 1e-12);
        let p1 = skew_eigenphases(&phi1);
        let p2 = skew_eigenphases(&phi2);
        for (a, b) in p1.iter().zip(&p2) {
            assert!((a - b).abs() < 1e-11);
        }
    }
}
