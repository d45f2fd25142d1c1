//! ADHM data containers, validity checking, standard-form reduction, and the
//! gauge and conformal actions.
//!
//! Conventions: a pair (a, b) of (n+k) x k quaternionic matrices with
//! Delta(x) = a - b x; standard form has b = U = [0; I_k] and Mhat = [L; M]
//! with M symmetric. R = L^dagger L + M^dagger M must be real and
//! nonsingular, and Delta(x)^dagger Delta(x) positive definite for all x.

use crate::linalg::{eig_symmetric, inverse_qmat, inverse_rmat, rank_quat, sym_eig_checked};
use crate::rmat::RealMatrix;
use crate::{CoreError, QMat, Quat, RMat, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const SYM_TOL: f64 = 1e-10;

/// Standard-form data: Mhat = [L; M] with b fixed to U = [0; I_k].
#[derive(Clone, Debug)]
pub struct StandardData {
    pub n: usize,
    pub k: usize,
    /// Top block, n x k.
    pub l: QMat,
    /// Lower block, k x k, symmetric.
    pub m: QMat,
}

/// A raw ADHM pair (a, b), both (n+k) x k.
#[derive(Clone, Debug)]
pub struct ADHMPair {
    pub n: usize,
    pub k: usize,
    pub a: QMat,
    pub b: QMat,
}

/// Gauge element (Q, K): acts as (a, b) -> (Q a K^-1, Q b K^-1).
#[derive(Clone, Debug)]
pub struct GaugeElement {
    pub q: QMat,
    pub k: RMat,
}

/// 2x2 quaternionic conformal element with blocks (A, B; C, D).
#[derive(Clone, Copy, Debug)]
pub struct ConformalElement {
    pub a: Quat,
    pub b: Quat,
    pub c: Quat,
    pub d: Quat,
}

impl StandardData {
    pub fn new(l: QMat, m: QMat) -> Result<Self> {
        if m.rows != m.cols {
            return Err(CoreError::DimensionMismatch(format!(
                "M is {}x{}",
                m.rows, m.cols
            )));
        }
        if l.cols != m.cols {
            return Err(CoreError::DimensionMismatch(format!(
                "L is {}x{} but M is {}x{}",
                l.rows, l.cols, m.rows, m.cols
            )));
        }
        Ok(Self {
            n: l.rows,
            k: m.rows,
            l,
            m,
        })
    }

    /// Mhat = [L; M], an (n+k) x k matrix.
    pub fn mhat(&self) -> QMat {
        self.l.vstack(&self.m)
    }

    /// U = [0; I_k].
    pub fn u(&self) -> QMat {
        QMat::zeros(self.n, self.k).vstack(&QMat::identity(self.k))
    }

    pub fn pair(&self) -> ADHMPair {
        ADHMPair {
            n: self.n,
            k: self.k,
            a: self.mhat(),
            b: self.u(),
        }
    }

    /// R = L^dagger L + M^dagger M (quaternionic; real for valid data).
    pub fn r_matrix(&self) -> QMat {
        &(&self.l.dagger() * &self.l) + &(&self.m.dagger() * &self.m)
    }

    /// Real part of R, the form used by the symmetry solvers.
    pub fn r_real(&self) -> RMat {
        self.r_matrix().real_part()
    }

    /// Delta(x) = [L; M - I_k x].
    pub fn delta(&self, x: Quat) -> QMat {
        let lower = QMat::from_fn(self.k, self.k, |i, j| {
            if i == j {
                self.m[(i, j)] - x
            } else {
                self.m[(i, j)]
            }
        });
        self.l.vstack(&lower)
    }

    /// Delta(x)^dagger Delta(x) = R - M^dagger x - x^dagger M + |x|^2 I.
    pub fn delta_gram(&self, x: Quat) -> QMat {
        let d = self.delta(x);
        &d.dagger() * &d
    }

    /// Sorted eigenvalues of Delta(x)^dagger Delta(x).
    pub fn delta_spectrum(&self, x: Quat) -> Result<Vec<f64>> {
        let g = self.delta_gram(x);
        let imag_gap = g.imag_part().norm_fro();
        if imag_gap > 1e-8 * g.norm_fro().max(1.0) {
            return Err(CoreError::InvalidData(format!(
                "Delta^dagger Delta is not real (gap {imag_gap:e})"
            )));
        }
        let (vals, _) = sym_eig_checked(&g.real_part(), 1e-8)?;
        Ok(vals)
    }

    /// Spectral norm of Mhat (radius bound for the PD sweep).
    pub fn mhat_norm2(&self) -> f64 {
        self.mhat().norm_2()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            k: self.k,
            l: self.l.scale(s),
            m: self.m.scale(s),
        }
    }
}

impl GaugeElement {
    pub fn identity(n_plus_k: usize, k: usize) -> Self {
        Self {
            q: QMat::identity(n_plus_k),
            k: RMat::identity(k),
        }
    }

    /// Group product: (self o other) acts as other first, then self.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            q: &self.q * &other.q,
            k: &self.k * &other.k,
        }
    }

    pub fn symplectic_residual(&self) -> f64 {
        let g = &self.q.dagger() * &self.q;
        (&g - &QMat::identity(self.q.rows)).norm_fro()
    }
}

impl ConformalElement {
    pub fn identity() -> Self {
        Self {
            a: Quat::one(),
            b: Quat::zero(),
            c: Quat::zero(),
            d: Quat::one(),
        }
    }

    pub fn from_qmat2(m: &QMat) -> Result<Self> {
        if m.rows != 2 || m.cols != 2 {
            return Err(CoreError::DimensionMismatch(format!(
                "conformal element is {}x{}",
                m.rows, m.cols
            )));
        }
        Ok(Self {
            a: m[(0, 0)],
            b: m[(0, 1)],
            c: m[(1, 0)],
            d: m[(1, 1)],
        })
    }

    pub fn to_qmat2(&self) -> QMat {
        QMat::from_rows(vec![vec![self.a, self.b], vec![self.c, self.d]])
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_qmat2(&(&self.to_qmat2() * &other.to_qmat2())).unwrap()
    }

    pub fn sp2_residual(&self) -> f64 {
        let m = self.to_qmat2();
        (&(&m.dagger() * &m) - &QMat::identity(2)).norm_fro()
    }

    /// Moebius action on a point, (A x + B)(C x + D)^-1; None encodes infinity.
    pub fn apply_point(&self, x: Quat) -> Option<Quat> {
        let denom = self.c * x + self.d;
        if denom.norm() < 1e-14 {
            return None;
        }
        Some((self.a * x + self.b) * denom.inv())
    }
}

/// Gauge action (Q, K).(a, b) = (Q a K^-1, Q b K^-1).
pub fn gauge_apply(g: &GaugeElement, pair: &ADHMPair) -> Result<ADHMPair> {
    if g.q.cols != pair.a.rows || g.k.rows != pair.k {
        return Err(CoreError::DimensionMismatch(format!(
            "gauge ({}x{}, {}x{}) on pair ({}x{})",
            g.q.rows, g.q.cols, g.k.rows, g.k.cols, pair.a.rows, pair.a.cols
        )));
    }
    let kinv = QMat::from_real(&inverse_rmat(&g.k)?);
    Ok(ADHMPair {
        n: pair.n,
        k: pair.k,
        a: &(&g.q * &pair.a) * &kinv,
        b: &(&g.q * &pair.b) * &kinv,
    })
}

/// Conformal action [A B; C D].(a, b) = (a D - b B, b A - a C), a right action.
pub fn conformal_apply(c: &ConformalElement, pair: &ADHMPair) -> ADHMPair {
    let a_new = &pair.a.scalar_mul_right(c.d) - &pair.b.scalar_mul_right(c.b);
    let b_new = &pair.b.scalar_mul_right(c.a) - &pair.a.scalar_mul_right(c.c);
    ADHMPair {
        n: pair.n,
        k: pair.k,
        a: a_new,
        b: b_new,
    }
}

/// Lie-algebra derivative of the conformal action on standard data:
/// for Upsilon = [[u11, u12], [u21, u22]] in sp(2),
/// (Mhat_U, U_U) = (Mhat u22 - U u12, U u11 - Mhat u21).
pub fn lie_action(data: &StandardData, upsilon: &QMat) -> Result<(QMat, QMat)> {
    lie_action_pair(&data.mhat(), &data.u(), upsilon)
}

/// Same derivative on an explicit (Mhat, U) pair.
pub fn lie_action_pair(mhat: &QMat, u: &QMat, upsilon: &QMat) -> Result<(QMat, QMat)> {
    if upsilon.rows != 2 || upsilon.cols != 2 {
        return Err(CoreError::DimensionMismatch(format!(
            "sp(2) element is {}x{}",
            upsilon.rows, upsilon.cols
        )));
    }
    let mhat_ups = &mhat.scalar_mul_right(upsilon[(1, 1)]) - &u.scalar_mul_right(upsilon[(0, 1)]);
    let u_ups = &u.scalar_mul_right(upsilon[(0, 0)]) - &mhat.scalar_mul_right(upsilon[(1, 0)]);
    Ok((mhat_ups, u_ups))
}

// ---------------------------------------------------------------------------
// Validation

/// Reduced PD-sweep domain implied by a declared symmetry class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepDomain {
    /// No symmetry declared: the full ball in H.
    Full,
    /// x = x0 + x1 i + x2 j with x2 >= 0.
    CircularReduced,
    /// x = x0 + x2 j with x0, x2 >= 0.
    ToralReduced,
    /// x = x0 + x1 i with x1 >= 0.
    SimpleSphericalReduced,
    /// x = x0 >= 0.
    IsoclinicReduced,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    /// Grid spacing as a fraction of the sweep radius.
    pub step_factor: f64,
    /// Sweep radius = radius_margin * ||Mhat||_2.
    pub radius_margin: f64,
    pub domain: SweepDomain,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            step_factor: 0.05,
            radius_margin: 1.05,
            domain: SweepDomain::Full,
        }
    }
}

impl GridSpec {
    pub fn reduced(domain: SweepDomain) -> Self {
        Self {
            domain,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_delta_eigenvalue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin_point: Option<[f64; 4]>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, residual: f64, pass: bool, detail: Option<String>) {
        self.pass &= pass;
        self.checks.push(CheckResult {
            name: name.to_string(),
            residual,
            pass,
            detail,
        });
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn grid_points(spec: &GridSpec, r_star: f64) -> Vec<Quat> {
    let step = (spec.step_factor * r_star).max(1e-12);
    let steps = (r_star / step).ceil() as i64;
    let axis: Vec<f64> = (-steps..=steps).map(|i| i as f64 * step).collect();
    let half: Vec<f64> = (0..=steps).map(|i| i as f64 * step).collect();
    let mut pts = Vec::new();
    let push = |pts: &mut Vec<Quat>, w: f64, x: f64, y: f64, z: f64| {
        if w * w + x * x + y * y + z * z <= r_star * r_star * (1.0 + 1e-12) {
            pts.push(Quat::new(w, x, y, z));
        }
    };
    match spec.domain {
        SweepDomain::Full => {
            for &w in &axis {
                for &x in &axis {
                    for &y in &axis {
                        for &z in &axis {
                            push(&mut pts, w, x, y, z);
                        }
                    }
                }
            }
        }
        SweepDomain::CircularReduced => {
            for &w in &axis {
                for &x in &axis {
                    for &y in &half {
                        push(&mut pts, w, x, y, 0.0);
                    }
                }
            }
        }
        SweepDomain::ToralReduced => {
            for &w in &half {
                for &y in &half {
                    push(&mut pts, w, 0.0, y, 0.0);
                }
            }
        }
        SweepDomain::SimpleSphericalReduced => {
            for &w in &axis {
                for &x in &half {
                    push(&mut pts, w, x, 0.0, 0.0);
                }
            }
        }
        SweepDomain::IsoclinicReduced => {
            for &w in &half {
                push(&mut pts, w, 0.0, 0.0, 0.0);
            }
        }
    }
    if pts.is_empty() {
        pts.push(Quat::zero());
    }
    pts
}

/// Validate standard-form data against the admissible-set definition.
///
/// Positive definiteness of Delta(x)^dagger Delta(x) is sampled on a grid of
/// the (possibly reduced) domain out to r* = radius_margin * ||Mhat||_2;
/// outside, sigma_min(Delta(x)) >= |x| - ||Mhat||_2 guarantees PD.
pub fn validate(data: &StandardData, grid: &GridSpec) -> ValidationReport {
    let mut report = ValidationReport {
        pass: true,
        checks: Vec::new(),
        min_delta_eigenvalue: None,
        argmin_point: None,
    };

    // M symmetric (plain transpose, entrywise over H).
    let m_gap = data.m.symmetry_gap();
    let m_tol = SYM_TOL * (1.0 + data.m.norm_fro());
    report.push("m_symmetric", m_gap, m_gap <= m_tol, None);

    // LL^dagger positive definite (forces n <= k for nonsingular R).
    let lld = &data.l * &data.l.dagger();
    let herm_gap = lld.hermiticity_gap();
    let (ll_vals, _) = eig_symmetric(&lld.real_part());
    let ll_min = ll_vals.first().copied().unwrap_or(0.0);
    let ll_max = ll_vals.last().copied().unwrap_or(0.0);
    let pd_ok = herm_gap <= SYM_TOL * (1.0 + ll_max) && ll_min > SYM_TOL * ll_max.max(1e-300);
    report.push(
        "ll_dagger_pd",
        (-ll_min).max(herm_gap).max(0.0),
        pd_ok,
        Some(format!("eigenvalue range [{ll_min:.3e}, {ll_max:.3e}]")),
    );

    // R real and nonsingular.
    let r = data.r_matrix();
    let r_norm = r.norm_fro().max(1e-300);
    let r_imag = r.imag_part().norm_fro();
    report.push("r_real", r_imag, r_imag <= SYM_TOL * r_norm, None);
    let (r_vals, _) = eig_symmetric(&r.real_part());
    let r_low = r_vals.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    let r_top = r_vals.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
    report.push(
        "r_nonsingular",
        0.0,
        r_low > SYM_TOL * r_top.max(1e-300),
        Some(format!("|eig| range [{r_low:.3e}, {r_top:.3e}]")),
    );

    // PD of Delta(x)^dagger Delta(x) on the sampled domain.
    let r_star = grid.radius_margin * data.mhat_norm2();
    let pts = grid_points(grid, r_star);
    let r_real = data.r_real();
    let mdag = data.m.dagger();
    let (min_eig, argmin) = pts
        .par_iter()
        .map(|&x| {
            let mx = mdag.scalar_mul_right(x);
            let xsq = x.norm_sq();
            let s = RealMatrix::from_fn(data.k, data.k, |i, j| {
                let base = r_real[(i, j)] - mx[(i, j)].w - mx[(j, i)].w;
                if i == j {
                    base + xsq
                } else {
                    base
                }
            });
            let (vals, _) = eig_symmetric(&s);
            (vals.first().copied().unwrap_or(f64::INFINITY), x)
        })
        .reduce(
            || (f64::INFINITY, Quat::zero()),
            |a, b| if a.0 <= b.0 { a } else { b },
        );
    report.min_delta_eigenvalue = Some(min_eig);
    report.argmin_point = Some([argmin.w, argmin.x, argmin.y, argmin.z]);
    report.push(
        "delta_pd_grid",
        (-min_eig).max(0.0),
        min_eig > 0.0,
        Some(format!("{} grid points, radius {r_star:.4e}", pts.len())),
    );

    report
}

/// Validate a raw ADHM pair against the rank and realness contract.
pub fn validate_pair(pair: &ADHMPair) -> ValidationReport {
    let mut report = ValidationReport {
        pass: true,
        checks: Vec::new(),
        min_delta_eigenvalue: None,
        argmin_point: None,
    };
    let k = pair.k;
    match rank_quat(&pair.b, crate::linalg::RANK_REL_TOL) {
        Ok(rank) => {
            let detail = if rank != k {
                Some(format!("the rank of b is {rank}, not k={k}"))
            } else {
                None
            };
            report.push("b_rank", (k as f64) - (rank as f64), rank == k, detail);
        }
        Err(e) => report.push("b_rank", f64::NAN, false, Some(e.to_string())),
    }
    for (name, g) in [("b_dagger_b", &pair.b), ("a_dagger_a", &pair.a)] {
        let gram = &g.dagger() * g;
        let imag = gram.imag_part().norm_fro();
        let scale = gram.norm_fro().max(1e-300);
        let (vals, _) = eig_symmetric(&gram.real_part());
        let min = vals.first().copied().unwrap_or(0.0);
        let ok = imag <= SYM_TOL * scale && min > SYM_TOL * vals.last().copied().unwrap_or(0.0);
        report.push(
            &format!("{name}_real_pd"),
            imag.max(-min).max(0.0),
            ok,
            Some(format!("min eigenvalue {min:.3e}")),
        );
    }
    let ab = &pair.a.dagger() * &pair.b;
    let gap = ab.symmetry_gap();
    report.push(
        "a_dagger_b_symmetric",
        gap,
        gap <= SYM_TOL * (1.0 + ab.norm_fro()),
        None,
    );
    report
}

// ---------------------------------------------------------------------------
// Standard-form reduction

/// Orthonormal complement rows of an isometry b (b^dagger b = I): returns
/// Qtilde with Qtilde Qtilde^dagger = I_n and Qtilde b = 0. Seeds standard
/// basis vectors and pivots on the largest residual norm.
fn orthogonal_complement_rows(b: &QMat) -> Result<QMat> {
    let rows = b.rows;
    let n = rows - b.cols;
    let mut chosen: Vec<Vec<Quat>> = Vec::with_capacity(n);
    let b_cols: Vec<Vec<Quat>> = (0..b.cols)
        .map(|j| (0..rows).map(|i| b[(i, j)]).collect())
        .collect();

    let project = |v: &mut Vec<Quat>, basis: &[Vec<Quat>]| {
        for c in basis {
            let mut coef = Quat::zero();
            for i in 0..rows {
                coef += c[i].conj() * v[i];
            }
            for i in 0..rows {
                v[i] -= c[i] * coef;
            }
        }
    };

    while chosen.len() < n {
        let mut best: Option<(f64, Vec<Quat>)> = None;
        for seed in 0..rows {
            let mut v: Vec<Quat> = (0..rows)
                .map(|i| if i == seed { Quat::one() } else { Quat::zero() })
                .collect();
            project(&mut v, &b_cols);
            project(&mut v, &chosen);
            let norm: f64 = v.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt();
            if best
                .as_ref()
                .map(|(bn, _)| norm > *bn + 1e-14)
                .unwrap_or(true)
            {
                best = Some((norm, v));
            }
        }
        let (norm, mut v) =
            best.ok_or_else(|| CoreError::InternalConsistency("complement pivot failed".into()))?;
        if norm <= 1e-8 {
            return Err(CoreError::InternalConsistency(
                "orthogonal complement collapsed; b is not an isometry".into(),
            ));
        }
        for q in v.iter_mut() {
            *q = q.scale(1.0 / norm);
        }
        project(&mut v, &b_cols);
        project(&mut v, &chosen);
        let n2: f64 = v.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt();
        for q in v.iter_mut() {
            *q = q.scale(1.0 / n2);
        }
        chosen.push(v);
    }
    Ok(QMat::from_fn(n, rows, |i, j| chosen[i][j].conj()))
}

/// Reduce an ADHM pair to standard form, returning the data and the gauge
/// element mapping the input onto it. Idempotent on already-standard input.
pub fn reduce_standard(pair: &ADHMPair) -> Result<(StandardData, GaugeElement)> {
    let (n, k) = (pair.n, pair.k);
    let rank = rank_quat(&pair.b, crate::linalg::RANK_REL_TOL)?;
    if rank != k {
        return Err(CoreError::RankCheck(format!(
            "the rank of b is {rank}, not k={k}"
        )));
    }
    let btb = &pair.b.dagger() * &pair.b;
    let imag = btb.imag_part().norm_fro();
    if imag > SYM_TOL * btb.norm_fro().max(1.0) {
        return Err(CoreError::InvalidData(format!(
            "b^dagger b is not real (gap {imag:e})"
        )));
    }

    // K = (b^dagger b)^(1/2), symmetric square root, so b K^-1 is an isometry.
    let (vals, vecs) = sym_eig_checked(&btb.real_part(), 1e-8)?;
    let mut k_sqrt = RealMatrix::zeros(k, k);
    let mut k_sqrt_inv = RealMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let mut s = 0.0;
            let mut si = 0.0;
            for p in 0..k {
                let lam = vals[p].max(1e-300).sqrt();
                s += vecs[(i, p)] * lam * vecs[(j, p)];
                si += vecs[(i, p)] / lam * vecs[(j, p)];
            }
            k_sqrt[(i, j)] = s;
            k_sqrt_inv[(i, j)] = si;
        }
    }
    let b1 = &pair.b * &QMat::from_real(&k_sqrt_inv);

    // Complete b1 to a symplectic Q = [Qtilde; b1^dagger].
    let qtilde = orthogonal_complement_rows(&b1)?;
    let q = qtilde.vstack(&b1.dagger());

    let a2 = &(&q * &pair.a) * &QMat::from_real(&k_sqrt_inv);
    let l = a2.block(0, 0, n, k);
    let m = a2.block(n, 0, k, k);
    let m_gap = m.symmetry_gap();
    if m_gap > 1e-8 * (1.0 + m.norm_fro()) {
        return Err(CoreError::InvalidData(format!(
            "reduced M is not symmetric (gap {m_gap:e}); input violates the ADHM contract"
        )));
    }
    let data = StandardData::new(l, m)?;
    Ok((data, GaugeElement { q, k: k_sqrt }))
}

// ---------------------------------------------------------------------------
// Isometry equivariance

/// Check diag(a, b)-equivariance of standard data with a candidate K.
///
/// Verifies a^dagger K M K^T = M b^dagger and [K, R] = 0, builds the unique
/// q = L b^dagger K L^dagger (L L^dagger)^-1, and confirms that
/// (diag(q, a^dagger K), K) undoes the conformal action of diag(a, b).
/// Returns (equivariant, max residual).
pub fn verify_isometry_equivariance(
    data: &StandardData,
    a: Quat,
    b: Quat,
    k_mat: &RMat,
) -> Result<(bool, f64)> {
    if (a.norm() - 1.0).abs() > 1e-12 || (b.norm() - 1.0).abs() > 1e-12 {
        return Err(CoreError::Domain("a and b must be unit quaternions".into()));
    }
    let kq = QMat::from_real(k_mat);
    let orth = (&(&kq.transpose() * &kq) - &QMat::identity(data.k)).norm_fro();
    if orth > 1e-12 * (data.k as f64).max(1.0) {
        return Err(CoreError::Domain(format!(
            "K is not orthogonal (residual {orth:e})"
        )));
    }
    let r_real = QMat::from_real(&data.r_real());
    let comm = (&(&kq * &r_real) - &(&r_real * &kq)).norm_fro();
    if comm > 1e-9 * (1.0 + r_real.norm_fro()) {
        return Err(CoreError::Domain(format!(
            "[K, R] != 0 (residual {comm:e}); the lemma's precondition fails"
        )));
    }

    let kmk = &(&kq * &data.m) * &kq.transpose();
    let lhs = kmk.scalar_mul_left(a.conj());
    let rhs = data.m.scalar_mul_right(b.conj());
    let intertwine = (&lhs - &rhs).norm_fro();

    // q := L b^dagger K L^dagger (L L^dagger)^-1
    let lld_inv = inverse_qmat(&(&data.l * &data.l.dagger()))?;
    let q_small = &(&(&data.l.scalar_mul_right(b.conj()) * &kq) * &data.l.dagger()) * &lld_inv;
    let unit = (&(&q_small.dagger() * &q_small) - &QMat::identity(data.n)).norm_fro();

    // Conformal diag(a, b), then gauge (diag(q, a^dagger K), K).
    let pair = data.pair();
    let conf = ConformalElement {
        a,
        b: Quat::zero(),
        c: Quat::zero(),
        d: b,
    };
    let moved = conformal_apply(&conf, &pair);
    let q_big = QMat::block_diag(&q_small, &kq.scalar_mul_left(a.conj()));
    let gauged = gauge_apply(
        &GaugeElement {
            q: q_big,
            k: k_mat.clone(),
        },
        &moved,
    )?;
    let back = (&gauged.a - &pair.a)
        .norm_fro()
        .max((&gauged.b - &pair.b).norm_fro());

    let residual = intertwine.max(comm).max(unit).max(back);
    Ok((residual <= 1e-9 * (1.0 + data.mhat().norm_fro()), residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basic() -> StandardData {
        StandardData::new(
            QMat::from_rows(vec![vec![Quat::one()]]),
            QMat::from_rows(vec![vec![Quat::zero()]]),
        )
        .unwrap()
    }

    #[test]
    fn delta_basic_at_zero() {
        let d = basic().delta(Quat::zero());
        assert!((d[(0, 0)] - Quat::one()).norm() < 1e-15);
        assert!(d[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn delta_gram_expansion() {
        // Random data: Delta^dagger Delta = R - M^dagger x - x^dagger M + |x|^2 I.
        let l = QMat::from_fn(2, 3, |i, j| {
            Quat::new(1.0 + i as f64, 0.2 * j as f64, -0.1, 0.3)
        });
        let m = {
            let raw = QMat::from_fn(3, 3, |i, j| {
                Quat::new(0.5 * (i + j) as f64, 0.1, 0.2 * i as f64, -0.3 * j as f64)
            });
            &raw + &raw.transpose()
        };
        let data = StandardData::new(l, m).unwrap();
        let x = Quat::new(0.7, -0.2, 0.4, 1.1);
        let lhs = data.delta_gram(x);
        let mx = data.m.dagger().scalar_mul_right(x);
        let mut rhs = &data.r_matrix() - &(&mx + &mx.dagger());
        for i in 0..3 {
            rhs[(i, i)] += Quat::real(x.norm_sq());
        }
        assert!((&lhs - &rhs).norm_fro() < 1e-12);
    }

    #[test]
    fn m0_diag_passes_and_gram_is_scalar() {
        // M = 0, L = diag(1, 1): Delta^dagger Delta = (1 + |x|^2) I.
        let data = StandardData::new(QMat::identity(2), QMat::zeros(2, 2)).unwrap();
        let report = validate(&data, &GridSpec::reduced(SweepDomain::IsoclinicReduced));
        assert!(report.pass, "{report:?}");
        let x = Quat::new(0.3, 0.1, -0.2, 0.5);
        let g = data.delta_gram(x);
        let want = 1.0 + x.norm_sq();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j {
                    Quat::real(want)
                } else {
                    Quat::zero()
                };
                assert!((g[(i, j)] - expect).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn rank_deficient_note_pair_fails() {
        // Delta(x) = [[1,0],[0,1],[0,-x]]: b has rank 1, not k=2.
        let a = QMat::from_rows(vec![
            vec![Quat::one(), Quat::zero()],
            vec![Quat::zero(), Quat::one()],
            vec![Quat::zero(), Quat::zero()],
        ]);
        let b = QMat::from_rows(vec![
            vec![Quat::zero(), Quat::zero()],
            vec![Quat::zero(), Quat::zero()],
            vec![Quat::zero(), Quat::one()],
        ]);
        let pair = ADHMPair { n: 1, k: 2, a, b };
        let report = validate_pair(&pair);
        assert!(!report.pass);
        let rank_check = report.check("b_rank").unwrap();
        assert!(!rank_check.pass);
        assert_eq!(
            rank_check.detail.as_deref(),
            Some("the rank of b is 1, not k=2")
        );
        assert!(reduce_standard(&pair).is_err());
    }

    #[test]
    fn reduce_standard_identity_and_scaling() {
        let data = basic();
        let pair = data.pair();
        let (out, g) = reduce_standard(&pair).unwrap();
        assert!((&out.mhat() - &data.mhat()).norm_fro() < 1e-13);
        assert!((&g.q - &QMat::identity(2)).norm_fro() < 1e-13);

        // (2 Mhat, 2 U) reduces with K = 2I.
        let scaled = ADHMPair {
            n: 1,
            k: 1,
            a: pair.a.scale(2.0),
            b: pair.b.scale(2.0),
        };
        let (out2, g2) = reduce_standard(&scaled).unwrap();
        assert!((g2.k[(0, 0)] - 2.0).abs() < 1e-12);
        assert!((&out2.mhat() - &data.mhat()).norm_fro() < 1e-12);
    }

    #[test]
    fn gauge_conformal_commute() {
        let data = basic();
        let pair = data.pair();
        let g = GaugeElement {
            q: crate::linalg::exp_qmat(&QMat::from_rows(vec![
                vec![Quat::new(0.0, 0.3, 0.0, 0.1), Quat::new(0.2, 0.0, 0.4, 0.0)],
                vec![
                    Quat::new(-0.2, 0.0, 0.4, 0.0),
                    Quat::new(0.0, -0.1, 0.0, 0.7),
                ],
            ])),
            k: RMat::from_rows(vec![vec![1.7]]),
        };
        let c = ConformalElement {
            a: Quat::new(0.2, 0.4, -0.1, 0.3),
            b: Quat::new(1.0, 0.0, 0.2, 0.0),
            c: Quat::new(-0.5, 0.1, 0.0, 0.6),
            d: Quat::new(0.3, -0.2, 0.9, 0.0),
        };
        let gc = conformal_apply(&c, &gauge_apply(&g, &pair).unwrap());
        let cg = gauge_apply(&g, &conformal_apply(&c, &pair)).unwrap();
        assert!((&gc.a - &cg.a).norm_fro() < 1e-12);
        assert!((&gc.b - &cg.b).norm_fro() < 1e-12);
    }

    #[test]
    fn conformal_right_action_law() {
        let data = basic();
        let pair = data.pair();
        let c1 = ConformalElement {
            a: Quat::new(0.2, 0.4, -0.1, 0.3),
            b: Quat::new(1.0, 0.0, 0.2, 0.0),
            c: Quat::new(-0.5, 0.1, 0.0, 0.6),
            d: Quat::new(0.3, -0.2, 0.9, 0.0),
        };
        let c2 = ConformalElement {
            a: Quat::new(-0.7, 0.0, 0.3, 0.2),
            b: Quat::new(0.1, 0.5, 0.0, -0.4),
            c: Quat::new(0.6, -0.3, 0.2, 0.0),
            d: Quat::new(0.9, 0.1, -0.2, 0.5),
        };
        // Right action: (c1 c2).x = c2.(c1.x).
        let lhs = conformal_apply(&c1.mul(&c2), &pair);
        let rhs = conformal_apply(&c2, &conformal_apply(&c1, &pair));
        assert!((&lhs.a - &rhs.a).norm_fro() < 1e-12);
        assert!((&lhs.b - &rhs.b).norm_fro() < 1e-12);
    }

    #[test]
    fn identity_actions_fix_pair() {
        let data = basic();
        let pair = data.pair();
        let out = conformal_apply(&ConformalElement::identity(), &pair);
        assert!((&out.a - &pair.a).norm_fro() < 1e-15);
        let g = GaugeElement::identity(2, 1);
        let out2 = gauge_apply(&g, &pair).unwrap();
        assert!((&out2.a - &pair.a).norm_fro() < 1e-15);
        // (I, 2I) halves the pair.
        let g2 = GaugeElement {
            q: QMat::identity(2),
            k: RMat::identity(1).scale(2.0),
        };
        let out3 = gauge_apply(&g2, &pair).unwrap();
        assert!((&out3.a - &pair.a.scale(0.5)).norm_fro() < 1e-15);
    }

    #[test]
    fn manton_sutcliffe_quarter_turn() {
        // exp(theta X) at theta = pi/2 has blocks A = D = 0, B = 1, C = -1:
        // (Mhat, U) maps to (-U, Mhat).
        let data = basic();
        let pair = data.pair();
        let c = ConformalElement {
            a: Quat::zero(),
            b: Quat::one(),
            c: -Quat::one(),
            d: Quat::zero(),
        };
        let out = conformal_apply(&c, &pair);
        assert!((&out.a - &pair.b.scale(-1.0)).norm_fro() < 1e-15);
        assert!((&out.b - &pair.a).norm_fro() < 1e-15);
    }

    #[test]
    fn conformal_point_action_matches_moebius() {
        let c = ConformalElement {
            a: Quat::new(0.2, 0.4, -0.1, 0.3),
            b: Quat::new(1.0, 0.0, 0.2, 0.0),
            c: Quat::new(-0.5, 0.1, 0.0, 0.6),
            d: Quat::new(0.3, -0.2, 0.9, 0.0),
        };
        // Group law on points: (c1 c2).x = c1.(c2.x) for the left point action.
        let c2 = ConformalElement {
            a: Quat::new(-0.7, 0.0, 0.3, 0.2),
            b: Quat::new(0.1, 0.5, 0.0, -0.4),
            c: Quat::new(0.6, -0.3, 0.2, 0.0),
            d: Quat::new(0.9, 0.1, -0.2, 0.5),
        };
        let mut seed = 3u64;
        let mut next = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for _ in 0..100 {
            let x = Quat::new(next(), next(), next(), next());
            let lhs = c.mul(&c2).apply_point(x);
            let rhs = c2.apply_point(x).and_then(|y| c.apply_point(y));
            if let (Some(l), Some(r)) = (lhs, rhs) {
                assert!((l - r).norm() < 1e-10 * (1.0 + l.norm()));
            }
        }
    }

    #[test]
    fn lie_action_examples() {
        let data = basic();
        // Manton-Sutcliffe generator [0, 1; -1, 0] -> (-U, Mhat).
        let ms = QMat::from_rows(vec![
            vec![Quat::zero(), Quat::one()],
            vec![-Quat::one(), Quat::zero()],
        ]);
        let (mh, uu) = lie_action(&data, &ms).unwrap();
        assert!((&mh - &data.u().scale(-1.0)).norm_fro() < 1e-15);
        assert!((&uu - &data.mhat()).norm_fro() < 1e-15);

        // diag(i/2, 3i/2) -> ((3/2) Mhat i, (i/2) U).
        let tau = QMat::from_rows(vec![
            vec![Quat::i().scale(0.5), Quat::zero()],
            vec![Quat::zero(), Quat::i().scale(1.5)],
        ]);
        let (mh2, uu2) = lie_action(&data, &tau).unwrap();
        assert!((&mh2 - &data.mhat().scalar_mul_right(Quat::i().scale(1.5))).norm_fro() < 1e-15);
        assert!((&uu2 - &data.u().scalar_mul_right(Quat::i().scale(0.5))).norm_fro() < 1e-15);

        // Upsilon = 0 -> (0, 0); antisymmetry in Upsilon.
        let (z1, z2) = lie_action(&data, &QMat::zeros(2, 2)).unwrap();
        assert!(z1.norm_fro() < 1e-15 && z2.norm_fro() < 1e-15);
        let (p1, _) = lie_action(&data, &ms).unwrap();
        let (n1, _) = lie_action(&data, &ms.scale(-1.0)).unwrap();
        assert!((&p1 + &n1).norm_fro() < 1e-15);
    }

    #[test]
    fn lie_action_matches_conformal_derivative() {
        let data = basic();
        let ups = QMat::from_rows(vec![
            vec![
                Quat::new(0.0, 0.3, -0.2, 0.0),
                Quat::new(0.4, 0.1, 0.0, -0.5),
            ],
            vec![
                Quat::new(-0.4, 0.1, 0.0, -0.5),
                Quat::new(0.0, 0.0, 0.6, 0.2),
            ],
        ]);
        let h = 1e-6;
        let cp = ConformalElement::from_qmat2(&crate::linalg::exp_qmat(&ups.scale(h))).unwrap();
        let cm = ConformalElement::from_qmat2(&crate::linalg::exp_qmat(&ups.scale(-h))).unwrap();
        let pair = data.pair();
        let fp = conformal_apply(&cp, &pair);
        let fm = conformal_apply(&cm, &pair);
        let da = (&fp.a - &fm.a).scale(0.5 / h);
        let db = (&fp.b - &fm.b).scale(0.5 / h);
        let (mh, uu) = lie_action(&data, &ups).unwrap();
        assert!((&da - &mh).norm_fro() < 1e-8);
        assert!((&db - &uu).norm_fro() < 1e-8);
    }

    #[test]
    fn isometry_equivariance_basic() {
        let data = basic();
        // Any (a, b) in Sp(1) x Sp(1) with K = 1 fixes the basic instanton.
        let a = Quat::new(0.0, 0.6, 0.0, 0.8);
        let b = Quat::new(0.5, 0.5, 0.5, 0.5);
        let (ok, res) = verify_isometry_equivariance(&data, a, b, &RMat::identity(1)).unwrap();
        assert!(ok, "residual {res:e}");
        let (ok2, res2) =
            verify_isometry_equivariance(&data, Quat::one(), Quat::one(), &RMat::identity(1))
                .unwrap();
        assert!(ok2 && res2 < 1e-14);
    }

    #[test]
    fn sigma_min_bound_outside_radius() {
        // sigma_min(Delta(x)) >= |x| - ||Mhat||_2.
        let l = QMat::from_fn(1, 2, |_, j| Quat::new(1.0 - 0.3 * j as f64, 0.2, 0.0, 0.1));
        let m = {
            let raw = QMat::from_fn(2, 2, |i, j| {
                Quat::new(0.4, 0.1 * i as f64, -0.2 * j as f64, 0.0)
            });
            &raw + &raw.transpose()
        };
        let data = StandardData::new(l, m).unwrap();
        let bound = data.mhat_norm2();
        for t in 1..5 {
            let x = Quat::new(0.9 * t as f64, 0.5 * t as f64, -0.7, 0.3);
            let sv = crate::linalg::singular_values(&data.delta(x).embed_complex());
            let smin = sv.last().copied().unwrap();
            assert!(smin >= x.norm() - bound - 1e-10);
        }
    }
}
