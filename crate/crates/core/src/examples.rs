//! Registry of worked ADHM data families: the basic instanton, the diagonal
//! M = 0 family, the Sp(3) charge-7 isoclinic example, the Sp(3) charge-5
//! rotational example, and the Sp(2) charge-2 conformal-superspherical family
//! (raw and converted to standard form).

use crate::adhm::{conformal_apply, gauge_apply, ConformalElement, GaugeElement, StandardData};
use crate::{CoreError, QMat, Quat, RMat, Result};

/// Names accepted by the CLI `example` subcommand.
pub const REGISTRY_NAMES: [&str; 6] = [
    "basic",
    "m0-family",
    "iso-ex",
    "rot-ex",
    "not-in-ms",
    "not-in-ms-converted",
];

#[derive(Clone, Debug)]
pub enum ExampleSpec {
    Basic,
    M0Family { alphas: Vec<f64> },
    IsoEx { lambda: f64 },
    RotEx { lambda: f64 },
    NotInMs { b: f64 },
    NotInMsConverted { b: f64 },
}

pub fn build(spec: &ExampleSpec) -> Result<StandardData> {
    match spec {
        ExampleSpec::Basic => basic(),
        ExampleSpec::M0Family { alphas } => m0_family(alphas),
        ExampleSpec::IsoEx { lambda } => iso_ex(*lambda),
        ExampleSpec::RotEx { lambda } => rot_ex(*lambda),
        ExampleSpec::NotInMs { b } => not_in_ms(*b),
        ExampleSpec::NotInMsConverted { b } => not_in_ms_converted(*b),
    }
}

/// The basic charge-one instanton: L = [1], M = [0].
pub fn basic() -> Result<StandardData> {
    StandardData::new(
        QMat::from_rows(vec![vec![Quat::one()]]),
        QMat::from_rows(vec![vec![Quat::zero()]]),
    )
}

/// Diagonal M = 0 family: n = k, L = diag(alpha_1, ..., alpha_k).
pub fn m0_family(alphas: &[f64]) -> Result<StandardData> {
    if alphas.is_empty() || alphas.iter().any(|&a| a <= 0.0) {
        return Err(CoreError::Domain("m0-family needs positive widths".into()));
    }
    let k = alphas.len();
    let l = QMat::from_fn(k, k, |i, j| {
        if i == j {
            Quat::real(alphas[i])
        } else {
            Quat::zero()
        }
    });
    StandardData::new(l, QMat::zeros(k, k))
}

fn q(w: f64, x: f64, y: f64, z: f64) -> Quat {
    Quat::new(w, x, y, z)
}

/// Sp(3) instanton with isoclinic spherical symmetry and charge 7.
pub fn iso_ex(lambda: f64) -> Result<StandardData> {
    if lambda <= 0.0 {
        return Err(CoreError::Domain("iso-ex needs lambda > 0".into()));
    }
    let o = Quat::zero();
    let e = Quat::one();
    let i = Quat::i();
    let j = Quat::j();
    let k = Quat::k();
    let m = QMat::from_rows(vec![
        vec![o, o, o, o, e, -i, j],
        vec![o, o, o, o, i, e, -k],
        vec![o, o, o, o, j, -k, -e],
        vec![o, o, o, o, k, j, i],
        vec![e, i, j, k, o, o, o],
        vec![-i, e, -k, j, o, o, o],
        vec![j, -k, -e, i, o, o, o],
    ])
    .scale(lambda);
    let s2 = 2.0f64.sqrt();
    let s6 = 6.0f64.sqrt();
    let l = QMat::from_rows(vec![
        vec![q(3.0, 0.0, 0.0, 0.0), -i, -j, -k, o, o, o],
        vec![
            o,
            q(2.0 * s2, 0.0, 0.0, 0.0),
            k.scale(s2),
            -j.scale(s2),
            o,
            o,
            o,
        ],
        vec![o, o, q(s6, 0.0, 0.0, 0.0), i.scale(s6), o, o, o],
    ])
    .scale(lambda);
    StandardData::new(l, m)
}

/// Sp(3) instanton with rotational symmetry and charge 5.
pub fn rot_ex(lambda: f64) -> Result<StandardData> {
    if lambda <= 0.0 {
        return Err(CoreError::Domain("rot-ex needs lambda > 0".into()));
    }
    let o = Quat::zero();
    let e = Quat::one();
    let i = Quat::i();
    let j = Quat::j();
    let k = Quat::k();
    let m = QMat::from_rows(vec![
        vec![o, o, o, o, e],
        vec![o, o, o, o, i],
        vec![o, o, o, o, j],
        vec![o, o, o, o, k],
        vec![e, i, j, k, o],
    ])
    .scale(lambda);
    let s3 = 3.0f64.sqrt();
    let s23 = (2.0f64 / 3.0).sqrt();
    let s2 = 2.0f64.sqrt();
    let l = QMat::from_rows(vec![
        vec![
            q(s3, 0.0, 0.0, 0.0),
            -i.scale(1.0 / s3),
            -j.scale(1.0 / s3),
            -k.scale(1.0 / s3),
            o,
        ],
        vec![
            o,
            q(2.0 * s23, 0.0, 0.0, 0.0),
            k.scale(s23),
            -j.scale(s23),
            o,
        ],
        vec![o, o, q(s2, 0.0, 0.0, 0.0), i.scale(s2), o],
    ])
    .scale(lambda);
    StandardData::new(l, m)
}

/// Upper end of the admissible parameter range for the conformal
/// superspherical family: B in (0, (2/3) sqrt(6)).
pub fn not_in_ms_b_max() -> f64 {
    2.0 * 6.0f64.sqrt() / 3.0
}

/// The printed closed forms A(B) and a(B) of the family.
pub fn not_in_ms_params(b: f64) -> Result<(f64, f64)> {
    if !(0.0 < b && b < not_in_ms_b_max()) {
        return Err(CoreError::Domain(format!(
            "B = {b} outside (0, {:.6})",
            not_in_ms_b_max()
        )));
    }
    let s = (b.powi(4) - b * b + 1.0).sqrt();
    let big_a = (12.0 - 15.0 * b * b + 12.0 * s).sqrt() / 3.0;
    let small_a = (2.0 * b * b - s - 1.0) / (-3.0 * b * b + 6.0 + 6.0 * s).sqrt();
    Ok((big_a, small_a))
}

/// Sp(2) charge-2 data with conformal superspherical symmetry; for B != 1 it
/// lies outside the generalized Manton-Sutcliffe set (M_0 != 0 or R != I).
pub fn not_in_ms(b: f64) -> Result<StandardData> {
    let (big_a, small_a) = not_in_ms_params(b)?;
    let o = Quat::zero();
    let l = QMat::from_rows(vec![vec![Quat::real(big_a), o], vec![o, Quat::real(b)]]);
    let m = QMat::from_rows(vec![
        vec![o, Quat::real(small_a)],
        vec![Quat::real(small_a), o],
    ]);
    StandardData::new(l, m)
}

/// The printed sp(4) generator witnessing the Manton-Sutcliffe circle
/// symmetry of `not_in_ms(b)` (real antisymmetric 4x4).
pub fn not_in_ms_rho_tilde(b: f64) -> Result<QMat> {
    let (big_a, small_a) = not_in_ms_params(b)?;
    let s = (b.powi(4) - b * b + 1.0).sqrt();
    let root = (-3.0 * b * b + 6.0 + 6.0 * s).sqrt();
    let b_coef = -((12.0 - 15.0 * b * b + 12.0 * s).sqrt() / root) * b;
    let c_coef = -root / 3.0;
    let _ = small_a;
    let r = RMat::from_rows(vec![
        vec![0.0, b_coef, big_a, 0.0],
        vec![-b_coef, 0.0, 0.0, b],
        vec![-big_a, 0.0, 0.0, c_coef],
        vec![0.0, -b, -c_coef, 0.0],
    ]);
    Ok(QMat::from_real(&r))
}

/// The standard-form version of `not_in_ms(b)` obtained by the conformal
/// conversion (1/sqrt2)[[k, -i], [j, 1]] followed by the explicit printed
/// gauge (Q, K). Its circular 1-symmetry generator is [0, -1; 1, 0].
pub fn not_in_ms_converted(b: f64) -> Result<StandardData> {
    let data = not_in_ms(b)?;
    let (big_a, small_a) = not_in_ms_params(b)?;
    let s2 = 2.0f64.sqrt();

    let conv = ConformalElement {
        a: Quat::k().scale(1.0 / s2),
        b: -Quat::i().scale(1.0 / s2),
        c: Quat::j().scale(1.0 / s2),
        d: Quat::real(1.0 / s2),
    };
    let moved = conformal_apply(&conv, &data.pair());

    let (aa, a) = (big_a, small_a);
    let da = aa * aa + a * a + 1.0; // A^2 + a^2 + 1
    let db = b * b + a * a + 1.0; // B^2 + a^2 + 1
    let sa = a * a + 1.0;
    let o = Quat::zero();
    let qmat = QMat::from_rows(vec![
        vec![
            Quat::real((sa / da).sqrt()),
            o,
            -Quat::i().scale(aa / (da * sa).sqrt()),
            Quat::real(-aa * a / (da * sa).sqrt()),
        ],
        vec![
            o,
            Quat::real((sa / db).sqrt()),
            Quat::real(-b * a / (db * sa).sqrt()),
            -Quat::i().scale(b / (db * sa).sqrt()),
        ],
        vec![
            Quat::j().scale(aa / da.sqrt()),
            o,
            -Quat::k().scale(1.0 / da.sqrt()),
            Quat::j().scale(a / da.sqrt()),
        ],
        vec![
            o,
            Quat::j().scale(b / db.sqrt()),
            Quat::j().scale(a / db.sqrt()),
            -Quat::k().scale(1.0 / db.sqrt()),
        ],
    ]);
    let kmat = RMat::from_rows(vec![
        vec![(da / 2.0).sqrt(), 0.0],
        vec![0.0, (db / 2.0).sqrt()],
    ]);
    let gauge = GaugeElement { q: qmat, k: kmat };
    if gauge.symplectic_residual() > 1e-12 {
        return Err(CoreError::InternalConsistency(
            "printed conversion gauge is not symplectic".into(),
        ));
    }
    let out = gauge_apply(&gauge, &moved)?;

    // The result must be in standard form: b-block equal to U.
    let u = data.u();
    let gap = (&out.b - &u).norm_fro();
    if gap > 1e-10 {
        return Err(CoreError::InternalConsistency(format!(
            "converted data is not standard (U gap {gap:e})"
        )));
    }
    let l = out.a.block(0, 0, 2, 2);
    let m = out.a.block(2, 0, 2, 2);
    StandardData::new(l, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adhm::{validate, GridSpec, SweepDomain};

    #[test]
    fn iso_ex_gram_invariants() {
        for lambda in [0.5, 1.0, 2.0] {
            let data = iso_ex(lambda).unwrap();
            let ll = &data.l * &data.l.dagger();
            let want = QMat::identity(3).scale(12.0 * lambda * lambda);
            assert!((&ll - &want).norm_fro() < 1e-12 * (1.0 + lambda * lambda));
            // R = 12 lambda^2 I_4 (+) 4 lambda^2 I_3.
            let r = data.r_matrix();
            for idx in 0..7 {
                let want_diag = if idx < 4 { 12.0 } else { 4.0 } * lambda * lambda;
                assert!((r[(idx, idx)] - Quat::real(want_diag)).norm() < 1e-12 * want_diag);
            }
            assert!(r.imag_part().norm_fro() < 1e-12);
            assert!(data.m.symmetry_gap() < 1e-15);
        }
    }

    #[test]
    fn iso_ex_spectrum_printed() {
        // Eigenvalues at real x: {12 l^2 + x^2} x1, {8 l^2 + x^2 +- 2 l sqrt(4 l^2 + x^2)} x3.
        let lambda = 1.0;
        let data = iso_ex(lambda).unwrap();
        let x0 = 1.0;
        let vals = data.delta_spectrum(Quat::real(x0)).unwrap();
        let disc = 2.0 * lambda * (4.0 * lambda * lambda + x0 * x0).sqrt();
        let mut want = vec![
            8.0 * lambda * lambda + x0 * x0 - disc,
            8.0 * lambda * lambda + x0 * x0 - disc,
            8.0 * lambda * lambda + x0 * x0 - disc,
            8.0 * lambda * lambda + x0 * x0 + disc,
            8.0 * lambda * lambda + x0 * x0 + disc,
            8.0 * lambda * lambda + x0 * x0 + disc,
            12.0 * lambda * lambda + x0 * x0,
        ];
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in vals.iter().zip(&want) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        // Explicit check of the printed closed form at lambda = 1, x0 = 1:
        // {13; 9 +- 2 sqrt(5), each x3}.
        let s5 = 5.0f64.sqrt();
        assert!((vals[3] - 13.0).abs() < 1e-10);
        assert!((vals[0] - (9.0 - 2.0 * s5)).abs() < 1e-10);
        assert!((vals[6] - (9.0 + 2.0 * s5)).abs() < 1e-10);
    }

    #[test]
    fn iso_ex_printed_gram_and_r_spectrum() {
        // The printed 7x7 Delta(x)^dag Delta(x) at real x: diagonal
        // (12 l^2 + x0^2) x4 then (4 l^2 + x0^2) x3, with -2 x0 l couplings at
        // (0,4), (1,5) and +2 x0 l at (2,6).
        let lambda = 1.0;
        let x0 = 0.7;
        let data = iso_ex(lambda).unwrap();
        let g = data.delta_gram(Quat::real(x0));
        let mut want = QMat::zeros(7, 7);
        for d in 0..7 {
            let base = if d < 4 { 12.0 } else { 4.0 };
            want[(d, d)] = Quat::real(base * lambda * lambda + x0 * x0);
        }
        let c = 2.0 * x0 * lambda;
        for (r, col, sign) in [(0usize, 4usize, -1.0), (1, 5, -1.0), (2, 6, 1.0)] {
            want[(r, col)] = Quat::real(sign * c);
            want[(col, r)] = Quat::real(sign * c);
        }
        assert!(
            (&g - &want).norm_fro() < 1e-12,
            "gap {:e}",
            (&g - &want).norm_fro()
        );

        // sym_eig_real on R: eigenvalues {4, 4, 4, 12, 12, 12, 12} at l = 1.
        let (vals, _) = crate::linalg::sym_eig_real(&data.r_real()).unwrap();
        let expect = [4.0, 4.0, 4.0, 12.0, 12.0, 12.0, 12.0];
        for (v, w) in vals.iter().zip(&expect) {
            assert!((v - w).abs() < 1e-12);
        }
    }

    #[test]
    fn iso_ex_validates_on_reduced_domain() {
        let data = iso_ex(1.0).unwrap();
        let report = validate(&data, &GridSpec::reduced(SweepDomain::IsoclinicReduced));
        assert!(report.pass, "{report:?}");
        // Minimum eigenvalue over the ray matches 8 + x0^2 - 2 sqrt(4 + x0^2) > 0 at its minimum.
        let min = report.min_delta_eigenvalue.unwrap();
        let argmin = report.argmin_point.unwrap()[0];
        let formula = 8.0 + argmin * argmin - 2.0 * (4.0 + argmin * argmin).sqrt();
        assert!((min - formula).abs() < 1e-9, "{min} vs {formula}");
        assert!(min > 0.0);
    }

    #[test]
    fn rot_ex_gram_and_spectrum() {
        for lambda in [0.5, 1.0, 2.0] {
            let data = rot_ex(lambda).unwrap();
            let ll = &data.l * &data.l.dagger();
            let want = QMat::identity(3).scale(4.0 * lambda * lambda);
            assert!((&ll - &want).norm_fro() < 1e-12 * (1.0 + lambda * lambda));
            let r = data.r_matrix();
            let want_r = QMat::identity(5).scale(4.0 * lambda * lambda);
            assert!((&r - &want_r).norm_fro() < 1e-12 * (1.0 + lambda * lambda));
        }
        // Spectrum at lambda = 1, x0 = 1: {5 x3, 5 +- 2 x1 each}.
        let data = rot_ex(1.0).unwrap();
        let vals = data.delta_spectrum(Quat::real(1.0)).unwrap();
        let want = [3.0, 5.0, 5.0, 5.0, 7.0];
        for (got, want) in vals.iter().zip(&want) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn not_in_ms_family() {
        // B = 1: A = 1, a = 0 (inside the Manton-Sutcliffe set).
        let (big_a, small_a) = not_in_ms_params(1.0).unwrap();
        assert!((big_a - 1.0).abs() < 1e-14);
        assert!(small_a.abs() < 1e-14);

        // Across the range the data validates on the reduced domain.
        for b in [0.3, 0.5, 1.0, 1.5] {
            let data = not_in_ms(b).unwrap();
            let report = validate(
                &data,
                &GridSpec::reduced(SweepDomain::SimpleSphericalReduced),
            );
            assert!(report.pass, "B = {b}: {report:?}");
        }
        assert!(not_in_ms(0.0).is_err());
        assert!(not_in_ms(not_in_ms_b_max()).is_err());
    }

    #[test]
    fn not_in_ms_spectrum_formula() {
        // Eigenvalues at x = x0 + x1 i equal (I + 3 x1^2 +- sqrt(I^2 - 9 (x0^2+1)^2)) / 3
        // with I = -2B^2 + 3x0^2 + 4 sqrt(B^4 - B^2 + 1) + 1.
        for b in [0.3, 0.5, 1.0, 1.5] {
            let data = not_in_ms(b).unwrap();
            for (x0, x1) in [(0.0, 0.0), (0.5, 0.25), (1.0, 2.0), (2.0, 0.75)] {
                let x = Quat::new(x0, x1, 0.0, 0.0);
                let vals = data.delta_spectrum(x).unwrap();
                let cap_i =
                    -2.0 * b * b + 3.0 * x0 * x0 + 4.0 * (b.powi(4) - b * b + 1.0).sqrt() + 1.0;
                let disc = (cap_i * cap_i - 9.0 * (x0 * x0 + 1.0) * (x0 * x0 + 1.0)).sqrt();
                let lo = (cap_i + 3.0 * x1 * x1 - disc) / 3.0;
                let hi = (cap_i + 3.0 * x1 * x1 + disc) / 3.0;
                assert!(
                    (vals[0] - lo).abs() < 1e-10,
                    "B={b} x=({x0},{x1}): {} vs {lo}",
                    vals[0]
                );
                assert!(
                    (vals[1] - hi).abs() < 1e-10,
                    "B={b} x=({x0},{x1}): {} vs {hi}",
                    vals[1]
                );
            }
        }
    }

    #[test]
    fn converted_family_is_standard() {
        for b in [0.3, 0.5, 1.0, 1.2] {
            let data = not_in_ms_converted(b).unwrap();
            assert!(data.m.symmetry_gap() < 1e-10, "B = {b}");
            let r = data.r_matrix();
            assert!(r.imag_part().norm_fro() < 1e-10, "B = {b}");
            let report = validate(&data, &GridSpec::reduced(SweepDomain::CircularReduced));
            assert!(report.pass, "B = {b}: {report:?}");
        }
    }
}
