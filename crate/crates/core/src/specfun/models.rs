//! Explicit 2x2 local model solutions and their contour-jump relations.
//!
//! `bessel_q` is the modified-Bessel/Hankel model with jumps
//! [[0,1],[-1,0]] on the negative real axis and [[1,0],[1,1]] on the rays
//! arg zeta = +-2pi/3; `model_pa` is the Airy model with the decaying
//! upper-triangular jump on the positive real axis; `model_pb` dresses
//! `bessel_q` with the e^{-sqrt(zeta) sigma_3} conjugation. `twist_m` is the
//! closed-form solution of the pure twist jump, which doubles as the
//! large-|zeta| normalization of both models.

use super::airy::ai_pair;
use super::bessel::{
    bessel_i0_complex, bessel_i1_complex, bessel_k0_complex, bessel_k1_complex, hankel_h0_1,
    hankel_h0_2, hankel_h1_1, hankel_h1_2,
};
use super::matrix2::{branch, Matrix2};
use crate::{Error, Result};
use num_complex::Complex64;

const PI: f64 = std::f64::consts::PI;
const TWO_PI_3: f64 = 2.0 * std::f64::consts::FRAC_PI_3;

/// Sector of the three-ray contour for `bessel_q` / `model_pb`:
/// I is |arg zeta| < 2pi/3, II is 2pi/3 < arg zeta < pi,
/// III is -pi < arg zeta < -2pi/3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QRegion {
    I,
    II,
    III,
}

impl QRegion {
    pub fn of(zeta: Complex64) -> QRegion {
        let a = zeta.arg();
        if a > TWO_PI_3 {
            QRegion::II
        } else if a < -TWO_PI_3 {
            QRegion::III
        } else {
            QRegion::I
        }
    }
}

/// The Bessel model matrix in the requested region.
///
/// Region I uses I_0/K_0 of sqrt(zeta); regions II and III use Hankel
/// functions of sqrt(-zeta). The three formulas satisfy
///   Q_I = Q_II [[1,0],[1,1]]        on arg zeta = +2pi/3,
///   Q_III = Q_I [[1,0],[1,1]]       on arg zeta = -2pi/3,
///   Q_II = Q_III [[0,1],[-1,0]]     on the negative real axis (+ above, - below),
/// and det Q is one zeta-independent constant.
pub fn bessel_q(zeta: Complex64, region: QRegion) -> Result<Matrix2> {
    let i = Complex64::new(0.0, 1.0);
    match region {
        QRegion::I => {
            let s = branch::sqrt(zeta);
            let i0 = bessel_i0_complex(s)?;
            let i1 = bessel_i1_complex(s)?;
            let k0 = bessel_k0_complex(s)?;
            let k1 = bessel_k1_complex(s)?;
            Ok(Matrix2::new(
                i0,
                i / PI * k0,
                2.0 * PI * i * s * i1,
                2.0 * s * k1, // -2 sqrt(zeta) K_0'(sqrt zeta), K_0' = -K_1
            ))
        }
        QRegion::II => {
            let s = branch::sqrt(zeta);
            let w = branch::sqrt(-zeta);
            let h01 = hankel_h0_1(w)?;
            let h02 = hankel_h0_2(w)?;
            let h11 = hankel_h1_1(w)?;
            let h12 = hankel_h1_2(w)?;
            Ok(Matrix2::new(
                0.5 * h01,
                0.5 * h02,
                -PI * s * h11, // pi sqrt(zeta) (H_0^1)'(w), (H_0)' = -H_1
                -PI * s * h12,
            ))
        }
        QRegion::III => {
            let s = branch::sqrt(zeta);
            let w = branch::sqrt(-zeta);
            let h01 = hankel_h0_1(w)?;
            let h02 = hankel_h0_2(w)?;
            let h11 = hankel_h1_1(w)?;
            let h12 = hankel_h1_2(w)?;
            Ok(Matrix2::new(
                0.5 * h02,
                -0.5 * h01,
                PI * s * h12,
                -PI * s * h11,
            ))
        }
    }
}

/// Fundamental solution of the twist jump m_+ = m_- [[0,1],[-1,0]] on the
/// negative real axis:
/// m(zeta) = zeta^{-sigma_3/4} (1/sqrt 2) [[1,1],[-1,1]] e^{-i pi sigma_3/4}.
pub fn twist_m(zeta: Complex64) -> Matrix2 {
    let q = branch::quarter_root(zeta);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let a = Matrix2::from_real(inv_sqrt2, inv_sqrt2, -inv_sqrt2, inv_sqrt2);
    let left = Matrix2::diag(Complex64::new(1.0, 0.0) / q, q);
    let right = Matrix2::exp_sigma3(Complex64::new(0.0, -std::f64::consts::FRAC_PI_4));
    left.mul(&a).mul(&right)
}

/// Which boundary value of a model matrix to take on a contour point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// The Airy model matrix, dispatching on the sector of `zeta`.
/// Not defined on the contour itself; use [`model_pa_boundary`] there.
pub fn model_pa(zeta: Complex64) -> Result<Matrix2> {
    let a = zeta.arg();
    let upper = if zeta.im == 0.0 { zeta.im.is_sign_positive() } else { zeta.im > 0.0 };
    let ups = if a > TWO_PI_3 {
        -1
    } else if a < -TWO_PI_3 {
        1
    } else {
        0
    };
    pa_parts(zeta, upper, ups)
}

/// Boundary values of the Airy model on its contour. `ray` picks the piece:
/// 0 for the positive real axis, +1 / -1 for arg = +-2pi/3, 2 for the
/// negative real axis. On the axes `Side::Plus` is the limit from the upper
/// half-plane; on the rays it is the limit from the clockwise (region I) side.
pub fn model_pa_boundary(zeta: Complex64, ray: i32, side: Side) -> Result<Matrix2> {
    match (ray, side) {
        (0, Side::Plus) => pa_parts(zeta, true, 0),
        (0, Side::Minus) => pa_parts(zeta, false, 0),
        (1, Side::Plus) => pa_parts(zeta, true, 0),
        (1, Side::Minus) => pa_parts(zeta, true, -1),
        (-1, Side::Plus) => pa_parts(zeta, false, 0),
        (-1, Side::Minus) => pa_parts(zeta, false, 1),
        (2, side) => {
            // directed limits off the branch cut
            let delta = 1e-8 * zeta.norm().max(1.0);
            let off = Complex64::new(0.0, if side == Side::Plus { delta } else { -delta });
            model_pa(zeta + off)
        }
        _ => Err(Error::InvalidArgument("model_pa_boundary: bad ray tag".into())),
    }
}

/// P_A = sqrt(2 pi) e^{-i pi/12} P(zeta) e^{(2/3 zeta^{3/2} - i pi/6) sigma_3}
/// times Upsilon^{0, -1, +1} by region, with P built from Ai on the first
/// column and a rotated Airy solution on the second (the half-plane picks
/// which rotation keeps the columns independent).
fn pa_parts(zeta: Complex64, upper_p: bool, ups: i32) -> Result<Matrix2> {
    let omega = Complex64::from_polar(1.0, TWO_PI_3);
    let omega2 = Complex64::from_polar(1.0, -TWO_PI_3);
    let (a1, a1p) = ai_pair(zeta)?;
    let p = if upper_p {
        let (b, bp) = ai_pair(omega2 * zeta)?;
        Matrix2::new(a1, b, a1p, omega2 * bp)
    } else {
        let (b, bp) = ai_pair(omega * zeta)?;
        Matrix2::new(a1, -omega2 * b, a1p, -bp)
    };
    let c = 2.0 / 3.0 * branch::pow_3_2(zeta) - Complex64::new(0.0, PI / 6.0);
    let e = Matrix2::exp_sigma3(c);
    let pref = Complex64::from_polar((2.0 * PI).sqrt(), -PI / 12.0);
    let mut m = p.mul(&e).scale(pref);
    if ups != 0 {
        let y = upsilon(zeta);
        m = if ups < 0 { m.mul(&y.inv()) } else { m.mul(&y) };
    }
    Ok(m)
}

/// Upsilon(zeta) = [[1, 0], [e^{(4/3) zeta^{3/2}}, 1]].
pub fn upsilon(zeta: Complex64) -> Matrix2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Matrix2::new(one, zero, (4.0 / 3.0 * branch::pow_3_2(zeta)).exp(), one)
}

/// Left normalization making `model_pb` match the large-|zeta| form
/// zeta^{-sigma_3/4} (1/sqrt 2) [[1, i],[i, 1]]; it also fixes det P_B = 1.
fn pb_normalization() -> Matrix2 {
    Matrix2::from_real(PI.sqrt(), 0.0, 0.0, 0.5 / PI.sqrt())
}

/// The Bessel model P_B = D Q(zeta) e^{-sqrt(zeta) sigma_3} in the sector
/// of `zeta`.
pub fn model_pb(zeta: Complex64) -> Result<Matrix2> {
    model_pb_region(zeta, QRegion::of(zeta))
}

/// P_B with an explicit region tag (for boundary values on the rays).
pub fn model_pb_region(zeta: Complex64, region: QRegion) -> Result<Matrix2> {
    let q = bessel_q(zeta, region)?;
    let e = Matrix2::exp_sigma3(-branch::sqrt(zeta));
    Ok(pb_normalization().mul(&q).mul(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jump_lower(x: Complex64) -> Matrix2 {
        Matrix2::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            x,
            Complex64::new(1.0, 0.0),
        )
    }

    fn jump_twist() -> Matrix2 {
        Matrix2::from_real(0.0, 1.0, -1.0, 0.0)
    }

    #[test]
    fn twist_solves_its_jump() {
        for r in [0.5, 2.0, 11.0] {
            let z = Complex64::new(-r, 0.0);
            let d = 1e-10 * r;
            let above = twist_m(z + Complex64::new(0.0, d));
            let below = twist_m(z - Complex64::new(0.0, d));
            let res = above.sub(&below.mul(&jump_twist())).max_abs();
            assert!(res < 1e-8, "twist jump residual {res} at -{r}");
        }
    }

    #[test]
    fn q_jump_on_negative_axis() {
        // boundary values taken exactly via signed-zero imaginary parts
        let plus = bessel_q(Complex64::new(-2.0, 0.0), QRegion::II).unwrap();
        let minus = bessel_q(Complex64::new(-2.0, -0.0), QRegion::III).unwrap();
        let res = plus.sub(&minus.mul(&jump_twist())).max_abs();
        assert!(res < 1e-8, "Q jump residual on R_-: {res}");
    }

    #[test]
    fn q_jump_on_upper_ray() {
        // Q_+ = Q_- [[1,0],[1,1]] with the plus side toward region I
        let zeta = Complex64::from_polar(2.0, TWO_PI_3);
        let plus = bessel_q(zeta, QRegion::I).unwrap();
        let minus = bessel_q(zeta, QRegion::II).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let res = plus.sub(&minus.mul(&jump_lower(one))).max_abs();
        assert!(res < 1e-8, "Q jump residual on upper ray: {res}");
    }

    #[test]
    fn q_jump_on_lower_ray() {
        let zeta = Complex64::from_polar(3.0, -TWO_PI_3);
        let plus = bessel_q(zeta, QRegion::III).unwrap();
        let minus = bessel_q(zeta, QRegion::I).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let res = plus.sub(&minus.mul(&jump_lower(one))).max_abs();
        assert!(res < 1e-8, "Q jump residual on lower ray: {res}");
    }

    #[test]
    fn q_determinant_constant() {
        let d1 = bessel_q(Complex64::new(1.0, 0.0), QRegion::I).unwrap().det();
        for z in [Complex64::new(4.0, 0.0), Complex64::new(2.0, 1.0)] {
            let d = bessel_q(z, QRegion::of(z)).unwrap().det();
            assert!((d - d1).norm() < 1e-10, "det Q varies: {d} vs {d1}");
        }
        // the constant follows from the Bessel Wronskian -1/x
        assert!((d1 - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pa_jump_on_positive_axis() {
        let zeta = Complex64::new(1.0, 0.0);
        let plus = model_pa_boundary(zeta, 0, Side::Plus).unwrap();
        let minus = model_pa_boundary(zeta, 0, Side::Minus).unwrap();
        let v = Matrix2::new(
            Complex64::new(1.0, 0.0),
            Complex64::new((-4.0 / 3.0f64).exp(), 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        );
        let res = plus.sub(&minus.mul(&v)).max_abs();
        assert!(res < 1e-9, "P_A jump residual on R_+: {res}");
    }

    #[test]
    fn pa_jump_on_upper_ray() {
        let zeta = Complex64::from_polar(2.0, TWO_PI_3);
        let plus = model_pa_boundary(zeta, 1, Side::Plus).unwrap();
        let minus = model_pa_boundary(zeta, 1, Side::Minus).unwrap();
        let v = jump_lower((4.0 / 3.0 * branch::pow_3_2(zeta)).exp());
        let res = plus.sub(&minus.mul(&v)).max_abs();
        assert!(res < 1e-9, "P_A jump residual on the upper ray: {res}");
    }

    #[test]
    fn pa_jump_on_negative_axis() {
        let zeta = Complex64::new(-1.5, 0.0);
        let plus = model_pa_boundary(zeta, 2, Side::Plus).unwrap();
        let minus = model_pa_boundary(zeta, 2, Side::Minus).unwrap();
        let res = plus.sub(&minus.mul(&jump_twist())).max_abs();
        assert!(res < 1e-8, "P_A jump residual on R_-: {res}");
    }

    #[test]
    fn pa_matches_twist_at_large_radius() {
        for theta in [0.0, 1.0, -2.0, 2.8] {
            let zeta = Complex64::from_polar(30.0, theta);
            let pa = model_pa(zeta).unwrap();
            let asym = twist_m(zeta);
            let res = pa.mul(&asym.inv()).sub(&Matrix2::identity()).max_abs();
            assert!(res < 0.05, "P_A asymptotic residual {res} at arg {theta}");
        }
    }

    #[test]
    fn pb_jump_on_rays() {
        for (r, theta) in [(2.0, TWO_PI_3), (5.0, TWO_PI_3), (3.0, -TWO_PI_3)] {
            let zeta = Complex64::from_polar(r, theta);
            let (plus, minus) = if theta > 0.0 {
                (
                    model_pb_region(zeta, QRegion::I).unwrap(),
                    model_pb_region(zeta, QRegion::II).unwrap(),
                )
            } else {
                (
                    model_pb_region(zeta, QRegion::III).unwrap(),
                    model_pb_region(zeta, QRegion::I).unwrap(),
                )
            };
            let v = jump_lower((-2.0 * branch::sqrt(zeta)).exp());
            let res = plus.sub(&minus.mul(&v)).max_abs();
            assert!(res < 1e-8, "P_B jump residual {res} at ({r},{theta})");
        }
    }

    #[test]
    fn pb_asymptotic_form() {
        // P_B = zeta^{-sigma_3/4} (1/sqrt 2) [[1,i],[i,1]] (I + O(|zeta|^{-1/2})),
        // so the residual to bound is asym^{-1} P_B - I
        let zeta = Complex64::new(100.0, 0.0);
        let pb = model_pb(zeta).unwrap();
        let q = branch::quarter_root(zeta);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let i = Complex64::new(0.0, 1.0);
        let asym = Matrix2::diag(Complex64::new(1.0, 0.0) / q, q).mul(&Matrix2::new(
            Complex64::new(inv_sqrt2, 0.0),
            inv_sqrt2 * i,
            inv_sqrt2 * i,
            Complex64::new(inv_sqrt2, 0.0),
        ));
        let res = asym.inv().mul(&pb).sub(&Matrix2::identity()).max_abs();
        assert!(res < 0.15, "P_B asymptotic residual {res}");
    }

    #[test]
    fn pb_determinant_constant() {
        let pts = [1.0, 9.0, 25.0];
        let d0 = model_pb(Complex64::new(pts[0], 0.0)).unwrap().det();
        for &p in &pts[1..] {
            let d = model_pb(Complex64::new(p, 0.0)).unwrap().det();
            assert!((d - d0).norm() < 1e-9, "det P_B varies: {d} vs {d0}");
        }
    }

    #[test]
    fn jump_relations_on_sampled_contour_points() {
        // 20 points per model across all contour pieces, residual <= 1e-8
        let one = Complex64::new(1.0, 0.0);
        // --- Q ---
        let mut checked = 0;
        for k in 0..7 {
            let r = 0.4 + 0.9 * k as f64;
            let z_up = Complex64::from_polar(r, TWO_PI_3);
            let res = bessel_q(z_up, QRegion::I)
                .unwrap()
                .sub(&bessel_q(z_up, QRegion::II).unwrap().mul(&jump_lower(one)))
                .max_abs();
            assert!(res < 1e-8, "Q upper ray at r={r}: {res}");
            let z_dn = Complex64::from_polar(r, -TWO_PI_3);
            let res = bessel_q(z_dn, QRegion::III)
                .unwrap()
                .sub(&bessel_q(z_dn, QRegion::I).unwrap().mul(&jump_lower(one)))
                .max_abs();
            assert!(res < 1e-8, "Q lower ray at r={r}: {res}");
            let res = bessel_q(Complex64::new(-r, 0.0), QRegion::II)
                .unwrap()
                .sub(
                    &bessel_q(Complex64::new(-r, -0.0), QRegion::III)
                        .unwrap()
                        .mul(&jump_twist()),
                )
                .max_abs();
            assert!(res < 1e-8, "Q negative axis at r={r}: {res}");
            checked += 3;
        }
        assert!(checked >= 20);

        // --- P_A ---
        let mut checked = 0;
        for k in 0..7 {
            let r = 0.5 + 0.8 * k as f64;
            let z = Complex64::new(r, 0.0);
            let v = Matrix2::new(
                one,
                (-4.0 / 3.0 * branch::pow_3_2(z)).exp(),
                Complex64::new(0.0, 0.0),
                one,
            );
            let res = model_pa_boundary(z, 0, Side::Plus)
                .unwrap()
                .sub(&model_pa_boundary(z, 0, Side::Minus).unwrap().mul(&v))
                .max_abs();
            assert!(res < 1e-8, "P_A positive axis at r={r}: {res}");
            let z_up = Complex64::from_polar(r, TWO_PI_3);
            let v = jump_lower((4.0 / 3.0 * branch::pow_3_2(z_up)).exp());
            let res = model_pa_boundary(z_up, 1, Side::Plus)
                .unwrap()
                .sub(&model_pa_boundary(z_up, 1, Side::Minus).unwrap().mul(&v))
                .max_abs();
            assert!(res < 1e-8, "P_A upper ray at r={r}: {res}");
            let z_neg = Complex64::new(-r, 0.0);
            let res = model_pa_boundary(z_neg, 2, Side::Plus)
                .unwrap()
                .sub(&model_pa_boundary(z_neg, 2, Side::Minus).unwrap().mul(&jump_twist()))
                .max_abs();
            assert!(res < 1e-8, "P_A negative axis at r={r}: {res}");
            checked += 3;
        }
        assert!(checked >= 20);

        // --- P_B ---
        let mut checked = 0;
        for k in 0..7 {
            let r = 0.6 + 1.1 * k as f64;
            for theta in [TWO_PI_3, -TWO_PI_3] {
                let z = Complex64::from_polar(r, theta);
                let (plus, minus) = if theta > 0.0 {
                    (QRegion::I, QRegion::II)
                } else {
                    (QRegion::III, QRegion::I)
                };
                let v = jump_lower((-2.0 * branch::sqrt(z)).exp());
                let res = model_pb_region(z, plus)
                    .unwrap()
                    .sub(&model_pb_region(z, minus).unwrap().mul(&v))
                    .max_abs();
                assert!(res < 1e-8, "P_B ray at ({r},{theta}): {res}");
                checked += 1;
            }
            let res = model_pb(Complex64::new(-r, 0.0))
                .unwrap()
                .sub(&model_pb(Complex64::new(-r, -0.0)).unwrap().mul(&jump_twist()))
                .max_abs();
            assert!(res < 1e-8, "P_B negative axis at r={r}: {res}");
            checked += 1;
        }
        assert!(checked >= 20);
    }
}
