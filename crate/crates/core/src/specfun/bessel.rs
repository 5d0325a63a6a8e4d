use crate::numcore::{composite_rule, gauss_legendre};
use crate::{Error, Result};
use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.5772156649015329;
/// Validated argument range for the Bessel family.
const MAX_ABS: f64 = 200.0;
/// Series / asymptotic switch for the complex J/Y/H family.
const HANKEL_SERIES_RADIUS: f64 = 12.0;
/// I_nu series is cancellation-free; run it far out.
const I_SERIES_RADIUS: f64 = 30.0;
/// K_nu: plain series below, quadrature in the middle, asymptotic above.
const K_SERIES_RADIUS: f64 = 2.0;
const K_QUAD_RADIUS: f64 = 30.0;

fn check_range(r: f64) -> Result<()> {
    if !r.is_finite() || r > MAX_ABS {
        return Err(Error::OutOfRange(format!("bessel argument |z| = {r} exceeds {MAX_ABS}")));
    }
    Ok(())
}

/// a_k(nu) coefficient recurrence of the large-argument expansions:
/// a_0 = 1, a_k = a_{k-1} (4 nu^2 - (2k-1)^2) / (8k).
fn asym_coeff_step(a_prev: f64, nu: f64, k: usize) -> f64 {
    let k = k as f64;
    a_prev * (4.0 * nu * nu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k)
}

// ---------------------------------------------------------------------------
// modified Bessel functions, real argument
// ---------------------------------------------------------------------------

/// I_0 for real x >= 0.
pub fn bessel_i0(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::InvalidArgument("bessel_i0 requires x >= 0".into()));
    }
    check_range(x)?;
    if x <= I_SERIES_RADIUS {
        Ok(i0_series(x))
    } else {
        Ok(i_asym(x, 0.0))
    }
}

/// I_1 for real x >= 0 (the derivative of I_0).
pub fn bessel_i1(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::InvalidArgument("bessel_i1 requires x >= 0".into()));
    }
    check_range(x)?;
    if x <= I_SERIES_RADIUS {
        Ok(i1_series(x))
    } else {
        Ok(i_asym(x, 1.0))
    }
}

/// I_0 as (mantissa, decimal exponent) with mantissa in [1, 10); usable
/// beyond the overflow threshold of a plain f64 return.
pub fn bessel_i0_scaled(x: f64) -> Result<(f64, i32)> {
    if x < 0.0 {
        return Err(Error::InvalidArgument("bessel_i0_scaled requires x >= 0".into()));
    }
    if x <= I_SERIES_RADIUS {
        return Ok(to_decimal(i0_series(x), 0.0));
    }
    // ln I_0 = x - ln(2 pi x)/2 + ln(series)
    let mut s = 1.0;
    let mut a = 1.0;
    let mut pow = 1.0;
    let mut sign = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..30 {
        a = asym_coeff_step(a, 0.0, k);
        sign = -sign;
        pow /= x;
        let t = sign * a * pow;
        if t.abs() >= last {
            break;
        }
        last = t.abs();
        s += t;
    }
    let ln_val = x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + s.ln();
    Ok(to_decimal(1.0, ln_val))
}

/// Split `m * e^{ln_extra}` into (mantissa, decimal exponent), mantissa in [1, 10).
fn to_decimal(m: f64, ln_extra: f64) -> (f64, i32) {
    if m == 0.0 {
        return (0.0, 0);
    }
    let log10 = m.abs().log10() + ln_extra / std::f64::consts::LN_10;
    let e = log10.floor();
    let mant = m.signum() * 10f64.powf(log10 - e);
    (mant, e as i32)
}

fn i0_series(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut acc = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * kf);
        acc += term;
        if term < 1e-18 * acc {
            break;
        }
    }
    acc
}

fn i1_series(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = x / 2.0;
    let mut acc = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        acc += term;
        if term.abs() < 1e-18 * acc.abs() {
            break;
        }
    }
    acc
}

fn i_asym(x: f64, nu: f64) -> f64 {
    let mut s = 1.0;
    let mut a = 1.0;
    let mut pow = 1.0;
    let mut sign = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..40 {
        a = asym_coeff_step(a, nu, k);
        sign = -sign;
        pow /= x;
        let t = sign * a * pow;
        if t.abs() >= last {
            break;
        }
        last = t.abs();
        s += t;
    }
    x.exp() / (2.0 * std::f64::consts::PI * x).sqrt() * s
}

/// K_0 for real x > 0.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::InvalidArgument("bessel_k0 requires x > 0".into()));
    }
    check_range(x)?;
    if x <= K_SERIES_RADIUS {
        Ok(k0_series(x))
    } else if x <= K_QUAD_RADIUS {
        Ok(k_quadrature(x, 0))
    } else {
        Ok(k_asym(x, 0.0))
    }
}

/// K_1 for real x > 0 (note K_0' = -K_1).
pub fn bessel_k1(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::InvalidArgument("bessel_k1 requires x > 0".into()));
    }
    check_range(x)?;
    if x <= K_SERIES_RADIUS {
        Ok(k1_series(x))
    } else if x <= K_QUAD_RADIUS {
        Ok(k_quadrature(x, 1))
    } else {
        Ok(k_asym(x, 1.0))
    }
}

fn k0_series(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut h = 0.0;
    let mut acc = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        h += 1.0 / kf;
        acc += term * h;
        if term * h < 1e-18 * acc.abs().max(1.0) {
            break;
        }
    }
    -( (x / 2.0).ln() + EULER_GAMMA) * i0_series(x) + acc
}

fn k1_series(x: f64) -> f64 {
    // K_1 = ln(x/2) I_1 + 1/x - (x/4) sum [psi(k+1)+psi(k+2)] (x^2/4)^k / (k!(k+1)!)
    let q = x * x / 4.0;
    let mut term = 1.0; // (x^2/4)^k / (k! (k+1)!) at k = 0
    let mut psi_a = -EULER_GAMMA; // psi(k+1)
    let mut psi_b = 1.0 - EULER_GAMMA; // psi(k+2)
    let mut acc = term * (psi_a + psi_b);
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        psi_a += 1.0 / kf;
        psi_b += 1.0 / (kf + 1.0);
        let t = term * (psi_a + psi_b);
        acc += t;
        if t.abs() < 1e-18 * acc.abs().max(1.0) {
            break;
        }
    }
    (x / 2.0).ln() * i1_series(x) + 1.0 / x - (x / 4.0) * acc
}

/// K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt, evaluated with composite
/// Gauss-Legendre panels; no cancellation anywhere in the midrange.
fn k_quadrature(x: f64, nu: u32) -> f64 {
    let tmax = (1.0 + 690.8 / x).acosh();
    let base = gauss_legendre(24).expect("fixed-order rule");
    let n_panels = 8;
    let panels: Vec<(f64, f64)> = (0..n_panels)
        .map(|i| {
            (
                tmax * i as f64 / n_panels as f64,
                tmax * (i + 1) as f64 / n_panels as f64,
            )
        })
        .collect();
    let rule = composite_rule(&base, &panels).expect("valid panels");
    rule.integrate(|t| {
        let e = (-x * t.cosh()).exp();
        if nu == 0 {
            e
        } else {
            e * t.cosh()
        }
    })
}

fn k_asym(x: f64, nu: f64) -> f64 {
    let mut s = 1.0;
    let mut a = 1.0;
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..40 {
        a = asym_coeff_step(a, nu, k);
        pow /= x;
        let t = a * pow;
        if t.abs() >= last {
            break;
        }
        last = t.abs();
        s += t;
    }
    (std::f64::consts::FRAC_PI_2 / x).sqrt() * (-x).exp() * s
}

// ---------------------------------------------------------------------------
// J, Y, Hankel: complex argument
// ---------------------------------------------------------------------------

/// J_0(w), J_1(w), Y_0(w), Y_1(w) by Maclaurin series (|w| <= 12).
fn jy_series(w: Complex64) -> (Complex64, Complex64, Complex64, Complex64) {
    let q = w * w / 4.0;
    // J0 and the H_k-weighted companion
    let mut term = Complex64::new(1.0, 0.0);
    let mut j0 = term;
    let mut s0 = Complex64::new(0.0, 0.0);
    let mut h = 0.0;
    for k in 1..80 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        j0 += term;
        h += 1.0 / kf;
        s0 -= term * h; // sum (-1)^{k+1} H_k q^k / (k!)^2
        if term.norm() < 1e-18 * j0.norm().max(1e-300) && k > 4 {
            break;
        }
    }
    // J1 and the psi-weighted companion
    let mut t1 = w / 2.0;
    let mut j1 = t1;
    let mut psi_a = -EULER_GAMMA;
    let mut psi_b = 1.0 - EULER_GAMMA;
    let mut s1 = t1 * (psi_a + psi_b);
    for k in 1..80 {
        let kf = k as f64;
        t1 *= -q / (kf * (kf + 1.0));
        j1 += t1;
        psi_a += 1.0 / kf;
        psi_b += 1.0 / (kf + 1.0);
        s1 += t1 * (psi_a + psi_b);
        if t1.norm() < 1e-18 * j1.norm().max(1e-300) && k > 4 {
            break;
        }
    }
    let two_over_pi = std::f64::consts::FRAC_2_PI;
    let lg = (w / 2.0).ln() + EULER_GAMMA;
    let y0 = two_over_pi * (lg * j0 + s0);
    // Y1 = (2/pi) ln(w/2) J1 - 2/(pi w) - (1/pi) sum (-1)^k [psi(k+1)+psi(k+2)] (w/2)^{2k+1} / (k!(k+1)!)
    let y1 = two_over_pi * (w / 2.0).ln() * j1 - two_over_pi / w
        - s1 / std::f64::consts::PI;
    (j0, j1, y0, y1)
}

/// Large-argument Hankel expansion:
/// H^{(1)}_nu(w) = sqrt(2/(pi w)) e^{i(w - nu pi/2 - pi/4)} sum i^k a_k(nu) w^{-k}.
fn hankel_asym(w: Complex64, nu: f64, kind2: bool) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let unit = if kind2 { -i } else { i };
    let mut s = Complex64::new(1.0, 0.0);
    let mut a = 1.0;
    let mut pow = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..40 {
        a = asym_coeff_step(a, nu, k);
        pow = pow * unit / w;
        let t = a * pow;
        if t.norm() >= last {
            break;
        }
        last = t.norm();
        s += t;
    }
    let phase = unit * (w - Complex64::new(nu * std::f64::consts::FRAC_PI_2 + std::f64::consts::FRAC_PI_4, 0.0));
    (Complex64::new(std::f64::consts::FRAC_2_PI, 0.0) / w).sqrt() * phase.exp() * s
}

/// Hankel function of the first kind, order 0.
pub fn hankel_h0_1(w: Complex64) -> Result<Complex64> {
    check_range(w.norm())?;
    if w.norm() <= HANKEL_SERIES_RADIUS {
        let (j0, _, y0, _) = jy_series(w);
        Ok(j0 + Complex64::new(0.0, 1.0) * y0)
    } else {
        Ok(hankel_asym(w, 0.0, false))
    }
}

/// Hankel function of the second kind, order 0.
pub fn hankel_h0_2(w: Complex64) -> Result<Complex64> {
    check_range(w.norm())?;
    if w.norm() <= HANKEL_SERIES_RADIUS {
        let (j0, _, y0, _) = jy_series(w);
        Ok(j0 - Complex64::new(0.0, 1.0) * y0)
    } else {
        Ok(hankel_asym(w, 0.0, true))
    }
}

/// Order-1 Hankel functions; (H_0)' = -H_1.
pub fn hankel_h1_1(w: Complex64) -> Result<Complex64> {
    check_range(w.norm())?;
    if w.norm() <= HANKEL_SERIES_RADIUS {
        let (_, j1, _, y1) = jy_series(w);
        Ok(j1 + Complex64::new(0.0, 1.0) * y1)
    } else {
        Ok(hankel_asym(w, 1.0, false))
    }
}

pub fn hankel_h1_2(w: Complex64) -> Result<Complex64> {
    check_range(w.norm())?;
    if w.norm() <= HANKEL_SERIES_RADIUS {
        let (_, j1, _, y1) = jy_series(w);
        Ok(j1 - Complex64::new(0.0, 1.0) * y1)
    } else {
        Ok(hankel_asym(w, 1.0, true))
    }
}

// ---------------------------------------------------------------------------
// I, K: complex argument (principal branch, |arg w| < pi/2 + margin)
// ---------------------------------------------------------------------------

/// I_0 for complex argument by series (cancellation-free for |arg w| small).
pub fn bessel_i0_complex(w: Complex64) -> Result<Complex64> {
    if w.norm() > 25.0 {
        return Err(Error::OutOfRange("complex I_0 validated for |w| <= 25".into()));
    }
    if w.im == 0.0 && w.re >= 0.0 {
        return Ok(Complex64::new(bessel_i0(w.re)?, 0.0));
    }
    let q = w * w / 4.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut acc = term;
    for k in 1..120 {
        let kf = k as f64;
        term *= q / (kf * kf);
        acc += term;
        if term.norm() < 1e-18 * acc.norm() {
            break;
        }
    }
    Ok(acc)
}

pub fn bessel_i1_complex(w: Complex64) -> Result<Complex64> {
    if w.norm() > 25.0 {
        return Err(Error::OutOfRange("complex I_1 validated for |w| <= 25".into()));
    }
    if w.im == 0.0 && w.re >= 0.0 {
        return Ok(Complex64::new(bessel_i1(w.re)?, 0.0));
    }
    let q = w * w / 4.0;
    let mut term = w / 2.0;
    let mut acc = term;
    for k in 1..120 {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        acc += term;
        if term.norm() < 1e-18 * acc.norm() {
            break;
        }
    }
    Ok(acc)
}

/// K_0 for complex w with Re w-side principal branch, via
/// K_0(w) = -(pi i / 2) H_0^{(2)}(w e^{-i pi/2}), valid for -pi/2 < arg w <= pi.
pub fn bessel_k0_complex(w: Complex64) -> Result<Complex64> {
    if w.im == 0.0 && w.re > 0.0 {
        return Ok(Complex64::new(bessel_k0(w.re)?, 0.0));
    }
    let i = Complex64::new(0.0, 1.0);
    let rotated = w * (-i);
    let h = hankel_h0_2(rotated)?;
    Ok(-i * std::f64::consts::FRAC_PI_2 * h)
}

/// K_1(w) = -(pi/2) H_1^{(2)}(w e^{-i pi/2}).
pub fn bessel_k1_complex(w: Complex64) -> Result<Complex64> {
    if w.im == 0.0 && w.re > 0.0 {
        return Ok(Complex64::new(bessel_k1(w.re)?, 0.0));
    }
    let i = Complex64::new(0.0, 1.0);
    let rotated = w * (-i);
    let h = hankel_h1_2(rotated)?;
    Ok(-std::f64::consts::FRAC_PI_2 * h)
}
