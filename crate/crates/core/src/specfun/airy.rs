use crate::{Error, Result};
use num_complex::Complex64;

/// Ai(0) = 3^{-2/3} / Gamma(2/3)
const AI0: f64 = 0.3550280538878172;
/// -Ai'(0) = 3^{-1/3} / Gamma(1/3)
const AIP0: f64 = 0.2588194037928068;

/// Series / asymptotic switchover radius.
const SERIES_RADIUS: f64 = 7.0;
/// Validated argument range.
const MAX_ABS: f64 = 40.0;

const TWO_PI_3: f64 = 2.0 * std::f64::consts::FRAC_PI_3;

/// Airy function of the first kind for complex argument, `|z| <= 40`.
pub fn airy_ai(z: Complex64) -> Result<Complex64> {
    Ok(ai_pair(z)?.0)
}

/// Derivative of the Airy function for complex argument, `|z| <= 40`.
pub fn airy_ai_prime(z: Complex64) -> Result<Complex64> {
    Ok(ai_pair(z)?.1)
}

/// (Ai, Ai') evaluated together.
pub fn ai_pair(z: Complex64) -> Result<(Complex64, Complex64)> {
    let r = z.norm();
    if !r.is_finite() || r > MAX_ABS {
        return Err(Error::OutOfRange(format!("airy argument |z| = {r} exceeds {MAX_ABS}")));
    }
    if r <= SERIES_RADIUS {
        return Ok(series_pair(z));
    }
    if z.arg().abs() <= TWO_PI_3 {
        return Ok(asym_pair(z));
    }
    // rotate into the valid sector with the connection identity
    // Ai(z) + w Ai(wz) + w^2 Ai(w^2 z) = 0, w = e^{2 pi i/3}
    let w = Complex64::from_polar(1.0, TWO_PI_3);
    let w2 = Complex64::from_polar(1.0, -TWO_PI_3);
    let (a1, a1p) = asym_pair(rotate(z, TWO_PI_3));
    let (a2, a2p) = asym_pair(rotate(z, -TWO_PI_3));
    let ai = -w * a1 - w2 * a2;
    let aip = -w2 * a1p - w * a2p;
    Ok((ai, aip))
}

/// Real-argument fast path (real arithmetic for x >= -SERIES_RADIUS).
pub fn ai_pair_real(x: f64) -> Result<(f64, f64)> {
    if x.abs() <= SERIES_RADIUS {
        return Ok(series_pair_real(x));
    }
    if x > SERIES_RADIUS {
        return Ok(asym_pair_real(x));
    }
    let (a, ap) = ai_pair(Complex64::new(x, 0.0))?;
    Ok((a.re, ap.re))
}

pub fn airy_ai_real(x: f64) -> Result<f64> {
    Ok(ai_pair_real(x)?.0)
}

pub fn airy_ai_prime_real(x: f64) -> Result<f64> {
    Ok(ai_pair_real(x)?.1)
}

/// Multiply the *argument* by e^{i theta}, keeping track of exact rotation
/// so the sector test stays clean.
fn rotate(z: Complex64, theta: f64) -> Complex64 {
    z * Complex64::from_polar(1.0, theta)
}

/// Maclaurin evaluation: Ai = c1 f - c2 g with
/// f = sum z^{3k} / prod (3j)(3j-1) and g = z + sum z^{3k+1} / prod (3j+1)(3j).
fn series_pair(z: Complex64) -> (Complex64, Complex64) {
    let z3 = z * z * z;
    let mut f = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut g = z;
    let mut gterm = z;
    // derivatives
    let mut fp = Complex64::new(0.0, 0.0);
    let mut fpterm = 0.5 * z * z;
    fp += fpterm;
    let mut gp = Complex64::new(1.0, 0.0);
    let mut gpterm = Complex64::new(1.0, 0.0);
    for k in 1..80 {
        let kf = k as f64;
        term = term * z3 / ((3.0 * kf) * (3.0 * kf - 1.0));
        f += term;
        gterm = gterm * z3 / ((3.0 * kf + 1.0) * (3.0 * kf));
        g += gterm;
        if k >= 2 {
            fpterm = fpterm * z3 * (kf / (kf - 1.0)) / ((3.0 * kf) * (3.0 * kf - 1.0));
            fp += fpterm;
        }
        gpterm = gpterm * z3 / ((3.0 * kf - 2.0) * (3.0 * kf));
        gp += gpterm;
        if term.norm() < 1e-18 * f.norm() && gterm.norm() < 1e-18 * g.norm().max(1e-300) {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * fp - AIP0 * gp)
}

fn series_pair_real(x: f64) -> (f64, f64) {
    let z3 = x * x * x;
    let mut f = 1.0;
    let mut term = 1.0;
    let mut g = x;
    let mut gterm = x;
    let mut fp = 0.5 * x * x;
    let mut fpterm = fp;
    let mut gp = 1.0;
    let mut gpterm = 1.0;
    for k in 1..80 {
        let kf = k as f64;
        term = term * z3 / ((3.0 * kf) * (3.0 * kf - 1.0));
        f += term;
        gterm = gterm * z3 / ((3.0 * kf + 1.0) * (3.0 * kf));
        g += gterm;
        if k >= 2 {
            fpterm = fpterm * z3 * (kf / (kf - 1.0)) / ((3.0 * kf) * (3.0 * kf - 1.0));
            fp += fpterm;
        }
        gpterm = gpterm * z3 / ((3.0 * kf - 2.0) * (3.0 * kf));
        gp += gpterm;
        if term.abs() < 1e-18 * f.abs() && gterm.abs() < 1e-18 * g.abs().max(1e-300) {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * fp - AIP0 * gp)
}

/// Large-|z| expansion in |arg z| <= 2 pi / 3, truncated at the smallest term:
/// Ai ~ e^{-u} z^{-1/4} / (2 sqrt(pi)) * sum (-1)^k u_k u^{-k}, u = (2/3) z^{3/2}.
fn asym_pair(z: Complex64) -> (Complex64, Complex64) {
    let sqrt_z = z.sqrt();
    let u = 2.0 / 3.0 * z * sqrt_z;
    let quarter = sqrt_z.sqrt();
    let pref = (-u).exp() / (2.0 * std::f64::consts::PI.sqrt());

    let mut s_ai = Complex64::new(1.0, 0.0);
    let mut s_aip = Complex64::new(1.0, 0.0);
    let mut uk = 1.0; // u_k coefficients
    let mut sign = 1.0;
    let mut last = f64::INFINITY;
    let inv_u = 1.0 / u;
    let mut pow = Complex64::new(1.0, 0.0);
    for k in 1..40 {
        let kf = k as f64;
        uk *= (6.0 * kf - 1.0) * (6.0 * kf - 5.0) / (72.0 * kf);
        let vk = -uk * (6.0 * kf + 1.0) / (6.0 * kf - 1.0);
        sign = -sign;
        pow *= inv_u;
        let t_ai = sign * uk * pow;
        let mag = t_ai.norm();
        if mag >= last {
            break; // smallest term reached
        }
        last = mag;
        s_ai += t_ai;
        s_aip += sign * vk * pow;
        if mag < 1e-18 {
            break;
        }
    }
    let ai = pref / quarter * s_ai;
    let aip = -pref * quarter * s_aip;
    (ai, aip)
}

fn asym_pair_real(x: f64) -> (f64, f64) {
    let sqrt_x = x.sqrt();
    let u = 2.0 / 3.0 * x * sqrt_x;
    let quarter = sqrt_x.sqrt();
    let pref = (-u).exp() / (2.0 * std::f64::consts::PI.sqrt());
    let mut s_ai = 1.0;
    let mut s_aip = 1.0;
    let mut uk = 1.0;
    let mut sign = 1.0;
    let mut last = f64::INFINITY;
    let mut pow = 1.0;
    for k in 1..40 {
        let kf = k as f64;
        uk *= (6.0 * kf - 1.0) * (6.0 * kf - 5.0) / (72.0 * kf);
        let vk = -uk * (6.0 * kf + 1.0) / (6.0 * kf - 1.0);
        sign = -sign;
        pow /= u;
        let t = sign * uk * pow;
        if t.abs() >= last {
            break;
        }
        last = t.abs();
        s_ai += t;
        s_aip += sign * vk * pow;
        if t.abs() < 1e-18 {
            break;
        }
    }
    (pref / quarter * s_ai, -pref * quarter * s_aip)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn values_at_zero() {
        let (a, ap) = ai_pair(c(0.0, 0.0)).unwrap();
        assert!((a.re - 0.3550280538878172).abs() < 1e-15);
        assert!((ap.re + 0.2588194037928068).abs() < 1e-15);
    }

    #[test]
    fn reference_values_on_real_axis() {
        // reference values computed at 30 significant digits and rounded
        let cases = [
            (1.0, 0.13529241631288142, -0.15914744129679321),
            (2.0, 0.034924130423274379, -0.053090384433653632),
            (5.0, 0.00010834442813607442, -0.00024741389086846248),
            (10.0, 1.1047532552898686e-10, -3.5206336767389236e-10),
            (-1.0, 0.53556088329235212, -0.010160567116645209),
            (-2.0, 0.22740742820168558, 0.61825902074169104),
            (-5.0, 0.35076100902411432, 0.32719281855444314),
            (-10.0, 0.040241238486443191, 0.99626504413279006),
        ];
        for (x, ai, aip) in cases {
            let (a, ap) = ai_pair_real(x).unwrap();
            assert!((a - ai).abs() < 1e-11, "Ai({x}) = {a}, want {ai}");
            assert!((ap - aip).abs() < 1e-11, "Ai'({x}) = {ap}, want {aip}");
        }
    }

    #[test]
    fn connection_identity_complex() {
        let w = Complex64::from_polar(1.0, TWO_PI_3);
        let z = c(1.3, 0.7);
        let s = airy_ai(z).unwrap()
            + w * airy_ai(w * z).unwrap()
            + w * w * airy_ai(w * w * z).unwrap();
        assert!(s.norm() < 1e-10, "connection residual {}", s.norm());
    }

    #[test]
    fn series_asymptotic_overlap() {
        // both representations valid on |z| = 8; they must agree to 1e-10
        for k in 0..12 {
            let theta = -0.6 * TWO_PI_3 + 1.2 * TWO_PI_3 * (k as f64) / 11.0;
            let z = Complex64::from_polar(8.0, theta);
            let s = series_pair(z);
            let a = asym_pair(z);
            let scale = s.0.norm().max(1e-12);
            assert!(
                (s.0 - a.0).norm() <= 1e-10 * scale.max(1.0),
                "Ai overlap mismatch at theta={theta}: {} vs {}",
                s.0,
                a.0
            );
        }
    }

    #[test]
    fn ode_residual_on_disk() {
        // Ai'' = z Ai checked with a 5-point second difference
        let h = 0.003;
        let pts = [
            c(0.5, 0.0),
            c(3.0, 0.0),
            c(-4.0, 0.0),
            c(7.5, 0.0),
            c(2.0, 2.0),
            c(-3.0, 1.5),
            c(0.0, 5.0),
            c(-6.5, -2.0),
        ];
        for z in pts {
            let f = |t: f64| airy_ai(z + c(t, 0.0)).unwrap();
            let second = (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h))
                / (12.0 * h * h);
            let scale = (z * f(0.0)).norm().max(1.0);
            let res = (second - z * f(0.0)).norm();
            assert!(res < 1e-9 * scale, "ODE residual {res} at z = {z}");
        }
    }

    #[test]
    fn derivative_consistent_with_difference() {
        for z in [c(1.0, 0.5), c(-2.0, 0.3), c(8.5, -1.0)] {
            let h = 1e-5;
            let d = (airy_ai(z + c(h, 0.0)).unwrap() - airy_ai(z - c(h, 0.0)).unwrap()) / (2.0 * h);
            let ap = airy_ai_prime(z).unwrap();
            assert!((d - ap).norm() < 1e-8 * ap.norm().max(1.0));
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(airy_ai(c(41.0, 0.0)).is_err());
    }
}
