use crate::{Error, Result};

/// Integrate `y' = f(t, y)` from `t0` to `t1` with the Dormand-Prince 5(4)
/// embedded pair and proportional step control at local tolerance `tol`.
pub fn integrate_ivp(
    f: impl Fn(f64, &[f64]) -> Vec<f64>,
    t0: f64,
    y0: &[f64],
    t1: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    if t0 == t1 {
        return Ok(y0.to_vec());
    }
    let dir = if t1 > t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = dir * (span / 100.0).min(0.1).max(span * 1e-10);
    let min_step = span * 1e-14;

    let mut k1 = f(t, &y);
    loop {
        if (t - t1).abs() <= min_step {
            return Ok(y);
        }
        if (t1 - t) * dir < h.abs() {
            h = t1 - t;
        }
        let (y5, y_err, k_last) = dp_step(&f, t, &y, &k1, h);
        // scaled error norm
        let mut err: f64 = 0.0;
        for i in 0..y.len() {
            let sc = tol * (1.0 + y[i].abs().max(y5[i].abs()));
            err = err.max((y_err[i] / sc).abs());
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            k1 = k_last; // FSAL
            if (t - t1).abs() <= min_step || (t1 - t) * dir <= 0.0 {
                return Ok(y);
            }
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        if h.abs() < min_step {
            return Err(Error::Stiffness { t });
        }
    }
}

/// One Dormand-Prince step; returns (5th-order solution, error estimate, last stage).
#[allow(clippy::type_complexity)]
fn dp_step(
    f: &impl Fn(f64, &[f64]) -> Vec<f64>,
    t: f64,
    y: &[f64],
    k1: &[f64],
    h: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    const E1: f64 = 5179.0 / 57600.0;
    const E3: f64 = 7571.0 / 16695.0;
    const E4: f64 = 393.0 / 640.0;
    const E5: f64 = -92097.0 / 339200.0;
    const E6: f64 = 187.0 / 2100.0;
    const E7: f64 = 1.0 / 40.0;

    let n = y.len();
    let stage = |coef: &[(f64, &Vec<f64>)]| -> Vec<f64> {
        let mut out = y.to_vec();
        for (c, k) in coef {
            for i in 0..n {
                out[i] += h * c * k[i];
            }
        }
        out
    };
    let k1v = k1.to_vec();
    let k2 = f(t + h / 5.0, &stage(&[(A21, &k1v)]));
    let k3 = f(t + 3.0 * h / 10.0, &stage(&[(A31, &k1v), (A32, &k2)]));
    let k4 = f(t + 4.0 * h / 5.0, &stage(&[(A41, &k1v), (A42, &k2), (A43, &k3)]));
    let k5 = f(
        t + 8.0 * h / 9.0,
        &stage(&[(A51, &k1v), (A52, &k2), (A53, &k3), (A54, &k4)]),
    );
    let k6 = f(
        t + h,
        &stage(&[(A61, &k1v), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    );
    let y5 = stage(&[(B1, &k1v), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = f(t + h, &y5);
    let mut err = vec![0.0; n];
    for i in 0..n {
        let y4 = y[i]
            + h * (E1 * k1v[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        err[i] = y5[i] - y4;
    }
    (y5, err, k7)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let y = integrate_ivp(|_, y| vec![y[0]], 0.0, &[1.0], 1.0, 1e-10).unwrap();
        assert!((y[0] - std::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn harmonic_energy_conserved() {
        let tol = 1e-10;
        let y = integrate_ivp(|_, y| vec![y[1], -y[0]], 0.0, &[1.0, 0.0], 10.0, tol).unwrap();
        let energy = y[0] * y[0] + y[1] * y[1];
        assert!((energy - 1.0).abs() < 10.0 * tol);
    }

    #[test]
    fn airy_ode_matches_maclaurin_series() {
        // y'' = t y from series initial data at 0, compared at t = 1 against
        // the two independent Maclaurin series f = 1 + t^3/6 + ... and
        // g = t + t^4/12 + ...
        let tol = 1e-11;
        let f_series = |t: f64| {
            let (mut acc, mut term) = (1.0, 1.0);
            for k in 1..40 {
                let k = k as f64;
                term *= t.powi(3) / ((3.0 * k) * (3.0 * k - 1.0));
                acc += term;
            }
            acc
        };
        let y = integrate_ivp(|t, y| vec![y[1], t * y[0]], 0.0, &[1.0, 0.0], 1.0, tol).unwrap();
        assert!((y[0] - f_series(1.0)).abs() < 10.0 * tol, "{} vs {}", y[0], f_series(1.0));
    }

    #[test]
    fn backwards_integration() {
        let y = integrate_ivp(|_, y| vec![y[0]], 1.0, &[std::f64::consts::E], 0.0, 1e-10).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-9);
    }
}
