use crate::fredholm::{discretize, NystromOperator};
use crate::numcore::gauss_legendre;
use crate::specfun::ai_pair_real;
use crate::{Error, Result};

/// Right end of every Airy window: Ai(14)^2 < 1e-30, so the tail beyond is
/// numerically invisible.
pub const WINDOW_END: f64 = 14.0;

/// Determinant gate: alpha below this needs more than double precision.
pub const TW_ALPHA_GATE: f64 = -7.0;
/// Resolvent gate (stricter: resolvents amplify conditioning).
pub const KERNEL_ALPHA_GATE: f64 = -6.0;

/// Default quadrature resolution of a window.
pub const DEFAULT_RESOLUTION: usize = 160;

/// The Airy kernel (Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y), with the
/// l'Hopital diagonal Ai'(x)^2 - x Ai(x)^2.
pub fn airy_kernel(x: f64, y: f64) -> f64 {
    let (ax, apx) = ai_pair_real(x).expect("airy validated range");
    if (x - y).abs() > 1e-8 {
        let (ay, apy) = ai_pair_real(y).expect("airy validated range");
        (ax * apy - apx * ay) / (x - y)
    } else {
        apx * apx - x * ax * ax
    }
}

/// Discretized Airy operator on [alpha, 14].
pub struct AiryWindow {
    pub alpha: f64,
    pub resolution: usize,
    pub op: NystromOperator,
}

impl AiryWindow {
    pub fn new(alpha: f64, resolution: usize) -> Result<AiryWindow> {
        if alpha < TW_ALPHA_GATE {
            return Err(Error::OutOfRange(format!(
                "alpha = {alpha} below the determinant gate {TW_ALPHA_GATE}"
            )));
        }
        if alpha >= WINDOW_END - 0.5 {
            return Err(Error::InvalidArgument("window start too close to its end".into()));
        }
        let rule = gauss_legendre(resolution)?.mapped_to(alpha, WINDOW_END);
        let op = discretize(airy_kernel, rule)?;
        Ok(AiryWindow { alpha, resolution, op })
    }
}

/// Tracy-Widom CDF value by the Fredholm-determinant route.
pub fn tw_fredholm(alpha: f64, resolution: usize) -> Result<f64> {
    Ok(AiryWindow::new(alpha, resolution)?.op.det1m(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn airy_kernel_symmetry() {
        let a = airy_kernel(0.5, 1.5);
        let b = airy_kernel(1.5, 0.5);
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn airy_kernel_diagonal_consistent() {
        let d = airy_kernel(1.0, 1.0);
        let near = airy_kernel(1.0, 1.0 + 1e-6);
        assert!((d - near).abs() < 1e-6, "{d} vs {near}");
    }

    #[test]
    fn airy_kernel_decays() {
        assert!(airy_kernel(8.0, 8.0) < 1e-12);
    }

    #[test]
    fn window_spectrum_in_unit_interval() {
        let w = AiryWindow::new(-4.0, 140).unwrap();
        for &l in &w.op.spectrum().eigenvalues {
            assert!(l > -1e-10 && l < 1.0);
        }
        assert!(ai_pair_real(WINDOW_END).unwrap().0.powi(2) < 1e-30);
    }

    #[test]
    fn tw_limits() {
        // far right: empty spectrum, determinant 1
        let v = tw_fredholm(6.0, 120).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "F(6) = {v}");
        // monotone nondecreasing in alpha
        let mut prev = 0.0;
        for alpha in [-4.0, -2.0, 0.0, 2.0] {
            let f = tw_fredholm(alpha, 140).unwrap();
            assert!(f >= prev, "F not monotone at {alpha}");
            assert!(f > 0.0 && f <= 1.0);
            prev = f;
        }
    }

    #[test]
    fn tw_gate_fires() {
        assert!(tw_fredholm(-7.5, 120).is_err());
    }
}
