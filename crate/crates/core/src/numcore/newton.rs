use super::mat::Mat;
use super::solve::lu_factor;
use crate::{Error, Result};

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Damped Newton iteration on `F(x) = 0` with a finite-difference Jacobian.
///
/// Steps are halved (up to 30 times) whenever the residual norm does not
/// decrease. On failure the error carries the best iterate seen.
pub fn newton_solve(
    f: impl Fn(&[f64]) -> Vec<f64>,
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    newton_solve_jac(&f, |x| fd_jacobian(&f, x), x0, tol, max_iter)
}

/// Newton with a caller-supplied Jacobian.
pub fn newton_solve_jac(
    f: impl Fn(&[f64]) -> Vec<f64>,
    jac: impl Fn(&[f64]) -> Mat,
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut fnorm = norm(&fx);
    let mut best = x.clone();
    let mut best_norm = fnorm;

    for _ in 0..max_iter {
        if fnorm <= tol {
            return Ok(x);
        }
        let j = jac(&x);
        let neg_f: Vec<f64> = fx.iter().map(|v| -v).collect();
        let lu = lu_factor(&j)?;
        let step = lu.solve(&neg_f);
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + lambda * s).collect();
            let ft = f(&trial);
            let fn_trial = norm(&ft);
            if fn_trial.is_finite() && (fn_trial < fnorm || fn_trial <= tol) {
                x = trial;
                fx = ft;
                fnorm = fn_trial;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if fnorm < best_norm {
            best = x.clone();
            best_norm = fnorm;
        }
        if !accepted {
            break;
        }
    }
    if fnorm <= tol {
        return Ok(x);
    }
    Err(Error::NewtonNoConvergence { residual: best_norm, iters: max_iter, best })
}

fn fd_jacobian(f: &impl Fn(&[f64]) -> Vec<f64>, x: &[f64]) -> Mat {
    let fx = f(x);
    let n = x.len();
    let m = fx.len();
    let mut j = Mat::zeros(m, n);
    let mut xp = x.to_vec();
    for col in 0..n {
        let h = 1e-7 * (1.0 + x[col].abs());
        xp[col] = x[col] + h;
        let fp = f(&xp);
        xp[col] = x[col];
        for row in 0..m {
            j[(row, col)] = (fp[row] - fx[row]) / h;
        }
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_shift() {
        let x = newton_solve(|x| vec![x[0] - 3.0], &[0.0], 1e-12, 50).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn square_root_of_two() {
        let x = newton_solve(|x| vec![x[0] * x[0] - 2.0], &[1.0], 1e-12, 50).unwrap();
        assert!((x[0] - 1.41421356).abs() < 1e-7);
        assert!((x[0] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn linear_2d_single_step() {
        // Newton is exact in one step on a linear system.
        let f = |x: &[f64]| vec![2.0 * x[0] + x[1] - 5.0, x[0] - x[1] + 1.0];
        let x = newton_solve(f, &[0.0, 0.0], 1e-13, 2).unwrap();
        assert!((x[0] - 4.0 / 3.0).abs() < 1e-12);
        assert!((x[1] - 7.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn nonconvergence_carries_best_iterate() {
        // F(x) = x^2 + 1 has no real root.
        let r = newton_solve(|x| vec![x[0] * x[0] + 1.0], &[0.7], 1e-12, 8);
        match r {
            Err(Error::NewtonNoConvergence { best, .. }) => assert_eq!(best.len(), 1),
            other => panic!("expected NewtonNoConvergence, got {other:?}"),
        }
    }
}
