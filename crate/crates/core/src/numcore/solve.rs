use super::mat::Mat;
use crate::{Error, Result};

/// Condition-number gate above which [`solve_linear`] refuses to answer.
pub const COND_GATE: f64 = 1e14;

/// LU factorization with partial pivoting.
pub struct Lu {
    lu: Mat,
    perm: Vec<usize>,
    sign: f64,
}

pub fn lu_factor(a: &Mat) -> Result<Lu> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("lu_factor requires a square matrix".into()));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let mut piv = k;
        let mut best = lu[(k, k)].abs();
        for i in (k + 1)..n {
            let v = lu[(i, k)].abs();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return Err(Error::IllConditioned { cond: f64::INFINITY });
        }
        if piv != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = t;
            }
            perm.swap(k, piv);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        for i in (k + 1)..n {
            let m = lu[(i, k)] / pivot;
            lu[(i, k)] = m;
            if m != 0.0 {
                for j in (k + 1)..n {
                    let delta = m * lu[(k, j)];
                    lu[(i, j)] -= delta;
                }
            }
        }
    }
    Ok(Lu { lu, perm, sign })
}

impl Lu {
    pub fn det(&self) -> f64 {
        let n = self.lu.rows();
        let mut d = self.sign;
        for i in 0..n {
            d *= self.lu[(i, i)];
        }
        d
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }

    /// Solve `A^T x = b` using the same factorization.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows();
        // A = P^T L U  =>  A^T = U^T L^T P
        let mut x = b.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(j, i)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= self.lu[(j, i)] * x[j];
            }
            x[i] = s;
        }
        let mut out = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            out[p] = x[i];
        }
        out
    }

    /// Hager-style estimate of `||A^{-1}||_1`.
    pub fn inv_norm_one_estimate(&self) -> f64 {
        let n = self.lu.rows();
        if n == 0 {
            return 0.0;
        }
        let mut x = vec![1.0 / n as f64; n];
        let mut est = 0.0;
        for _ in 0..5 {
            let y = self.solve(&x);
            est = y.iter().map(|v| v.abs()).sum();
            let xi: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
            let z = self.solve_transpose(&xi);
            let (mut jmax, mut zmax) = (0, 0.0);
            for (j, &v) in z.iter().enumerate() {
                if v.abs() > zmax {
                    zmax = v.abs();
                    jmax = j;
                }
            }
            let zx: f64 = z.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            if zmax <= zx {
                break;
            }
            x = vec![0.0; n];
            x[jmax] = 1.0;
        }
        est
    }
}

/// Determinant via elimination (the non-symmetric determinant route).
pub fn lu_det(a: &Mat) -> Result<f64> {
    Ok(lu_factor(a)?.det())
}

/// Solve `A x = b` with partial-pivot elimination.
///
/// Refuses matrices whose estimated condition number exceeds [`COND_GATE`];
/// the caller gets an explicit conditioning error instead of noise.
pub fn solve_linear(a: &Mat, b: &[f64]) -> Result<Vec<f64>> {
    if a.rows() != b.len() {
        return Err(Error::InvalidArgument("dimension mismatch in solve_linear".into()));
    }
    let f = lu_factor(a)?;
    let cond = a.norm_one() * f.inv_norm_one_estimate();
    if !cond.is_finite() || cond > COND_GATE {
        return Err(Error::IllConditioned { cond });
    }
    Ok(f.solve(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::test_rng::TestRng;

    #[test]
    fn identity_returns_rhs() {
        let a = Mat::identity(4);
        let b = vec![1.0, -2.0, 3.0, 0.5];
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_is_componentwise_division() {
        let mut a = Mat::zeros(3, 3);
        a[(0, 0)] = 2.0;
        a[(1, 1)] = -4.0;
        a[(2, 2)] = 0.5;
        let x = solve_linear(&a, &[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(x, vec![1.0, -0.5, 4.0]);
    }

    #[test]
    fn random_system_residual() {
        let mut rng = TestRng::new(11);
        let n = 10;
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = rng.uniform(-1.0, 1.0);
            }
            a[(i, i)] += 4.0; // keep it comfortably conditioned
        }
        let b: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let x = solve_linear(&a, &b).unwrap();
        let ax = a.mat_vec(&x);
        let xnorm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let res: f64 = ax
            .iter()
            .zip(b.iter())
            .map(|(u, v)| (u - v) * (u - v))
            .sum::<f64>()
            .sqrt();
        assert!(res <= 1e-10 * a.norm_one() * xnorm);
    }

    #[test]
    fn singular_matrix_rejected() {
        let mut a = Mat::zeros(2, 2);
        a[(0, 0)] = 1.0;
        a[(0, 1)] = 2.0;
        a[(1, 0)] = 2.0;
        a[(1, 1)] = 4.0;
        assert!(matches!(solve_linear(&a, &[1.0, 1.0]), Err(Error::IllConditioned { .. })));
    }

    #[test]
    fn transpose_solve_consistent() {
        let mut rng = TestRng::new(5);
        let n = 6;
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = rng.uniform(-1.0, 1.0);
            }
            a[(i, i)] += 3.0;
        }
        let b: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let f = lu_factor(&a).unwrap();
        let x = f.solve_transpose(&b);
        let atx = a.mat_tvec(&x);
        for i in 0..n {
            assert!((atx[i] - b[i]).abs() < 1e-11);
        }
    }
}
