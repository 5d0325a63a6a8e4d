use super::mat::Mat;
use crate::{Error, Result};

/// Full spectrum of a real symmetric matrix, eigenvalues sorted descending
/// with the matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SymmetricSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Mat,
}

impl SymmetricSpectrum {
    /// Product of all eigenvalues (the determinant of the original matrix).
    pub fn det(&self) -> f64 {
        self.eigenvalues.iter().product()
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

const SYM_TOL: f64 = 1e-12;

/// Eigendecomposition of a symmetric matrix via Householder tridiagonalization
/// followed by implicit-shift QL with eigenvector accumulation.
pub fn sym_eigs(a: &Mat) -> Result<SymmetricSpectrum> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("sym_eigs requires a square matrix".into()));
    }
    let scale = a.max_abs();
    let asym = a.asymmetry();
    if scale > 0.0 && asym > SYM_TOL * scale {
        return Err(Error::NotSymmetric { asym: asym / scale, tol: SYM_TOL });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(SymmetricSpectrum { eigenvalues: vec![], eigenvectors: Mat::zeros(0, 0) });
    }
    let mut z = a.clone();
    // symmetrize exactly so the decomposition sees one consistent matrix
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (z[(i, j)] + z[(j, i)]);
            z[(i, j)] = v;
            z[(j, i)] = v;
        }
    }
    let (mut d, mut e) = tred2(&mut z);
    // tred2 stores the subdiagonal in positions 1..n; tqli wants e[i]
    // coupling entries i and i+1
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    tqli(&mut d, &mut e, Some(&mut z))?;
    sort_spectrum_desc(&mut d, Some(&mut z));
    Ok(SymmetricSpectrum { eigenvalues: d, eigenvectors: z })
}

/// Eigenvalues of a symmetric tridiagonal matrix, sorted descending.
/// `off[i]` couples entries `i` and `i+1`. No eigenvectors are formed,
/// which keeps repeated Monte Carlo solves cheap.
pub fn tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    assert!(off.len() + 1 == diag.len() || diag.is_empty());
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    tqli(&mut d, &mut e, None)?;
    d.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(d)
}

/// Eigendecomposition of a symmetric tridiagonal matrix with eigenvectors.
pub fn tridiag_eigen(diag: &[f64], off: &[f64]) -> Result<SymmetricSpectrum> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = Mat::identity(n);
    tqli(&mut d, &mut e, Some(&mut z))?;
    sort_spectrum_desc(&mut d, Some(&mut z));
    Ok(SymmetricSpectrum { eigenvalues: d, eigenvectors: z })
}

fn sort_spectrum_desc(d: &mut [f64], z: Option<&mut Mat>) {
    let n = d.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap());
    let old_d = d.to_vec();
    for (new, &oldi) in idx.iter().enumerate() {
        d[new] = old_d[oldi];
    }
    if let Some(z) = z {
        let old = z.clone();
        for (new, &oldi) in idx.iter().enumerate() {
            for r in 0..n {
                z[(r, new)] = old[(r, oldi)];
            }
        }
    }
}

/// Householder reduction of `a` to tridiagonal form; `a` is overwritten with
/// the accumulated orthogonal transform. Returns (diagonal, subdiagonal),
/// where the subdiagonal is stored in positions 1..n.
fn tred2(a: &mut Mat) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[(i, k)].abs();
            }
            if scale == 0.0 {
                e[i] = a[(i, l)];
            } else {
                for k in 0..=l {
                    a[(i, k)] /= scale;
                    h += a[(i, k)] * a[(i, k)];
                }
                let f = a[(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[(i, l)] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    a[(j, i)] = a[(i, j)] / h;
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += a[(j, k)] * a[(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g_acc += a[(k, j)] * a[(i, k)];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a[(i, j)];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let delta = f * e[k] + g * a[(i, k)];
                        a[(j, k)] -= delta;
                    }
                }
            }
        } else {
            e[i] = a[(i, l)];
        }
        d[i] = h;
    }

    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a[(i, k)] * a[(k, j)];
                }
                for k in 0..i {
                    let delta = g * a[(k, i)];
                    a[(k, j)] -= delta;
                }
            }
        }
        d[i] = a[(i, i)];
        a[(i, i)] = 1.0;
        for j in 0..i {
            a[(j, i)] = 0.0;
            a[(i, j)] = 0.0;
        }
    }
    (d, e)
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
/// `e[i]` couples entries `i` and `i+1`; `e[n-1]` must be zero on entry.
/// If `z` is given, rotations are accumulated into its columns.
fn tqli(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Mat>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::EigenNoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut i = m;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        f = z[(k, i + 1)];
                        z[(k, i + 1)] = s * z[(k, i)] + c * f;
                        z[(k, i)] = c * z[(k, i)] - s * f;
                    }
                }
                f = s * e[i]; // keep borrowck simple; value unused past here
                let _ = f;
            }
            if r == 0.0 && i > l {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::test_rng::TestRng;

    fn residual(a: &Mat, s: &SymmetricSpectrum) -> f64 {
        let n = a.rows();
        let mut worst = 0.0f64;
        for j in 0..n {
            let v: Vec<f64> = (0..n).map(|i| s.eigenvectors[(i, j)]).collect();
            let av = a.mat_vec(&v);
            let mut res = 0.0;
            for i in 0..n {
                res += (av[i] - s.eigenvalues[j] * v[i]).powi(2);
            }
            worst = worst.max(res.sqrt());
        }
        worst
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let a = Mat::identity(3);
        let s = sym_eigs(&a).unwrap();
        for &l in &s.eigenvalues {
            assert!((l - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn two_by_two_swap() {
        let mut a = Mat::zeros(2, 2);
        a[(0, 1)] = 1.0;
        a[(1, 0)] = 1.0;
        let s = sym_eigs(&a).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_symmetric_residuals_and_orthonormality() {
        let mut rng = TestRng::new(7);
        for n in [3usize, 8, 25, 60] {
            let mut a = Mat::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let v = rng.uniform(-1.0, 1.0);
                    a[(i, j)] = v;
                    a[(j, i)] = v;
                }
            }
            let s = sym_eigs(&a).unwrap();
            let norm = a.max_abs() * n as f64;
            assert!(residual(&a, &s) <= 1e-12 * norm, "residual too large at n={n}");
            // orthonormality
            for p in 0..n {
                for q in p..n {
                    let mut dot = 0.0;
                    for i in 0..n {
                        dot += s.eigenvectors[(i, p)] * s.eigenvectors[(i, q)];
                    }
                    let target = if p == q { 1.0 } else { 0.0 };
                    assert!((dot - target).abs() < 1e-12, "orthonormality {p},{q}");
                }
            }
            // trace identity
            let tr: f64 = (0..n).map(|i| a[(i, i)]).sum();
            assert!((tr - s.trace()).abs() <= 1e-11 * tr.abs().max(1.0));
        }
    }

    #[test]
    fn determinant_matches_lu_oracle() {
        let mut rng = TestRng::new(42);
        let n = 8;
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = rng.uniform(-1.0, 1.0);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        let s = sym_eigs(&a).unwrap();
        let lu_det = crate::numcore::solve::lu_det(&a).unwrap();
        assert!(
            (s.det() - lu_det).abs() <= 1e-10 * lu_det.abs().max(1e-30),
            "eig det {} vs lu det {}",
            s.det(),
            lu_det
        );
    }

    #[test]
    fn rejects_asymmetric() {
        let mut a = Mat::zeros(2, 2);
        a[(0, 1)] = 1.0;
        a[(1, 0)] = 1.0 + 1e-6;
        assert!(matches!(sym_eigs(&a), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn tridiagonal_values_match_dense_path() {
        let mut rng = TestRng::new(3);
        let n = 40;
        let d: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let e: Vec<f64> = (0..n - 1).map(|_| rng.uniform(0.1, 1.0)).collect();
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = d[i];
            if i + 1 < n {
                a[(i, i + 1)] = e[i];
                a[(i + 1, i)] = e[i];
            }
        }
        let dense = sym_eigs(&a).unwrap();
        let fast = tridiag_eigenvalues(&d, &e).unwrap();
        for (x, y) in dense.eigenvalues.iter().zip(fast.iter()) {
            assert!((x - y).abs() < 1e-12 * (1.0 + x.abs()));
        }
    }
}
