//! Nystrom discretization of symmetric trace-class kernel operators:
//! Fredholm determinants det(1 - theta K), resolvent kernels K (1 - K)^{-1}
//! with natural off-grid interpolation, and exact gap-count probabilities
//! from the discrete spectrum.

use crate::numcore::{sym_eigs, Mat, QuadratureRule, SymmetricSpectrum};
use crate::{Error, Result};
use std::sync::Arc;
use std::sync::OnceLock;

/// Conditioning gate: the resolvent refuses to evaluate when
/// 1 - lambda_max falls below this margin.
pub const RESOLVENT_GATE: f64 = 1e-8;

type KernelFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Quadrature-discretized symmetric kernel operator with cached spectrum.
/// The matrix is M_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j).
pub struct NystromOperator {
    pub rule: QuadratureRule,
    pub matrix: Mat,
    kernel: KernelFn,
    spectrum: OnceLock<SymmetricSpectrum>,
}

/// Build the Nystrom matrix for a symmetric continuous kernel on the rule's
/// nodes. Asymmetry beyond 1e-10 of the matrix scale is rejected.
pub fn discretize(
    kernel: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    rule: QuadratureRule,
) -> Result<NystromOperator> {
    let m = rule.len();
    let sw: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
    let mut mat = Mat::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = kernel(rule.nodes[i], rule.nodes[j]) * sw[i] * sw[j];
            mat[(i, j)] = v;
            if i != j {
                let back = kernel(rule.nodes[j], rule.nodes[i]) * sw[i] * sw[j];
                mat[(j, i)] = back;
            }
        }
    }
    let scale = mat.max_abs();
    if scale > 0.0 && mat.asymmetry() > 1e-10 * scale {
        return Err(Error::NotSymmetric { asym: mat.asymmetry() / scale, tol: 1e-10 });
    }
    // symmetrize the roundoff so the eigensolver sees an exact symmetric matrix
    for i in 0..m {
        for j in (i + 1)..m {
            let v = 0.5 * (mat[(i, j)] + mat[(j, i)]);
            mat[(i, j)] = v;
            mat[(j, i)] = v;
        }
    }
    Ok(NystromOperator { rule, matrix: mat, kernel: Arc::new(kernel), spectrum: OnceLock::new() })
}

impl NystromOperator {
    pub fn size(&self) -> usize {
        self.rule.len()
    }

    pub fn kernel_at(&self, x: f64, y: f64) -> f64 {
        (self.kernel)(x, y)
    }

    /// Cached spectrum (computed on first use).
    pub fn spectrum(&self) -> &SymmetricSpectrum {
        self.spectrum
            .get_or_init(|| sym_eigs(&self.matrix).expect("symmetric by construction"))
    }

    pub fn lambda_max(&self) -> f64 {
        self.spectrum().eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn trace(&self) -> f64 {
        (0..self.size()).map(|i| self.matrix[(i, i)]).sum()
    }

    fn gate(&self) -> Result<()> {
        let margin = 1.0 - self.lambda_max();
        if margin <= RESOLVENT_GATE {
            return Err(Error::IllConditionedResolvent { margin, gate: RESOLVENT_GATE });
        }
        Ok(())
    }

    /// det(1 - theta K) = prod_i (1 - theta lambda_i) over the cached spectrum.
    pub fn det1m(&self, theta: f64) -> f64 {
        self.spectrum()
            .eigenvalues
            .iter()
            .map(|&l| 1.0 - theta * l)
            .product()
    }

    /// Same determinant through a pivoted-elimination factorization of
    /// 1 - theta M; independent route kept as a cross-check.
    pub fn det1m_lu(&self, theta: f64) -> Result<f64> {
        let m = self.size();
        let mut a = Mat::identity(m);
        for i in 0..m {
            for j in 0..m {
                a[(i, j)] -= theta * self.matrix[(i, j)];
            }
        }
        crate::numcore::lu_det(&a)
    }

    /// Resolvent kernel R(x, y) of K (1 - K)^{-1} by the Nystrom natural
    /// interpolation formula
    /// R(x,y) = K(x,y) + sum_ij K(x, x_i) sqrt(w_i) [(1-M)^{-1}]_ij sqrt(w_j) K(x_j, y).
    pub fn resolvent(&self, x: f64, y: f64) -> Result<f64> {
        self.gate()?;
        let m = self.size();
        let spec = self.spectrum();
        let sw: Vec<f64> = self.rule.weights.iter().map(|w| w.sqrt()).collect();
        let kx: Vec<f64> = (0..m).map(|i| (self.kernel)(x, self.rule.nodes[i]) * sw[i]).collect();
        let ky: Vec<f64> = (0..m).map(|j| (self.kernel)(self.rule.nodes[j], y) * sw[j]).collect();
        // (1-M)^{-1} = Q diag(1/(1-lambda)) Q^T through the cached spectrum
        let mut acc = 0.0;
        for e in 0..m {
            let mut qx = 0.0;
            let mut qy = 0.0;
            for i in 0..m {
                qx += spec.eigenvectors[(i, e)] * kx[i];
                qy += spec.eigenvectors[(i, e)] * ky[i];
            }
            acc += qx * qy / (1.0 - spec.eigenvalues[e]);
        }
        Ok((self.kernel)(x, y) + acc)
    }

    /// Resolvent values on the quadrature grid, as the matrix
    /// L_ij = R(x_i, x_j) (vanilla kernel units, not weighted).
    pub fn resolvent_grid(&self) -> Result<Mat> {
        self.gate()?;
        let m = self.size();
        let spec = self.spectrum();
        // sqrt(w)-conjugated resolvent matrix: M (1-M)^{-1} = Q diag(mu) Q^T
        let mut weighted = Mat::zeros(m, m);
        for e in 0..m {
            let mu = spec.eigenvalues[e] / (1.0 - spec.eigenvalues[e]);
            for i in 0..m {
                let qi = spec.eigenvectors[(i, e)] * mu;
                if qi == 0.0 {
                    continue;
                }
                for j in 0..m {
                    weighted[(i, j)] += qi * spec.eigenvectors[(j, e)];
                }
            }
        }
        let sw: Vec<f64> = self.rule.weights.iter().map(|w| w.sqrt()).collect();
        let mut out = Mat::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                out[(i, j)] = weighted[(i, j)] / (sw[i] * sw[j]);
            }
        }
        Ok(out)
    }

    /// Exact occupation-number probabilities P(0..m_max) from the spectrum:
    /// P(m) = prod_i (1 - lambda_i) * e_m(mu), mu_i = lambda_i / (1 - lambda_i),
    /// with the elementary symmetric polynomials e_m from Newton's identities
    /// on descending-sorted mu.
    pub fn gap_probs(&self, m_max: usize) -> Result<Vec<f64>> {
        self.gate()?;
        let lambdas = &self.spectrum().eigenvalues;
        let det: f64 = lambdas.iter().map(|&l| 1.0 - l).product();
        let mut mu: Vec<f64> = lambdas.iter().map(|&l| l / (1.0 - l)).collect();
        mu.sort_by(|a, b| b.partial_cmp(a).unwrap());
        // power sums
        let mut power = vec![0.0; m_max + 1];
        for j in 1..=m_max {
            power[j] = mu.iter().map(|&m| m.powi(j as i32)).sum();
        }
        // Newton's identities: m e_m = sum_{j=1}^{m} (-1)^{j-1} e_{m-j} p_j
        let mut e = vec![0.0; m_max + 1];
        e[0] = 1.0;
        for m in 1..=m_max {
            let mut acc = 0.0;
            let mut sign = 1.0;
            for j in 1..=m {
                acc += sign * e[m - j] * power[j];
                sign = -sign;
            }
            e[m] = acc / m as f64;
        }
        Ok(e.iter().map(|&em| det * em).collect())
    }

    /// prod (1 - lambda_i) * prod (1 + mu_i): analytically the total mass
    /// sum_m P(m); deviation from 1 measures spectrum consistency.
    pub fn gap_prob_total(&self) -> f64 {
        let lambdas = &self.spectrum().eigenvalues;
        let det: f64 = lambdas.iter().map(|&l| 1.0 - l).product();
        let prod: f64 = lambdas.iter().map(|&l| 1.0 + l / (1.0 - l)).product();
        det * prod
    }
}
