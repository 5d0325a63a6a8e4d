use super::eig::tridiag_eigen;
use crate::{Error, Result};

/// Where a quadrature rule lives.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Interval { a: f64, b: f64 },
    HalfLine { endpoint: f64, direction: Direction, truncated_at: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// domain extends to -infinity from the endpoint
    Left,
    /// domain extends to +infinity from the endpoint
    Right,
}

/// Nodes and positive weights; nodes strictly increasing.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: Domain,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Affine image of this rule on `[a, b]`, assuming the rule lives on `[-1, 1]`.
    pub fn mapped_to(&self, a: f64, b: f64) -> QuadratureRule {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| w * half).collect(),
            domain: Domain::Interval { a, b },
        }
    }
}

/// Gauss-Legendre rule on `[-1, 1]` by Golub-Welsch: eigen-decompose the
/// symmetric tridiagonal Jacobi matrix of the Legendre recurrence; nodes are
/// its eigenvalues and each weight is twice the squared first eigenvector
/// component. Nodes are symmetrized about 0 afterwards so the rule is
/// antisymmetric to the last bit.
pub fn gauss_legendre(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::InvalidArgument("gauss_legendre requires m >= 1".into()));
    }
    let diag = vec![0.0; m];
    let off: Vec<f64> = (1..m)
        .map(|k| {
            let k = k as f64;
            k / ((4.0 * k * k - 1.0).sqrt())
        })
        .collect();
    let spec = tridiag_eigen(&diag, &off)?;
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|j| {
            let v0 = spec.eigenvectors[(0, j)];
            (spec.eigenvalues[j], 2.0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    for i in 0..m / 2 {
        let j = m - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -x;
        nodes[j] = x;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights, domain: Domain::Interval { a: -1.0, b: 1.0 } })
}

/// Concatenate affine images of `base` over the given panels.
/// Panels must be finite, nonempty and non-overlapping.
pub fn composite_rule(base: &QuadratureRule, panels: &[(f64, f64)]) -> Result<QuadratureRule> {
    if panels.is_empty() {
        return Err(Error::InvalidArgument("composite_rule needs at least one panel".into()));
    }
    let mut sorted = panels.to_vec();
    sorted.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    for w in sorted.windows(2) {
        if w[0].1 > w[1].0 + 1e-15 * w[1].0.abs().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "panels overlap: ({}, {}) and ({}, {})",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }
    let mut nodes = Vec::with_capacity(base.len() * sorted.len());
    let mut weights = Vec::with_capacity(base.len() * sorted.len());
    for &(a, b) in &sorted {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidArgument(format!("bad panel ({a}, {b})")));
        }
        let local = base.mapped_to(a, b);
        nodes.extend(local.nodes);
        weights.extend(local.weights);
    }
    let (a, b) = (sorted[0].0, sorted[sorted.len() - 1].1);
    Ok(QuadratureRule { nodes, weights, domain: Domain::Interval { a, b } })
}

/// Exponent below which a declared integrand envelope is considered zero
/// (the double-precision floor 1e-300).
const ENVELOPE_FLOOR_LOG: f64 = 690.7755278982137; // -ln(1e-300)

/// Quadrature over a half-line `(-inf, endpoint]` or `[endpoint, +inf)` for
/// integrands whose magnitude is bounded by `exp(-|x - endpoint| / decay_scale)`.
///
/// Geometric panels (ratio 2) march away from the endpoint, starting at one
/// decay length, and stop once the declared envelope falls below 1e-300.
pub fn halfline_rule(
    endpoint: f64,
    direction: Direction,
    decay_scale: f64,
    m_per_panel: usize,
) -> Result<QuadratureRule> {
    if !(decay_scale > 0.0 && decay_scale.is_finite()) {
        return Err(Error::InvalidArgument("decay_scale must be positive".into()));
    }
    if m_per_panel == 0 {
        return Err(Error::InvalidArgument("m_per_panel must be >= 1".into()));
    }
    let cutoff = decay_scale * ENVELOPE_FLOOR_LOG;
    let base = gauss_legendre(m_per_panel)?;
    let mut panels = Vec::new();
    let mut dist = 0.0;
    let mut len = decay_scale;
    while dist < cutoff {
        let next = (dist + len).min(cutoff);
        let (a, b) = match direction {
            Direction::Right => (endpoint + dist, endpoint + next),
            Direction::Left => (endpoint - next, endpoint - dist),
        };
        panels.push((a, b));
        dist = next;
        len *= 2.0;
    }
    let mut rule = composite_rule(&base, &panels)?;
    rule.domain = Domain::HalfLine {
        endpoint,
        direction,
        truncated_at: match direction {
            Direction::Right => endpoint + cutoff,
            Direction::Left => endpoint - cutoff,
        },
    };
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::test_rng::TestRng;

    #[test]
    fn one_point_rule_is_midpoint() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert_eq!(r.weights, vec![2.0]);
    }

    #[test]
    fn two_point_nodes_are_inverse_sqrt3() {
        let r = gauss_legendre(2).unwrap();
        let x = 0.5773502691896257;
        assert!((r.nodes[0] + x).abs() < 1e-15);
        assert!((r.nodes[1] - x).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-14);
        assert!((r.weights[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn three_point_rule_integrates_quartic() {
        let r = gauss_legendre(3).unwrap();
        let v = r.integrate(|x| x.powi(4));
        assert!((v - 0.4).abs() < 1e-15, "got {v}");
    }

    #[test]
    fn exactness_on_random_polynomials() {
        let mut rng = TestRng::new(99);
        for m in [2usize, 5, 11, 24, 64] {
            let deg = 2 * m - 1;
            let coeffs: Vec<f64> = (0..=deg).map(|_| rng.uniform(-1.0, 1.0)).collect();
            let r = gauss_legendre(m).unwrap();
            let got = r.integrate(|x| {
                let mut acc = 0.0;
                for &c in coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            });
            // exact integral: only even powers contribute on [-1, 1]
            let mut want = 0.0;
            for (k, &c) in coeffs.iter().enumerate() {
                if k % 2 == 0 {
                    want += 2.0 * c / (k as f64 + 1.0);
                }
            }
            assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                "m={m}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn weights_positive_nodes_increasing() {
        let r = gauss_legendre(40).unwrap();
        assert!(r.weights.iter().all(|&w| w > 0.0));
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn composite_single_panel_identity() {
        let base = gauss_legendre(5).unwrap();
        let c = composite_rule(&base, &[(-1.0, 1.0)]).unwrap();
        for i in 0..base.len() {
            assert!((c.nodes[i] - base.nodes[i]).abs() < 1e-15);
            assert!((c.weights[i] - base.weights[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn composite_total_weight_and_linear_integral() {
        let base = gauss_legendre(2).unwrap();
        let c = composite_rule(&base, &[(0.0, 1.0), (1.0, 2.0)]).unwrap();
        let total: f64 = c.weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        let v = c.integrate(|x| x);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn composite_rejects_empty_and_overlap() {
        let base = gauss_legendre(2).unwrap();
        assert!(composite_rule(&base, &[]).is_err());
        assert!(composite_rule(&base, &[(0.0, 1.0), (0.5, 2.0)]).is_err());
    }

    #[test]
    fn halfline_left_exponential() {
        let r = halfline_rule(0.0, Direction::Left, 0.5, 24).unwrap();
        let v = r.integrate(|x| (2.0 * x).exp());
        assert!((v - 0.5).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn halfline_right_exponential() {
        let r = halfline_rule(0.0, Direction::Right, 1.0, 24).unwrap();
        let v = r.integrate(|x| (-x).exp());
        assert!((v - 1.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn halfline_zero_integrand() {
        let r = halfline_rule(3.0, Direction::Right, 1.0, 8).unwrap();
        assert_eq!(r.integrate(|_| 0.0), 0.0);
    }

    #[test]
    fn halfline_stable_under_m_doubling() {
        let r1 = halfline_rule(1.0, Direction::Right, 0.7, 24).unwrap();
        let r2 = halfline_rule(1.0, Direction::Right, 0.7, 48).unwrap();
        let f = |x: f64| (-(x - 1.0) / 0.7).exp() * (1.0 + x).ln();
        let (v1, v2) = (r1.integrate(f), r2.integrate(f));
        assert!((v1 - v2).abs() <= 1e-10 * v2.abs());
    }

    #[test]
    fn halfline_rejects_bad_scale() {
        assert!(halfline_rule(0.0, Direction::Left, 0.0, 8).is_err());
        assert!(halfline_rule(0.0, Direction::Left, -1.0, 8).is_err());
    }
}
