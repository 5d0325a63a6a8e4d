//! Equilibrium measures for even one-cut polynomial potentials: the free
//! minimizer of the logarithmic energy, the constrained minimizer with a
//! pinned right endpoint, their densities, g- and phi-functions, and the
//! edge scaling constant.
//!
//! For a polynomial potential everything reduces to Laurent coefficients at
//! infinity: the Stieltjes transform of the minimizer on [b, c] is
//!     G(z) = (V'(z) - sqrt((z-b)/(z-c)) P(z)) / 2,
//! where P is the polynomial part of V'(s) sqrt((s-c)/(s-b)) at infinity and
//! the endpoint equations say the 1/s coefficient of that product equals 2.
//! The density is psi(x) = -P(x) sqrt((x-b)/(c-x)) / (2 pi); pinning c away
//! from the free edge leaves P(c) < 0 and an inverse-square-root edge term,
//! while at the free edge P(c) = 0 and square-root vanishing is restored.

use crate::numcore::{gauss_legendre, newton_solve, QuadratureRule};
use crate::{Error, Result};
use num_complex::Complex64;

const PI: f64 = std::f64::consts::PI;

/// Real polynomial potential V(x) with even degree and positive leading
/// coefficient; coefficients are ascending in the power of x.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    coeffs: Vec<f64>,
}

impl Potential {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        let mut c = coeffs;
        while c.len() > 1 && c.last() == Some(&0.0) {
            c.pop();
        }
        let deg = c.len().saturating_sub(1);
        if deg == 0 || deg % 2 != 0 {
            return Err(Error::UnsupportedPotential(format!(
                "degree must be even and positive, got {deg}"
            )));
        }
        if *c.last().unwrap() <= 0.0 {
            return Err(Error::UnsupportedPotential("leading coefficient must be positive".into()));
        }
        Ok(Potential { coeffs: c })
    }

    /// The scaled-GUE potential 2 x^2.
    pub fn gue() -> Self {
        Potential { coeffs: vec![0.0, 0.0, 2.0] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.coeffs, x)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn deriv_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect()
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        horner(&self.deriv_coeffs(), x)
    }

    /// V(scale * x) as a new potential.
    pub fn rescaled(&self, scale: f64) -> Potential {
        let mut s = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let v = c * s;
                s *= scale;
                v
            })
            .collect();
        Potential { coeffs }
    }

    fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, &c)| k % 2 == 0 || c.abs() <= 1e-14 * self.max_coeff())
    }

    fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |a, &c| a.max(c.abs()))
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Coefficients t_k of (1 - q/s)^alpha = sum_k t_k s^{-k}, k = 0..n.
fn binom_series(alpha: f64, q: f64, n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n + 1];
    t[0] = 1.0;
    for k in 1..=n {
        let kf = k as f64;
        t[k] = t[k - 1] * (alpha - kf + 1.0) / kf * (-q);
    }
    t
}

fn series_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    for (i, &ai) in a.iter().enumerate().take(n + 1) {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Laurent data of V'(s) sqrt((s-c)/(s-b)): the polynomial part and the
/// inverse-power coefficients c_{-1}, c_{-2}, ... (index 1, 2 ... in `neg`).
struct EdgeExpansion {
    poly: Vec<f64>,
    neg: Vec<f64>,
}

fn edge_expansion(dv: &[f64], b: f64, c: f64, n_neg: usize) -> EdgeExpansion {
    let n = dv.len() + n_neg + 2;
    let top = binom_series(0.5, c, n);
    let bot = binom_series(-0.5, b, n);
    let ratio = series_mul(&top, &bot, n);
    let mut poly = vec![0.0; dv.len()];
    let mut neg = vec![0.0; n_neg + 1];
    for (j, &d) in dv.iter().enumerate() {
        if d == 0.0 {
            continue;
        }
        for (k, &r) in ratio.iter().enumerate() {
            let e = j as i64 - k as i64;
            if e >= 0 {
                poly[e as usize] += d * r;
            } else {
                let m = (-e) as usize;
                if m <= n_neg {
                    neg[m] += d * r;
                }
            }
        }
    }
    EdgeExpansion { poly, neg }
}

/// Shared representation of a one-cut minimizer on [b, c]:
/// psi(x) = -P(x) sqrt((x-b)/(c-x)) / (2 pi).
#[derive(Clone, Debug)]
pub struct MeasureRep {
    pub potential: Potential,
    pub b: f64,
    pub c: f64,
    /// P = polynomial part of V'(s) sqrt((s-c)/(s-b))
    pub p: Vec<f64>,
    /// P1(x) = (P(x) - P(c)) / (x - c)
    pub p1: Vec<f64>,
}

impl MeasureRep {
    fn build(potential: Potential, b: f64, c: f64) -> Self {
        let dv = potential.deriv_coeffs();
        let exp = edge_expansion(&dv, b, c, 2);
        let p = exp.poly;
        // synthetic division by (x - c)
        let mut p1 = vec![0.0; p.len().saturating_sub(1)];
        let mut carry = 0.0;
        for k in (1..p.len()).rev() {
            carry = p[k] + carry * c;
            p1[k - 1] = carry;
        }
        MeasureRep { potential, b, c, p, p1 }
    }

    pub fn p_at(&self, x: f64) -> f64 {
        horner(&self.p, x)
    }

    pub fn p1_at(&self, x: f64) -> f64 {
        horner(&self.p1, x)
    }

    /// Density, stable at both edges via the split
    /// psi = [-P(c)] sqrt(x-b) / (2 pi sqrt(c-x)) + sqrt((x-b)(c-x)) P1(x) / (2 pi).
    pub fn psi(&self, x: f64) -> f64 {
        if x <= self.b || x >= self.c {
            return 0.0;
        }
        let sb = (x - self.b).sqrt();
        let sc = (self.c - x).sqrt();
        let hard = -self.p_at(self.c) * sb / (2.0 * PI * sc);
        let soft = sb * sc * self.p1_at(x) / (2.0 * PI);
        hard + soft
    }

    /// Total mass by quadrature with the substitution x = m + r cos(theta),
    /// which absorbs both edge singularities.
    pub fn mass(&self, theta_nodes: usize) -> f64 {
        let rule = gauss_legendre(theta_nodes).expect("fixed rule").mapped_to(0.0, PI);
        let m = 0.5 * (self.b + self.c);
        let r = 0.5 * (self.c - self.b);
        rule.integrate(|t| {
            let x = m + r * t.cos();
            self.psi(x) * r * t.sin()
        })
    }

    /// Stieltjes transform G(z) = (V'(z) - sqrt((z-b)/(z-c)) P(z)) / 2
    /// for z off [b, c]; principal square roots, ratio -> 1 at infinity.
    pub fn stieltjes(&self, z: Complex64) -> Complex64 {
        let num = (z - self.b).sqrt();
        let den = (z - self.c).sqrt();
        let vp = {
            let mut acc = Complex64::new(0.0, 0.0);
            for &c in self.potential.deriv_coeffs().iter().rev() {
                acc = acc * z + c;
            }
            acc
        };
        let p = {
            let mut acc = Complex64::new(0.0, 0.0);
            for &c in self.p.iter().rev() {
                acc = acc * z + c;
            }
            acc
        };
        (vp - num / den * p) / 2.0
    }
}

/// The free (unconstrained) equilibrium measure, rescaled so its right edge
/// sits at 1. `scale` is the right edge of the input potential's measure.
#[derive(Clone, Debug)]
pub struct EquilibriumMeasure {
    pub rep: MeasureRep,
    /// analytic density factor: psi(x) = sqrt((x-b)(1-x)) h(x) / (2 pi)
    pub h: Vec<f64>,
    /// edge coefficient: psi(x) ~ (1-x)^{1/2} beta1 as x -> 1
    pub beta1: f64,
    /// Lagrange constant of the Euler-Lagrange equations
    pub ell: f64,
    /// edge scaling constant (pi beta1)^{2/3}, equivalently (beta_hat/2)^{2/3}
    /// for the coefficient beta_hat of the unnormalized factor R^{1/2} h;
    /// this is the constant under which n phi(z) = (4/3) zeta^{3/2} maps the
    /// edge to the Airy variable zeta = c_V n^{2/3} (z - 1)
    pub c_v: f64,
    /// right edge of the original, un-rescaled measure
    pub scale: f64,
}

impl EquilibriumMeasure {
    pub fn band(&self) -> (f64, f64) {
        (self.rep.b, self.rep.c)
    }

    pub fn psi(&self, x: f64) -> f64 {
        self.rep.psi(x)
    }

    pub fn h_at(&self, x: f64) -> f64 {
        horner(&self.h, x)
    }

    /// The rescaled potential whose equilibrium measure this is.
    pub fn potential(&self) -> &Potential {
        &self.rep.potential
    }
}

/// Constrained minimizer with the right endpoint pinned at `c`.
#[derive(Clone, Debug)]
pub struct ConstrainedMeasure {
    pub rep: MeasureRep,
    /// the pinned endpoint
    pub c: f64,
    /// the solved left endpoint
    pub b: f64,
    /// constant of the inverse-square-root edge term
    pub c_const: f64,
}

impl ConstrainedMeasure {
    pub fn psi(&self, x: f64) -> f64 {
        self.rep.psi(x)
    }

    /// Coefficient function of the (c-x)^{1/2} edge term.
    pub fn beta_soft(&self, x: f64) -> f64 {
        (x - self.b).max(0.0).sqrt() * self.rep.p1_at(x) / (2.0 * PI)
    }

    /// Coefficient function of the (c-x)^{-1/2} edge term.
    pub fn beta_hard(&self, x: f64) -> f64 {
        self.c_const * (x - self.b).max(0.0).sqrt() / (2.0 * PI)
    }
}

/// Solve the free problem for an even one-cut potential and rescale the
/// right edge to 1. Newton runs on the single endpoint equation
/// c_{-2}[V'(s)/sqrt(s^2 - a^2)] = 2.
pub fn solve_full_line(v: &Potential) -> Result<EquilibriumMeasure> {
    if !v.is_even() {
        return Err(Error::UnsupportedPotential(
            "only even potentials are supported (odd coefficients present)".into(),
        ));
    }
    let dv = v.deriv_coeffs();
    let cm2 = |a: f64| -> f64 {
        // c_{-2} of V'/sqrt(s^2-a^2) = sum_k dv[2k-1] C(2k,k) (a/2)^{2k}
        let mut acc = 0.0;
        let mut binom = 1.0;
        let mut pow = 1.0;
        for k in 1.. {
            let kf = k as f64;
            binom *= (2.0 * kf - 1.0) * 2.0 / kf;
            pow *= (a / 2.0) * (a / 2.0);
            let idx = 2 * k - 1;
            if idx >= dv.len() {
                break;
            }
            acc += dv[idx] * binom * pow;
        }
        acc
    };
    // exact for a pure leading term; good start in general
    let d = v.degree();
    let lead = *v.coeffs.last().unwrap();
    let central: f64 = {
        let mut b = 1.0;
        for k in 1..=(d / 2) {
            let kf = k as f64;
            b *= (2.0 * kf - 1.0) * 2.0 / kf;
        }
        b
    };
    let a0 = 2.0 * (2.0 / (lead * d as f64 * central)).powf(1.0 / d as f64);
    let sol = newton_solve(|x| vec![cm2(x[0]) - 2.0], &[a0], 1e-13, 100)?;
    let a = sol[0];
    if !(a > 0.0) {
        return Err(Error::UnsupportedPotential("endpoint solve produced a <= 0".into()));
    }

    let scaled = v.rescaled(a);
    let rep = MeasureRep::build(scaled, -1.0, 1.0);
    // regularity gate: h = P1 must stay strictly positive on the band
    let mut hmin = f64::INFINITY;
    for i in 0..=400 {
        let x = -1.0 + 2.0 * i as f64 / 400.0;
        hmin = hmin.min(rep.p1_at(x));
    }
    if hmin <= 0.0 {
        return Err(Error::UnsupportedPotential(format!(
            "density factor reaches {hmin:.3e} on the band: potential is not one-cut regular"
        )));
    }
    // P(1) must vanish for the free problem: consistency of the rescale
    let p_edge = rep.p_at(1.0);
    if p_edge.abs() > 1e-8 * rep.p1_at(1.0).abs().max(1.0) {
        return Err(Error::InternalConsistency(format!(
            "free-edge coefficient P(1) = {p_edge:.3e} did not vanish"
        )));
    }
    let h = rep.p1.clone();
    let beta1 = 2f64.sqrt() * horner(&h, 1.0) / (2.0 * PI);
    let c_v = (PI * beta1).powf(2.0 / 3.0);
    let ell = lagrange_constant(&rep);
    Ok(EquilibriumMeasure { rep, h, beta1, ell, c_v, scale: a })
}

/// Solve the constrained problem with pinned right endpoint `c` for a
/// potential already normalized so the free right edge is at 1.
/// For c >= 1 the free measure is returned unchanged.
pub fn solve_constrained(v: &Potential, c: f64) -> Result<ConstrainedMeasure> {
    let free = solve_full_line(v)?;
    if (free.scale - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "solve_constrained expects a normalized potential (free edge at 1, got {})",
            free.scale
        )));
    }
    if c >= 1.0 {
        let rep = free.rep;
        return Ok(ConstrainedMeasure { c: rep.c, b: rep.b, c_const: -rep.p_at(1.0), rep });
    }
    if c <= free.rep.b {
        return Err(Error::ConstraintInfeasible(format!(
            "pinned endpoint {c} is at or below the free left edge {}",
            free.rep.b
        )));
    }
    let dv = v.deriv_coeffs();
    let cm1 = |b: f64| -> f64 {
        let exp = edge_expansion(&dv, b, c, 1);
        exp.neg[1]
    };
    let sol = newton_solve(|x| vec![cm1(x[0]) - 2.0], &[free.rep.b], 1e-13, 100)?;
    let b = sol[0];
    if b >= c {
        return Err(Error::ConstraintInfeasible("left endpoint crossed the pinned endpoint".into()));
    }
    let rep = MeasureRep::build(v.clone(), b, c);
    let c_const = -rep.p_at(c);
    if c_const < -1e-10 {
        return Err(Error::ConstraintInfeasible(format!(
            "hard-edge coefficient is negative ({c_const:.3e}); density would go negative"
        )));
    }
    // positivity gate across the band
    for i in 1..400 {
        let x = b + (c - b) * i as f64 / 400.0;
        if rep.psi(x) < -1e-12 {
            return Err(Error::ConstraintInfeasible(format!(
                "density negative at x = {x}: constraint too deep in the bulk"
            )));
        }
    }
    Ok(ConstrainedMeasure { c, b, c_const, rep })
}

/// Density evaluation (zero outside the band).
pub fn density_at(rep: &MeasureRep, x: f64) -> f64 {
    rep.psi(x)
}

/// ell = 2 g(c) - V(c) at the right endpoint, where
/// g(c) = g(S) - int_c^S G and g(S) = log S - int_S^inf (G - 1/s).
fn lagrange_constant(rep: &MeasureRep) -> f64 {
    let s_big = rep.c.abs().max(rep.b.abs()) + 3.0;
    let g_edge = g_at_right_edge(rep, s_big);
    2.0 * g_edge - rep.potential.eval(rep.c)
}

fn g_at_right_edge(rep: &MeasureRep, s_big: f64) -> f64 {
    // int_c^S G(s) ds with s = c + w^2 to absorb the sqrt corner at c
    let wmax = (s_big - rep.c).sqrt();
    let rule = gauss_legendre(80).expect("fixed rule").mapped_to(0.0, wmax);
    let inner = rule.integrate(|w| {
        let s = rep.c + w * w;
        2.0 * w * rep.stieltjes(Complex64::new(s, 0.0)).re
    });
    let tail = g_tail(rep, s_big);
    s_big.ln() - tail - inner
}

/// int_S^inf (G(s) - 1/s) ds via 40 Laurent coefficients of G at infinity.
fn g_tail(rep: &MeasureRep, s_big: f64) -> f64 {
    let n = 40;
    let dv = rep.potential.deriv_coeffs();
    let exp = edge_expansion(&dv, rep.b, rep.c, n + 2);
    // G = sqrt((s-b)/(s-c)) * (sum_{k>=1} c_{-k} s^{-k}) / 2
    let num = binom_series(0.5, rep.b, n + 2);
    let den = binom_series(-0.5, rep.c, n + 2);
    let ratio = series_mul(&num, &den, n + 2);
    let mut g_coeffs = vec![0.0; n + 3];
    for (k, &c) in exp.neg.iter().enumerate().skip(1) {
        for (j, &r) in ratio.iter().enumerate() {
            if k + j < g_coeffs.len() {
                g_coeffs[k + j] += 0.5 * c * r;
            }
        }
    }
    debug_assert!((g_coeffs[1] - 1.0).abs() < 1e-9, "mass coefficient {}", g_coeffs[1]);
    let mut acc = 0.0;
    for (m, &g) in g_coeffs.iter().enumerate().skip(2) {
        acc += g / ((m as f64 - 1.0) * s_big.powi(m as i32 - 1));
    }
    acc
}

/// g- and phi-function bundle for a one-cut measure.
pub struct GPhiPair {
    rep: MeasureRep,
    pub ell: f64,
    g_edge: f64,
}

/// Build the g/phi evaluators for a measure representation.
pub fn g_phi(rep: &MeasureRep) -> GPhiPair {
    let s_big = rep.c.abs().max(rep.b.abs()) + 3.0;
    let g_edge = g_at_right_edge(rep, s_big);
    let ell = 2.0 * g_edge - rep.potential.eval(rep.c);
    GPhiPair { rep: rep.clone(), ell, g_edge }
}

impl GPhiPair {
    /// g(z) for complex z off the cut (-inf, c], via a contour from the
    /// right edge that stays clear of the cut.
    pub fn g_complex(&self, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 && z.re <= self.rep.c {
            return Err(Error::InvalidArgument(
                "g on the cut needs a side; use g_plus/g_minus".into(),
            ));
        }
        if z.im == 0.0 {
            let wmax = (z.re - self.rep.c).sqrt();
            let rule = gauss_legendre(80).expect("fixed rule").mapped_to(0.0, wmax);
            let v = rule.integrate(|w| {
                let s = self.rep.c + w * w;
                2.0 * w * self.rep.stieltjes(Complex64::new(s, 0.0)).re
            });
            return Ok(Complex64::new(self.g_edge + v, 0.0));
        }
        let sign = z.im.signum();
        let height = z.im.abs().max(1.0);
        let i = Complex64::new(0.0, 1.0);
        let base = gauss_legendre(80).expect("fixed rule");
        // leg 1: s = c + i sign v^2, up from the edge
        let l1 = complex_quad(&base, 0.0, height.sqrt(), |w| {
            let s = Complex64::new(self.rep.c, 0.0) + i * sign * w * w;
            2.0 * w * i * sign * self.rep.stieltjes(s)
        });
        // leg 2: horizontal at height sign * H
        let l2 = complex_quad(&base, self.rep.c, z.re, |t| {
            self.rep.stieltjes(Complex64::new(t, sign * height))
        });
        // leg 3: vertical down to z
        let l3 = complex_quad(&base, height, z.im.abs(), |v| {
            i * sign * self.rep.stieltjes(Complex64::new(z.re, sign * v))
        });
        Ok(Complex64::new(self.g_edge, 0.0) + l1 + l2 + l3)
    }

    /// Boundary value g_+(x) (limit from the upper half-plane) for real x <= c.
    pub fn g_plus(&self, x: f64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        let base = gauss_legendre(80).expect("fixed rule");
        let height = 1.0;
        let l1 = complex_quad(&base, 0.0, 1.0, |w| {
            let s = Complex64::new(self.rep.c, 0.0) + i * w * w;
            2.0 * w * i * self.rep.stieltjes(s)
        });
        let l2 = complex_quad(&base, self.rep.c, x, |t| {
            self.rep.stieltjes(Complex64::new(t, height))
        });
        // descend to x + i0 with the corner absorbed by v^2
        let l3 = complex_quad(&base, 1.0, 0.0, |v| {
            i * self.rep.stieltjes(Complex64::new(x, v * v)) * 2.0 * v
        });
        Complex64::new(self.g_edge, 0.0) + l1 + l2 + l3
    }

    pub fn g_minus(&self, x: f64) -> Complex64 {
        self.g_plus(x).conj()
    }

    /// phi(z) = int_c^z sqrt((s-b)/(s-c)) P(s) ds for real z > c;
    /// positive there, with 2g - V - ell = -phi.
    pub fn phi_right(&self, z: f64) -> Result<f64> {
        if z <= self.rep.c {
            return Err(Error::InvalidArgument("phi_right needs z > right endpoint".into()));
        }
        let wmax = (z - self.rep.c).sqrt();
        let rule = gauss_legendre(80).expect("fixed rule").mapped_to(0.0, wmax);
        Ok(rule.integrate(|w| {
            let s = self.rep.c + w * w;
            2.0 * (s - self.rep.b).sqrt() * self.rep.p_at(s)
        }))
    }

    /// Euler-Lagrange combination 2 Re g_+(x) - V(x) - ell:
    /// zero on the band, strictly negative outside.
    pub fn el_residual(&self, x: f64) -> f64 {
        if x > self.rep.c {
            let g = self.g_complex(Complex64::new(x, 0.0)).expect("real z > c");
            return 2.0 * g.re - self.rep.potential.eval(x) - self.ell;
        }
        2.0 * self.g_plus(x).re - self.rep.potential.eval(x) - self.ell
    }
}

fn complex_quad(
    base: &QuadratureRule,
    a: f64,
    b: f64,
    f: impl Fn(f64) -> Complex64,
) -> Complex64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for (&x, &w) in base.nodes.iter().zip(base.weights.iter()) {
        acc += w * half * f(mid + half * x);
    }
    acc
}

/// The Airy edge-scaling constant c_V = (pi beta_V(1))^{2/3}.
pub fn edge_constant(measure: &EquilibriumMeasure) -> f64 {
    (PI * measure.beta1).powf(2.0 / 3.0)
}
