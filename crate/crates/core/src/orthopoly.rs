//! Orthonormal polynomials for the weight e^{-n V} on the full line and on
//! half-lines (-inf, c], and the finite-n projection / Janossy kernels built
//! from them, with overflow-safe evaluation.
//!
//! Recurrence coefficients come from a Lanczos-type discretized Stieltjes
//! procedure (RKPW update) on a composite Gauss-Legendre discretization of
//! the weight; a plain Stieltjes orthogonalization is kept alongside as an
//! independent cross-check.

use crate::equilibrium::Potential;
use crate::numcore::{composite_rule, gauss_legendre, lu_factor, Mat, QuadratureRule};
use crate::{Error, Result};

/// Support of the orthogonality measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Support {
    FullLine,
    /// the half-line (-inf, c]
    HalfLine { c: f64 },
}

/// Weight w_n(x) = e^{-n V(x)} restricted to `support`.
#[derive(Clone, Debug)]
pub struct WeightSpec {
    pub potential: Potential,
    pub n: usize,
    pub support: Support,
}

impl WeightSpec {
    pub fn full_line(potential: Potential, n: usize) -> Self {
        WeightSpec { potential, n, support: Support::FullLine }
    }

    pub fn half_line(potential: Potential, n: usize, c: f64) -> Self {
        WeightSpec { potential, n, support: Support::HalfLine { c } }
    }

    /// ln of the reduced weight w_hat = e^{-n (V - Vmin)} at x.
    fn ln_w_hat(&self, x: f64, v_min: f64) -> f64 {
        -(self.n as f64) * (self.potential.eval(x) - v_min)
    }

    /// Minimum of V over the support (sampled + golden-section refined).
    fn v_min(&self) -> (f64, f64) {
        let coeffs = self.potential.coeffs();
        let lead = *coeffs.last().unwrap();
        let bound = 1.0
            + coeffs
                .iter()
                .take(coeffs.len() - 1)
                .fold(0.0f64, |a, &c| a.max((c / lead).abs()));
        let (lo, hi) = match self.support {
            Support::FullLine => (-bound, bound),
            Support::HalfLine { c } => ((-bound).min(c - 1.0), c.min(bound).min(c)),
        };
        let mut best_x = lo;
        let mut best = f64::INFINITY;
        let n_samples = 2000;
        for i in 0..=n_samples {
            let x = lo + (hi - lo) * i as f64 / n_samples as f64;
            let v = self.potential.eval(x);
            if v < best {
                best = v;
                best_x = x;
            }
        }
        // golden-section polish
        let h = (hi - lo) / n_samples as f64;
        let (mut a, mut b) = (best_x - h, best_x + h);
        if let Support::HalfLine { c } = self.support {
            b = b.min(c);
        }
        let phi = 0.5 * (5.0f64.sqrt() - 1.0);
        for _ in 0..200 {
            let x1 = b - phi * (b - a);
            let x2 = a + phi * (b - a);
            if self.potential.eval(x1) < self.potential.eval(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        let xm = 0.5 * (a + b);
        (xm, self.potential.eval(xm))
    }
}

/// Quadrature resolution for the recurrence build.
#[derive(Clone, Copy, Debug)]
pub struct Resolution {
    /// nodes allocated per polynomial degree (oscillation count)
    pub nodes_per_degree: usize,
    /// flat baseline node count
    pub base_nodes: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution { nodes_per_degree: 20, base_nodes: 240 }
    }
}

impl Resolution {
    pub fn doubled(self) -> Self {
        Resolution {
            nodes_per_degree: self.nodes_per_degree * 2,
            base_nodes: self.base_nodes * 2,
        }
    }
}

/// Monic three-term recurrence and norms for the weight:
/// p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}, with beta_0 = total mass.
#[derive(Clone, Debug)]
pub struct RecurrenceTable {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// ln of the constant factor between the reduced weight used internally
    /// and the true weight e^{-n V}: true = e^{ln_scale} * reduced
    pub ln_scale: f64,
    /// minimizer location and minimum of V over the support
    pub v_min: f64,
    pub k_max: usize,
}

impl RecurrenceTable {
    /// ln of the squared norm h_k of the monic polynomial of degree k with
    /// respect to the true weight.
    pub fn ln_h(&self, k: usize) -> f64 {
        let mut acc = self.ln_scale;
        for j in 0..=k {
            acc += self.beta[j].ln();
        }
        acc
    }

    /// Squared norm as (mantissa, decimal exponent), mantissa in [1, 10).
    pub fn h_scaled(&self, k: usize) -> (f64, i32) {
        let l = self.ln_h(k) / std::f64::consts::LN_10;
        let e = l.floor();
        (10f64.powf(l - e), e as i32)
    }

    /// ln of the leading coefficient gamma_k = h_k^{-1/2}.
    pub fn ln_gamma(&self, k: usize) -> f64 {
        -0.5 * self.ln_h(k)
    }
}

/// Composite Gauss-Legendre discretization of the reduced weight, truncated
/// where e^{-n(V - Vmin)} (1+|x|)^{2K+2} falls below 1e-300.
fn weight_rule(w: &WeightSpec, k_max: usize, res: Resolution) -> Result<(QuadratureRule, f64)> {
    let (x_min_pos, v_min) = w.v_min();
    let floor_log = -300.0 * std::f64::consts::LN_10;
    let envelope = |x: f64| w.ln_w_hat(x, v_min) + (2.0 * k_max as f64 + 2.0) * (1.0 + x.abs()).ln();
    // march outward by doubling, then bisect the crossing
    let cutoff = |dir: f64| -> f64 {
        let mut step = 0.5;
        let mut x = x_min_pos;
        while envelope(x + dir * step) > floor_log {
            step *= 2.0;
            if step > 1e6 {
                break;
            }
        }
        let (mut lo, mut hi) = (x, x + dir * step);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if envelope(mid) > floor_log {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        x = 0.5 * (lo + hi);
        x
    };
    let (lo, hi) = match w.support {
        Support::FullLine => (cutoff(-1.0), cutoff(1.0)),
        Support::HalfLine { c } => (cutoff(-1.0).min(c - 1e-12), c),
    };
    if !(lo < hi) {
        return Err(Error::ResolutionInsufficient(format!("empty support [{lo}, {hi}]")));
    }
    let per_panel = 24;
    let target = res.base_nodes + res.nodes_per_degree * k_max;
    let n_panels = target.div_ceil(per_panel).max(4);
    let panels: Vec<(f64, f64)> = (0..n_panels)
        .map(|i| {
            (
                lo + (hi - lo) * i as f64 / n_panels as f64,
                lo + (hi - lo) * (i + 1) as f64 / n_panels as f64,
            )
        })
        .collect();
    let base = gauss_legendre(per_panel)?;
    Ok((composite_rule(&base, &panels)?, v_min))
}

/// Recurrence coefficients by the Lanczos (RKPW) update over the
/// discretized measure. Numerically stable well past K ~ 300.
pub fn build_recurrence(w: &WeightSpec, k_max: usize, res: Resolution) -> Result<RecurrenceTable> {
    let (rule, v_min) = weight_rule(w, k_max, res)?;
    let ncap = rule.len();
    if k_max + 1 > ncap {
        return Err(Error::ResolutionInsufficient(format!(
            "need more than {ncap} nodes for K = {k_max}"
        )));
    }
    let xs = &rule.nodes;
    let ws: Vec<f64> = rule
        .nodes
        .iter()
        .zip(rule.weights.iter())
        .map(|(&x, &wt)| wt * w.ln_w_hat(x, v_min).exp())
        .collect();

    // RKPW Lanczos: p0 accumulates the alphas, p1 the betas.
    let mut p0 = xs.clone();
    let mut p1 = vec![0.0; ncap];
    p1[0] = ws[0];
    for n in 0..ncap - 1 {
        let mut pn = ws[n + 1];
        let mut gam = 1.0;
        let mut sig = 0.0;
        let mut t = 0.0;
        let xlam = xs[n + 1];
        for k in 0..=(n + 1) {
            let rho = p1[k] + pn;
            let tmp = gam * rho;
            let tsig = sig;
            if rho <= 0.0 {
                gam = 1.0;
                sig = 0.0;
            } else {
                gam = p1[k] / rho;
                sig = pn / rho;
            }
            let tk = sig * (p0[k] - xlam) - gam * t;
            p0[k] -= tk - t;
            t = tk;
            if sig <= 0.0 {
                pn = tsig * p1[k];
            } else {
                pn = t * t / sig;
            }
            p1[k] = tmp;
        }
    }
    let alpha = p0[..=k_max].to_vec();
    let beta = p1[..=k_max].to_vec();
    for (k, &b) in beta.iter().enumerate() {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::ResolutionInsufficient(format!(
                "beta_{k} = {b}: discretization cannot support K = {k_max}"
            )));
        }
    }
    Ok(RecurrenceTable { alpha, beta, ln_scale: -(w.n as f64) * v_min, v_min, k_max })
}

/// Plain Stieltjes orthogonalization over the same discretization;
/// independent route used to cross-check the Lanczos coefficients.
pub fn build_recurrence_stieltjes(
    w: &WeightSpec,
    k_max: usize,
    res: Resolution,
) -> Result<RecurrenceTable> {
    let (rule, v_min) = weight_rule(w, k_max, res)?;
    let xs = &rule.nodes;
    let ws: Vec<f64> = rule
        .nodes
        .iter()
        .zip(rule.weights.iter())
        .map(|(&x, &wt)| wt * w.ln_w_hat(x, v_min).exp())
        .collect();
    let ncap = xs.len();
    let mass: f64 = ws.iter().sum();
    let mut alpha = Vec::with_capacity(k_max + 1);
    let mut beta = Vec::with_capacity(k_max + 1);
    beta.push(mass);
    let mut p_prev = vec![0.0; ncap];
    let mut p_cur: Vec<f64> = vec![1.0 / mass.sqrt(); ncap];
    for k in 0..=k_max {
        let a_k: f64 = (0..ncap).map(|i| ws[i] * xs[i] * p_cur[i] * p_cur[i]).sum();
        alpha.push(a_k);
        if k == k_max {
            break;
        }
        let sb = beta[k].sqrt();
        let mut r = vec![0.0; ncap];
        let mut norm2 = 0.0;
        for i in 0..ncap {
            r[i] = (xs[i] - a_k) * p_cur[i] - if k == 0 { 0.0 } else { sb * p_prev[i] };
            norm2 += ws[i] * r[i] * r[i];
        }
        // the first beta is the mass; subsequent ones are ratios of norms
        let b_next = norm2;
        if !(b_next > 0.0) {
            return Err(Error::ResolutionInsufficient(format!("stieltjes beta_{} <= 0", k + 1)));
        }
        beta.push(b_next);
        let s = norm2.sqrt();
        p_prev = p_cur;
        p_cur = r.iter().map(|&v| v / s).collect();
    }
    Ok(RecurrenceTable { alpha, beta, ln_scale: -(w.n as f64) * v_min, v_min, k_max })
}

/// A number held as mantissa * 2^exp2 to survive growth past f64 range.
#[derive(Clone, Copy, Debug)]
struct Scaled {
    m: f64,
    e: i64,
}

impl Scaled {
    fn renorm(mut self) -> Self {
        if self.m == 0.0 {
            self.e = 0;
            return self;
        }
        while self.m.abs() > 1e150 {
            self.m *= 2f64.powi(-500);
            self.e += 500;
        }
        while self.m.abs() < 1e-150 {
            self.m *= 2f64.powi(500);
            self.e -= 500;
        }
        self
    }

    fn to_f64(self) -> f64 {
        self.m * 2f64.powi(self.e.clamp(-2000, 2000) as i32)
    }
}

/// Orthonormal values and derivatives p_hat_0..p_hat_K at x with a shared
/// binary exponent: returns (values, derivatives, exp2).
fn orthonormal_values(table: &RecurrenceTable, k_max: usize, x: f64) -> (Vec<f64>, Vec<f64>, i64) {
    let mut vals = vec![0.0; k_max + 1];
    let mut ders = vec![0.0; k_max + 1];
    let mut e: i64 = 0;
    let mut p_prev = 0.0f64;
    let mut d_prev = 0.0f64;
    let mut p = 1.0 / table.beta[0].sqrt();
    let mut d = 0.0f64;
    vals[0] = p;
    for k in 0..k_max {
        let sb_next = table.beta[k + 1].sqrt();
        let sb = if k == 0 { 0.0 } else { table.beta[k].sqrt() };
        let p_next = ((x - table.alpha[k]) * p - sb * p_prev) / sb_next;
        let d_next = (p + (x - table.alpha[k]) * d - sb * d_prev) / sb_next;
        p_prev = p;
        d_prev = d;
        p = p_next;
        d = d_next;
        if p.abs() > 1e150 || d.abs() > 1e150 {
            let f = 2f64.powi(-500);
            p *= f;
            p_prev *= f;
            d *= f;
            d_prev *= f;
            for v in vals[..=k].iter_mut() {
                *v *= f;
            }
            for v in ders[..=k].iter_mut() {
                *v *= f;
            }
            e += 500;
        }
        vals[k + 1] = p;
        ders[k + 1] = d;
    }
    (vals, ders, e)
}

/// phi_k(x) = p_{k,n}(x) e^{-n V(x)/2} as (value, decimal exponent) with
/// value in [1e-1, 1e1).
pub fn eval_phi(table: &RecurrenceTable, w: &WeightSpec, k: usize, x: f64) -> Result<(f64, i32)> {
    if k > table.k_max {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds table K = {}", table.k_max)));
    }
    let (vals, _, e2) = orthonormal_values(table, k, x);
    // true phi = p_hat * sqrt(w_hat) (the e^{-n Vmin} factors cancel between
    // the weight and the orthonormal normalization)
    let ln_wh_half = 0.5 * (-(w.n as f64)) * (w.potential.eval(x) - table.v_min);
    let ln10 = std::f64::consts::LN_10;
    let total_log10 = if vals[k] == 0.0 {
        return Ok((0.0, 0));
    } else {
        (vals[k].abs().ln() + e2 as f64 * std::f64::consts::LN_2 + ln_wh_half) / ln10
    };
    let e = total_log10.floor() as i32 + 1;
    let mant = vals[k].signum() * 10f64.powf(total_log10 - e as f64);
    Ok((mant, e)) // mant in [0.1, 1), value = mant * 10^e
}

/// phi_k as a plain f64 (safe for moderate exponents).
pub fn eval_phi_f64(table: &RecurrenceTable, w: &WeightSpec, k: usize, x: f64) -> Result<f64> {
    let (m, e) = eval_phi(table, w, k, x)?;
    Ok(m * 10f64.powi(e))
}

fn ln_w_hat_half(table: &RecurrenceTable, w: &WeightSpec, x: f64) -> f64 {
    0.5 * (-(w.n as f64)) * (w.potential.eval(x) - table.v_min)
}

/// Christoffel-Darboux kernel K_n(x, y) built from the table, in the ratio
/// form off the diagonal and the differentiated form on it.
pub fn cd_kernel(table: &RecurrenceTable, w: &WeightSpec, n: usize, x: f64, y: f64) -> Result<f64> {
    if n > table.k_max {
        return Err(Error::InvalidArgument(format!("n = {n} exceeds table K = {}", table.k_max)));
    }
    let sb = table.beta[n].sqrt();
    let scale = x.abs().max(y.abs()).max(1.0);
    if (x - y).abs() > 1e-7 * scale {
        let (vx, _, ex) = orthonormal_values(table, n, x);
        let (vy, _, ey) = orthonormal_values(table, n, y);
        let lx = ln_w_hat_half(table, w, x);
        let ly = ln_w_hat_half(table, w, y);
        let num = Scaled {
            m: vx[n] * vy[n - 1] - vx[n - 1] * vy[n],
            e: ex + ey,
        }
        .renorm();
        let ln_extra = lx + ly;
        let m = num.m * sb / (x - y);
        let total = Scaled { m: m * ln_extra.exp_clamped(), e: num.e }.renorm();
        Ok(total.to_f64())
    } else {
        let (v, d, e2) = orthonormal_values(table, n, x);
        let ln_wh = 2.0 * ln_w_hat_half(table, w, x);
        let m = sb * (d[n] * v[n - 1] - d[n - 1] * v[n]);
        let total = Scaled { m: m * ln_wh.exp_clamped(), e: 2 * e2 }.renorm();
        Ok(total.to_f64())
    }
}

/// Direct-sum form of the kernel (test oracle for the CD identity).
pub fn cd_kernel_sum(
    table: &RecurrenceTable,
    w: &WeightSpec,
    n: usize,
    x: f64,
    y: f64,
) -> Result<f64> {
    if n > table.k_max {
        return Err(Error::InvalidArgument("n exceeds table".into()));
    }
    let (vx, _, ex) = orthonormal_values(table, n, x);
    let (vy, _, ey) = orthonormal_values(table, n, y);
    let mut s = 0.0;
    for k in 0..n {
        s += vx[k] * vy[k];
    }
    let ln_extra = ln_w_hat_half(table, w, x) + ln_w_hat_half(table, w, y);
    Ok(Scaled { m: s * ln_extra.exp_clamped(), e: ex + ey }.renorm().to_f64())
}

trait ExpClamped {
    fn exp_clamped(self) -> f64;
}

impl ExpClamped for f64 {
    fn exp_clamped(self) -> f64 {
        self.clamp(-700.0, 700.0).exp()
    }
}

/// The Janossy kernel of the half-line system in Christoffel-Darboux form,
/// evaluated in the regime of interest x, y > c.
pub fn l_kernel_cd(
    tilde_table: &RecurrenceTable,
    w_halfline: &WeightSpec,
    n: usize,
    x: f64,
    y: f64,
) -> Result<f64> {
    match w_halfline.support {
        Support::HalfLine { .. } => {}
        _ => {
            return Err(Error::InvalidArgument("l_kernel_cd needs a half-line weight".into()));
        }
    }
    cd_kernel(tilde_table, w_halfline, n, x, y)
}

/// k-point correlation: det [K_n(x_l, x_m)].
pub fn correlation_k(
    table: &RecurrenceTable,
    w: &WeightSpec,
    n: usize,
    points: &[f64],
) -> Result<f64> {
    let k = points.len();
    if k > n {
        return Err(Error::InvalidArgument("correlation order exceeds n".into()));
    }
    if k == 0 {
        return Ok(1.0);
    }
    let mut m = Mat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = cd_kernel(table, w, n, points[i], points[j])?;
        }
    }
    if k == 1 {
        return Ok(m[(0, 0)]);
    }
    Ok(lu_factor(&m).map(|f| f.det()).unwrap_or(0.0))
}

/// k-th Janossy density J(x_1..x_k) = D * det [L(x_l, x_m)] with the
/// Fredholm prefactor D supplied by the caller.
pub fn janossy_k(
    tilde_table: &RecurrenceTable,
    w_halfline: &WeightSpec,
    n: usize,
    points: &[f64],
    window_start: f64,
    d_prefactor: f64,
) -> Result<f64> {
    if points.iter().any(|&p| p < window_start) {
        return Err(Error::InvalidArgument("janossy point outside the counting window".into()));
    }
    let k = points.len();
    if k == 0 {
        return Ok(d_prefactor);
    }
    let mut m = Mat::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = l_kernel_cd(tilde_table, w_halfline, n, points[i], points[j])?;
        }
    }
    let det = if k == 1 { m[(0, 0)] } else { lu_factor(&m).map(|f| f.det()).unwrap_or(0.0) };
    Ok(d_prefactor * det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::test_rng::TestRng;

    fn gue_weight(n: usize) -> WeightSpec {
        WeightSpec::full_line(Potential::gue(), n)
    }

    #[test]
    fn hermite_closed_form_betas() {
        let n = 6;
        let w = gue_weight(n);
        let t = build_recurrence(&w, 24, Resolution::default()).unwrap();
        for k in 1..=24usize {
            let want = k as f64 / (4.0 * n as f64);
            assert!(
                (t.beta[k] - want).abs() < 1e-10 * want,
                "beta_{k} = {} vs {want}",
                t.beta[k]
            );
        }
        for k in 0..=24usize {
            assert!(t.alpha[k].abs() < 1e-12, "alpha_{k} = {}", t.alpha[k]);
        }
        // beta_0 is the total mass sqrt(pi / (2n))
        let mass = (std::f64::consts::PI / (2.0 * n as f64)).sqrt();
        assert!((t.beta[0] - mass).abs() < 1e-12 * mass);
    }

    #[test]
    fn halfline_first_moment() {
        // support (-inf, 0], V = 2x^2, n = 1: alpha_0 = -1/sqrt(2 pi)
        let w = WeightSpec::half_line(Potential::gue(), 1, 0.0);
        let t = build_recurrence(&w, 8, Resolution::default()).unwrap();
        let want = -1.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert!((t.alpha[0] - want).abs() < 1e-10, "alpha_0 = {} vs {want}", t.alpha[0]);
    }

    #[test]
    fn lanczos_and_stieltjes_agree() {
        let w = WeightSpec::half_line(Potential::gue(), 8, 1.05);
        let a = build_recurrence(&w, 20, Resolution::default()).unwrap();
        let b = build_recurrence_stieltjes(&w, 20, Resolution::default()).unwrap();
        for k in 0..=20usize {
            assert!((a.alpha[k] - b.alpha[k]).abs() < 1e-10 * (1.0 + a.alpha[k].abs()));
            assert!((a.beta[k] - b.beta[k]).abs() < 1e-10 * a.beta[k]);
        }
    }

    #[test]
    fn recurrence_stable_under_resolution_doubling() {
        let w = gue_weight(8);
        let t1 = build_recurrence(&w, 30, Resolution::default()).unwrap();
        let t2 = build_recurrence(&w, 30, Resolution::default().doubled()).unwrap();
        for k in 0..=30usize {
            assert!(
                (t1.beta[k] - t2.beta[k]).abs() <= 1e-10 * t2.beta[k],
                "beta_{k}: {} vs {}",
                t1.beta[k],
                t2.beta[k]
            );
            assert!((t1.alpha[k] - t2.alpha[k]).abs() <= 1e-10);
        }
    }

    #[test]
    fn gamma_decays_superpolynomially() {
        let w = gue_weight(8);
        let t = build_recurrence(&w, 100, Resolution::default()).unwrap();
        // Hermite-type betas grow linearly, so once beta_k > 1 the leading
        // coefficients fall off factorially, beating any polynomial
        for k in 1..100usize {
            assert!(t.beta[k + 1] > t.beta[k]);
        }
        assert!(t.ln_gamma(100) < t.ln_gamma(50) - 10.0);
        assert!(t.ln_gamma(100) + 8.0 * (100.0f64).ln() < t.ln_gamma(50) + 8.0 * (50.0f64).ln());
    }

    #[test]
    fn phi_zero_is_weighted_constant() {
        let w = gue_weight(4);
        let t = build_recurrence(&w, 4, Resolution::default()).unwrap();
        let x = 0.37;
        let got = eval_phi_f64(&t, &w, 0, x).unwrap();
        let want = (1.0 / t.beta[0].sqrt()) * (-0.5 * 4.0 * w.potential.eval(x)).exp();
        assert!((got - want).abs() < 1e-12 * want.abs());
    }

    #[test]
    fn phi_orthonormal_on_independent_grid() {
        let n = 8;
        let w = gue_weight(n);
        let t = build_recurrence(&w, 12, Resolution::default()).unwrap();
        // fresh grid, independent of the one used in the build
        let panels: Vec<(f64, f64)> = (0..30)
            .map(|i| (-3.4 + 6.8 * i as f64 / 30.0, -3.4 + 6.8 * (i + 1) as f64 / 30.0))
            .collect();
        let fine = composite_rule(&gauss_legendre(24).unwrap(), &panels).unwrap();
        for (j, k) in [(0, 0), (1, 1), (5, 5), (12, 12), (0, 2), (3, 7), (11, 12)] {
            let dot = fine.integrate(|x| {
                eval_phi_f64(&t, &w, j, x).unwrap() * eval_phi_f64(&t, &w, k, x).unwrap()
            });
            let want = if j == k { 1.0 } else { 0.0 };
            assert!((dot - want).abs() < 1e-8, "<phi_{j}, phi_{k}> = {dot}");
        }
    }

    #[test]
    fn phi_matches_direct_monic_evaluation() {
        // degree-8 monic polynomial built in coefficient space from the
        // recurrence, evaluated by Horner, times the weight
        let n = 8;
        let w = gue_weight(n);
        let t = build_recurrence(&w, 10, Resolution::default()).unwrap();
        let k = 8;
        let x = 0.5;
        let mut polys: Vec<Vec<f64>> = vec![vec![1.0]];
        for j in 0..k {
            let prev = polys[j].clone();
            let mut next = vec![0.0; prev.len() + 1];
            for (i, &c) in prev.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= t.alpha[j] * c;
            }
            if j > 0 {
                for (i, &c) in polys[j - 1].iter().enumerate() {
                    next[i] -= t.beta[j] * c;
                }
            }
            polys.push(next);
        }
        let mut monic = 0.0;
        for &c in polys[k].iter().rev() {
            monic = monic * x + c;
        }
        let h_k: f64 = t.beta[..=k].iter().map(|b| b.ln()).sum::<f64>();
        let direct = monic * (-0.5 * h_k).exp() * (-0.5 * n as f64 * w.potential.eval(x)).exp();
        let got = eval_phi_f64(&t, &w, k, x).unwrap();
        assert!(
            (got - direct).abs() < 1e-9 * direct.abs(),
            "recurrence {got} vs direct {direct}"
        );
    }

    #[test]
    fn cd_ratio_matches_sum() {
        let n = 10;
        let w = gue_weight(n);
        let t = build_recurrence(&w, 12, Resolution::default()).unwrap();
        let a = cd_kernel(&t, &w, n, 0.3, 0.7).unwrap();
        let b = cd_kernel_sum(&t, &w, n, 0.3, 0.7).unwrap();
        assert!((a - b).abs() < 1e-10 * b.abs(), "ratio {a} vs sum {b}");
        // 50 random pairs
        let mut rng = TestRng::new(23);
        for _ in 0..50 {
            let x = rng.uniform(-1.2, 1.2);
            let y = rng.uniform(-1.2, 1.2);
            let a = cd_kernel(&t, &w, n, x, y).unwrap();
            let b = cd_kernel_sum(&t, &w, n, x, y).unwrap();
            assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "at ({x},{y}): {a} vs {b}");
        }
    }

    #[test]
    fn cd_trace_is_n() {
        let n = 10;
        let w = gue_weight(n);
        let t = build_recurrence(&w, 12, Resolution::default()).unwrap();
        let panels: Vec<(f64, f64)> = (0..40)
            .map(|i| (-3.5 + 7.0 * i as f64 / 40.0, -3.5 + 7.0 * (i + 1) as f64 / 40.0))
            .collect();
        let rule = composite_rule(&gauss_legendre(24).unwrap(), &panels).unwrap();
        let tr = rule.integrate(|x| cd_kernel(&t, &w, n, x, x).unwrap());
        assert!((tr - n as f64).abs() < 1e-8, "trace {tr}");
    }

    #[test]
    fn cd_projection_idempotent() {
        let n = 10;
        let w = gue_weight(n);
        let t = build_recurrence(&w, 12, Resolution::default()).unwrap();
        let panels: Vec<(f64, f64)> = (0..40)
            .map(|i| (-3.5 + 7.0 * i as f64 / 40.0, -3.5 + 7.0 * (i + 1) as f64 / 40.0))
            .collect();
        let rule = composite_rule(&gauss_legendre(24).unwrap(), &panels).unwrap();
        let (x, y) = (0.2, 0.4);
        let conv = rule.integrate(|s| {
            cd_kernel(&t, &w, n, x, s).unwrap() * cd_kernel(&t, &w, n, s, y).unwrap()
        });
        let direct = cd_kernel(&t, &w, n, x, y).unwrap();
        assert!((conv - direct).abs() < 1e-8, "{conv} vs {direct}");
    }

    #[test]
    fn cd_diagonal_matches_nearby_ratio() {
        let n = 10;
        let w = gue_weight(n);
        let t = build_recurrence(&w, 12, Resolution::default()).unwrap();
        let x = 0.45;
        let diag = cd_kernel(&t, &w, n, x, x).unwrap();
        let near = cd_kernel(&t, &w, n, x, x + 1e-6).unwrap();
        assert!((diag - near).abs() < 1e-5 * diag.abs());
    }

    #[test]
    fn l_kernel_symmetry_and_positivity() {
        let n = 12;
        let c = 1.05;
        let w = WeightSpec::half_line(Potential::gue(), n, c);
        let t = build_recurrence(&w, n + 1, Resolution::default()).unwrap();
        let a = l_kernel_cd(&t, &w, n, 1.1, 1.2).unwrap();
        let b = l_kernel_cd(&t, &w, n, 1.2, 1.1).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300), "symmetry {a} vs {b}");
        for i in 0..10 {
            let x = c + 0.02 + 0.05 * i as f64;
            let v = l_kernel_cd(&t, &w, n, x, x).unwrap();
            assert!(v >= 0.0, "L({x},{x}) = {v} < 0");
        }
    }

    #[test]
    fn correlation_edge_cases() {
        let n = 8;
        let w = gue_weight(n);
        let t = build_recurrence(&w, 10, Resolution::default()).unwrap();
        // single point: the one-point function is the kernel diagonal
        let r1 = correlation_k(&t, &w, n, &[0.3]).unwrap();
        assert!(r1 >= 0.0);
        // repeated point: determinant vanishes
        let r2 = correlation_k(&t, &w, n, &[0.3, 0.3]).unwrap();
        assert!(r2.abs() < 1e-9 * r1 * r1);
        // k > n rejected
        assert!(correlation_k(&t, &w, 2, &[0.1, 0.2, 0.3]).is_err());
    }

    #[test]
    fn janossy_prefactor_and_positivity() {
        let n = 12;
        let c = 1.05;
        let w = WeightSpec::half_line(Potential::gue(), n, c);
        let t = build_recurrence(&w, n + 1, Resolution::default()).unwrap();
        let d = 0.9;
        assert_eq!(janossy_k(&t, &w, n, &[], c, d).unwrap(), d);
        let j1 = janossy_k(&t, &w, n, &[1.1], c, d).unwrap();
        assert!(j1 >= 0.0);
        let j2 = janossy_k(&t, &w, n, &[1.1, 1.25], c, d).unwrap();
        assert!(j2 >= -1e-20);
        assert!(janossy_k(&t, &w, n, &[0.9], c, d).is_err());
    }
}
