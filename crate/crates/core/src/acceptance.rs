//! The verification suite: every headline claim of the library as an
//! executable check with pinned tolerances. `run_all` powers both the
//! `selftest` CLI subcommand and the acceptance integration tests.

use crate::edge_laws::{
    airy_kernel, bessel_form_kernel, build_mth_law, continuity_at_zero, convergence_rate,
    hastings_mcleod_default, limit_kernel, tw_fredholm, tw_painleve, DEFAULT_RESOLUTION,
};
use crate::equilibrium::{g_phi, solve_constrained, solve_full_line, Potential};
use crate::fredholm::discretize;
use crate::numcore::gauss_legendre;
use crate::orthopoly::{build_recurrence, cd_kernel, l_kernel_cd, Resolution, WeightSpec};
use crate::sampler::{sample_spectrum_indexed, scale_statistic, EmpiricalLaw};
use crate::specfun::{branch, bessel_q, model_pa, model_pb, Matrix2, QRegion};
use crate::specfun::models::{model_pa_boundary, model_pb_region, Side};
use crate::Result;
use num_complex::Complex64;
use std::time::Instant;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Criterion {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:2} {:<28} {:>7.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

pub const COUNT: usize = 11;

pub fn run_criterion(id: usize) -> Result<Criterion> {
    let start = Instant::now();
    let (name, passed, detail) = match id {
        1 => tracy_widom_cross_method()?,
        2 => triple_derivative_identity()?,
        3 => janossy_gap_equivalence()?,
        4 => finite_n_kernel_identity()?,
        5 => universality_rate()?,
        6 => airy_side_asymptotics()?,
        7 => bessel_side_trend()?,
        8 => continuity_across_zero()?,
        9 => parametrix_suite()?,
        10 => monte_carlo_edge_laws()?,
        11 => equilibrium_checks()?,
        _ => {
            return Err(crate::Error::InvalidArgument(format!(
                "criterion id must be 1..={COUNT}, got {id}"
            )))
        }
    };
    Ok(Criterion { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() })
}

pub fn run_all() -> Result<Vec<Criterion>> {
    (1..=COUNT).map(run_criterion).collect()
}

fn tracy_widom_cross_method() -> Result<(&'static str, bool, String)> {
    let start = Instant::now();
    let hm = hastings_mcleod_default()?;
    let mut worst = 0.0f64;
    for i in 0..20 {
        let alpha = -6.0 + 9.0 * i as f64 / 19.0;
        let f = tw_fredholm(alpha, DEFAULT_RESOLUTION)?;
        let p = tw_painleve(alpha, &hm)?;
        worst = worst.max((f - p).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = worst <= 1e-6 && elapsed <= 60.0;
    Ok((
        "tracy-widom cross-method",
        passed,
        format!("max |fredholm - painleve| = {worst:.3e} over 20 alphas in [-6,3] (budget 1e-6, {elapsed:.1}s/60s)"),
    ))
}

fn triple_derivative_identity() -> Result<(&'static str, bool, String)> {
    let hm = hastings_mcleod_default()?;
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    for alpha in [-2.0, 0.0, 1.0] {
        let h = 1e-3;
        let dlog = (tw_fredholm(alpha + h, DEFAULT_RESOLUTION)?.ln()
            - tw_fredholm(alpha - h, DEFAULT_RESOLUTION)?.ln())
            / (2.0 * h);
        let diag = limit_kernel(alpha)?.diagonal_at_edge()?;
        let int_u2 = hm.integral_u2(alpha)?;
        let spread = (dlog - diag)
            .abs()
            .max((dlog - int_u2).abs())
            .max((diag - int_u2).abs());
        worst = worst.max(spread);
        details.push(format!("alpha={alpha}: spread {spread:.2e}"));
    }
    Ok((
        "triple derivative identity",
        worst <= 1e-5,
        format!("{} (budget 1e-5)", details.join(", ")),
    ))
}

fn janossy_gap_equivalence() -> Result<(&'static str, bool, String)> {
    let mut worst_route = 0.0f64;
    let mut worst_mass = 0.0f64;
    let mut worst_partial = 0.0f64;
    for alpha in [-3.0, -1.0, 0.0, 1.0] {
        for m in 1..=4usize {
            let (a, b) = crate::edge_laws::mth_law_routes(m, alpha, DEFAULT_RESOLUTION)?;
            worst_route = worst_route.max((a - b).abs());
        }
        let kernel = limit_kernel(alpha)?;
        // the all-m sum is the product identity prod(1-l) prod(1+mu)
        let total = kernel.window.op.gap_prob_total();
        worst_mass = worst_mass.max((total - 1.0).abs());
        // the truncated Newton sum carries ~eps mu_1^m roundoff on top
        let partial: f64 = kernel.window.op.gap_probs(10)?.iter().sum();
        worst_partial = worst_partial.max((partial - 1.0).abs());
    }
    let passed = worst_route <= 1e-8 && worst_mass <= 1e-10 && worst_partial <= 1e-7;
    Ok((
        "janossy/gap equivalence",
        passed,
        format!("max |route A - route B| = {worst_route:.3e} (1e-8), |sum_m P(m) - 1| = {worst_mass:.3e} (1e-10), truncated-to-10 sum off by {worst_partial:.1e} (1e-7)"),
    ))
}

fn finite_n_kernel_identity() -> Result<(&'static str, bool, String)> {
    let start = Instant::now();
    let pot = Potential::gue();
    let mut worst = 0.0f64;
    for &n in &[8usize, 12, 20] {
        for &c in &[0.95, 1.0, 1.05] {
            let w_full = WeightSpec::full_line(pot.clone(), n);
            let t_full = build_recurrence(&w_full, n + 1, Resolution::default())?;
            let wf = w_full.clone();
            let rule = gauss_legendre(180)?.mapped_to(c, c + 2.4);
            let op = discretize(move |x, y| cd_kernel(&t_full, &wf, n, x, y).unwrap(), rule)?;
            let w_half = WeightSpec::half_line(pot.clone(), n, c);
            let t_half = build_recurrence(&w_half, n + 1, Resolution::default())?;
            for k in 0..10 {
                let x = c + 0.03 + 0.04 * k as f64;
                let y = c + 0.05 + 0.033 * k as f64;
                let via_res = op.resolvent(x, y)?;
                let via_cd = l_kernel_cd(&t_half, &w_half, n, x, y)?;
                worst = worst.max(((via_res - via_cd) / via_cd).abs());
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = worst <= 1e-6 && elapsed <= 120.0;
    Ok((
        "finite-n kernel identity",
        passed,
        format!("max relative gap {worst:.3e} over n in {{8,12,20}}, c in {{0.95,1.0,1.05}} (budget 1e-6, {elapsed:.1}s/120s)"),
    ))
}

fn universality_rate() -> Result<(&'static str, bool, String)> {
    let start = Instant::now();
    let pot = Potential::gue();
    let ns = [16usize, 32, 64, 128];
    let mut details = Vec::new();
    let mut passed = true;
    for alpha in [0.0, 1.0] {
        let exp = convergence_rate(&pot, alpha, &ns, (2.0, 3.0))?;
        let ok = (-0.85..=-0.50).contains(&exp.slope);
        passed &= ok;
        details.push(format!("alpha={alpha}: slope {:.3}", exp.slope));
    }
    let elapsed = start.elapsed().as_secs_f64();
    passed &= elapsed <= 600.0;
    Ok((
        "universality rate",
        passed,
        format!("{} (band [-0.85, -0.50], {elapsed:.1}s/600s)", details.join(", ")),
    ))
}

fn airy_side_asymptotics() -> Result<(&'static str, bool, String)> {
    let mut sups = Vec::new();
    for alpha in [3.0, 4.0, 5.0] {
        let kernel = limit_kernel(alpha)?;
        let mut sup = 0.0f64;
        for i in 0..=6 {
            for j in 0..=6 {
                let x = alpha + 0.5 + 1.5 * i as f64 / 6.0;
                let y = alpha + 0.5 + 1.5 * j as f64 / 6.0;
                sup = sup.max((kernel.eval(x, y)? - airy_kernel(x, y)).abs());
            }
        }
        sups.push(sup);
    }
    // the decay between consecutive alphas must beat e^{d(alpha^{3/2})} / 2
    let want_34 = ((4.0f64.powf(1.5) - 3.0f64.powf(1.5)).exp()) / 2.0;
    let want_45 = ((5.0f64.powf(1.5) - 4.0f64.powf(1.5)).exp()) / 2.0;
    let passed = sups[1] <= 1e-3
        && sups[0] / sups[1] >= want_34
        && sups[1] / sups[2] >= want_45;
    Ok((
        "airy-side asymptotics",
        passed,
        format!(
            "sup |M - K_Airy| at alpha 3,4,5: {:.2e}, {:.2e}, {:.2e} (alpha=4 budget 1e-3; decay factors {:.0}, {:.0} vs required {:.1}, {:.1})",
            sups[0], sups[1], sups[2], sups[0] / sups[1], sups[1] / sups[2], want_34, want_45
        ),
    ))
}

fn bessel_side_trend() -> Result<(&'static str, bool, String)> {
    let pairs = [(0.8, 1.4), (1.0, 1.5)];
    let mut factors = Vec::new();
    let mut passed = true;
    for &(dx, dy) in &pairs {
        let dev = |alpha: f64| -> Result<f64> {
            let lim = limit_kernel(alpha)?;
            let bes = bessel_form_kernel(alpha)?;
            let (x, y) = (alpha + dx, alpha + dy);
            let l = lim.eval(x, y)?;
            Ok(((bes.eval(x, y)? - l) / l).abs())
        };
        let factor = dev(-3.0)? / dev(-5.0)?;
        passed &= factor >= 1.2;
        factors.push(format!("({dx},{dy}): x{factor:.2}"));
    }
    Ok((
        "bessel-side trend",
        passed,
        format!("deviation shrink factors alpha -3 -> -5: {} (budget >= 1.2)", factors.join(", ")),
    ))
}

fn continuity_across_zero() -> Result<(&'static str, bool, String)> {
    let d2 = continuity_at_zero(1e-2, 1.0, 2.0)?;
    let d3 = continuity_at_zero(1e-3, 1.0, 2.0)?;
    let passed = d3 <= d2 && d2 <= 5e-3 && d3 <= 5e-3;
    Ok((
        "continuity across alpha=0",
        passed,
        format!("|M_+d - M_-d|(1,2): {d2:.3e} at d=1e-2, {d3:.3e} at d=1e-3 (budget 5e-3, decreasing)"),
    ))
}

fn parametrix_suite() -> Result<(&'static str, bool, String)> {
    let one = Complex64::new(1.0, 0.0);
    let lower = |x: Complex64| Matrix2::new(one, Complex64::new(0.0, 0.0), x, one);
    let twist = Matrix2::from_real(0.0, 1.0, -1.0, 0.0);
    let two_pi_3 = 2.0 * std::f64::consts::FRAC_PI_3;

    let mut worst_q = 0.0f64;
    let mut worst_pa = 0.0f64;
    let mut worst_pb = 0.0f64;
    for k in 0..7 {
        let r = 0.4 + 0.9 * k as f64;
        // Q: both rays and the negative axis
        let z = Complex64::from_polar(r, two_pi_3);
        worst_q = worst_q.max(
            bessel_q(z, QRegion::I)?
                .sub(&bessel_q(z, QRegion::II)?.mul(&lower(one)))
                .max_abs(),
        );
        let z = Complex64::from_polar(r, -two_pi_3);
        worst_q = worst_q.max(
            bessel_q(z, QRegion::III)?
                .sub(&bessel_q(z, QRegion::I)?.mul(&lower(one)))
                .max_abs(),
        );
        worst_q = worst_q.max(
            bessel_q(Complex64::new(-r, 0.0), QRegion::II)?
                .sub(&bessel_q(Complex64::new(-r, -0.0), QRegion::III)?.mul(&twist))
                .max_abs(),
        );
        // P_A: positive axis, upper ray, negative axis
        let z = Complex64::new(r, 0.0);
        let v = Matrix2::new(one, (-4.0 / 3.0 * branch::pow_3_2(z)).exp(), Complex64::new(0.0, 0.0), one);
        worst_pa = worst_pa.max(
            model_pa_boundary(z, 0, Side::Plus)?
                .sub(&model_pa_boundary(z, 0, Side::Minus)?.mul(&v))
                .max_abs(),
        );
        let z = Complex64::from_polar(r, two_pi_3);
        let v = lower((4.0 / 3.0 * branch::pow_3_2(z)).exp());
        worst_pa = worst_pa.max(
            model_pa_boundary(z, 1, Side::Plus)?
                .sub(&model_pa_boundary(z, 1, Side::Minus)?.mul(&v))
                .max_abs(),
        );
        let z = Complex64::new(-r, 0.0);
        worst_pa = worst_pa.max(
            model_pa_boundary(z, 2, Side::Plus)?
                .sub(&model_pa_boundary(z, 2, Side::Minus)?.mul(&twist))
                .max_abs(),
        );
        // P_B: both rays and the negative axis
        for theta in [two_pi_3, -two_pi_3] {
            let z = Complex64::from_polar(r, theta);
            let (plus, minus) = if theta > 0.0 {
                (QRegion::I, QRegion::II)
            } else {
                (QRegion::III, QRegion::I)
            };
            let v = lower((-2.0 * branch::sqrt(z)).exp());
            worst_pb = worst_pb.max(
                model_pb_region(z, plus)?
                    .sub(&model_pb_region(z, minus)?.mul(&v))
                    .max_abs(),
            );
        }
        worst_pb = worst_pb.max(
            model_pb(Complex64::new(-r, 0.0))?
                .sub(&model_pb(Complex64::new(-r, -0.0))?.mul(&twist))
                .max_abs(),
        );
    }

    // det Q constancy across three test points
    let d1 = bessel_q(one, QRegion::I)?.det();
    let mut worst_det = 0.0f64;
    for z in [Complex64::new(4.0, 0.0), Complex64::new(2.0, 1.0)] {
        worst_det = worst_det.max((bessel_q(z, QRegion::of(z))?.det() - d1).norm());
    }

    // P_B asymptotic match at |zeta| = 100 (error factor on the right)
    let zeta = Complex64::new(100.0, 0.0);
    let pb = model_pb(zeta)?;
    let q = branch::quarter_root(zeta);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::new(0.0, 1.0);
    let asym = Matrix2::diag(one / q, q).mul(&Matrix2::new(
        Complex64::new(inv_sqrt2, 0.0),
        inv_sqrt2 * i,
        inv_sqrt2 * i,
        Complex64::new(inv_sqrt2, 0.0),
    ));
    let pb_asym = asym.inv().mul(&pb).sub(&Matrix2::identity()).max_abs();
    // P_A asymptotic sanity against the twist solution
    let pa_asym = model_pa(Complex64::from_polar(30.0, 0.4))?
        .mul(&crate::specfun::twist_m(Complex64::from_polar(30.0, 0.4)).inv())
        .sub(&Matrix2::identity())
        .max_abs();

    let passed = worst_q <= 1e-8
        && worst_pa <= 1e-8
        && worst_pb <= 1e-8
        && worst_det <= 1e-10
        && pb_asym <= 0.15;
    Ok((
        "parametrix suite",
        passed,
        format!(
            "jump residuals Q {worst_q:.1e}, P_A {worst_pa:.1e}, P_B {worst_pb:.1e} (1e-8); det Q drift {worst_det:.1e} (1e-10); P_B asym {pb_asym:.2e} (0.15); P_A vs twist {pa_asym:.2e}"
        ),
    ))
}

fn monte_carlo_edge_laws() -> Result<(&'static str, bool, String)> {
    let start = Instant::now();
    let n = 200usize;
    let draws = 10_000u64;
    let seed = 20260808u64;
    let c_v = solve_full_line(&Potential::gue())?.c_v;

    let mut stat1 = Vec::with_capacity(draws as usize);
    let mut stat2 = Vec::with_capacity(draws as usize);
    for i in 0..draws {
        let s = sample_spectrum_indexed(n, seed, i)?;
        stat1.push(scale_statistic(&s, 1, c_v)?);
        stat2.push(scale_statistic(&s, 2, c_v)?);
    }
    let emp1 = EmpiricalLaw::new(stat1);
    let emp2 = EmpiricalLaw::new(stat2);

    // theory tables over the sample range (clamped at the resolvent gate;
    // the CDF mass below -5.95 is ~7e-4, invisible at these KS budgets)
    let law1 = build_mth_law(1, -5.95, 4.5, 106)?;
    let law2 = build_mth_law(2, -5.95, 4.5, 106)?;
    let ks1 = emp1.ks_distance(|x| law1.eval(x));
    let ks2 = emp2.ks_distance(|x| law2.eval(x));

    let elapsed = start.elapsed().as_secs_f64();
    let passed = ks1 <= 0.03 && ks2 <= 0.04 && elapsed <= 300.0;
    Ok((
        "monte carlo edge laws",
        passed,
        format!("KS(lambda_1) = {ks1:.4} (0.03), KS(lambda_2) = {ks2:.4} (0.04), n=200, 10^4 draws ({elapsed:.1}s/300s)"),
    ))
}

fn equilibrium_checks() -> Result<(&'static str, bool, String)> {
    let gue = solve_full_line(&Potential::gue())?;
    let (b, a) = gue.band();
    let band_ok = (b + 1.0).abs() <= 1e-10 && (a - 1.0).abs() <= 1e-10;

    let mut bc_worst = 0.0f64;
    for c in [0.8, 0.9, 0.95, 0.99, 1.0] {
        let m = solve_constrained(&Potential::gue(), c)?;
        let want = if c >= 1.0 { -1.0 } else { (c - 2.0 * (c * c + 3.0f64).sqrt()) / 3.0 };
        bc_worst = bc_worst.max((m.b - want).abs());
    }

    let quartic = solve_full_line(&Potential::new(vec![0.0, 0.0, 0.0, 0.0, 1.0])?)?;
    let mass_worst = (gue.rep.mass(200) - 1.0)
        .abs()
        .max((quartic.rep.mass(200) - 1.0).abs());

    let gp = g_phi(&gue.rep);
    let mut el_band = 0.0f64;
    for i in 0..10 {
        let x = -0.9 + 1.8 * i as f64 / 9.0;
        el_band = el_band.max(gp.el_residual(x).abs());
    }
    let el_out_ok = gp.el_residual(1.1) < -1e-6 && gp.el_residual(2.0) < -1e-6;

    let passed =
        band_ok && bc_worst <= 1e-10 && mass_worst <= 1e-10 && el_band <= 1e-8 && el_out_ok;
    Ok((
        "equilibrium measures",
        passed,
        format!(
            "band ok: {band_ok}; max |b(c) - closed form| = {bc_worst:.2e} (1e-10); max |mass - 1| = {mass_worst:.2e} (1e-10); EL band residual {el_band:.2e} (1e-8); strict inequality outside: {el_out_ok}"
        ),
    ))
}
