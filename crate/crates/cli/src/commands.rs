//! Subcommand implementations. Each returns the CSV table plus a JSON
//! summary; `main` handles routing, caching and exit codes.

use crate::config::{RunConfig, Schema};
use crate::expr::parse_potential;
use crate::output::{fmt_f64, Csv, Json};
use softedge::num_complex::Complex64;
use softedge::edge_laws::{
    build_mth_law, convergence_rate, hastings_mcleod, limit_kernel_with, tw_fredholm, tw_painleve,
    FiniteNKernel,
};
use softedge::equilibrium::{solve_constrained, solve_full_line, Potential};
use softedge::orthopoly::{build_recurrence, cd_kernel, Resolution, Support, WeightSpec};
use softedge::sampler::{sample_spectrum_indexed, scale_statistic, EmpiricalLaw};
use softedge::specfun::models::{model_pa_boundary, model_pb_region, Side};
use softedge::specfun::{branch, bessel_q, Matrix2, QRegion};

pub struct CommandOutput {
    pub table: String,
    pub summary: Json,
}

type CmdResult = Result<CommandOutput, CmdError>;

pub enum CmdError {
    Usage(String),
    Compute(String),
}

impl From<softedge::Error> for CmdError {
    fn from(e: softedge::Error) -> Self {
        CmdError::Compute(e.to_string())
    }
}

fn usage(e: String) -> CmdError {
    CmdError::Usage(e)
}

pub const SCHEMAS: &[Schema] = &[
    Schema {
        command: "tw",
        keys: &[
            ("alpha-min", "-6", "left end of the alpha grid"),
            ("alpha-max", "3", "right end of the alpha grid"),
            ("steps", "19", "number of grid points"),
            ("resolution", "160", "quadrature nodes of the Airy window"),
            ("hm-grid", "3001", "collocation points of the Painleve solve"),
        ],
    },
    Schema {
        command: "order-law",
        keys: &[
            ("m", "1", "order statistic index (1..=6)"),
            ("alpha", "", "single evaluation point (overrides the grid)"),
            ("alpha-min", "-5.5", "left end of the alpha grid"),
            ("alpha-max", "3", "right end of the alpha grid"),
            ("steps", "18", "number of grid points"),
            ("resolution", "160", "quadrature nodes of the Airy window"),
        ],
    },
    Schema {
        command: "equilibrium",
        keys: &[
            ("V", "2*x^2", "polynomial potential in x"),
            ("constrained-c", "", "pinned right endpoint (empty: free problem)"),
            ("grid-steps", "101", "density output grid size"),
        ],
    },
    Schema {
        command: "orthopoly",
        keys: &[
            ("V", "2*x^2", "polynomial potential in x"),
            ("n", "8", "weight parameter of e^{-n V}"),
            ("k", "16", "highest recurrence index"),
            ("support", "full", "full | half"),
            ("c", "1.0", "half-line endpoint (support = half)"),
        ],
    },
    Schema {
        command: "kernel",
        keys: &[
            ("which", "limit", "limit | kn | ln"),
            ("V", "2*x^2", "polynomial potential (kn / ln)"),
            ("n", "16", "matrix size (kn / ln)"),
            ("alpha", "1.0", "window edge in scaled coordinates (limit / ln)"),
            ("min", "1.5", "grid start"),
            ("max", "4.0", "grid end"),
            ("steps", "6", "grid points per axis"),
            ("resolution", "160", "Airy window nodes (limit)"),
        ],
    },
    Schema {
        command: "converge",
        keys: &[
            ("V", "2*x^2", "polynomial potential"),
            ("alpha", "1", "window edge in scaled coordinates"),
            ("ns", "16,32,64,128", "matrix sizes"),
            ("x", "2", "first evaluation coordinate"),
            ("y", "3", "second evaluation coordinate"),
        ],
    },
    Schema {
        command: "parametrix-check",
        keys: &[("radii", "7", "sample radii per contour piece")],
    },
    Schema {
        command: "sample",
        keys: &[
            ("n", "200", "matrix size"),
            ("draws", "1000", "number of spectra"),
            ("seed", "42", "64-bit seed"),
            ("orders", "1,2", "order statistics to report"),
            ("ks", "true", "also compute KS distances against the limit laws"),
        ],
    },
    Schema {
        command: "selftest",
        keys: &[("only", "", "run a single criterion (1..=11)")],
    },
];

pub fn run_command(config: &RunConfig) -> CmdResult {
    match config.command.as_str() {
        "tw" => tw(config),
        "order-law" => order_law(config),
        "equilibrium" => equilibrium(config),
        "orthopoly" => orthopoly(config),
        "kernel" => kernel(config),
        "converge" => converge(config),
        "parametrix-check" => parametrix_check(config),
        "sample" => sample(config),
        "selftest" => selftest(config),
        other => Err(usage(format!("unknown command '{other}'"))),
    }
}

fn potential_of(config: &RunConfig) -> Result<Potential, CmdError> {
    let coeffs = parse_potential(config.get("V")).map_err(usage)?;
    Potential::new(coeffs).map_err(CmdError::from)
}

/// Rescale so the free equilibrium edge sits at 1 (required by the
/// edge-scaled kernels; a no-op for already-normalized potentials).
fn normalized(pot: Potential) -> Result<Potential, CmdError> {
    Ok(solve_full_line(&pot)?.potential().clone())
}

fn tw(config: &RunConfig) -> CmdResult {
    let lo = config.f64("alpha-min").map_err(usage)?;
    let hi = config.f64("alpha-max").map_err(usage)?;
    let steps = config.usize("steps").map_err(usage)?;
    let resolution = config.usize("resolution").map_err(usage)?;
    let hm_grid = config.usize("hm-grid").map_err(usage)?;
    if steps < 2 || hi <= lo {
        return Err(usage("tw needs steps >= 2 and alpha-max > alpha-min".into()));
    }
    let hm = hastings_mcleod(-12.0, 8.0, hm_grid)?;
    let mut csv = Csv::new(&["alpha", "F_fredholm", "F_painleve", "abs_diff"]);
    let mut worst = 0.0f64;
    for i in 0..steps {
        let alpha = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        let f = tw_fredholm(alpha, resolution)?;
        let p = tw_painleve(alpha, &hm)?;
        worst = worst.max((f - p).abs());
        csv.row_f64(&[alpha, f, p, (f - p).abs()]);
    }
    Ok(CommandOutput {
        table: csv.finish(),
        summary: Json::Obj(vec![
            ("command".into(), Json::Str("tw".into())),
            (
                "realizes".into(),
                Json::Str(
                    "F(alpha) = det(1 - K_Airy on [alpha,inf)) = exp(-int (s-alpha) u^2 ds)".into(),
                ),
            ),
            ("rows".into(), Json::Int(steps as i64)),
            ("max_abs_diff".into(), Json::Num(worst)),
        ]),
    })
}

fn order_law(config: &RunConfig) -> CmdResult {
    let m = config.usize("m").map_err(usage)?;
    let resolution = config.usize("resolution").map_err(usage)?;
    let single = config.get("alpha");
    let mut csv = Csv::new(&["alpha", "F_lambda_m"]);
    let alphas: Vec<f64> = if single.is_empty() {
        let lo = config.f64("alpha-min").map_err(usage)?;
        let hi = config.f64("alpha-max").map_err(usage)?;
        let steps = config.usize("steps").map_err(usage)?;
        if steps < 2 || hi <= lo {
            return Err(usage("order-law needs steps >= 2 and alpha-max > alpha-min".into()));
        }
        (0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect()
    } else {
        vec![single.parse().map_err(|_| usage(format!("bad --alpha '{single}'")))?]
    };
    let mut last = 0.0;
    for &alpha in &alphas {
        last = softedge::edge_laws::mth_law_limit_with(m, alpha, resolution)?;
        csv.row_f64(&[alpha, last]);
    }
    Ok(CommandOutput {
        table: csv.finish(),
        summary: Json::Obj(vec![
            ("command".into(), Json::Str("order-law".into())),
            (
                "realizes".into(),
                Json::Str(
                    "P(lambda_m <= edge scaling) = F_TW(alpha) * sum_{j<m} (1/j!) int det[M_alpha]"
                        .into(),
                ),
            ),
            ("m".into(), Json::Int(m as i64)),
            ("rows".into(), Json::Int(alphas.len() as i64)),
            ("last_value".into(), Json::Num(last)),
        ]),
    })
}

fn equilibrium(config: &RunConfig) -> CmdResult {
    let pot = potential_of(config)?;
    let steps = config.usize("grid-steps").map_err(usage)?.max(2);
    let free = solve_full_line(&pot)?;
    let constrained = config.get("constrained-c");
    let mut summary = vec![
        ("command".into(), Json::Str("equilibrium".into())),
        (
            "realizes".into(),
            Json::Str("minimizer of the logarithmic energy with external field V".into()),
        ),
        (
            "band".into(),
            Json::Arr(vec![Json::Num(free.band().0), Json::Num(free.band().1)]),
        ),
        ("scale".into(), Json::Num(free.scale)),
        ("beta_edge".into(), Json::Num(free.beta1)),
        ("c_V".into(), Json::Num(free.c_v)),
        ("ell".into(), Json::Num(free.ell)),
        ("mass".into(), Json::Num(free.rep.mass(200))),
    ];
    let mut csv = Csv::new(&["x", "psi"]);
    if constrained.is_empty() {
        let (b, a) = free.band();
        for i in 0..steps {
            let x = b + (a - b) * i as f64 / (steps - 1) as f64;
            csv.row_f64(&[x, free.psi(x)]);
        }
    } else {
        let c: f64 = constrained
            .parse()
            .map_err(|_| usage(format!("bad --constrained-c '{constrained}'")))?;
        let normalized = free.potential().clone();
        let m = solve_constrained(&normalized, c)?;
        summary.push(("constrained_c".into(), Json::Num(c)));
        summary.push(("constrained_b".into(), Json::Num(m.b)));
        summary.push(("hard_edge_constant".into(), Json::Num(m.c_const)));
        for i in 0..steps {
            let x = m.b + (m.c - m.b) * i as f64 / (steps - 1) as f64;
            csv.row_f64(&[x, m.psi(x)]);
        }
    }
    Ok(CommandOutput { table: csv.finish(), summary: Json::Obj(summary) })
}

fn orthopoly(config: &RunConfig) -> CmdResult {
    let pot = potential_of(config)?;
    let n = config.usize("n").map_err(usage)?;
    let k = config.usize("k").map_err(usage)?;
    let support = match config.get("support") {
        "full" => Support::FullLine,
        "half" => Support::HalfLine { c: config.f64("c").map_err(usage)? },
        other => return Err(usage(format!("--support must be full|half, got '{other}'"))),
    };
    let w = WeightSpec { potential: pot, n, support };
    let table = build_recurrence(&w, k, Resolution::default())?;
    let mut csv = Csv::new(&["k", "alpha_k", "beta_k", "ln_h_k"]);
    for j in 0..=k {
        csv.row(&[
            j.to_string(),
            fmt_f64(table.alpha[j]),
            fmt_f64(table.beta[j]),
            fmt_f64(table.ln_h(j)),
        ]);
    }
    Ok(CommandOutput {
        table: csv.finish(),
        summary: Json::Obj(vec![
            ("command".into(), Json::Str("orthopoly".into())),
            (
                "realizes".into(),
                Json::Str("three-term recurrence of the polynomials orthonormal for e^{-n V}".into()),
            ),
            ("k_max".into(), Json::Int(k as i64)),
            ("mass".into(), Json::Num(table.beta[0])),
        ]),
    })
}

fn kernel(config: &RunConfig) -> CmdResult {
    let which = config.get("which").to_string();
    let lo = config.f64("min").map_err(usage)?;
    let hi = config.f64("max").map_err(usage)?;
    let steps = config.usize("steps").map_err(usage)?;
    if steps < 1 || hi <= lo {
        return Err(usage("kernel needs steps >= 1 and max > min".into()));
    }
    let grid: Vec<f64> = (0..steps)
        .map(|i| {
            if steps == 1 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / (steps - 1) as f64
            }
        })
        .collect();
    let mut csv = Csv::new(&["x", "y", "value"]);
    let realizes: &str;
    match which.as_str() {
        "limit" => {
            realizes = "resolvent of the Airy operator on [alpha, inf)";
            let alpha = config.f64("alpha").map_err(usage)?;
            let resolution = config.usize("resolution").map_err(usage)?;
            let k = limit_kernel_with(alpha, resolution)?;
            for &x in &grid {
                for &y in &grid {
                    csv.row_f64(&[x, y, k.eval(x, y)?]);
                }
            }
        }
        "kn" => {
            realizes = "rank-n Christoffel-Darboux projection kernel of e^{-n V}";
            let pot = potential_of(config)?;
            let n = config.usize("n").map_err(usage)?;
            let w = WeightSpec::full_line(pot, n);
            let t = build_recurrence(&w, n + 1, Resolution::default())?;
            for &x in &grid {
                for &y in &grid {
                    csv.row_f64(&[x, y, cd_kernel(&t, &w, n, x, y)?]);
                }
            }
        }
        "ln" => {
            realizes = "edge-scaled Janossy kernel of the half-line orthonormal system";
            let pot = normalized(potential_of(config)?)?;
            let n = config.usize("n").map_err(usage)?;
            let alpha = config.f64("alpha").map_err(usage)?;
            let k = FiniteNKernel::new(&pot, n, alpha)?;
            for &x in &grid {
                for &y in &grid {
                    csv.row_f64(&[x, y, k.eval(x, y)?]);
                }
            }
        }
        other => return Err(usage(format!("--which must be limit|kn|ln, got '{other}'"))),
    }
    Ok(CommandOutput {
        table: csv.finish(),
        summary: Json::Obj(vec![
            ("command".into(), Json::Str("kernel".into())),
            ("realizes".into(), Json::Str(realizes.into())),
            ("which".into(), Json::Str(which)),
            ("rows".into(), Json::Int((grid.len() * grid.len()) as i64)),
        ]),
    })
}

fn converge(config: &RunConfig) -> CmdResult {
    let pot = normalized(potential_of(config)?)?;
    let alpha = config.f64("alpha").map_err(usage)?;
    let ns = config.usize_list("ns").map_err(usage)?;
    let x = config.f64("x").map_err(usage)?;
    let y = config.f64("y").map_err(usage)?;
    let exp = convergence_rate(&pot, alpha, &ns, (x, y))?;
    let mut csv = Csv::new(&["n", "abs_error"]);
    for (n, e) in exp.ns.iter().zip(exp.errors.iter()) {
        csv.row(&[n.to_string(), fmt_f64(*e)]);
    }
    Ok(CommandOutput {
        table: csv.finish(),
        summary: Json::Obj(vec![
            ("command".into(), Json::Str("converge".into())),
            (
                "realizes".into(),
                Json::Str("n^{-2/3} approach of the scaled finite-n kernel to its limit".into()),
            ),
            ("slope".into(), Json::Num(exp.slope)),
        ]),
    })
}

fn parametrix_check(config: &RunConfig) -> CmdResult {
    let radii = config.usize("radii").map_err(usage)?.max(1);
    let one = Complex64::new(1.0, 0.0);
    let lower = |x: Complex64| Matrix2::new(one, Complex64::new(0.0, 0.0), x, one);
    let twist = Matrix2::from_real(0.0, 1.0, -1.0, 0.0);
    let two_pi_3 = 2.0 * std::f64::consts::FRAC_PI_3;
    let mut csv = Csv::new(&["model", "piece", "radius", "residual"]);
    let mut worst: Vec<(String, f64)> = Vec::new();
    let mut note = |csv: &mut Csv, model: &str, piece: &str, r: f64, res: f64| {
        csv.row(&[model.into(), piece.into(), fmt_f64(r), fmt_f64(res)]);
        match worst.iter_mut().find(|(m, _)| m == model) {
            Some((_, w)) => *w = w.max(res),
            None => worst.push((model.to_string(), res)),
        }
    };
    for k in 0..radii {
        let r = 0.4 + 0.9 * k as f64;
        let z = Complex64::from_polar(r, two_pi_3);
        let res = bessel_q(z, QRegion::I)?
            .sub(&bessel_q(z, QRegion::II)?.mul(&lower(one)))
            .max_abs();
        note(&mut csv, "Q", "upper-ray", r, res);
        let z = Complex64::from_polar(r, -two_pi_3);
        let res = bessel_q(z, QRegion::III)?
            .sub(&bessel_q(z, QRegion::I)?.mul(&lower(one)))
            .max_abs();
        note(&mut csv, "Q", "lower-ray", r, res);
        let res = bessel_q(Complex64::new(-r, 0.0), QRegion::II)?
            .sub(&bessel_q(Complex64::new(-r, -0.0), QRegion::III)?.mul(&twist))
            .max_abs();
        note(&mut csv, "Q", "negative-axis", r, res);

        let z = Complex64::new(r, 0.0);
        let v = Matrix2::new(one, (-4.0 / 3.0 * branch::pow_3_2(z)).exp(), Complex64::new(0.0, 0.0), one);
        let res = model_pa_boundary(z, 0, Side::Plus)?
            .sub(&model_pa_boundary(z, 0, Side::Minus)?.mul(&v))
            .max_abs();
        note(&mut csv, "P_A", "positive-axis", r, res);
        let z = Complex64::from_polar(r, two_pi_3);
        let v = lower((4.0 / 3.0 * branch::pow_3_2(z)).exp());
        let res = model_pa_boundary(z, 1, Side::Plus)?
            .sub(&model_pa_boundary(z, 1, Side::Minus)?.mul(&v))
            .max_abs();
        note(&mut csv, "P_A", "upper-ray", r, res);
        let z = Complex64::new(-r, 0.0);
        let res = model_pa_boundary(z, 2, Side::Plus)?
            .sub(&model_pa_boundary(z, 2, Side::Minus)?.mul(&twist))
            .max_abs();
        note(&mut csv, "P_A", "negative-axis", r, res);

        for (label, theta) in [("upper-ray", two_pi_3), ("lower-ray", -two_pi_3)] {
            let z = Complex64::from_polar(r, theta);
            let (plus, minus) = if theta > 0.0 {
                (QRegion::I, QRegion::II)
            } else {
                (QRegion::III, QRegion::I)
            };
            let v = lower((-2.0 * branch::sqrt(z)).exp());
            let res = model_pb_region(z, plus)?
                .sub(&model_pb_region(z, minus)?.mul(&v))
                .max_abs();
            note(&mut csv, "P_B", label, r, res);
        }
        let res = softedge::specfun::model_pb(Complex64::new(-r, 0.0))?
            .sub(&softedge::specfun::model_pb(Complex64::new(-r, -0.0))?.mul(&twist))
            .max_abs();
        note(&mut csv, "P_B", "negative-axis", r, res);
    }
    let summary_entries: Vec<(String, Json)> = std::iter::once((
        "command".to_string(),
        Json::Str("parametrix-check".into()),
    ))
    .chain(std::iter::once((
        "realizes".to_string(),
        Json::Str("contour-jump relations of the local model solutions".into()),
    )))
    .chain(
        worst
            .iter()
            .map(|(m, w)| (format!("worst_{m}"), Json::Num(*w))),
    )
    .collect();
    Ok(CommandOutput { table: csv.finish(), summary: Json::Obj(summary_entries) })
}

fn sample(config: &RunConfig) -> CmdResult {
    let n = config.usize("n").map_err(usage)?;
    let draws = config.u64("draws").map_err(usage)?;
    let seed = config.u64("seed").map_err(usage)?;
    let orders = config.usize_list("orders").map_err(usage)?;
    let with_ks = config.get("ks") == "true";
    if orders.is_empty() || orders.iter().any(|&m| m == 0 || m > n) {
        return Err(usage("orders must be nonempty indices within 1..=n".into()));
    }
    let c_v = solve_full_line(&Potential::gue())?.c_v;
    let mut header = vec!["draw".to_string()];
    for &m in &orders {
        header.push(format!("scaled_lambda_{m}"));
    }
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut csv = Csv::new(&header_refs);
    let mut stats: Vec<Vec<f64>> = vec![Vec::with_capacity(draws as usize); orders.len()];
    for i in 0..draws {
        let s = sample_spectrum_indexed(n, seed, i)?;
        let mut row = vec![i.to_string()];
        for (j, &m) in orders.iter().enumerate() {
            let v = scale_statistic(&s, m, c_v)?;
            stats[j].push(v);
            row.push(fmt_f64(v));
        }
        csv.row(&row);
    }
    let mut summary = vec![
        ("command".into(), Json::Str("sample".into())),
        (
            "realizes".into(),
            Json::Str("edge-scaled order statistics of the tridiagonal ensemble model".into()),
        ),
        ("n".into(), Json::Int(n as i64)),
        ("draws".into(), Json::Int(draws as i64)),
        ("c_V".into(), Json::Num(c_v)),
    ];
    if with_ks {
        for (j, &m) in orders.iter().enumerate() {
            if m > 6 {
                continue; // no tabulated limit law that far down
            }
            let law = build_mth_law(m, -5.95, 4.5, 106)?;
            let ks = EmpiricalLaw::new(stats[j].clone()).ks_distance(|x| law.eval(x));
            summary.push((format!("ks_lambda_{m}"), Json::Num(ks)));
        }
    }
    Ok(CommandOutput { table: csv.finish(), summary: Json::Obj(summary) })
}

fn selftest(config: &RunConfig) -> CmdResult {
    let only = config.get("only");
    let results = if only.is_empty() {
        softedge::acceptance::run_all()?
    } else {
        let id: usize = only.parse().map_err(|_| usage(format!("bad --only '{only}'")))?;
        vec![softedge::acceptance::run_criterion(id)?]
    };
    let mut csv = Csv::new(&["id", "name", "passed", "seconds", "detail"]);
    let mut all_ok = true;
    for c in &results {
        eprintln!("{}", c.line());
        all_ok &= c.passed;
        csv.row(&[
            c.id.to_string(),
            c.name.to_string(),
            c.passed.to_string(),
            format!("{:.2}", c.seconds),
            format!("\"{}\"", c.detail.replace('"', "'")),
        ]);
    }
    if !all_ok {
        return Err(CmdError::Compute("selftest: at least one criterion failed".into()));
    }
    Ok(CommandOutput {
        table: csv.finish(),
        summary: Json::Obj(vec![
            ("command".into(), Json::Str("selftest".into())),
            ("criteria".into(), Json::Int(results.len() as i64)),
            ("all_passed".into(), Json::Bool(all_ok)),
        ]),
    })
}
