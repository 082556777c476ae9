//! The subcommands, each producing the text it writes.

use std::fmt::Write as _;

use num_rational::BigRational;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thinrep::circle::{
    choose_parameters_report, delta_boundary, dyadic_csv, minor_arc_profile, poisson_check, sweep_csv,
    CircleModel, CircleParams, SeriesOptions, SpectrumGrid, l2_direct,
};
use thinrep::congruence::{discover_z_with, obstruction_csv, ObstructionReport};
use thinrep::matgroup::{
    angular_ok, enumerate_ball_with, estimate_delta_with, norm_sq, word_ball_monotone, GroupSpec, Mat2,
    DEFAULT_ANGULAR_DIVISOR,
};
use thinrep::repr::{
    exceptional_csv, exceptional_oracle, exceptional_set, linear_form, precompose_fix, stabilize_exceptional,
};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

fn need(v: Option<f64>, what: &str) -> CliResult<f64> {
    v.ok_or_else(|| CliError::Config(format!("{what} is required for this command")))
}

fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

fn obstruction(cfg: &RunConfig, g: &GroupSpec) -> CliResult<ObstructionReport> {
    Ok(discover_z_with(g, cfg.prime_bound, cfg.power_bound, &cfg.quotient_limits())?)
}

fn classes(report: &ObstructionReport) -> String {
    report.admissible_classes.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(";")
}

/// `a,b,c,d,norm_sq,A,B` for every element of `B_T`, then `count,<n>`.
pub fn cmd_ball(cfg: &RunConfig, oracle: bool) -> CliResult<String> {
    let t = need(cfg.t, "T")?;
    let g = cfg.group()?;
    let normal = precompose_fix(&g)?;
    let mut elements: Vec<Mat2> = if t < std::f64::consts::SQRT_2 {
        vec![]
    } else if oracle {
        word_ball_monotone(&g, t)?
    } else {
        enumerate_ball_with(&g, t, &cfg.enum_limits())?.elements
    };
    let mut kept = Vec::with_capacity(elements.len());
    for x in elements.drain(..) {
        if angular_ok(&x, &normal, t, DEFAULT_ANGULAR_DIVISOR)? {
            kept.push(x);
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "# command: ball");
    let _ = writeln!(out, "# T: {t:?}");
    let _ = writeln!(out, "# route: {}", if oracle { "word oracle" } else { "breadth-first search" });
    out.push_str("a,b,c,d,norm_sq,A,B\n");
    for x in &kept {
        let f = linear_form(&normal, x)?;
        let _ = writeln!(out, "{},{},{},{},{},{},{}", x.a, x.b, x.c, x.d, norm_sq(x), f.a, f.b);
    }
    let _ = writeln!(out, "count,{}", kept.len());
    Ok(out)
}

/// Options of the `exceptional` command beyond the config.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExceptionalOpts {
    pub oracle: bool,
    /// Keep doubling `T` until the count is unchanged this many times.
    pub doublings: Option<usize>,
    pub t_max: Option<f64>,
}

pub fn cmd_exceptional(cfg: &RunConfig, opts: ExceptionalOpts) -> CliResult<String> {
    let n = need(cfg.n, "N")?;
    let t = need(cfg.t, "T")?;
    let g = precompose_fix(&cfg.group()?)?;
    let report = obstruction(cfg, &g)?;
    let n_max = n.floor() as i64;
    let mut meta = vec![
        ("command", "exceptional".to_string()),
        ("Z", report.z.to_string()),
        ("classes", classes(&report)),
        ("c", report.density_c.to_string()),
        ("prime_bound", report.search_bound.prime_bound.to_string()),
        ("power_bound", report.search_bound.power_bound.to_string()),
        ("N", n_max.to_string()),
    ];
    let list = match opts.doublings {
        Some(k) => {
            if opts.oracle {
                return Err(CliError::Config("--oracle does not combine with --doublings".into()));
            }
            let t_max = opts.t_max.unwrap_or(t * 2f64.powi(k as i32 + 4));
            let s = stabilize_exceptional(&g, &report, n_max, t, t_max, k, &cfg.enum_limits())?;
            for (ti, c) in &s.samples {
                meta.push(("sample", format!("T={ti:?} count={c}")));
            }
            meta.push(("non_increasing", s.non_increasing().to_string()));
            meta.push((
                "stable_count",
                s.stable_count.map_or("none".to_string(), |c| c.to_string()),
            ));
            meta.push(("T", s.samples.last().map_or(t, |x| x.0).to_string()));
            s.exceptional
        }
        None => {
            meta.push(("T", format!("{t:?}")));
            if opts.oracle {
                exceptional_oracle(&g, &report, n_max, t)?
            } else {
                exceptional_set(&g, &report, n_max, t)?
            }
        }
    };
    meta.push(("route", if opts.oracle { "word oracle" } else { "progression fill" }.into()));
    meta.push(("count", list.len().to_string()));
    Ok(exceptional_csv(&list, &meta))
}

/// Options of the `circle` command beyond the config.
#[derive(Clone, Debug)]
pub struct CircleOpts {
    pub from: Option<i64>,
    pub to: Option<i64>,
    pub series: SeriesOptions,
    pub poisson_samples: usize,
    pub minor: bool,
}

impl Default for CircleOpts {
    fn default() -> Self {
        CircleOpts { from: None, to: None, series: SeriesOptions::default(), poisson_samples: 100, minor: false }
    }
}

/// Explicit parameters when `N`, `T`, `Q0`, `K0` are all set; otherwise the
/// derived ones from `delta` and `T_exponent`.
pub fn circle_params(cfg: &RunConfig) -> CliResult<CircleParams> {
    let n = need(cfg.n, "N")?;
    match (cfg.t, cfg.q0, cfg.k0) {
        (Some(t), Some(q0), Some(k0)) => Ok(CircleParams::explicit(n, t, q0, k0, cfg.eps0.unwrap_or(0.0))?),
        _ => {
            let delta = need(cfg.delta, "delta (or T, Q0 and K0)")?;
            let alpha = need(cfg.t_exponent, "T_exponent (or T, Q0 and K0)")?;
            let (p, report) = choose_parameters_report(n, delta, cfg.eps0.unwrap_or(1e-3), cfg.eps1, alpha)?;
            if let Some(c) = report.first_violation() {
                return Err(thinrep::Error::Infeasible { constraint: c.name, detail: format!("{} vs {}", c.lhs, c.rhs) }.into());
            }
            Ok(p)
        }
    }
}

/// Sweep CSV (`n,R_N,M_N,E_N,admissible`) with diagnostics in the header, and
/// the dyadic `q,I_Q` profile when requested.
pub fn cmd_circle(cfg: &RunConfig, opts: &CircleOpts) -> CliResult<(String, Option<String>)> {
    let p = circle_params(cfg)?;
    let g = cfg.group()?;
    let model = CircleModel::new_with(&g, p, opts.series, &cfg.enum_limits())?;
    let report = obstruction(cfg, &model.spec)?;
    let n_max = p.n.floor() as i64;
    let lo = opts.from.unwrap_or(-n_max);
    let hi = opts.to.unwrap_or(n_max);
    if hi < lo {
        return Err(CliError::Config(format!("empty window [{lo}, {hi}]")));
    }
    let rows = model.sweep(lo, hi, &report)?;

    let sum_check = rows.iter().map(|r| (r.r - r.m - r.e).abs()).fold(0.0, f64::max);
    let grid = SpectrumGrid::from_table(&model.table, 8 * (2 * n_max as usize + 1))?;
    let direct = l2_direct(&model.table);
    let parseval = if direct > 0.0 { (grid.l2_mass() - direct).abs() / direct } else { 0.0 };

    let mut meta = vec![
        ("command", "circle".to_string()),
        ("N", f17(p.n)),
        ("T", f17(p.t)),
        ("X", f17(p.x)),
        ("M", f17(p.m)),
        ("Q0", f17(p.q0)),
        ("K0", f17(p.k0)),
        ("series", format!("primed={} inclusive={}", opts.series.primed, opts.series.inclusive)),
        ("ensemble", model.ensemble.len().to_string()),
        ("Z", report.z.to_string()),
        ("classes", classes(&report)),
        ("max_abs_R_minus_M_minus_E", f17(sum_check)),
        ("parseval_relative_error", f17(parseval)),
        ("error_l2", f17(model.error_l2()?)),
    ];

    // Separation of ℳ_N between admissible and other n in [N/2, N].
    let half = (p.n / 2.0).ceil() as i64;
    let upper = model.main_terms(half, n_max)?;
    let (mut adm, mut non) = (f64::INFINITY, f64::NEG_INFINITY);
    for (n, m) in (half..=n_max).zip(upper) {
        if thinrep::congruence::is_admissible(&report, n) {
            adm = adm.min(m);
        } else {
            non = non.max(m);
        }
    }
    meta.push(("main_term_min_admissible", f17(adm)));
    meta.push(("main_term_max_non_admissible", f17(non)));

    if opts.poisson_samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut worst = 0.0f64;
        for _ in 0..opts.poisson_samples {
            let (a, q, beta) = legal_poisson_sample(&mut rng, &p);
            worst = worst.max(poisson_check(&model.ensemble, &p, a, q, beta)?);
        }
        meta.push(("poisson_samples", opts.poisson_samples.to_string()));
        meta.push(("poisson_max_residual", f17(worst)));
    }

    let mut dyadic = None;
    if opts.minor {
        let prof = minor_arc_profile(&model, &grid)?;
        for (k, v) in [("I1", prof.i1), ("I2", prof.i2), ("I3", prof.i3), ("I4", prof.i4), ("weighted_integral", prof.dominated)] {
            meta.push((k, f17(v)));
        }
        dyadic = Some(dyadic_csv(&prof));
    }
    let meta_ref: Vec<(&str, String)> = meta.into_iter().collect();
    Ok((sweep_csv(&rows, &meta_ref), dyadic))
}

/// A reduced `a/q` with `q ≤ M` and `|β| < 1/(qM)`, drawn uniformly in each coordinate.
pub fn legal_poisson_sample(rng: &mut ChaCha8Rng, p: &CircleParams) -> (i64, i64, f64) {
    let m = p.m_int() as i64;
    let q = rng.random_range(1..=m);
    let a = loop {
        let a = rng.random_range(0..q);
        if num_integer::Integer::gcd(&a, &q) == 1 {
            break a;
        }
    };
    let r = 1.0 / (q as f64 * p.m);
    let beta = rng.random_range(-r..r) * (1.0 - 1e-12);
    (a, q, beta)
}

/// Result of the `params` command: the report text, and the violated
/// constraint if any.
pub struct ParamsOutcome {
    pub text: String,
    pub violation: Option<thinrep::Error>,
}

/// Inputs of the `params` command; it needs no group.
#[derive(Clone, Copy, Debug)]
pub struct ParamsInput {
    pub n: f64,
    pub delta: f64,
    pub eps0: f64,
    pub eps1: f64,
    pub t_exponent: f64,
}

impl ParamsInput {
    /// Defaults: `ε₀ = ε₁ = 10⁻³`, `T = N^{1/4}`.
    pub fn new(n: f64, delta: f64) -> Self {
        ParamsInput { n, delta, eps0: 1e-3, eps1: 1e-3, t_exponent: 0.25 }
    }
}

pub fn cmd_params(input: &ParamsInput) -> CliResult<ParamsOutcome> {
    let (p, report) = choose_parameters_report(input.n, input.delta, input.eps0, input.eps1, input.t_exponent)?;
    let mut out = String::new();
    let _ = writeln!(out, "# command: params");
    let rat = |r: &BigRational| format!("{},{}", r, f17(num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)));
    let _ = writeln!(out, "quantity,exact,value");
    let _ = writeln!(out, "delta,{}", rat(&report.delta));
    let _ = writeln!(out, "eps1,{}", rat(&report.eps1));
    let _ = writeln!(out, "kappa,{}", rat(&report.kappa));
    let _ = writeln!(out, "rho,{}", rat(&report.rho));
    let _ = writeln!(out, "delta_boundary,{}", rat(&delta_boundary(&report.eps1)));
    for (k, v) in [("N", p.n), ("T", p.t), ("X", p.x), ("M", p.m), ("Q0", p.q0), ("K0", p.k0)] {
        let _ = writeln!(out, "{k},,{}", f17(v));
    }
    let _ = writeln!(out, "constraint,lhs,rhs,holds");
    for c in &report.checks {
        let _ = writeln!(out, "{},{},{},{}", c.name, c.lhs, c.rhs, c.holds);
    }
    let violation = report.first_violation().map(|c| thinrep::Error::Infeasible {
        constraint: c.name,
        detail: format!("exponent {} vs {}", c.lhs, c.rhs),
    });
    Ok(ParamsOutcome { text: out, violation })
}

pub fn cmd_obstruction(cfg: &RunConfig) -> CliResult<String> {
    let g = cfg.group()?;
    Ok(obstruction_csv(&obstruction(cfg, &g)?))
}

/// `T,count` on `T_max / 2^k`, `k = 5..0`, then the fitted exponent.
pub fn cmd_delta(cfg: &RunConfig) -> CliResult<String> {
    let t = need(cfg.t, "T")?;
    let radii: Vec<f64> = (0..6).rev().map(|k| t / 2f64.powi(k)).collect();
    let est = estimate_delta_with(&cfg.group()?, &radii, &cfg.enum_limits())?;
    let mut out = String::from("# command: delta\nT,count\n");
    for (ti, c) in &est.samples {
        let _ = writeln!(out, "{},{}", f17(*ti), c);
    }
    let _ = writeln!(out, "delta_hat,{}", f17(est.delta_hat));
    let _ = writeln!(out, "residual,{}", f17(est.residual));
    Ok(out)
}
