//! `gcikit`: decomposition reports, positivity scans, oracle runs, thermal tables and the
//! verification suite.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use gcikit::config::RunConfig;
use gcikit::exact::qseries::QSeries;
use gcikit::exact::rat::{fmt_rat, parse_rat, rat_to_f64, Rat};
use gcikit::fourpoint::PWParams;
use gcikit::partialwave::{
    closed_form_b, decompose_tower, positivity_check, twist_extract, PositivityReport,
};
use gcikit::thermal::{self, ThermalModel};
use gcikit::verify::{run_all, run_check, run_oracle, OracleOptions};
use gcikit::GciError;

#[derive(Parser)]
#[command(
    name = "gcikit",
    version,
    about = "Partial waves, free-field oracles and thermal checks for GCI models"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags given on the command line override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    a0: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    a1: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    a2: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    c: Option<String>,
    /// Two-point normalization B ≥ 0.
    #[arg(long = "B", global = true, allow_hyphen_values = true)]
    big_b: Option<String>,
    #[arg(long, global = true)]
    max_twist: Option<usize>,
    #[arg(long, global = true)]
    max_spin: Option<usize>,
    /// Series order (partial waves) or q-series order (thermal).
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Modular parameter as a+bi; repeatable.
    #[arg(long, global = true, allow_hyphen_values = true)]
    tau: Vec<String>,
    /// Write a JSON report here.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Write CSV files into this directory instead of printing CSV to stdout.
    #[arg(long, global = true)]
    csv_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structure constants B(κ, ℓ) with the closed-form cross-check for κ ≤ 3.
    Decompose,
    /// Admissibility verdicts over a parameter grid.
    Positivity {
        /// name=lo:hi:count with name among a0, a1, a2, b, c, B; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        grid: Vec<String>,
        /// Spin range of the closed-form scan.
        #[arg(long, default_value_t = 50)]
        l_scan: usize,
    },
    /// Exact free-field oracles.
    Oracle {
        /// Restrict to one pair count (2, 3 or 4).
        #[arg(long)]
        n: Option<usize>,
        /// Configurations per comparison.
        #[arg(long)]
        count: Option<usize>,
        /// Flip the sign of the reference side (harness self-test).
        #[arg(long)]
        corrupt_sign: bool,
    },
    /// Eisenstein series, energy mean values, modular and Gibbs checks.
    Thermal {
        #[command(subcommand)]
        what: ThermalCmd,
    },
    /// The full verification suite.
    VerifyAll {
        /// Run only these check ids.
        #[arg(long)]
        only: Vec<u32>,
        /// Override every numeric tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Subcommand)]
enum ThermalCmd {
    /// Energy mean value q-series: scalar4, scalar6, scalar<D> or weyl.
    Energy {
        #[arg(long, default_value = "scalar4")]
        model: String,
        /// Vacuum constant for scalar dimensions other than 4 and 6.
        #[arg(long, allow_hyphen_values = true)]
        vacuum: Option<String>,
    },
    /// Eisenstein series G₂ₖ coefficients.
    Eisenstein {
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Weight-2k residuals of G₂ₖ under S and T.
    Modular {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        terms: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// The inhomogeneous G₂ transformation and the weight-2 form F.
    Anomaly {
        #[arg(long, default_value_t = 300)]
        terms: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Scalar and Weyl Gibbs functions along a ζ grid.
    Gibbs {
        #[arg(long, default_value_t = 0.37)]
        alpha: f64,
        #[arg(long, default_value_t = 0.13, allow_hyphen_values = true)]
        zeta: f64,
        #[arg(long, default_value_t = 60)]
        terms: usize,
        /// Number of ζ samples; extra samples are spread over the unit interval by golden-ratio steps.
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Translate-sum (KMS) construction against the closed forms.
    Kms {
        #[arg(long, default_value = "scalar")]
        model: String,
        #[arg(long, default_value_t = 0.37)]
        alpha: f64,
        #[arg(long, default_value_t = 0.13, allow_hyphen_values = true)]
        zeta: f64,
        #[arg(long, default_value_t = 8)]
        window: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
}

struct Ctx {
    cfg: RunConfig,
    json: Option<PathBuf>,
    csv_dir: Option<PathBuf>,
    taus: Vec<Complex64>,
}

const GOLDEN: f64 = 0.618_033_988_749_895;

type Res<T> = Result<T, GciError>;

fn io_err(e: impl std::fmt::Display) -> GciError {
    GciError::Usage(format!("i/o: {e}"))
}

fn build_ctx(c: &Common) -> Res<Ctx> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let set = |slot: &mut Rat, v: &Option<String>| -> Res<()> {
        if let Some(s) = v {
            *slot = parse_rat(s)?;
        }
        Ok(())
    };
    set(&mut cfg.params.a0, &c.a0)?;
    set(&mut cfg.params.a1, &c.a1)?;
    set(&mut cfg.params.a2, &c.a2)?;
    set(&mut cfg.params.b, &c.b)?;
    set(&mut cfg.params.c, &c.c)?;
    set(&mut cfg.params.big_b, &c.big_b)?;
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(k) = c.max_twist {
        cfg.max_twist = k;
    }
    if let Some(l) = c.max_spin {
        cfg.max_spin = l;
    }
    if c.order.is_some() {
        cfg.series_order = c.order;
    }
    if !c.tau.is_empty() {
        cfg.tau_points = c.tau.clone();
    }
    let json = c
        .json
        .clone()
        .or_else(|| cfg.json_out.clone().map(PathBuf::from));
    let csv_dir = c
        .csv_dir
        .clone()
        .or_else(|| cfg.csv_dir.clone().map(PathBuf::from));
    let taus = cfg
        .tau_points
        .iter()
        .map(|t| thermal::parse_tau(t))
        .collect::<Res<Vec<_>>>()?;
    Ok(Ctx {
        cfg,
        json,
        csv_dir,
        taus,
    })
}

/// Writes a CSV table to `<csv_dir>/<name>.csv`, or to stdout.
fn emit_csv(ctx: &Ctx, name: &str, header: &[&str], rows: &[Vec<String>]) -> Res<()> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header).map_err(io_err)?;
        for r in rows {
            w.write_record(r).map_err(io_err)?;
        }
        w.flush().map_err(io_err)?;
    }
    match &ctx.csv_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(io_err)?;
            let path = dir.join(format!("{name}.csv"));
            fs::write(&path, buf).map_err(io_err)?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            std::io::stdout().write_all(&buf).map_err(io_err)?;
        }
    }
    Ok(())
}

fn emit_json(ctx: &Ctx, value: &serde_json::Value) -> Res<()> {
    if let Some(p) = &ctx.json {
        write_json(p, value)?;
    }
    Ok(())
}

fn write_json(p: &Path, value: &serde_json::Value) -> Res<()> {
    if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_err)?;
    }
    fs::write(
        p,
        serde_json::to_string_pretty(value).map_err(io_err)? + "\n",
    )
    .map_err(io_err)
}

fn to_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

fn cmd_decompose(ctx: &Ctx) -> Res<bool> {
    let cfg = &ctx.cfg;
    cfg.validate()?;
    let tower = twist_extract(&cfg.params, cfg.max_twist, cfg.order())?;
    let sc = decompose_tower(&tower, cfg.max_spin)?;
    let mut rows = Vec::new();
    let mut all_match = true;
    for ((kappa, l), b) in &sc.entries {
        let (cf, ok) = if *kappa <= 3 {
            let cf = closed_form_b(*kappa, *l, &cfg.params)?;
            let ok = &cf == b;
            all_match &= ok;
            (fmt_rat(&cf), ok.to_string())
        } else {
            (String::new(), String::new())
        };
        rows.push(vec![
            kappa.to_string(),
            l.to_string(),
            b.numer().to_string(),
            b.denom().to_string(),
            format!("{:.17e}", rat_to_f64(b)),
            cf,
            ok,
        ]);
    }
    emit_csv(
        ctx,
        "structure_constants",
        &[
            "kappa",
            "l",
            "numerator",
            "denominator",
            "decimal",
            "closed_form",
            "match",
        ],
        &rows,
    )?;
    if ctx.csv_dir.is_some() {
        let mut g_rows = Vec::new();
        for lvl in &tower.levels {
            for (k, c) in lvl.g.coeffs().iter().enumerate() {
                g_rows.push(vec![
                    lvl.kappa.to_string(),
                    k.to_string(),
                    c.numer().to_string(),
                    c.denom().to_string(),
                ]);
            }
        }
        emit_csv(
            ctx,
            "g_series",
            &["kappa", "power", "numerator", "denominator"],
            &g_rows,
        )?;
    }
    emit_json(
        ctx,
        &serde_json::json!({
            "params": to_json(&cfg.params),
            "max_twist": cfg.max_twist,
            "max_spin": cfg.max_spin,
            "order": cfg.order(),
            "closed_form_match": all_match,
            "entries": sc.entries.iter().map(|((k, l), b)| serde_json::json!({"kappa": k, "l": l, "B": fmt_rat(b)})).collect::<Vec<_>>(),
        }),
    )?;
    if !all_match {
        eprintln!("closed-form mismatch in the structure constants");
    }
    Ok(all_match)
}

struct GridAxis {
    name: String,
    values: Vec<Rat>,
}

fn parse_grid(spec: &str) -> Res<GridAxis> {
    let bad = || {
        GciError::Usage(format!(
            "malformed grid '{spec}' (expected name=lo:hi:count)"
        ))
    };
    let (name, range) = spec.split_once('=').ok_or_else(bad)?;
    if !["a0", "a1", "a2", "b", "c", "B"].contains(&name) {
        return Err(GciError::Usage(format!("unknown grid parameter '{name}'")));
    }
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parse_rat(parts[0])?;
    let hi = parse_rat(parts[1])?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    if count == 0 || (count == 1 && lo != hi) || hi < lo {
        return Err(bad());
    }
    let values = if count == 1 {
        vec![lo]
    } else {
        let step = (&hi - &lo) / Rat::from_integer((count as i64 - 1).into());
        (0..count)
            .map(|i| &lo + &step * Rat::from_integer((i as i64).into()))
            .collect()
    };
    Ok(GridAxis {
        name: name.into(),
        values,
    })
}

fn set_param(p: &mut PWParams, name: &str, v: Rat) {
    match name {
        "a0" => p.a0 = v,
        "a1" => p.a1 = v,
        "a2" => p.a2 = v,
        "b" => p.b = v,
        "c" => p.c = v,
        _ => p.big_b = v,
    }
}

fn first_violation(r: &PositivityReport) -> String {
    if let Some(c) = r.conditions.iter().find(|c| !c.holds) {
        return c.name.clone();
    }
    if let Some((k, l, b)) = &r.closed_form_violation {
        return format!("B({k},{l}) = {b}");
    }
    if let Some((k, l, b)) = &r.solver_violation {
        return format!("B({k},{l}) = {b}");
    }
    match &r.gauge_box {
        Some(g) if !g.holds => "-3a1 <= b <= a1/3".into(),
        Some(g) if g.trivial => "a1 + a2 > 0".into(),
        _ => String::new(),
    }
}

fn cmd_positivity(ctx: &Ctx, grid: &[String], l_scan: usize) -> Res<bool> {
    let axes = grid
        .iter()
        .map(|g| parse_grid(g))
        .collect::<Res<Vec<_>>>()?;
    let mut points = vec![ctx.cfg.params.clone()];
    for ax in &axes {
        let mut next = Vec::new();
        for p in &points {
            for v in &ax.values {
                let mut q = p.clone();
                set_param(&mut q, &ax.name, v.clone());
                next.push(q);
            }
        }
        points = next;
    }
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for p in &points {
        p.validate()?;
        let r = positivity_check(p, l_scan, ctx.cfg.max_twist, ctx.cfg.max_spin)?;
        let verdict = format!("{:?}", r.verdict).to_lowercase();
        let mut row: Vec<String> = p.linear_coords().iter().map(fmt_rat).collect();
        row.push(fmt_rat(&p.big_b));
        row.push(verdict);
        row.push(first_violation(&r));
        rows.push(row);
        reports.push(serde_json::json!({"params": to_json(p), "report": to_json(&r)}));
    }
    emit_csv(
        ctx,
        "positivity",
        &[
            "a0",
            "a1",
            "a2",
            "b",
            "c",
            "B",
            "verdict",
            "first_violation",
        ],
        &rows,
    )?;
    emit_json(ctx, &serde_json::json!({ "points": reports }))?;
    Ok(true)
}

fn cmd_oracle(ctx: &Ctx, n: Option<usize>, count: Option<usize>, corrupt_sign: bool) -> Res<bool> {
    let r = run_oracle(
        &ctx.cfg,
        &OracleOptions {
            n,
            count,
            corrupt_sign,
        },
    )?;
    for l in &r.lines {
        println!(
            "[{}] {}: {} compared, {} failures",
            if l.failures == 0 { "PASS" } else { "FAIL" },
            l.name,
            l.compared,
            l.failures
        );
    }
    for (n, c) in &r.fitted_cn {
        println!("c_{n} = {c}");
    }
    emit_json(ctx, &to_json(&r))?;
    Ok(r.passed)
}

fn series_rows(s: &QSeries) -> Vec<Vec<String>> {
    s.terms()
        .map(|(k, c)| {
            let e = if k % 2 == 0 {
                format!("{}/1", k / 2)
            } else {
                format!("{k}/2")
            };
            vec![e, c.numer().to_string(), c.denom().to_string()]
        })
        .collect()
}

const SERIES_HEADER: [&str; 3] = ["exponent", "numerator", "denominator"];

fn thermal_order(ctx: &Ctx) -> usize {
    ctx.cfg.series_order.unwrap_or(10)
}

fn cmd_energy(ctx: &Ctx, model: &str, vacuum: &Option<String>) -> Res<bool> {
    let n = thermal_order(ctx);
    if model == "weyl" {
        let report = thermal::weyl_energy_report(n)?;
        let s = thermal::energy_mean_weyl(n, &thermal::weyl_vacuum_energy());
        eprintln!(
            "E0 = {} (the literal modular line has constant {} and does not match beyond it)",
            report.e0_corrected, report.e0_literal
        );
        emit_csv(ctx, "energy_weyl", &SERIES_HEADER, &series_rows(&s))?;
        emit_json(ctx, &to_json(&report))?;
        return Ok(report.corrected_equal);
    }
    let dim: u64 = model
        .strip_prefix("scalar")
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| GciError::Usage(format!("unknown model '{model}' (scalar<D> or weyl)")))?;
    let vac = vacuum.as_deref().map(parse_rat).transpose()?;
    let e = thermal::energy_mean_scalar(dim, n, vac)?;
    eprintln!("E = {}", e.vacuum);
    for w in &e.warnings {
        eprintln!("warning: {w}");
    }
    let weights: Vec<String> = ((dim - 2) / 2..=n as u64)
        .filter(|&m| m > 0)
        .map(|m| {
            format!(
                "{m}:{}",
                fmt_rat(&thermal::scalar_mode_weight((dim - 2) / 2, m))
            )
        })
        .collect();
    eprintln!("mode weights {}", weights.join(" "));
    emit_csv(
        ctx,
        &format!("energy_scalar{dim}"),
        &SERIES_HEADER,
        &series_rows(&e.series),
    )?;
    emit_json(ctx, &to_json(&e))?;
    Ok(true)
}

fn taus_or(ctx: &Ctx, default: &[Complex64]) -> Vec<Complex64> {
    if ctx.taus.is_empty() {
        default.to_vec()
    } else {
        ctx.taus.clone()
    }
}

fn residual_table(ctx: &Ctx, name: &str, rows: Vec<(Complex64, String, f64, f64)>) -> Res<bool> {
    let ok = rows.iter().all(|r| r.2 < r.3);
    let out: Vec<Vec<String>> = rows
        .iter()
        .map(|(t, check, res, tol)| {
            vec![
                t.re.to_string(),
                t.im.to_string(),
                check.clone(),
                format!("{res:.3e}"),
                format!("{tol:e}"),
                (res < tol).to_string(),
            ]
        })
        .collect();
    emit_csv(
        ctx,
        name,
        &[
            "tau_re",
            "tau_im",
            "check",
            "residual",
            "tolerance",
            "passed",
        ],
        &out,
    )?;
    emit_json(
        ctx,
        &serde_json::json!({"passed": ok, "rows": rows.iter().map(|(t, c, r, tol)| serde_json::json!({"tau": [t.re, t.im], "check": c, "residual": r, "tolerance": tol})).collect::<Vec<_>>()}),
    )?;
    Ok(ok)
}

fn cmd_thermal(ctx: &Ctx, what: &ThermalCmd) -> Res<bool> {
    let cfg = &ctx.cfg;
    match what {
        ThermalCmd::Energy { model, vacuum } => cmd_energy(ctx, model, vacuum),
        ThermalCmd::Eisenstein { k } => {
            let s = thermal::eisenstein_g(*k, thermal_order(ctx))?;
            emit_csv(
                ctx,
                &format!("eisenstein_g{}", 2 * k),
                &SERIES_HEADER,
                &series_rows(&s),
            )?;
            Ok(true)
        }
        ThermalCmd::Modular { k, terms, tol } => {
            let tol = tol.unwrap_or(cfg.tolerance("modular"));
            let mut rows = Vec::new();
            for t in taus_or(ctx, &[Complex64::new(0.0, 1.1), Complex64::new(0.3, 1.2)]) {
                let r = thermal::modular_check_g(*k, t, *terms)?;
                rows.push((t, format!("G{} S", 2 * k), r.s_residual, tol));
                rows.push((t, format!("G{} T", 2 * k), r.t_residual, tol));
            }
            residual_table(ctx, "modular", rows)
        }
        ThermalCmd::Anomaly { terms, tol } => {
            let mut rows = Vec::new();
            for t in taus_or(ctx, &[Complex64::new(0.0, 1.3)]) {
                rows.push((
                    t,
                    "G2 anomaly".into(),
                    thermal::g2_anomaly_check(t, *terms)?,
                    tol.unwrap_or(cfg.tolerance("anomaly")),
                ));
                let w = thermal::weight2_check(t, *terms)?;
                let wt = tol.unwrap_or(cfg.tolerance("weight2"));
                rows.push((t, "F S".into(), w.s_residual, wt));
                rows.push((t, "F T^2".into(), w.t2_residual, wt));
            }
            residual_table(ctx, "anomaly", rows)
        }
        ThermalCmd::Gibbs {
            alpha,
            zeta,
            terms,
            samples,
            tol,
        } => {
            let tol = tol.unwrap_or(cfg.tolerance("gibbs"));
            let (u1, u2) = thermal::unit_pair(*alpha);
            let mut rows = Vec::new();
            let mut ok = true;
            for t in taus_or(ctx, &[Complex64::new(0.0, 1.5)]) {
                for i in 0..(*samples).max(1) {
                    let z = Complex64::new(zeta + (i as f64 * GOLDEN).fract(), 0.0);
                    let p = thermal::gibbs_scalar_2pt(z, *alpha, t, *terms)?;
                    let m = thermal::gibbs_scalar_modes(z, *alpha, t, *terms)?;
                    let w = thermal::gibbs_weyl_2pt(z, &u1, &u2, t, *terms)?;
                    let err = (p - m).norm();
                    ok &= err < tol;
                    let mut row = vec![
                        t.re.to_string(),
                        t.im.to_string(),
                        z.re.to_string(),
                        p.re.to_string(),
                        p.im.to_string(),
                        format!("{err:.3e}"),
                    ];
                    for e in w.iter().flatten() {
                        row.push(e.re.to_string());
                        row.push(e.im.to_string());
                    }
                    rows.push(row);
                }
            }
            emit_csv(
                ctx,
                "gibbs",
                &[
                    "tau_re",
                    "tau_im",
                    "zeta",
                    "scalar_re",
                    "scalar_im",
                    "scalar_error_bound",
                    "weyl00_re",
                    "weyl00_im",
                    "weyl01_re",
                    "weyl01_im",
                    "weyl10_re",
                    "weyl10_im",
                    "weyl11_re",
                    "weyl11_im",
                ],
                &rows,
            )?;
            Ok(ok)
        }
        ThermalCmd::Kms {
            model,
            alpha,
            zeta,
            window,
            tol,
        } => {
            let m = match model.as_str() {
                "scalar" => ThermalModel::Scalar,
                "weyl" => ThermalModel::Weyl,
                _ => {
                    return Err(GciError::Usage(format!(
                        "unknown model '{model}' (scalar or weyl)"
                    )))
                }
            };
            let tol = tol.unwrap_or(cfg.tolerance("kms"));
            let mut rows = Vec::new();
            let mut reports = Vec::new();
            let mut ok = true;
            for t in taus_or(ctx, &[Complex64::new(0.0, 1.5)]) {
                let r = thermal::kms_translate_sum_check(m, *zeta, *alpha, t, *window, tol)?;
                ok &= r.passed;
                rows.push(vec![
                    t.re.to_string(),
                    t.im.to_string(),
                    window.to_string(),
                    format!("{:.3e}", r.closed_form_residual),
                    format!("{:.3e}", r.tau_shift_residual),
                    format!("{:.3e}", r.unit_shift_residual),
                    format!("{:.3e}", r.edge_bound),
                    r.passed.to_string(),
                ]);
                reports.push(to_json(&r));
            }
            emit_csv(
                ctx,
                "kms",
                &[
                    "tau_re",
                    "tau_im",
                    "window",
                    "closed_form_residual",
                    "tau_shift_residual",
                    "unit_shift_residual",
                    "edge_bound",
                    "passed",
                ],
                &rows,
            )?;
            emit_json(ctx, &serde_json::Value::Array(reports))?;
            Ok(ok)
        }
    }
}

fn cmd_verify_all(ctx: &mut Ctx, only: &[u32], tol: Option<f64>) -> Res<bool> {
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(GciError::Usage("--tol must be positive".into()));
        }
        for (name, _) in gcikit::config::DEFAULT_TOLERANCES {
            ctx.cfg.tolerances.insert(name.into(), t);
        }
    }
    let summary = if only.is_empty() {
        run_all(&ctx.cfg)
    } else {
        let checks = only
            .iter()
            .map(|&id| run_check(id, &ctx.cfg))
            .collect::<Res<Vec<_>>>()?;
        gcikit::verify::Summary {
            seed: ctx.cfg.seed,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    };
    for c in &summary.checks {
        println!("{}", c.line());
    }
    println!(
        "{}",
        if summary.passed {
            "ALL PASS"
        } else {
            "FAILURES PRESENT"
        }
    );
    emit_json(ctx, &to_json(&summary))?;
    Ok(summary.passed)
}

fn run(cli: &Cli) -> Res<bool> {
    let mut ctx = build_ctx(&cli.common)?;
    ctx.cfg.params.validate()?;
    match &cli.cmd {
        Cmd::Decompose => cmd_decompose(&ctx),
        Cmd::Positivity { grid, l_scan } => cmd_positivity(&ctx, grid, *l_scan),
        Cmd::Oracle {
            n,
            count,
            corrupt_sign,
        } => cmd_oracle(&ctx, *n, *count, *corrupt_sign),
        Cmd::Thermal { what } => cmd_thermal(&ctx, what),
        Cmd::VerifyAll { only, tol } => cmd_verify_all(&mut ctx, only, *tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
