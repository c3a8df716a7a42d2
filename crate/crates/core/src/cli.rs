//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when a solver fails. Solver
//! failures are also reported on stderr as `{"error": kind, "message": text}`.
//! Every real number is written in scientific notation with 17 significant
//! digits, so identical runs produce identical bytes.

use crate::airy::{airy_scaled, AiryKind};
use crate::collocation;
use crate::critical_layer::{AiryGreen, GreenPart};
use crate::dispersion::{self, RootForm, SolveOptions, BETA_LOWER, BETA_UPPER};
use crate::error::{Error, Result};
use crate::flow::Flow;
use crate::mesh::MeshOptions;
use crate::orr_modes::build_modes;
use crate::profiles::ShearProfile;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::io::Write;

type C = Complex64;

#[derive(Debug, Parser)]
#[command(name = "orrsom", version, about = "Orr-Sommerfeld modes, dispersion roots and marginal branches for symmetric channel flows")]
#[command(args_override_self = true)]
pub struct Cli {
    /// `key = value` file supplying defaults for any flag (flags win).
    #[arg(long, global = true)]
    pub config: Option<String>,
    /// Omit the metadata line (version and wall-clock time).
    #[arg(long, global = true)]
    pub no_meta: bool,
    /// Worker threads for sweeps (default: logical cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Branch {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Full,
    Reduced,
}

#[derive(Debug, Args)]
pub struct Common {
    /// `poiseuille`, `sin`, `couette` or `poly: [a0, a1, ...]`.
    #[arg(long, default_value = "poiseuille")]
    pub profile: String,
    /// Secant tolerance on `|dc|`.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Stopping tolerance of the mode series.
    #[arg(long, default_value_t = 1e-12)]
    pub mode_tol: f64,
    /// Function driven to zero by the root finder.
    #[arg(long, value_enum, default_value_t = Form::Full)]
    pub form: Form,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for c(alpha, R); JSON output.
    Eigen {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        reynolds: f64,
        /// Initial guess `re,im`.
        #[arg(long)]
        c_init: Option<String>,
    },
    /// Bisected sign changes of Im c along a marginal branch; CSV output.
    NeutralCurve {
        #[command(flatten)]
        common: Common,
        /// `lo:hi:logN` grid or a comma list.
        #[arg(long)]
        reynolds: String,
        #[arg(long, value_enum, default_value_t = Branch::Lower)]
        branch: Branch,
        /// Sweep of A as `lo:hi:logN` or a comma list.
        #[arg(long, default_value = "0.2:5:13")]
        a_range: String,
    },
    /// Growth rates along alpha = A R^-beta; CSV output with fitted slopes.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// One or more comma-separated exponents.
        #[arg(long, default_value = "0.125")]
        beta: String,
        /// Comma list or `lo:hi:logN` grid.
        #[arg(long, default_value = "1e5,1e6,1e7")]
        reynolds_list: String,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Dump the four modes and the ratios K_1..K_4.
    Modes {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        reynolds: f64,
        /// Wave speed `re,im`; solved for when omitted.
        #[arg(long)]
        c: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Operator-method and collocation eigenvalues side by side; JSON output.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        reynolds: f64,
        /// Collocation degree.
        #[arg(long, default_value_t = 120)]
        n: usize,
    },
    /// Golden table of Airy values; CSV output.
    #[command(hide = true)]
    AiryTable {
        /// Comma list of radii on the five rays.
        #[arg(long, default_value = "0.5,2,5,10,20")]
        radii: String,
    },
    /// Slice x -> G(x, z0) of the Airy Green function; CSV output.
    GreenSlice {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        reynolds: f64,
        /// Wave speed `re,im`.
        #[arg(long)]
        c: String,
        /// Real position of the source point; the nearest contour node is used.
        #[arg(long, default_value_t = 0.5)]
        z0: f64,
    },
}

/// Scientific notation with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// JSON number carrying the exact 17-digit text of `fmt_real`.
fn num(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    fmt_real(v).parse::<serde_json::Number>().map(Value::Number).unwrap_or(Value::Null)
}

fn opt_num(v: Option<f64>) -> Value {
    v.map(num).unwrap_or(Value::Null)
}

fn csv_opt(v: Option<f64>) -> String {
    v.map(fmt_real).unwrap_or_else(|| "nan".into())
}

/// Parses `re,im` (or a single real).
pub fn parse_complex(s: &str) -> Result<C> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let p = |t: &str| t.parse::<f64>().map_err(|_| Error::UsageError(format!("bad number '{t}' in '{s}'")));
    match parts.as_slice() {
        [re] => Ok(C::new(p(re)?, 0.0)),
        [re, im] => Ok(C::new(p(re)?, p(im)?)),
        _ => Err(Error::UsageError(format!("expected re,im, got '{s}'"))),
    }
}

/// `lo:hi:logN` (log-spaced, `N` points) or a comma list.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::UsageError(format!("bad range '{s}'"));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        let count = parts[2].strip_prefix("log").unwrap_or(parts[2]);
        let n: usize = count.parse().map_err(|_| bad())?;
        if !(lo > 0.0 && hi >= lo && n >= 1) {
            return Err(Error::UsageError(format!("range '{s}' must satisfy 0 < lo <= hi and N >= 1")));
        }
        return Ok(dispersion::log_grid(lo, hi, n));
    }
    let v: std::result::Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let v = v.map_err(|_| bad())?;
    if v.is_empty() || v.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::UsageError(format!("list '{s}' must be non-empty and increasing")));
    }
    Ok(v)
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::UsageError(format!("config line {}: expected key = value", n + 1)))?;
        out.push((k.trim().replace('_', "-"), v.trim().trim_matches('"').to_string()));
    }
    Ok(out)
}

/// Appends config entries as flags unless the command line already sets them.
fn merge_config(argv: &[String]) -> Result<Vec<String>> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or_else(|| Error::UsageError("--config needs a path".into()))?.clone());
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a.clone());
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = std::fs::read_to_string(&path).map_err(|e| Error::UsageError(format!("cannot read config '{path}': {e}")))?;
    let entries = parse_config(&text)?;
    let names: Vec<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
    let has_command = rest.iter().skip(1).any(|a| names.contains(a));
    for (k, v) in &entries {
        if k == "command" {
            if !has_command {
                rest.insert(1.min(rest.len()), v.clone());
            }
            continue;
        }
        let flag = format!("--{k}");
        let present = rest.iter().any(|a| a == &flag || a.starts_with(&format!("{flag}=")));
        if present {
            continue;
        }
        if k == "no-meta" {
            if v == "true" {
                rest.push(flag);
            }
            continue;
        }
        rest.push(format!("{flag}={v}"));
    }
    Ok(rest)
}

fn solve_options(c: &Common) -> Result<SolveOptions> {
    if !(c.tol > 0.0 && c.mode_tol > 0.0) {
        return Err(Error::UsageError("tolerances must be positive".into()));
    }
    Ok(SolveOptions {
        tol: c.tol,
        mode_tol: c.mode_tol,
        form: match c.form {
            Form::Full => RootForm::Full,
            Form::Reduced => RootForm::Reduced,
        },
        ..SolveOptions::default()
    })
}

fn meta_line(no_meta: bool) -> Option<String> {
    if no_meta {
        return None;
    }
    let t = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Some(format!("orrsom {} unix_time={t}", env!("CARGO_PKG_VERSION")))
}

enum Output {
    Csv(Vec<String>, Vec<Vec<String>>),
    Json(Map<String, Value>),
}

fn render(out: Output, meta: Option<String>) -> String {
    match out {
        Output::Csv(header, rows) => {
            let mut s = String::new();
            if let Some(m) = meta {
                s += &format!("# {m}\n");
            }
            s += &header.join(",");
            s.push('\n');
            for r in rows {
                s += &r.join(",");
                s.push('\n');
            }
            s
        }
        Output::Json(mut map) => {
            if let Some(m) = meta {
                map.insert("meta".into(), Value::String(m));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(map)).unwrap_or_default();
            s.push('\n');
            s
        }
    }
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn run_eigen(common: &Common, alpha: f64, reynolds: f64, c_init: Option<&str>) -> Result<Output> {
    let profile = ShearProfile::from_name(&common.profile)?;
    let opts = solve_options(common)?;
    let seed = c_init.map(parse_complex).transpose()?;
    let r = dispersion::solve_eigenvalue(alpha, reynolds, &profile, seed, &opts)?;
    Ok(Output::Json(obj(json!({
        "alpha": num(r.alpha),
        "R": num(r.reynolds),
        "c_re": num(r.c.re),
        "c_im": num(r.c.im),
        "growth_rate": num(r.growth_rate),
        "residual": num(r.residual),
        "iterations": r.newton_iterations,
    }))))
}

fn run_neutral(common: &Common, reynolds: &str, branch: Branch, a_range: &str) -> Result<Output> {
    let profile = ShearProfile::from_name(&common.profile)?;
    let opts = solve_options(common)?;
    let rs = parse_range(reynolds)?;
    let a_values = parse_range(a_range)?;
    let beta = match branch {
        Branch::Lower => BETA_LOWER,
        Branch::Upper => BETA_UPPER,
    };
    let scans: Vec<Result<dispersion::BranchScan>> = rs
        .par_iter()
        .map(|&r| dispersion::scan_branch(&profile, r, beta, &a_values, &opts))
        .collect();
    let mut rows = Vec::new();
    for scan in scans {
        let scan = scan?;
        if scan.crossings.is_empty() {
            rows.push(vec![fmt_real(scan.reynolds), "nan".into(), "nan".into(), "nan".into()]);
        }
        for x in &scan.crossings {
            rows.push(vec![fmt_real(scan.reynolds), fmt_real(x.a), fmt_real(x.alpha), fmt_real(x.c.1)]);
        }
    }
    let header = ["R", "A_crossing", "alpha", "im_c_at_crossing"].map(String::from).to_vec();
    Ok(Output::Csv(header, rows))
}

fn run_sweep(common: &Common, beta: &str, reynolds_list: &str, a: f64) -> Result<Output> {
    let profile = ShearProfile::from_name(&common.profile)?;
    let opts = solve_options(common)?;
    let betas = parse_range(beta)?;
    let rs = parse_range(reynolds_list)?;
    let table = dispersion::scan_growth_rates(&profile, &betas, &rs, a, &opts)?;
    let header = ["beta", "R", "alpha", "im_c", "growth_rate", "slope_im_c", "slope_growth_rate"]
        .map(String::from)
        .to_vec();
    let rows = table
        .rows
        .iter()
        .map(|r| {
            let s = table.slopes.iter().find(|s| s.beta == r.beta);
            vec![
                fmt_real(r.beta),
                fmt_real(r.reynolds),
                fmt_real(r.alpha),
                csv_opt(r.im_c),
                csv_opt(r.growth_rate),
                csv_opt(s.and_then(|s| s.im_c)),
                csv_opt(s.and_then(|s| s.growth_rate)),
            ]
        })
        .collect();
    Ok(Output::Csv(header, rows))
}

fn run_modes(common: &Common, alpha: f64, reynolds: f64, c: Option<&str>, format: Format) -> Result<Output> {
    let profile = ShearProfile::from_name(&common.profile)?;
    let opts = solve_options(common)?;
    let c = match c {
        Some(s) => parse_complex(s)?,
        None => dispersion::solve_eigenvalue(alpha, reynolds, &profile, None, &opts)?.c,
    };
    let flow = Flow::new(&profile, c, alpha, Some(reynolds), MeshOptions::default())?;
    let set = build_modes(&flow, opts.mode_tol)?;
    match format {
        Format::Csv => {
            let header = ["z", "re_phi", "im_phi", "re_dphi", "im_dphi", "order"].map(String::from).to_vec();
            let mut rows = Vec::new();
            for (j, m) in set.modes.iter().enumerate() {
                let s = m.phi.log_scale.exp();
                for (i, z) in flow.mesh.nodes.iter().enumerate() {
                    let (v, d) = (m.phi.d[0][i] * s, m.phi.d[1][i] * s);
                    rows.push(vec![
                        fmt_real(z.re),
                        fmt_real(v.re),
                        fmt_real(v.im),
                        fmt_real(d.re),
                        fmt_real(d.im),
                        format!("{}", j + 1),
                    ]);
                }
            }
            Ok(Output::Csv(header, rows))
        }
        Format::Json => {
            let k: Vec<Value> = set.k.iter().map(|k| json!({"re": num(k.re), "im": num(k.im)})).collect();
            let modes: Vec<Value> = set
                .modes
                .iter()
                .enumerate()
                .map(|(j, m)| {
                    json!({
                        "mode": j + 1,
                        "log_scale": num(m.phi.log_scale),
                        "residual": num(m.residual),
                        "terms": m.history.len(),
                        "traces": set.traces[j].iter().map(|end| end.iter().map(|t| {
                            let v = t.to_c();
                            json!({"re": num(v.re), "im": num(v.im)})
                        }).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(Output::Json(obj(json!({
                "alpha": num(alpha),
                "R": num(reynolds),
                "c_re": num(c.re),
                "c_im": num(c.im),
                "k": k,
                "modes": modes,
            }))))
        }
    }
}

/// Both methods; solver failures are reported in the output and turn the exit code to 2.
fn run_validate(common: &Common, alpha: f64, reynolds: f64, n: usize) -> Result<(Output, Option<Error>)> {
    let profile = ShearProfile::from_name(&common.profile)?;
    let opts = solve_options(common)?;
    let op = dispersion::solve_eigenvalue(alpha, reynolds, &profile, None, &opts);
    let problem = collocation::assemble(&profile, alpha, reynolds, n)?;
    let col = match &op {
        Ok(r) => problem.nearest(r.c),
        Err(_) => collocation::leading(&problem).map(Some),
    };
    let mut map = obj(json!({ "alpha": num(alpha), "R": num(reynolds), "n": n }));
    let mut failure = None;
    match &op {
        Ok(r) => {
            map.insert("c_operator_re".into(), num(r.c.re));
            map.insert("c_operator_im".into(), num(r.c.im));
        }
        Err(e) => {
            map.insert("c_operator_re".into(), Value::Null);
            map.insert("c_operator_im".into(), Value::Null);
            map.insert("operator_error".into(), Value::String(e.to_string()));
            failure = Some(e.clone());
        }
    }
    match &col {
        Ok(Some(e)) => {
            map.insert("c_collocation_re".into(), num(e.c.re));
            map.insert("c_collocation_im".into(), num(e.c.im));
            map.insert("collocation_gap".into(), num(e.gap));
        }
        Ok(None) => {
            map.insert("c_collocation_re".into(), Value::Null);
            map.insert("c_collocation_im".into(), Value::Null);
            failure.get_or_insert(Error::EigenSolveFailed("no converged collocation eigenvalue".into()));
        }
        Err(e) => {
            map.insert("c_collocation_re".into(), Value::Null);
            map.insert("c_collocation_im".into(), Value::Null);
            map.insert("collocation_error".into(), Value::String(e.to_string()));
            failure.get_or_insert(e.clone());
        }
    }
    let delta = match (&op, &col) {
        (Ok(r), Ok(Some(e))) => Some((r.c - e.c).norm()),
        _ => None,
    };
    map.insert("delta_c".into(), opt_num(delta));
    Ok((Output::Json(map), failure))
}

fn run_airy_table(radii: &str) -> Result<Output> {
    let radii = parse_range(radii)?;
    let header = ["z_re", "z_im", "kind", "order", "value_re", "value_im"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for ray in 0..5 {
        let theta = std::f64::consts::PI * ray as f64 / 4.0;
        for &r in &radii {
            let z = C::from_polar(r, theta);
            for kind in [AiryKind::Ai, AiryKind::Ci] {
                for order in -2..=2 {
                    let v = airy_scaled(kind, order, z)?;
                    let (re, im) = if v.ln_abs() > 709.0 {
                        (f64::INFINITY, f64::INFINITY)
                    } else {
                        let c = v.to_c();
                        (c.re, c.im)
                    };
                    rows.push(vec![fmt_real(z.re), fmt_real(z.im), kind.label().into(), order.to_string(), fmt_real(re), fmt_real(im)]);
                }
            }
        }
    }
    Ok(Output::Csv(header, rows))
}

fn run_green_slice(common: &Common, alpha: f64, reynolds: f64, c: &str, z0: f64) -> Result<Output> {
    let profile = ShearProfile::from_name(&common.profile)?;
    let c = parse_complex(c)?;
    let flow = Flow::new(&profile, c, alpha, Some(reynolds), MeshOptions::default())?;
    let green = AiryGreen::new(&flow)?;
    let target = C::new(z0, 0.0);
    let j = (0..flow.n())
        .min_by(|&a, &b| (flow.mesh.nodes[a] - target).norm().total_cmp(&(flow.mesh.nodes[b] - target).norm()))
        .unwrap_or(0);
    let header = ["x_re", "x_im", "g_re", "g_im"].map(String::from).to_vec();
    let rows = (0..flow.n())
        .map(|i| {
            let g = green.green(i, j, GreenPart::Full);
            let x = flow.mesh.nodes[i];
            vec![fmt_real(x.re), fmt_real(x.im), fmt_real(g.re), fmt_real(g.im)]
        })
        .collect();
    Ok(Output::Csv(header, rows))
}

fn dispatch(cli: &Cli) -> Result<(Output, Option<Error>)> {
    let ok = |o: Output| (o, None);
    Ok(match &cli.command {
        Command::Eigen { common, alpha, reynolds, c_init } => ok(run_eigen(common, *alpha, *reynolds, c_init.as_deref())?),
        Command::NeutralCurve { common, reynolds, branch, a_range } => ok(run_neutral(common, reynolds, *branch, a_range)?),
        Command::Sweep { common, beta, reynolds_list, a } => ok(run_sweep(common, beta, reynolds_list, *a)?),
        Command::Modes { common, alpha, reynolds, c, format } => ok(run_modes(common, *alpha, *reynolds, c.as_deref(), *format)?),
        Command::Validate { common, alpha, reynolds, n } => run_validate(common, *alpha, *reynolds, *n)?,
        Command::AiryTable { radii } => ok(run_airy_table(radii)?),
        Command::GreenSlice { common, alpha, reynolds, c, z0 } => ok(run_green_slice(common, *alpha, *reynolds, c, *z0)?),
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UsageError(_) => 1,
        _ => 2,
    }
}

fn report(e: &Error) {
    let v = json!({ "error": e.kind(), "message": e.to_string() });
    eprintln!("{v}");
}

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn parse_and_dispatch(argv: &[String]) -> i32 {
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(e) => {
            report(&e);
            return 1;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let run = || -> Result<(Output, Option<Error>)> { dispatch(&cli) };
    let result = match cli.workers {
        Some(0) => Err(Error::UsageError("--workers must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(Error::UsageError(format!("cannot start {n} workers: {e}"))),
        },
        None => run(),
    };
    let (out, failure) = match result {
        Ok(r) => r,
        Err(e) => {
            report(&e);
            return exit_code(&e);
        }
    };
    let text = render(out, meta_line(cli.no_meta));
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes()).map_err(|e| e.to_string()),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
            _ => Ok(()),
        },
    };
    if let Err(msg) = written {
        report(&Error::UsageError(format!("cannot write output: {msg}")));
        return 1;
    }
    match failure {
        Some(e) => {
            report(&e);
            exit_code(&e).max(2)
        }
        None => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_real(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_real(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn log_range_grammar() {
        let v = parse_range("1e4:1e7:log4").unwrap();
        assert_eq!(v.len(), 4);
        assert!((v[1] - 1e5).abs() < 1e-6 && (v[3] - 1e7).abs() < 1e-4);
        assert_eq!(parse_range("1e5,1e6").unwrap(), vec![1e5, 1e6]);
        assert!(parse_range("1e6,1e5").is_err());
        assert!(parse_range("5:1:log3").is_err());
    }

    #[test]
    fn config_lines() {
        let c = parse_config("# run\nalpha = 0.15\nreynolds=1e5 # comment\nno_meta = true\n").unwrap();
        assert_eq!(c, vec![("alpha".into(), "0.15".into()), ("reynolds".into(), "1e5".into()), ("no-meta".into(), "true".into())]);
        assert!(parse_config("oops").is_err());
    }

    #[test]
    fn complex_literal() {
        assert_eq!(parse_complex("0.1, -0.02").unwrap(), C::new(0.1, -0.02));
        assert!(parse_complex("a,b").is_err());
    }
}
