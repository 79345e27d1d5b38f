//! The `qsd` command line: single points, sweeps, Wigner grids and the
//! validation suite.
//!
//! Exit status: 0 success, 1 usage or I/O error, 2 failed validation,
//! 3 degenerate parameters (including a herald that never fires).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::closed_form;
use crate::error::Error;
use crate::observables::{self, WignerGridSpec};
use crate::report::{self, format_float, SweepRow};
use crate::scissors::{run_qsd, QsdParams};
use crate::states::DEFAULT_TAIL_TOL;
use crate::validation::{run_suite, ValidationConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qsd",
    version,
    about = "Quantum scissors on thermal light: simulation and closed-form cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one (nbar, T) point.
    Simulate(CommonArgs),
    /// Evaluate every (nbar, T) pair, nbar outer and T inner.
    Sweep(CommonArgs),
    /// Sample the output Wigner function on a (q, p) grid.
    Wigner {
        #[command(flatten)]
        common: CommonArgs,
        /// "qmin:qmax:n,pmin:pmax:n"
        #[arg(long, default_value = "-3:3:121,-3:3:121", allow_hyphen_values = true)]
        grid: String,
    },
    /// Run the invariant and oracle checks.
    Validate(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Mean thermal photon number(s), comma separated.
    #[arg(long, allow_hyphen_values = true)]
    nbar: Option<String>,
    /// Transmissivity: comma list or min:max:step.
    #[arg(long = "T", allow_hyphen_values = true)]
    t: Option<String>,
    /// Thermal tail mass allowed to be dropped.
    #[arg(long, default_value_t = DEFAULT_TAIL_TOL)]
    tail_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accepted for interface stability; nothing here is random.
    #[arg(long)]
    seedless: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(io::Error),
    Degenerate(String),
    Validation(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Degenerate { .. } | Error::HeraldNeverFires { .. } => {
                Failure::Degenerate(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => EXIT_USAGE,
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Degenerate(_) => EXIT_DEGENERATE,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("usage error: {m}"),
            Failure::Io(e) => format!("i/o error: {e}"),
            Failure::Degenerate(m) => m.clone(),
            Failure::Validation(m) => format!("validation failed: {m}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn parse_number(s: &str) -> CliResult<f64> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("not a number: {s:?}")))?;
    if !x.is_finite() {
        return Err(Failure::Usage(format!("not a finite number: {s:?}")));
    }
    Ok(x)
}

/// Inclusive `min:max:step` range. When the step divides the span, the
/// points are placed as min + (max−min)·i/(n−1) so both ends are exact.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("range must be min:max:step, got {spec:?}"));
    }
    let num = |s: &str| parse_number(s).map_err(|f| f.message());
    let (lo, hi, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
    if lo > hi {
        return Err(format!("range min {lo} exceeds max {hi}"));
    }
    if step <= 0.0 {
        return Err(format!("range step must be positive, got {step}"));
    }
    let span = (hi - lo) / step;
    if span > 1e7 {
        return Err(format!("range {spec:?} has too many points"));
    }
    let rounded = span.round();
    if (span - rounded).abs() <= 1e-9 * rounded.max(1.0) {
        let n = rounded as usize;
        if n == 0 {
            return Ok(vec![lo]);
        }
        Ok((0..=n)
            .map(|i| lo + (hi - lo) * i as f64 / n as f64)
            .collect())
    } else {
        let n = span.floor() as usize;
        Ok((0..=n).map(|i| lo + step * i as f64).collect())
    }
}

/// Comma list, or a single `min:max:step` range.
pub fn parse_values(spec: &str) -> Result<Vec<f64>, String> {
    if spec.contains(':') {
        return parse_range(spec);
    }
    let values = spec
        .split(',')
        .map(|s| parse_number(s).map_err(|f| f.message()))
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("empty list".into());
    }
    Ok(values)
}

/// `qmin:qmax:n,pmin:pmax:n`.
pub fn parse_grid(spec: &str) -> Result<WignerGridSpec, String> {
    let axes: Vec<&str> = spec.split(',').collect();
    if axes.len() != 2 {
        return Err(format!(
            "grid must be qmin:qmax:n,pmin:pmax:n, got {spec:?}"
        ));
    }
    let axis = |s: &str| -> Result<(f64, f64, usize), String> {
        let p: Vec<&str> = s.split(':').collect();
        if p.len() != 3 {
            return Err(format!("grid axis must be min:max:n, got {s:?}"));
        }
        let lo = parse_number(p[0]).map_err(|f| f.message())?;
        let hi = parse_number(p[1]).map_err(|f| f.message())?;
        let n: usize = p[2].trim().parse().map_err(|_| {
            format!(
                "grid point count must be a positive integer, got {:?}",
                p[2]
            )
        })?;
        Ok((lo, hi, n))
    };
    let (q_min, q_max, q_points) = axis(axes[0])?;
    let (p_min, p_max, p_points) = axis(axes[1])?;
    let grid = WignerGridSpec {
        q_min,
        q_max,
        q_points,
        p_min,
        p_max,
        p_points,
        ..WignerGridSpec::default()
    };
    grid.validate().map_err(|e| e.to_string())?;
    Ok(grid)
}

fn values(arg: &Option<String>, flag: &str) -> CliResult<Option<Vec<f64>>> {
    arg.as_deref()
        .map(|s| parse_values(s).map_err(|m| Failure::Usage(format!("--{flag}: {m}"))))
        .transpose()
}

fn required(arg: &Option<String>, flag: &str) -> CliResult<Vec<f64>> {
    values(arg, flag)?.ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn scalar(arg: &Option<String>, flag: &str) -> CliResult<f64> {
    match required(arg, flag)?.as_slice() {
        [x] => Ok(*x),
        many => Err(Failure::Usage(format!(
            "--{flag} takes a single value here, got {}",
            many.len()
        ))),
    }
}

fn check_tail(tail_tol: f64) -> CliResult<()> {
    if tail_tol > 0.0 && tail_tol < 1.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "--tail-tol must lie in (0, 1), got {tail_tol}"
        )))
    }
}

fn open_output(out: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn config_json(command: &str, common: &CommonArgs, nbars: &[f64], ts: &[f64]) -> Value {
    json!({
        "command": command,
        "nbar": nbars,
        "T": ts,
        "tail_tol": common.tail_tol,
        "format": common.format.name(),
    })
}

fn write_rows(
    command: &str,
    common: &CommonArgs,
    nbars: &[f64],
    ts: &[f64],
    rows: &[SweepRow],
) -> CliResult<()> {
    let mut out = open_output(&common.out)?;
    match common.format {
        Format::Csv => report::write_csv(rows, &mut out)?,
        Format::Json => {
            report::write_json(config_json(command, common, nbars, ts), rows, &mut out)?
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_simulate(common: &CommonArgs) -> CliResult<()> {
    check_tail(common.tail_tol)?;
    let nbar = scalar(&common.nbar, "nbar")?;
    let t = scalar(&common.t, "T")?;
    let params = QsdParams::new(nbar, t, common.tail_tol)?;
    let row = SweepRow::Point(report::MeritReport::compute(&params)?);
    write_rows("simulate", common, &[nbar], &[t], &[row])
}

fn cmd_sweep(common: &CommonArgs) -> CliResult<()> {
    check_tail(common.tail_tol)?;
    let nbars = required(&common.nbar, "nbar")?;
    let ts = required(&common.t, "T")?;
    let rows = report::sweep(&nbars, &ts, common.tail_tol)?;
    write_rows("sweep", common, &nbars, &ts, &rows)
}

fn cmd_wigner(common: &CommonArgs, grid_spec: &str) -> CliResult<()> {
    check_tail(common.tail_tol)?;
    let nbar = scalar(&common.nbar, "nbar")?;
    let t = scalar(&common.t, "T")?;
    let grid = parse_grid(grid_spec).map_err(|m| Failure::Usage(format!("--grid: {m}")))?;
    let result = run_qsd(&QsdParams::new(nbar, t, common.tail_tol)?)?;
    let sampled = observables::wigner(&result.rho_out, &grid)?;
    let (w_min, q_at, p_at) = sampled.min();

    let mut rows = Vec::with_capacity(grid.q_points * grid.p_points);
    for (i, &q) in sampled.q_axis.iter().enumerate() {
        for (j, &p) in sampled.p_axis.iter().enumerate() {
            let numeric = sampled.values[(i, j)];
            let beta_sq = observables::beta_of(q, p).norm_sqr();
            let analytic = closed_form::wigner_out(nbar, t, beta_sq)?;
            rows.push([q, p, numeric, analytic, (numeric - analytic).abs()]);
        }
    }

    let mut out = open_output(&common.out)?;
    match common.format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut out);
            w.write_record(["q", "p", "W_num", "W_cf", "W_err"])?;
            for r in &rows {
                w.write_record(r.iter().map(|&x| format_float(x)))?;
            }
            w.flush()?;
            drop(w);
            eprintln!(
                "min W = {} at q = {}, p = {}",
                format_float(w_min),
                format_float(q_at),
                format_float(p_at)
            );
        }
        Format::Json => {
            let mut config = config_json("wigner", common, &[nbar], &[t]);
            config["grid"] = json!({
                "q_min": grid.q_min, "q_max": grid.q_max, "q_points": grid.q_points,
                "p_min": grid.p_min, "p_max": grid.p_max, "p_points": grid.p_points,
            });
            let doc = json!({
                "config": config,
                "summary": { "min_W": w_min, "q": q_at, "p": p_at },
                "rows": rows.iter().map(|r| json!({
                    "q": r[0], "p": r[1], "W_num": r[2], "W_cf": r[3], "W_err": r[4],
                })).collect::<Vec<_>>(),
            });
            serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_validate(common: &CommonArgs) -> CliResult<()> {
    check_tail(common.tail_tol)?;
    let mut cfg = ValidationConfig {
        tail_tol: common.tail_tol,
        ..ValidationConfig::default()
    };
    if let Some(n) = values(&common.nbar, "nbar")? {
        cfg.nbars = n;
    }
    if let Some(t) = values(&common.t, "T")? {
        cfg.transmissivities = t;
    }
    let checks = run_suite(&cfg)?;
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.name.as_str())
        .collect();

    let mut out = open_output(&common.out)?;
    match common.format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut out);
            w.write_record(["check", "status", "max_deviation", "tolerance"])?;
            for c in &checks {
                w.write_record([
                    c.name.clone(),
                    if c.passed() { "PASS" } else { "FAIL" }.to_string(),
                    format_float(c.max_deviation),
                    format_float(c.tolerance),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let doc = json!({
                "config": config_json("validate", common, &cfg.nbars, &cfg.transmissivities),
                "passed": failed.is_empty(),
                "checks": checks.iter().map(|c| json!({
                    "name": c.name,
                    "passed": c.passed(),
                    "max_deviation": c.max_deviation,
                    "tolerance": c.tolerance,
                })).collect::<Vec<_>>(),
            });
            serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    out.flush()?;

    if failed.is_empty() {
        eprintln!("PASS: {} checks", checks.len());
        Ok(())
    } else {
        Err(Failure::Validation(failed.join(", ")))
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Simulate(c) => cmd_simulate(c),
        Command::Sweep(c) => cmd_sweep(c),
        Command::Wigner { common, grid } => cmd_wigner(common, grid),
        Command::Validate(c) => cmd_validate(c),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("qsd: {}", f.message());
            f.exit_code()
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}
