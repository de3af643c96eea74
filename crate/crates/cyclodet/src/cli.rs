//! Command-line front end. Exit codes: 0 when everything checked passes,
//! 2 when a check or backend comparison fails, 1 for usage and I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclodet_core::classno;
use cyclodet_core::detkit::{self, Backend, DetValue};
use cyclodet_core::matrices::{ExactMatrix, Family};
use cyclodet_core::subfield;
use cyclodet_core::verify::{BackendChoice, DeltaMode, VerifyOptions};

use crate::cache::{Cache, CACHE_ENV};
use crate::report::{self, ReportJson};
use crate::runner::{self, RunError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cyclodet", version, about = "Exact determinants of cyclotomic and Legendre-symbol matrices")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify every identity for all primes in a range.
    Verify(VerifyArgs),
    /// Print one determinant.
    Det(DetArgs),
    /// Print h(-p), or h(p) and the fundamental unit.
    Classno(ClassnoArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum BackendArg {
    Bareiss,
    Modular,
    Both,
}

impl From<BackendArg> for BackendChoice {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Bareiss => BackendChoice::Bareiss,
            BackendArg::Modular => BackendChoice::Modular,
            BackendArg::Both => BackendChoice::Both,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

fn parse_delta_mode(s: &str) -> Result<DeltaMode, String> {
    let s = s.trim();
    match s {
        "least" => return Ok(DeltaMode::Least),
        "sweep" => return Ok(DeltaMode::Sweep(3)),
        _ => {}
    }
    if let Some(k) = s.strip_prefix("sweep:") {
        let k: usize = k.parse().map_err(|_| format!("bad sweep count `{k}`"))?;
        if k == 0 {
            return Err("sweep count must be positive".into());
        }
        return Ok(DeltaMode::Sweep(k));
    }
    s.parse::<i64>()
        .map(DeltaMode::Explicit)
        .map_err(|_| format!("expected `least`, `sweep`, `sweep:K` or an integer, got `{s}`"))
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    pmin: u32,
    #[arg(long)]
    pmax: u32,
    /// `least`, an explicit non-residue, `sweep` (three values) or `sweep:K`.
    #[arg(long, default_value = "least", value_parser = parse_delta_mode)]
    delta: DeltaMode,
    #[arg(long, value_enum, default_value_t = BackendArg::Both)]
    backend: BackendArg,
    /// Largest p for which `both` also runs cyclotomic Bareiss.
    #[arg(long, default_value_t = 60)]
    bareiss_max_p: u32,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DetArgs {
    /// One of C, D, DD, Dtilde, E, F, S, T, SD.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    p: u32,
    /// Non-residue for DD, F, T, SD; defaults to the least one.
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<i64>,
    #[arg(long, value_enum, default_value_t = BackendArg::Modular)]
    backend: BackendArg,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::from_name(s).ok_or_else(|| {
        let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
        format!("unknown family `{s}`; expected one of {}", names.join(", "))
    })
}

#[derive(Args, Debug)]
struct ClassnoArgs {
    #[arg(long)]
    p: u32,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.cmd {
        Command::Verify(a) => cmd_verify(a, &mut out),
        Command::Det(a) => cmd_det(a, &mut out),
        Command::Classno(a) => cmd_classno(a, &mut out),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, String> {
    if a.pmin > a.pmax {
        return Err(format!("--pmin {} exceeds --pmax {}", a.pmin, a.pmax));
    }
    let opts = VerifyOptions { delta: a.delta, backend: a.backend.into(), bareiss_max_p: a.bareiss_max_p };
    let cache = match &a.cache_dir {
        Some(dir) => Some(Cache::open(dir).map_err(|e| format!("cache directory {}: {e}", dir.display()))?),
        None => None,
    };
    let reports = runner::run_range(a.pmin, a.pmax, &opts, a.threads.map(usize::from), cache.as_ref())
        .map_err(|e| match e {
            RunError::Usage(s) => s,
            RunError::Io(e) => format!("I/O error: {e}"),
        })?;
    let bytes = render(&reports, a.format)?;
    match &a.out {
        Some(path) => fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display()))?,
        None => out.write_all(&bytes).map_err(|e| e.to_string())?,
    }
    let failed: Vec<_> = reports.iter().filter(|r| !r.all_passed()).collect();
    let checks: usize = reports.iter().map(|r| r.checks.len()).sum();
    eprintln!("{} primes, {} checks, {} primes with failures", reports.len(), checks, failed.len());
    for r in &failed {
        for (name, c) in r.checks.iter().filter(|(_, c)| !c.pass) {
            eprintln!("  p = {}: {name} failed ({} vs {})", r.p, c.lhs, c.rhs);
        }
    }
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_FAILED })
}

fn render(reports: &[ReportJson], format: Format) -> Result<Vec<u8>, String> {
    match format {
        Format::Json => report::to_json(reports).map(String::into_bytes).map_err(|e| e.to_string()),
        Format::Csv => {
            let mut buf = Vec::new();
            report::write_csv(reports, &mut buf).map_err(|e| e.to_string())?;
            Ok(buf)
        }
    }
}

fn cmd_det(a: DetArgs, out: &mut dyn Write) -> Result<i32, String> {
    let delta = match (a.family.needs_delta(), a.delta) {
        (true, Some(d)) => Some(d),
        (true, None) => {
            cyclodet_core::arith::odd_prime(a.p as i64).map_err(|e| e.to_string())?;
            Some(cyclodet_core::arith::least_nonresidue(a.p) as i64)
        }
        (false, Some(_)) => return Err(format!("family {} takes no --delta", a.family.name())),
        (false, None) => None,
    };
    let m = ExactMatrix::build(a.family, a.p, delta).map_err(|e| e.to_string())?;
    let backends: &[Backend] = match a.backend {
        BackendArg::Bareiss => &[Backend::Bareiss],
        BackendArg::Modular => &[Backend::Modular],
        BackendArg::Both => &[Backend::Modular, Backend::Bareiss],
    };
    let mut values = Vec::new();
    for &b in backends {
        values.push(detkit::det(&m, b).map_err(|e| e.to_string())?.value);
    }
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(|e| e.to_string());
    let value = &values[0];
    match value {
        DetValue::Integer(v) => w(out, v.to_string())?,
        DetValue::Cyclotomic(x) => {
            w(out, x.to_string())?;
            let coeffs: Vec<String> = x.coeffs().iter().map(ToString::to_string).collect();
            w(out, format!("coefficients: [{}]", coeffs.join(", ")))?;
            if subfield::is_quadratic(x) {
                let q = subfield::quad_decompose(x).map_err(|e| e.to_string())?;
                w(out, format!("quadratic: {q}"))?;
            } else if let Ok(q) = subfield::quartic_decompose(x) {
                w(out, format!("quartic: ({}) * delta, delta^2 = {}", q.coefficient(), q.delta_square()))?;
            }
        }
    }
    if values.iter().any(|v| v != value) {
        eprintln!("backends disagree");
        return Ok(EXIT_FAILED);
    }
    Ok(EXIT_OK)
}

fn cmd_classno(a: ClassnoArgs, out: &mut dyn Write) -> Result<i32, String> {
    let data = classno::class_data(a.p).map_err(|e| e.to_string())?;
    let mut text = String::new();
    if let Some(h) = data.h_neg {
        text.push_str(&format!("h(-{}) = {h}\n", a.p));
    }
    if let (Some(h), Some(e)) = (data.h_pos, &data.eps) {
        let u = if e.u == 1.into() { String::new() } else { format!("{}*", e.u) };
        text.push_str(&format!("h({}) = {h}\n", a.p));
        text.push_str(&format!("eps = ({} + {u}sqrt({}))/2, norm {}\n", e.t, a.p, e.norm));
    }
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    Ok(EXIT_OK)
}
