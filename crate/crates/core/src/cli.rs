//! Command-line front end: `table1`, `curves`, `asymptotic` and `verify`.
//!
//! Exit codes are 0 on success, 1 when a check fails or output cannot be
//! written, and 2 on usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::families::boundaries;
use crate::functionals::{asymptotic_restricted, gill_bound, w};
use crate::optimize::{asymptotic_bound, curve_upper, d_opt, maximize_w, x_infinity, DEFAULT_GRID, DEFAULT_REFINE_TOL};
use crate::verify::{run_suite, CheckReport, VerifyOptions, ALL_SUITES};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "weakbound", version, about = "Lower bounds for the weak-type constants of Lambda_m and Lambda_m*")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal (b, d, t0, W) per m next to the conjectured constant.
    Table1 {
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 3, 4], value_parser = clap::value_parser!(u32).range(1..))]
        m: Vec<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Domain boundaries and the optimal curve sampled over [b_min, b~_max].
    Curves {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(2..))]
        samples: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The large-m root x_inf, its bound and the sample value at (0.548, 1.164).
    Asymptotic {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Runs verification suites; exits 1 if any check fails.
    Verify {
        /// Comma-separated suite names; all suites when omitted.
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Inclusive m-range of the bound134 suite, e.g. `5..200`.
        #[arg(long, value_parser = parse_m_range)]
        m_range: Option<(u32, u32)>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Significant digits of emitted numbers.
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u8).range(3..=17))]
    precision: u8,
}

/// Parses `lo..hi` or `lo..=hi`, both inclusive.
pub fn parse_m_range(s: &str) -> std::result::Result<(u32, u32), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: u32 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: u32 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("need 1 <= LO <= HI, got {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// Rounds to `digits` significant digits; the result prints in shortest form.
pub fn round_sig(v: f64, digits: u8) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1) as usize, v).parse().unwrap_or(v)
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub m: u32,
    pub b: f64,
    pub d: f64,
    pub t0: f64,
    pub w: f64,
    pub gill: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveRow {
    pub b: f64,
    pub d_min: f64,
    pub d_opt: f64,
    pub d_max: f64,
    pub t0: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticRecord {
    pub x_infinity: f64,
    pub bound: f64,
    pub sample_x: f64,
    pub sample_y: f64,
    pub sample_value: f64,
}

#[derive(Debug, Clone, Serialize)]
struct SummaryRow<'a> {
    name: &'a str,
    status: &'a str,
    worst_residual: f64,
    tolerance: f64,
    seed: u64,
}

pub fn table1_rows(ms: &[u32], precision: u8) -> crate::Result<Vec<Table1Row>> {
    let r = |v| round_sig(v, precision);
    ms.iter()
        .map(|&m| {
            let opt = maximize_w(m, DEFAULT_GRID, DEFAULT_REFINE_TOL)?;
            let t0 = boundaries(m)?.t0(opt.b);
            Ok(Table1Row { m, b: r(opt.b), d: r(opt.d), t0: r(t0), w: r(opt.value), gill: r(gill_bound(m as f64)) })
        })
        .collect()
}

/// Samples `[b_min, b~_max]`; the right end is included only for `m = 1`.
pub fn curve_rows(m: u32, samples: usize, precision: u8) -> crate::Result<Vec<CurveRow>> {
    let bd = boundaries(m)?;
    let (hi, closed) = curve_upper(m)?;
    let lo = bd.b_min();
    let steps = if closed { samples - 1 } else { samples };
    let r = |v| round_sig(v, precision);
    (0..samples)
        .map(|i| {
            let b = if closed && i == samples - 1 { hi } else { lo + (hi - lo) * i as f64 / steps as f64 };
            let d = d_opt(b, m)?;
            Ok(CurveRow {
                b: r(b),
                d_min: r(bd.d_min(b)),
                d_opt: r(d),
                d_max: r(bd.d_max(b)),
                t0: r(bd.t0(b)),
                w: r(w(b, d, m)?),
            })
        })
        .collect()
}

pub fn asymptotic_record(precision: u8) -> crate::Result<AsymptoticRecord> {
    let (x, y) = (0.548, 1.164);
    let xi = x_infinity(1e-12)?;
    let r = |v| round_sig(v, precision);
    Ok(AsymptoticRecord {
        x_infinity: r(xi),
        bound: r(asymptotic_bound(xi)),
        sample_x: x,
        sample_y: y,
        sample_value: r(asymptotic_restricted(x, y)?),
    })
}

fn open_sink(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit<T: Serialize>(rows: &[T], json_value: &impl Serialize, out: &OutputArgs) -> io::Result<()> {
    let mut sink = open_sink(&out.out)?;
    match out.format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut sink);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, json_value)?;
            sink.write_all(b"\n")?;
        }
    }
    sink.flush()
}

fn round_report(mut r: CheckReport, precision: u8) -> CheckReport {
    r.worst_residual = round_sig(r.worst_residual, precision);
    for d in &mut r.details {
        d.residual = round_sig(d.residual, precision);
    }
    r
}

fn fail(code: u8, e: impl std::fmt::Display) -> u8 {
    eprintln!("error: {e}");
    code
}

fn library_error(e: Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Constraint(_) | Error::UnknownSuite(_) => fail(EXIT_USAGE, e),
        _ => fail(EXIT_CHECK_FAILED, e),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Table1 { m, out } => match table1_rows(&m, out.precision) {
            Ok(rows) => emit(&rows, &rows, &out).map_or_else(|e| fail(EXIT_CHECK_FAILED, e), |_| EXIT_OK),
            Err(e) => library_error(e),
        },
        Command::Curves { m, samples, out } => match curve_rows(m, samples as usize, out.precision) {
            Ok(rows) => emit(&rows, &rows, &out).map_or_else(|e| fail(EXIT_CHECK_FAILED, e), |_| EXIT_OK),
            Err(e) => library_error(e),
        },
        Command::Asymptotic { out } => match asymptotic_record(out.precision) {
            Ok(rec) => {
                emit(std::slice::from_ref(&rec), &rec, &out).map_or_else(|e| fail(EXIT_CHECK_FAILED, e), |_| EXIT_OK)
            }
            Err(e) => library_error(e),
        },
        Command::Verify { suites, seed, m_range, out } => {
            let names: Vec<&str> =
                if suites.is_empty() { ALL_SUITES.to_vec() } else { suites.iter().map(String::as_str).collect() };
            let mut opts = VerifyOptions::default();
            if let Some(range) = m_range {
                opts.m_range = range;
            }
            let reports = match run_suite(&names, seed, &opts) {
                Ok(r) => r,
                Err(e) => return library_error(e),
            };
            let reports: Vec<CheckReport> = reports.into_iter().map(|r| round_report(r, out.precision)).collect();
            let summary: Vec<SummaryRow> = reports
                .iter()
                .map(|r| SummaryRow {
                    name: &r.name,
                    status: if r.passed() { "pass" } else { "fail" },
                    worst_residual: r.worst_residual,
                    tolerance: r.tolerance,
                    seed: r.seed,
                })
                .collect();
            if let Err(e) = emit(&summary, &reports, &out) {
                return fail(EXIT_CHECK_FAILED, e);
            }
            let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
            if failed.is_empty() {
                EXIT_OK
            } else {
                fail(EXIT_CHECK_FAILED, format!("failing checks: {}", failed.join(", ")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_range_forms() {
        assert_eq!(parse_m_range("1..200"), Ok((1, 200)));
        assert_eq!(parse_m_range("5..=7"), Ok((5, 7)));
        assert!(parse_m_range("0..3").is_err());
        assert!(parse_m_range("9..3").is_err());
        assert!(parse_m_range("abc").is_err());
    }

    #[test]
    fn rounding_keeps_significant_digits() {
        assert_eq!(round_sig(1.3831923456, 4), 1.383);
        assert_eq!(round_sig(-0.000123456, 3), -0.000123);
        assert_eq!(round_sig(0.0, 5), 0.0);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["weakbound", "verify", "--suites", "bogus"]), EXIT_USAGE);
        assert_eq!(run(["weakbound", "curves", "--m", "0"]), EXIT_USAGE);
        assert_eq!(run(["weakbound", "table1", "--precision", "2"]), EXIT_USAGE);
        assert_eq!(run(["weakbound", "frobnicate"]), EXIT_USAGE);
    }

    #[test]
    fn curve_endpoints() {
        let rows = curve_rows(1, 20, 17).unwrap();
        assert_eq!(rows.len(), 20);
        assert!((rows[0].d_min - rows[0].b).abs() < 1e-12);
        assert!((rows[19].b - 7f64.powf(2.0 / 3.0)).abs() < 1e-12);
        for r in curve_rows(2, 100, 17).unwrap() {
            assert!(r.d_min <= r.d_opt && r.d_opt <= r.d_max);
        }
    }
}
