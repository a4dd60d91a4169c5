//! Command-line front end.
//!
//! Exit status: 0 on success, 2 for usage and validation errors, 3 for
//! numerical failures. The default angle tolerance can be overridden with the
//! `RADIAL_PLAP_TOL` environment variable; `--tol` takes precedence.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::asymptotics::{
    convergence_report, run_sweep, Family, RecordStatus, SweepSpec, DEFAULT_RADII,
};
use crate::bounds::eigen_bracket;
use crate::csv_io::{self, fmt_float};
use crate::eigensolver::{eigenvalue, SolverOptions};
use crate::error::Error;
use crate::ptrig::{pi_p, PTrigTable};
use crate::weight::{ProblemConfig, WeightProfile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub const TOL_ENV: &str = "RADIAL_PLAP_TOL";

#[derive(Debug, Parser)]
#[command(
    name = "radial-plap",
    version,
    about = "Radial Dirichlet eigenvalues of the p-Laplacian on annuli"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Human,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// p = N
    Pn,
    /// p = 2, N >= 3
    P2,
    /// p = r + 1, N = 2r + 1
    Rfam,
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Exponent p > 1.
    #[arg(long)]
    p: f64,
    /// Space dimension N >= p.
    #[arg(long = "N", alias = "n")]
    dim: u32,
    /// Inner radius R.
    #[arg(long = "R", alias = "inner")]
    inner: f64,
    /// Outer radius; defaults to R + 1.
    #[arg(long = "Rbar", alias = "outer")]
    outer: Option<f64>,
}

impl ProblemArgs {
    fn profile(&self) -> Result<WeightProfile, Error> {
        let outer = self.outer.unwrap_or(self.inner + 1.0);
        WeightProfile::new(ProblemConfig::new(self.p, self.dim, self.inner, outer)?)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the half-period pi_p with 15 significant digits.
    Pip {
        #[arg(long)]
        p: f64,
    },
    /// Sample the weight q(t) and q'(t) on an equally spaced grid.
    Weight {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Number of points, endpoints included.
        #[arg(long, default_value_t = 11)]
        samples: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-sided eigenvalue bounds for k = 1..=k-max.
    Bracket {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long = "k-max", default_value_t = 1)]
        k_max: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute lambda_k by Pruefer shooting.
    Eigen {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Angle integration tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Number of eigenfunction samples.
        #[arg(long, default_value_t = 401)]
        samples: usize,
        /// Write the sampled eigenfunction (t, v) to this file.
        #[arg(long)]
        eigenfunction: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep lambda_k(R, R+1) over increasing R for one family.
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// p for the pn family.
        #[arg(long)]
        p: Option<u32>,
        /// N for the p2 family.
        #[arg(long = "N", alias = "n")]
        dim: Option<u32>,
        /// r for the rfam family.
        #[arg(long)]
        r: Option<u32>,
        /// Comma-separated inner radii.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        #[arg(long = "k-max", default_value_t = 3)]
        k_max: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_usage() {
            EXIT_USAGE
        } else {
            EXIT_NUMERICAL
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_NUMERICAL,
            message: format!("i/o error: {e}"),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// `x` rounded to 15 significant digits, in positional notation.
pub fn fmt_significant15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (14 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn default_tol() -> Result<f64, Failure> {
    match std::env::var(TOL_ENV) {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| *v > 0.0)
            .ok_or_else(|| usage(format!("{TOL_ENV} must be a positive number, got {s:?}"))),
        Err(_) => Ok(SolverOptions::default().angle_tol),
    }
}

fn resolve_tol(flag: Option<f64>) -> Result<f64, Failure> {
    match flag {
        Some(t) if t > 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(usage(format!("--tol must be positive, got {t}"))),
        None => default_tol(),
    }
}

fn with_output<F>(out: &Option<PathBuf>, stdout: &mut dyn Write, f: F) -> Result<(), Failure>
where
    F: FnOnce(&mut dyn Write) -> Result<(), Failure>,
{
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}

fn write_file<F>(path: &Path, f: F) -> Result<(), Failure>
where
    F: FnOnce(&mut dyn Write) -> Result<(), Failure>,
{
    let mut w = BufWriter::new(File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Run the CLI on `args` (program name first) and return the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "radial-plap: {}", f.message);
            f.code
        }
    }
}

fn execute(
    command: Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, Failure> {
    match command {
        Command::Pip { p } => {
            writeln!(stdout, "{}", fmt_significant15(pi_p(p)?))?;
        }

        Command::Weight {
            problem,
            samples,
            format,
            out,
        } => {
            if samples < 2 {
                return Err(usage("--samples must be at least 2"));
            }
            let w = problem.profile()?;
            let rows = (0..samples)
                .map(|i| {
                    let t = i as f64 / (samples - 1) as f64;
                    Ok((t, w.q(t)?, w.derivative(t)?))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            with_output(&out, stdout, |o| {
                match format {
                    Format::Csv => csv_io::write_weight(o, &rows)?,
                    Format::Human => {
                        writeln!(o, "case: {:?}", w.case())?;
                        if let Some(t) = w.kink() {
                            writeln!(o, "q = 1 at t = {}", fmt_float(t))?;
                        }
                        for (t, q, dq) in &rows {
                            writeln!(
                                o,
                                "t = {t:<8.5}  q = {}  q' = {}",
                                fmt_float(*q),
                                fmt_float(*dq)
                            )?;
                        }
                    }
                }
                Ok(())
            })?;
        }

        Command::Bracket {
            problem,
            k_max,
            format,
            out,
        } => {
            let w = problem.profile()?;
            let table = PTrigTable::cached(w.p())?;
            if k_max < 1 {
                return Err(usage("--k-max must be at least 1"));
            }
            let brackets = (1..=k_max)
                .map(|k| eigen_bracket(&w, k, &table))
                .collect::<Result<Vec<_>, Error>>()?;
            with_output(&out, stdout, |o| {
                match format {
                    Format::Csv => csv_io::write_bracket(o, &brackets)?,
                    Format::Human => {
                        for b in &brackets {
                            writeln!(
                                o,
                                "k = {}  {} <= lambda_k <= {}  (qbar- = {}, qbar+ = {})",
                                b.k,
                                fmt_float(b.lower),
                                fmt_float(b.upper),
                                fmt_float(b.q_minus),
                                fmt_float(b.q_plus)
                            )?;
                        }
                    }
                }
                Ok(())
            })?;
        }

        Command::Eigen {
            problem,
            k,
            tol,
            samples,
            eigenfunction,
            format,
            out,
        } => {
            let w = problem.profile()?;
            let table = PTrigTable::cached(w.p())?;
            let opts = SolverOptions {
                angle_tol: resolve_tol(tol)?,
                samples,
                ..SolverOptions::default()
            };
            let res = eigenvalue(&w, k, &table, &opts)?;
            with_output(&out, stdout, |o| {
                match format {
                    Format::Csv => csv_io::write_eigen(o, std::slice::from_ref(&res))?,
                    Format::Human => writeln!(
                        o,
                        "k = {}  lambda = {}  bracket = [{}, {}]  zeros = {}  residual = {:.3e}",
                        res.k,
                        fmt_float(res.lambda),
                        fmt_float(res.bracket.lower),
                        fmt_float(res.bracket.upper),
                        res.zero_count,
                        res.residual
                    )?,
                }
                Ok(())
            })?;
            if let Some(path) = eigenfunction {
                write_file(&path, |o| {
                    Ok(csv_io::write_eigenfunction(o, &res.eigenfunction)?)
                })?;
            }
        }

        Command::Sweep {
            family,
            p,
            dim,
            r,
            radii,
            k_max,
            tol,
            out,
        } => {
            let family = match family {
                FamilyArg::Pn => Family::PEqualsN {
                    p: p.ok_or_else(|| usage("family pn needs --p"))?,
                },
                FamilyArg::P2 => Family::P2 {
                    dim: dim.ok_or_else(|| usage("family p2 needs --N"))?,
                },
                FamilyArg::Rfam => Family::RFamily {
                    r: r.ok_or_else(|| usage("family rfam needs --r"))?,
                },
            };
            let mut spec = SweepSpec::new(
                family,
                radii.unwrap_or_else(|| DEFAULT_RADII.to_vec()),
                k_max,
            )?;
            spec.options.angle_tol = resolve_tol(tol)?;
            for big in spec.large_radii() {
                writeln!(
                    stderr,
                    "warning: R = {big:e} is beyond 1e8; q - 1 is near rounding level there"
                )?;
            }
            let records = run_sweep(&spec)?;
            with_output(&out, stdout, |o| Ok(csv_io::write_sweep(o, &records)?))?;

            match convergence_report(&records) {
                Ok(report) => {
                    for s in &report {
                        let slope = s.slope.map_or("n/a".to_string(), |v| format!("{v:.3}"));
                        let last_gap = s.gaps.last().copied().unwrap_or(f64::NAN);
                        writeln!(
                            stderr,
                            "{} k = {}: {} (slope {slope}), gap at R = {:e} is {:.3e}, allowed {:.3e}: {}",
                            s.family,
                            s.k,
                            s.verdict,
                            s.radii.last().copied().unwrap_or(f64::NAN),
                            last_gap,
                            s.tolerance,
                            if s.passed { "pass" } else { "FAIL" }
                        )?;
                    }
                }
                Err(e) => writeln!(stderr, "no convergence summary: {e}")?,
            }
            let failures = records
                .iter()
                .filter(|r| matches!(r.status, RecordStatus::Failed(_)))
                .count();
            if failures > 0 {
                writeln!(stderr, "radial-plap: {failures} record(s) failed to solve")?;
                return Ok(EXIT_NUMERICAL);
            }
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(fmt_significant15(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(fmt_significant15(12.5), "12.5000000000000");
        assert_eq!(fmt_significant15(0.00123), "0.00123000000000000");
    }

    #[test]
    fn in_process_pip() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(["radial-plap", "pip", "--p", "2"], &mut out, &mut err);
        assert_eq!(code, EXIT_OK);
        assert_eq!(String::from_utf8(out).unwrap(), "3.14159265358979\n");
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(["radial-plap", "pip", "--q", "2"], &mut out, &mut err);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
    }
}
