//! Command-line front end: `verify`, `curve` and `matrix`.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failed invariant, 2 for
//! usage, configuration and I/O errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::DEFAULT_TOL;
use crate::kaleidoscope::QftMatrix;
use crate::matrix::OperatorMatrix;
use crate::photon::photon_curve;
use crate::qalgebra::{b_operators, hamiltonian_matrix, QNumberKind, SylvesterPair};
use crate::verify::{run_suite, Report, Status, SuiteConfig, MAX_ORDER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses `a+bi` style complex numbers: `1.5`, `-2i`, `i`, `1-i`, `0.3+1e-2i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || Error::InvalidArgument(format!("cannot parse `{text}` as a complex number a+bi"));
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return match t.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(Complex64::new(re, 0.0)),
            _ => Err(bad()),
        };
    };
    // split at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_text, im_text) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_text.is_empty() {
        0.0
    } else {
        re_text.parse::<f64>().map_err(|_| bad())?
    };
    let im = match im_text {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Qft,
    Clock,
    Shift,
    B,
    Bdag,
    Hamiltonian,
}

impl Which {
    fn name(self) -> &'static str {
        match self {
            Which::Qft => "qft",
            Which::Clock => "clock",
            Which::Shift => "shift",
            Which::B => "b",
            Which::Bdag => "bdag",
            Which::Hamiltonian => "hamiltonian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Symmetric,
    Nonsymmetric,
}

impl From<KindArg> for QNumberKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Symmetric => QNumberKind::Symmetric,
            KindArg::Nonsymmetric => QNumberKind::NonSymmetric,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Polygon order, 2..=12.
    #[arg(long)]
    pub n: usize,
    /// Coherent amplitude as a+bi.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub alpha: String,
    /// Fock truncation tolerance, in (0, 1e-3).
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Fixed Fock dimension instead of the automatic one.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Parser)]
#[command(
    name = "qkaleido",
    version,
    about = "Kaleidoscope coherent states and the finite q-oscillator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the invariant suite for one (n, alpha).
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Photon-number curve <s|N|s> over |alpha|^2 in [0, xmax].
    Curve {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 0)]
        s: usize,
        #[arg(long, default_value_t = 6.0)]
        xmax: f64,
        #[arg(long, default_value_t = 120)]
        steps: usize,
    },
    /// Export one n x n matrix.
    Matrix {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        which: Which,
        /// q-number convention for b and bdag.
        #[arg(long, value_enum, default_value = "symmetric")]
        kind: KindArg,
        /// Energy unit for the hamiltonian.
        #[arg(long, default_value_t = 1.0)]
        hbar_omega: f64,
    },
}

/// Validated options shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub alpha: Complex64,
    pub tol: f64,
    pub dim_override: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs) -> Result<Self> {
        let flag = |name: &str, e: Error| Error::InvalidArgument(format!("--{name}: {e}"));
        if !(2..=MAX_ORDER).contains(&args.n) {
            return Err(Error::InvalidArgument(format!(
                "--n: must be between 2 and {MAX_ORDER}, got {}",
                args.n
            )));
        }
        let alpha = parse_complex(&args.alpha).map_err(|e| flag("alpha", e))?;
        let cfg = Self {
            n: args.n,
            alpha,
            tol: args.tol,
            dim_override: args.dim,
            output_path: args.out.clone(),
            format: args.format,
        };
        if !(cfg.tol > 0.0 && cfg.tol < 1e-3) {
            return Err(Error::InvalidArgument(format!(
                "--tol: must lie in (0, 1e-3), got {}",
                cfg.tol
            )));
        }
        cfg.suite().validate().map_err(|e| flag("dim", e))?;
        Ok(cfg)
    }

    pub fn suite(&self) -> SuiteConfig {
        SuiteConfig {
            n: self.n,
            alpha: self.alpha,
            tol: self.tol,
            dim: self.dim_override,
        }
    }
}

#[derive(Serialize)]
struct CheckView<'a> {
    name: &'a str,
    status: String,
    residual: Option<f64>,
    threshold: f64,
    note: Option<&'a str>,
}

#[derive(Serialize)]
struct ReportView<'a> {
    n: usize,
    alpha: [f64; 2],
    dim: usize,
    passed: bool,
    checks: Vec<CheckView<'a>>,
}

#[derive(Serialize)]
struct MatrixView<'a> {
    n: usize,
    which: &'a str,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct CurveView<'a> {
    n: usize,
    s: usize,
    points: &'a [(f64, f64)],
}

fn write_report<W: Write + ?Sized>(report: &Report, format: Format, out: &mut W) -> io::Result<()> {
    match format {
        Format::Text => writeln!(out, "{report}"),
        Format::Csv => {
            writeln!(out, "name,status,residual,threshold")?;
            for c in &report.checks {
                let residual = if c.status == Status::Skip {
                    String::new()
                } else {
                    c.residual.to_string()
                };
                writeln!(out, "{},{},{},{}", c.name, c.status, residual, c.threshold)?;
            }
            Ok(())
        }
        Format::Json => {
            let view = ReportView {
                n: report.n,
                alpha: [report.alpha.re, report.alpha.im],
                dim: report.dim,
                passed: report.all_passed(),
                checks: report
                    .checks
                    .iter()
                    .map(|c| CheckView {
                        name: &c.name,
                        status: c.status.to_string(),
                        residual: (c.status != Status::Skip).then_some(c.residual),
                        threshold: c.threshold,
                        note: c.note.as_deref(),
                    })
                    .collect(),
            };
            serde_json::to_writer(&mut *out, &view)?;
            writeln!(out)
        }
    }
}

pub fn matrix_for(
    n: usize,
    which: Which,
    kind: QNumberKind,
    hbar_omega: f64,
) -> Result<OperatorMatrix> {
    Ok(match which {
        Which::Qft => QftMatrix::new(n)?.into_matrix(),
        Which::Clock => SylvesterPair::new(n)?.clock().clone(),
        Which::Shift => SylvesterPair::new(n)?.shift().clone(),
        Which::B => b_operators(n, kind)?.0,
        Which::Bdag => b_operators(n, kind)?.1,
        Which::Hamiltonian => hamiltonian_matrix(n, hbar_omega)?,
    })
}

/// `{"n":..,"which":..,"re":[[..]],"im":[[..]]}` on one line.
pub fn matrix_json(n: usize, which: Which, m: &OperatorMatrix) -> String {
    let (re, im) = m.split_parts();
    let view = MatrixView {
        n,
        which: which.name(),
        re,
        im,
    };
    serde_json::to_string(&view).expect("finite matrix entries serialize")
}

fn write_matrix_csv<W: Write + ?Sized>(m: &OperatorMatrix, out: &mut W) -> io::Result<()> {
    writeln!(out, "row,col,re,im")?;
    for r in 0..m.dim() {
        for c in 0..m.dim() {
            let z = m[(r, c)];
            writeln!(out, "{r},{c},{},{}", z.re, z.im)?;
        }
    }
    Ok(())
}

enum Failure {
    Usage(String),
    Invariant,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn with_output(
    path: Option<&Path>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> std::result::Result<(), Failure> {
    let io_err = |p: &Path, e: io::Error| {
        Failure::from(Error::Io {
            path: p.to_path_buf(),
            source: e,
        })
    };
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| io_err(p, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| io_err(p, e))
        }
        None => body(stdout).map_err(|e| io_err(Path::new("<stdout>"), e)),
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::Verify { common } => {
            let cfg = RunConfig::from_args(&common)?;
            let report = run_suite(&cfg.suite())?;
            let format = cfg.format.unwrap_or(Format::Text);
            with_output(cfg.output_path.as_deref(), stdout, |w| {
                write_report(&report, format, w)
            })?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::Invariant)
            }
        }
        Command::Curve {
            common,
            s,
            xmax,
            steps,
        } => {
            let cfg = RunConfig::from_args(&common)?;
            if s >= cfg.n {
                return Err(Failure::Usage(format!(
                    "--s: must be below n = {}, got {s}",
                    cfg.n
                )));
            }
            let curve = photon_curve(cfg.n, s, xmax, steps)?;
            with_output(cfg.output_path.as_deref(), stdout, |w| {
                match cfg.format.unwrap_or(Format::Csv) {
                    Format::Json => {
                        let view = CurveView {
                            n: curve.n,
                            s: curve.s,
                            points: &curve.points,
                        };
                        serde_json::to_writer(&mut *w, &view)?;
                        writeln!(w)
                    }
                    _ => curve.write_csv(w),
                }
            })
        }
        Command::Matrix {
            common,
            which,
            kind,
            hbar_omega,
        } => {
            let cfg = RunConfig::from_args(&common)?;
            let m = matrix_for(cfg.n, which, kind.into(), hbar_omega)?;
            with_output(cfg.output_path.as_deref(), stdout, |w| {
                match cfg.format.unwrap_or(Format::Json) {
                    Format::Csv => write_matrix_csv(&m, w),
                    _ => writeln!(w, "{}", matrix_json(cfg.n, which, &m)),
                }
            })
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
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
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Invariant) => EXIT_INVARIANT,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_forms() {
        let cases = [
            ("1.0", c(1.0, 0.0)),
            ("1+i", c(1.0, 1.0)),
            ("1 - i", c(1.0, -1.0)),
            ("-0.5-2i", c(-0.5, -2.0)),
            ("2i", c(0.0, 2.0)),
            ("i", c(0.0, 1.0)),
            ("-i", c(0.0, -1.0)),
            ("+3", c(3.0, 0.0)),
            ("1e-3+2.5e-1i", c(1e-3, 0.25)),
            ("1e+2-1E-2i", c(100.0, -0.01)),
            ("0", c(0.0, 0.0)),
        ];
        for (text, want) in cases {
            assert_eq!(parse_complex(text).unwrap(), want, "{text}");
        }
        for bad in ["", "abc", "1+", "1+2", "1,5", "1+2i3", "nan", "inf+i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn complex_round_trip() {
        for z in [c(0.1, -0.7), c(-3.25, 1e-9), c(1.0 / 3.0, 2.0 / 7.0)] {
            let text = format!("{}{:+}i", z.re, z.im);
            assert_eq!(parse_complex(&text).unwrap(), z);
        }
    }

    #[test]
    fn hadamard_json() {
        let m = matrix_for(2, Which::Qft, QNumberKind::Symmetric, 1.0).unwrap();
        let json = matrix_json(2, Which::Qft, &m);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["n"], 2);
        assert_eq!(v["which"], "qft");
        assert_eq!(
            v["re"][1][1].as_f64().unwrap(),
            -std::f64::consts::FRAC_1_SQRT_2
        );
        assert!(json.contains("0.7071067811865476"));
    }

    #[test]
    fn config_errors_name_the_flag() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(["qkaleido", "verify", "--n", "13"], &mut out, &mut err);
        assert_eq!(code, EXIT_USAGE);
        assert!(String::from_utf8(err).unwrap().contains("--n"));

        let mut err = Vec::new();
        let code = run(
            ["qkaleido", "verify", "--n", "3", "--alpha", "x"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_USAGE);
        assert!(String::from_utf8(err).unwrap().contains("--alpha"));
    }
}
