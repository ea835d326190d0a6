//! Command-line front end. [`run`] is the whole program minus process exit.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::harness::sweep::{run_sweep_to_file, PExpr, SweepConfig, SweepError};
use crate::harness::verdict::{classify_trial, TVerdict, Thresholds};
use crate::linkgraph::build_link_graph;
use crate::spectra::{spectral_gap_with_tol, CERTIFICATE_MARGIN, DEFAULT_TOL};
use crate::words::{parse_presentation, sample_binomial, sample_uniform, Presentation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "trigroup",
    version,
    about = "Random triangular group presentations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a presentation from the binomial or uniform model.
    Sample(SampleArgs),
    /// Classify a presentation: freeness, property (T) and witnesses.
    Certify(CertifyArgs),
    /// Print the normalized Laplacian spectrum of the link graph as CSV.
    Spectrum(SpectrumArgs),
    /// Run a seeded sweep described by a config file.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// Number of generators.
    #[arg(long)]
    n: u32,
    /// Relator probability: `c/n^2`, `c*log(n)/n^2`, `abs:<p>` or a bare number.
    #[arg(long, conflicts_with = "t", required_unless_present = "t")]
    p: Option<String>,
    /// Exact number of relators (uniform model).
    #[arg(long)]
    t: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    /// Presentation file.
    file: PathBuf,
    /// Required excess of lambda2 over 1/2.
    #[arg(long, default_value_t = CERTIFICATE_MARGIN)]
    margin: f64,
    /// Skip the eigensolve.
    #[arg(long)]
    no_spectra: bool,
    /// Print only the JSON record.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    file: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Config file of `key = value` lines.
    config: PathBuf,
    /// Overrides the config's `output`.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

/// Parse `args` (including the program name) and execute. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let result = match cli.command {
        Command::Sample(a) => sample(a, out),
        Command::Certify(a) => certify(a, out),
        Command::Spectrum(a) => spectrum(a, out),
        Command::Sweep(a) => sweep(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(text: &[u8], path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => out
            .write_all(text)
            .map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

fn read_presentation(path: &Path) -> Result<Presentation, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    parse_presentation(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn parse_probability(s: &str, n: u32) -> Result<f64, Failure> {
    let value = match s.parse::<PExpr>() {
        Ok(expr) => expr.eval(n),
        Err(e) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| Failure::usage(e.to_string()))?,
    };
    Ok(value)
}

fn sample(a: SampleArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let pres = match (a.p, a.t) {
        (Some(p), None) => sample_binomial(a.n, parse_probability(&p, a.n)?, a.seed),
        (None, Some(t)) => sample_uniform(a.n, t, a.seed),
        _ => unreachable!("clap enforces exactly one of --p and --t"),
    }
    .map_err(|e| Failure::usage(e.to_string()))?;
    emit(pres.to_string().as_bytes(), a.output.as_deref(), out)
}

fn certify(a: CertifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if !a.margin.is_finite() || a.margin < 0.0 {
        return Err(Failure::usage("--margin must be a non-negative number"));
    }
    let pres = read_presentation(&a.file)?;
    let thresholds = Thresholds {
        margin: a.margin,
        spectra: !a.no_spectra,
        timing: false,
    };
    let verdict = classify_trial(&pres, &thresholds);
    let text = if a.json {
        format!("{}\n", verdict.to_json())
    } else {
        format!("{verdict}{}\n", verdict.to_json())
    };
    emit(text.as_bytes(), None, out)?;
    if let TVerdict::Failed { error, .. } = &verdict.t_cert {
        return Err(Failure {
            code: EXIT_SOLVER,
            message: error.clone(),
        });
    }
    Ok(())
}

fn spectrum(a: SpectrumArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let pres = read_presentation(&a.file)?;
    let report = spectral_gap_with_tol(&build_link_graph(&pres), a.tol).map_err(|e| match e {
        crate::spectra::SpectralError::InvalidTolerance(_) => Failure::usage(e.to_string()),
        _ => Failure {
            code: EXIT_SOLVER,
            message: e.to_string(),
        },
    })?;
    emit(report.to_csv().as_bytes(), a.output.as_deref(), out)
}

fn sweep(a: SweepArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let text = fs::read_to_string(&a.config).map_err(|e| Failure::io(&a.config, e))?;
    let mut cfg = SweepConfig::parse(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", a.config.display())))?;
    if a.output.is_some() {
        cfg.output = a.output;
    }
    if a.sequential {
        cfg.parallel = false;
    }
    let outcome = run_sweep_to_file(&cfg).map_err(|e| match e {
        SweepError::Config(_) => Failure::usage(e.to_string()),
        _ => Failure {
            code: EXIT_IO,
            message: e.to_string(),
        },
    })?;
    if cfg.output.is_some() {
        emit(outcome.summary.to_string().as_bytes(), None, out)
    } else {
        emit(&outcome.csv, None, out)
    }
}
