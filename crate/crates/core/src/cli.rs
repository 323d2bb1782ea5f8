//! `p3c` command line. Exit codes: 0 ok, 1 usage or input error,
//! 2 verification failure, 3 non-generic input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::atlas::{atlas_grid, atlas_svg, connectivity_audit, write_grid_csv};
use crate::bde::asymptotic_bde;
use crate::cross_ratio::{recover_moduli, CrossRatioError, CrossRatioSet, RecoveryReport};
use crate::io::{InputError, SurfaceInput};
use crate::locus::reconcile::reconcile_surface;
use crate::locus::TraceOptions;
use crate::portrait::{portrait, PortraitOptions};
use crate::report::{analyze, AnalyzeOptions, Status};
use crate::scalar::{parse_rational, Scalar};
use crate::surface::SurfaceJet;
use crate::verify::run_all;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_NON_GENERIC: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Parser)]
#[command(name = "p3c", version, about = "Loci, invariants and BDE portraits at P3(c)-points of surfaces in 4-space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Surface file (JSON or TOML).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when omitted (atlas: CSV path, SVG written alongside).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    /// Oracle agreement tolerance on the quadratic coefficient.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// trace: samples; portrait: seeds per axis; atlas: cells per axis.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// trace: y half-range; portrait: box half-width; atlas: `W` or `LO,HI`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub r#box: Option<String>,
    /// portrait: integration step.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Seed for randomized suites and portrait seed jitter.
    #[arg(long, global = true, default_value_t = 20240601)]
    pub seed: u64,
    /// Also evaluate the printed α formula and flag its inconsistency.
    #[arg(long = "paper-literal", global = true)]
    pub literal_alpha: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// JSON report for one surface.
    Analyze,
    /// CSV of traced locus samples (label, y, x_oracle, x_closed).
    Trace,
    /// SVG phase portrait of the asymptotic-curve BDE (CSV polylines alongside).
    Portrait,
    /// CSV and SVG of the (α, β)-plane; prints the connectivity audit.
    Atlas,
    /// Moduli from cross-ratio invariants.
    Recover {
        #[arg(long, allow_hyphen_values = true)]
        rho1: String,
        #[arg(long, allow_hyphen_values = true)]
        rho2: String,
        #[arg(long, allow_hyphen_values = true)]
        rho3: String,
        /// Needed only on the degenerate branch 1 − 4ρ2 + 3ρ3 = 0.
        #[arg(long, allow_hyphen_values = true)]
        rho4: Option<String>,
    },
    /// Run the full acceptance suite; exit 2 on any failure.
    Verify,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    NonGeneric(String),
    #[error("verification failed")]
    Verify,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::NonGeneric(_) => EXIT_NON_GENERIC,
            CliError::Verify => EXIT_VERIFY,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("p3c: {e}");
            e.code()
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn read_input(cli: &Cli) -> Result<SurfaceInput, CliError> {
    let path = cli.input.as_ref().ok_or_else(|| usage("--input is required"))?;
    Ok(SurfaceInput::read(path)?)
}

fn box_range(cli: &Cli, default: (f64, f64)) -> Result<(f64, f64), CliError> {
    let Some(b) = &cli.r#box else {
        return Ok(default);
    };
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| usage(format!("bad --box value {b:?}")));
    let (lo, hi) = match b.split_once(',') {
        Some((l, h)) => (parse(l)?, parse(h)?),
        None => {
            let w = parse(b)?;
            (-w, w)
        }
    };
    if !(lo < hi) {
        return Err(usage("--box needs LO < HI"));
    }
    Ok((lo, hi))
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    if !(cli.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    if cli.step.is_some_and(|s| !(s > 0.0)) {
        return Err(usage("--step must be positive"));
    }
    if cli.grid == Some(0) {
        return Err(usage("--grid must be positive"));
    }
    match &cli.command {
        Command::Analyze => {
            let input = read_input(cli)?;
            match cli.mode {
                ModeArg::Exact => run_analyze(cli, &input.surface::<crate::scalar::Rational>()?),
                ModeArg::Float => run_analyze(cli, &input.surface::<f64>()?),
            }
        }
        Command::Trace => {
            let input = read_input(cli)?;
            match cli.mode {
                ModeArg::Exact => run_trace(cli, &input.surface::<crate::scalar::Rational>()?),
                ModeArg::Float => run_trace(cli, &input.surface::<f64>()?),
            }
        }
        Command::Portrait => {
            let input = read_input(cli)?;
            run_portrait(cli, &input.surface::<f64>()?)
        }
        Command::Atlas => run_atlas(cli),
        Command::Recover { rho1, rho2, rho3, rho4 } => match cli.mode {
            ModeArg::Exact => run_recover::<crate::scalar::Rational>(cli, [rho1, rho2, rho3], rho4.as_deref()),
            ModeArg::Float => run_recover::<f64>(cli, [rho1, rho2, rho3], rho4.as_deref()),
        },
        Command::Verify => {
            let results = run_all(cli.seed);
            let mut text = String::new();
            for r in &results {
                text.push_str(&format!("{r}\n"));
                for d in &r.details {
                    text.push_str(&format!("    {d}\n"));
                }
            }
            let failed = results.iter().filter(|r| !r.pass).count();
            text.push_str(&format!("{} of {} criteria pass\n", results.len() - failed, results.len()));
            emit(cli.output.as_deref(), &text)?;
            if failed > 0 {
                Err(CliError::Verify)
            } else {
                Ok(EXIT_OK)
            }
        }
    }
}

fn trace_options(cli: &Cli) -> Result<TraceOptions, CliError> {
    let mut t = TraceOptions::default();
    if let Some(n) = cli.grid {
        t.steps = n;
    }
    if cli.r#box.is_some() {
        let (lo, hi) = box_range(cli, (-t.y_range, t.y_range))?;
        t.y_range = lo.abs().min(hi.abs());
    }
    Ok(t)
}

fn run_analyze<T: Scalar>(cli: &Cli, s: &SurfaceJet<T>) -> Result<i32, CliError> {
    let opts = AnalyzeOptions { trace: trace_options(cli)?, tol: cli.tol, oracle: true, literal_alpha: cli.literal_alpha };
    let a = analyze(s, &opts).map_err(|e| CliError::Input(e.into()))?;
    let text = serde_json::to_string_pretty(&a.report).map_err(|e| usage(e.to_string()))?;
    emit(cli.output.as_deref(), &text)?;
    match a.status {
        Status::Ok => Ok(EXIT_OK),
        Status::NonVersal => {
            eprintln!("p3c: non-versal: the projection family is not a versal unfolding; oracle disabled");
            Ok(EXIT_NON_GENERIC)
        }
        Status::NotP3c(msg) => {
            eprintln!("p3c: {msg}");
            Ok(EXIT_NON_GENERIC)
        }
    }
}

fn run_trace<T: Scalar>(cli: &Cli, s: &SurfaceJet<T>) -> Result<i32, CliError> {
    let rep = s.detect_p3c().map_err(|e| CliError::Input(e.into()))?;
    if let Some(f) = rep.failure {
        return Err(CliError::NonGeneric(f.to_string()));
    }
    if !rep.versal {
        return Err(CliError::NonGeneric("non-versal: tracing refused".into()));
    }
    let r = reconcile_surface(s, &trace_options(cli)?).map_err(|e| CliError::NonGeneric(e.to_string()))?;
    let mut buf = Vec::new();
    r.write_csv(&mut buf).map_err(|e| usage(e.to_string()))?;
    emit(cli.output.as_deref(), &String::from_utf8_lossy(&buf))?;
    for row in &r.rows {
        if let Some(n) = &row.note {
            eprintln!("{}: {n}", row.label);
        }
    }
    Ok(EXIT_OK)
}

fn sibling(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn run_portrait(cli: &Cli, s: &SurfaceJet<f64>) -> Result<i32, CliError> {
    let bde = asymptotic_bde(s).map_err(|e| CliError::Input(e.into()))?;
    let mut integrate = PortraitOptions::default().integrate;
    if let Some(h) = cli.step {
        integrate.step = h;
    }
    if cli.r#box.is_some() {
        let (lo, hi) = box_range(cli, (-integrate.half_width, integrate.half_width))?;
        integrate.half_width = lo.abs().min(hi.abs());
    }
    let opts = PortraitOptions { integrate, grid: cli.grid.unwrap_or(8), seed: cli.seed };
    let p = portrait(&bde, &opts).map_err(|e| CliError::NonGeneric(e.to_string()))?;
    emit(cli.output.as_deref(), &p.to_svg())?;
    if let Some(out) = &cli.output {
        let f = std::fs::File::create(sibling(out, "csv"))?;
        p.write_csv(f).map_err(|e| usage(e.to_string()))?;
    }
    Ok(EXIT_OK)
}

fn run_atlas(cli: &Cli) -> Result<i32, CliError> {
    let n = cli.grid.unwrap_or(400);
    let (lo, hi) = box_range(cli, (-2.0, 2.0))?;
    let cells = atlas_grid(n, lo, hi);
    let csv_path = cli.output.clone().unwrap_or_else(|| PathBuf::from("atlas.csv"));
    write_grid_csv(&cells, std::fs::File::create(&csv_path)?).map_err(|e| usage(e.to_string()))?;
    std::fs::write(sibling(&csv_path, "svg"), atlas_svg(&cells, n, lo, hi))?;
    let audit = connectivity_audit(&cells, n);
    let text = serde_json::to_string_pretty(&audit).map_err(|e| usage(e.to_string()))?;
    emit(None, &text)?;
    Ok(EXIT_OK)
}

fn parse_scalar<T: Scalar>(name: &str, s: &str) -> Result<T, CliError> {
    parse_rational(s).map(|q| T::from_rational(&q)).map_err(|e| usage(format!("--{name}: {e}")))
}

fn run_recover<T: Scalar>(cli: &Cli, rho: [&String; 3], rho4: Option<&str>) -> Result<i32, CliError> {
    let set = CrossRatioSet {
        rho1: parse_scalar::<T>("rho1", rho[0])?,
        rho2: parse_scalar::<T>("rho2", rho[1])?,
        rho3: parse_scalar::<T>("rho3", rho[2])?,
        rho4: rho4.map(|s| parse_scalar::<T>("rho4", s)).transpose()?.unwrap_or_else(T::zero),
    };
    let rec = match recover_moduli(&set) {
        Ok(r) => r,
        Err(CrossRatioError::InconsistentInvariants(_)) if rho4.is_none() => {
            return Err(usage("degenerate branch (1 - 4 rho2 + 3 rho3 = 0): --rho4 is required to choose alpha"))
        }
        Err(e) => return Err(CliError::NonGeneric(e.to_string())),
    };
    let mut rep = RecoveryReport::new(&set, &rec, cli.literal_alpha);
    if rho4.is_none() {
        rep.rho4 = "unspecified".into();
    }
    let text = serde_json::to_string_pretty(&rep).map_err(|e| usage(e.to_string()))?;
    emit(cli.output.as_deref(), &text)?;
    Ok(EXIT_OK)
}
