//! `ulrich-forge`: numerology, certification, searches and cohomology tables
//! for Ulrich bundles on Veronese surfaces.
//!
//! Exit codes: 0 success, 1 certification or search failure, 2 invalid
//! parameters, 3 I/O or parse failure.

mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ulrich_core::cohomology::Cohomology;
use ulrich_core::field::FieldError;
use ulrich_core::presentation::PresentationError;
use ulrich_core::search::{SearchError, SearchOptions, SweepOptions};
use ulrich_core::seed::derive_rng;
use ulrich_core::ulrich::{self, NumerologyError};
use ulrich_core::{CertifyLevel, CertifyOptions, Config, OutputFormat, PrimeField, UlrichPresentation};

#[derive(Parser, Debug)]
#[command(name = "ulrich-forge", version, about = "Ulrich bundles on Veronese surfaces over prime fields")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Prime modulus of the coefficient field.
    #[arg(long, global = true, default_value_t = ulrich_core::DEFAULT_PRIME)]
    p: u32,
    /// Master seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true, env = "ULRICH_FORGE_WORKERS")]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Full certification checks h1(E(td)) for t from -alpha-ACM_BELOW up to ACM_ABOVE.
    #[arg(long, global = true, default_value_t = 3)]
    acm_below: u32,
    #[arg(long, global = true, default_value_t = 3)]
    acm_above: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Level {
    Basic,
    Full,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form invariants of rank-r Ulrich bundles on (P^2, dH).
    Numerology {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        r: i64,
    },
    /// Certify a presentation file; writes `<name>.cert.json`.
    Certify {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Level::Basic)]
        level: Level,
        /// Directory for the certificate (defaults to the input's directory).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Random search for one (d, r); saves the first success.
    Search {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        r: i64,
        #[arg(long, default_value_t = 5)]
        trials: u64,
        #[arg(long, value_name = "DIR", default_value = ".")]
        out: PathBuf,
        /// Include wall-clock times (reports are then not byte-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Searches over a list of degrees for one rank.
    Sweep {
        #[arg(long)]
        r: i64,
        /// Comma-separated degrees, e.g. 3,5,7.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        d: Vec<i64>,
        #[arg(long, default_value_t = 5)]
        trials: u64,
        #[arg(long, value_name = "DIR", default_value = ".")]
        out: PathBuf,
        /// Stop starting new degrees after this many seconds.
        #[arg(long, value_name = "SECONDS")]
        budget: Option<f64>,
        #[arg(long)]
        timings: bool,
    },
    /// Cohomology h^i(E(m)) over a range of twists and the Beilinson table.
    Table {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exit {
    Success = 0,
    CertificationFailed = 1,
    InvalidParameters = 2,
    Io = 3,
}

struct Failure {
    exit: Exit,
    error: anyhow::Error,
}

impl Failure {
    fn new(exit: Exit, error: impl Into<anyhow::Error>) -> Self {
        Failure { exit, error: error.into() }
    }
}

fn presentation_failure(e: PresentationError) -> Failure {
    let exit = match e {
        PresentationError::BadDegree(_) | PresentationError::BadRank(_) | PresentationError::Parity { .. } => {
            Exit::InvalidParameters
        }
        _ => Exit::Io,
    };
    Failure::new(exit, e)
}

fn search_failure(e: SearchError) -> Failure {
    match e {
        SearchError::Shape(e) => presentation_failure(e),
        e => Failure::new(Exit::InvalidParameters, e),
    }
}

fn numerology_failure(e: NumerologyError) -> Failure {
    match e {
        NumerologyError::Shape(e) => presentation_failure(e),
        NumerologyError::OutOfRange(_) => Failure::new(Exit::InvalidParameters, e),
        NumerologyError::Inconsistent(_) => Failure::new(Exit::CertificationFailed, e),
    }
}

fn field_failure(e: FieldError) -> Failure {
    Failure::new(Exit::InvalidParameters, e)
}

fn io_failure(e: anyhow::Error) -> Failure {
    Failure::new(Exit::Io, e)
}

fn config_from(g: &GlobalArgs) -> Config {
    let workers = g
        .workers
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    Config {
        p: g.p,
        master_seed: g.seed,
        workers,
        format: match g.format {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        },
        acm_below: g.acm_below,
        acm_above: g.acm_above,
        ..Config::default()
    }
}

fn load(path: &Path) -> Result<UlrichPresentation, Failure> {
    // the file fixes the field; --p only applies to generated presentations
    UlrichPresentation::load(path).map_err(|e| Failure::new(Exit::Io, e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display())).map_err(io_failure)?;
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display())).map_err(io_failure)
}

fn emit(config: &Config, text: String, value: serde_json::Value) {
    let body = match config.format {
        OutputFormat::Text => text,
        OutputFormat::Json => serde_json::to_string_pretty(&value).expect("report serializes") + "\n",
    };
    // a closed pipe (e.g. `| head`) is not an error for a batch tool
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
}

fn cmd_numerology(config: &Config, d: i64, r: i64) -> Result<Exit, Failure> {
    let inv = ulrich::invariants(d, r).map_err(numerology_failure)?;
    let hilbert: Vec<(i64, i64)> = (-3..=3)
        .map(|t| ulrich::hilbert_check(d, r, t).map(|v| (t, v)))
        .collect::<Result<_, _>>()
        .map_err(numerology_failure)?;
    let (degree, ambient_dim) = ulrich::veronese_facts(d);
    let value = json!({
        "config": config,
        "invariants": inv,
        "hilbert_values": hilbert.iter().map(|(t, v)| json!({"t": t, "value": v})).collect::<Vec<_>>(),
        "veronese": {"degree": degree, "ambient_dim": ambient_dim},
        "line_bundle_solutions": ulrich::line_bundle_solutions(d),
    });
    emit(config, render::numerology(&inv, &hilbert, (degree, ambient_dim)), value);
    Ok(Exit::Success)
}

fn cmd_certify(config: &Config, input: &Path, level: Level, out: Option<&Path>) -> Result<Exit, Failure> {
    let pres = load(input)?;
    let level = match level {
        Level::Basic => CertifyLevel::Basic,
        Level::Full => CertifyLevel::Full,
    };
    let opts = CertifyOptions::from_config(config, level);
    let cert = ulrich::certify(&pres, &opts, &mut derive_rng(config.master_seed, "certify", 0));
    let stem = input.file_stem().map_or("presentation".into(), |s| s.to_string_lossy().into_owned());
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| input.parent().map(Path::to_path_buf).unwrap_or_default());
    let cert_path = dir.join(format!("{stem}.cert.json"));
    write_file(&cert_path, &cert.to_json())?;
    let value = serde_json::to_value(&cert).expect("certificate serializes");
    emit(config, render::certificate(&cert, &cert_path), value);
    Ok(if cert.passed() { Exit::Success } else { Exit::CertificationFailed })
}

fn cmd_search(config: &Config, d: i64, r: i64, trials: u64, out: &Path, timings: bool) -> Result<Exit, Failure> {
    let opts = SearchOptions { config: config.clone(), trials, timings };
    let outcome = ulrich_core::search(d, r, &opts).map_err(search_failure)?;
    if let (Some(p), Some(name)) = (&outcome.presentation, &outcome.report.presentation_file) {
        write_file(&out.join(name), &p.to_canonical_json())?;
    }
    let value = json!({"config": config, "report": outcome.report});
    emit(config, render::search(&outcome.report), value);
    Ok(if outcome.presentation.is_some() { Exit::Success } else { Exit::CertificationFailed })
}

fn cmd_sweep(
    config: &Config,
    r: i64,
    d_list: &[i64],
    trials: u64,
    out: &Path,
    budget: Option<f64>,
    timings: bool,
) -> Result<Exit, Failure> {
    let time_budget = match budget {
        Some(b) if !(b.is_finite() && b >= 0.0) => {
            return Err(Failure::new(Exit::InvalidParameters, anyhow!("--budget must be a non-negative number of seconds")))
        }
        b => b.map(Duration::from_secs_f64),
    };
    let opts = SweepOptions {
        search: SearchOptions { config: config.clone(), trials, timings },
        time_budget,
        out_dir: Some(out.to_path_buf()),
    };
    let report = ulrich_core::sweep(d_list, r, &opts).map_err(search_failure)?;
    let name = format!("sweep_r{r}_seed{}.json", config.master_seed);
    write_file(&out.join(name), &report.to_json())?;
    let value = serde_json::to_value(&report).expect("sweep serializes");
    emit(config, report.to_table(), value);
    let all = report.complete && report.successes() == report.results.len();
    Ok(if all { Exit::Success } else { Exit::CertificationFailed })
}

fn cmd_table(config: &Config, input: &Path, from: i64, to: i64) -> Result<Exit, Failure> {
    if from > to {
        return Err(Failure::new(Exit::InvalidParameters, anyhow!("--from {from} is larger than --to {to}")));
    }
    let pres = load(input)?;
    let coh = Cohomology::new(&pres);
    let profile = coh.profile(from..=to);
    let omega = coh.omega_table();
    let value = json!({
        "config": config,
        "d": pres.d(),
        "r": pres.r(),
        "profile": profile,
        "polarization_twists": profile
            .rows
            .iter()
            .filter(|row| row.m % pres.d() == 0)
            .map(|row| json!({"t": row.m / pres.d(), "m": row.m}))
            .collect::<Vec<_>>(),
        "omega": {
            "p": [-2, -1, 0],
            "rows": (0..3).map(|q| json!({"q": q, "values": omega.row(q)})).collect::<Vec<_>>(),
        },
    });
    emit(config, render::table(&pres, &profile, &omega), value);
    Ok(Exit::Success)
}

fn run(cli: Cli) -> Result<Exit, Failure> {
    let config = config_from(&cli.global);
    PrimeField::new(config.p).map_err(field_failure)?;
    // a second initialization only happens in tests that call run twice
    let _ = rayon::ThreadPoolBuilder::new().num_threads(config.workers).build_global();
    match &cli.command {
        Command::Numerology { d, r } => cmd_numerology(&config, *d, *r),
        Command::Certify { input, level, out } => cmd_certify(&config, input, *level, out.as_deref()),
        Command::Search { d, r, trials, out, timings } => cmd_search(&config, *d, *r, *trials, out, *timings),
        Command::Sweep { r, d, trials, out, budget, timings } => {
            cmd_sweep(&config, *r, d, *trials, out, *budget, *timings)
        }
        Command::Table { input, from, to } => cmd_table(&config, input, *from, *to),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.exit as u8)
        }
    }
}
