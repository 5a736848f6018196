//! `qtfa`: compute quaternion transforms of spec-file signals and run verification suites.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails, 2 for an invalid
//! configuration or spec file.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qtfa_core::io::{write_field, write_signal, write_spectrum};
use qtfa_core::suite::{
    qft_plancherel_check, qwft_norm_checks, reconstruction_check, IDENTITY_TOL, RECONSTRUCTION_TOL, RELATION_TOL,
};
use qtfa_core::tfdist::{ambiguity_origin_check, ambiguity_relation_check, wigner_relation_check};
use qtfa_core::{
    ambiguity, qft_fast, qwft, qwft_lazy, reconstruct, run_suite, wigner, GridSpec, InequalityReport, SampledSignal,
    SignalSpec, Suite, Summary,
};

const DEFAULT_D: usize = 1;
const DEFAULT_N: usize = 32;
const DEFAULT_L: f64 = 8.0;

#[derive(Parser, Debug)]
#[command(name = "qtfa", version, about = "Quaternion time-frequency transforms and uncertainty checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Two-sided quaternion Fourier transform of the signal.
    Qft,
    /// Windowed transform of the signal with the window.
    Qwft,
    /// Ambiguity function of the signal and window.
    Ambiguity,
    /// Wigner transform of the signal and window.
    Wigner,
    /// Windowed transform followed by its inversion.
    Reconstruct,
    /// Run a named verification suite.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Options {
    /// Signal spec file (JSON: d, n_per_axis, half_extent, kind, a, b).
    #[arg(long, global = true)]
    signal: Option<PathBuf>,
    /// Window spec file; the signal is reused when absent.
    #[arg(long, global = true)]
    window: Option<PathBuf>,
    /// Override the dimension d.
    #[arg(long, global = true)]
    d: Option<usize>,
    /// Override the samples per axis N.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Override the half-extent L.
    #[arg(long, global = true)]
    l: Option<f64>,
    /// Suite for `verify`.
    #[arg(long, global = true, default_value = "all")]
    suite: String,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for the random signals of a suite.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Binary dump of the computed spectrum, field or reconstruction.
    #[arg(long, global = true)]
    dump_field: Option<PathBuf>,
    /// Leave the timestamp out of the report.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

/// The resolved run configuration embedded in every report.
#[derive(Debug, Serialize)]
struct RunConfig {
    command: Command,
    signal_spec: Option<PathBuf>,
    window_spec: Option<PathBuf>,
    d: usize,
    n: usize,
    l: f64,
    suite: Option<Suite>,
    output: Option<PathBuf>,
    format: Format,
    seed: u64,
    dump_field: Option<PathBuf>,
}

#[derive(Serialize)]
struct Document<'a> {
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    reports: &'a [InequalityReport],
    summary: Summary,
}

/// A failure that maps to exit code 2.
#[derive(Debug)]
struct Invalid(String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

type Outcome<T> = Result<T, Invalid>;

fn configure_threads() -> Outcome<()> {
    let Ok(raw) = std::env::var("QTFA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| Invalid(format!("QTFA_THREADS = {raw:?} is not a count")))?;
    if n == 0 {
        return Err(Invalid("QTFA_THREADS must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn load_spec(path: &Path, what: &str) -> Outcome<SignalSpec> {
    SignalSpec::load(path).map_err(|e| Invalid(format!("{what} spec {}: {e}", path.display())))
}

/// Applies the grid overrides to `spec`.
fn with_grid(mut spec: SignalSpec, grid: &GridSpec) -> SignalSpec {
    spec.d = grid.d;
    spec.n_per_axis = grid.n_per_axis;
    spec.half_extent = grid.half_extent;
    spec
}

fn resolve(command: Command, o: &Options) -> Outcome<(RunConfig, Option<(SampledSignal, SampledSignal)>)> {
    let signal = o.signal.as_deref().map(|p| load_spec(p, "signal")).transpose()?;
    let window = o.window.as_deref().map(|p| load_spec(p, "window")).transpose()?;
    let base = signal.map(|s| (s.d, s.n_per_axis, s.half_extent)).unwrap_or((DEFAULT_D, DEFAULT_N, DEFAULT_L));
    let grid = GridSpec::new(o.d.unwrap_or(base.0), o.n.unwrap_or(base.1), o.l.unwrap_or(base.2))?;
    let suite = match command {
        Command::Verify => Some(o.suite.parse::<Suite>()?),
        _ => None,
    };
    let config = RunConfig {
        command,
        signal_spec: o.signal.clone(),
        window_spec: o.window.clone(),
        d: grid.d,
        n: grid.n_per_axis,
        l: grid.half_extent,
        suite,
        output: o.output.clone(),
        format: o.format,
        seed: o.seed,
        dump_field: o.dump_field.clone(),
    };
    let inputs = match (command, signal) {
        (Command::Verify, _) => None,
        (_, None) => return Err(Invalid(format!("{} needs --signal", command_name(command)))),
        (_, Some(s)) => {
            let f = with_grid(s, &grid).sample()?;
            let g = with_grid(window.unwrap_or(s), &grid).sample()?;
            Some((f, g))
        }
    };
    Ok((config, inputs))
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Qft => "qft",
        Command::Qwft => "qwft",
        Command::Ambiguity => "ambiguity",
        Command::Wigner => "wigner",
        Command::Reconstruct => "reconstruct",
        Command::Verify => "verify",
    }
}

/// Runs the checks, then writes the dump if one was requested.
fn execute(config: &RunConfig, inputs: Option<(SampledSignal, SampledSignal)>) -> Outcome<Vec<InequalityReport>> {
    let dump = config.dump_field.as_deref();
    let Some((f, g)) = inputs else {
        let grid = GridSpec::new(config.d, config.n, config.l)?;
        let suite = config.suite.unwrap_or(Suite::All);
        return Ok(run_suite(suite, &grid, config.seed)?);
    };
    let reports = match config.command {
        Command::Qft => vec![qft_plancherel_check(&f)?],
        Command::Qwft => qwft_norm_checks(&f, &g)?.to_vec(),
        Command::Ambiguity => {
            let mut out = ambiguity_relation_check(&f, &g, RELATION_TOL)?.to_vec();
            out.push(ambiguity_origin_check(&f, &g, RELATION_TOL)?);
            out
        }
        Command::Wigner => wigner_relation_check(&f, &g, IDENTITY_TOL)?.to_vec(),
        Command::Reconstruct => vec![reconstruction_check(&f, &g, RECONSTRUCTION_TOL)?],
        Command::Verify => unreachable!("verify has no signal inputs"),
    };
    if let Some(path) = dump {
        match config.command {
            Command::Qft => write_spectrum(path, &qft_fast(&f)?)?,
            Command::Qwft => write_field(path, &qwft_lazy(&f, &g)?)?,
            Command::Ambiguity => write_field(path, &ambiguity(&f, &g)?)?,
            Command::Wigner => write_field(path, &wigner(&f, &g)?)?,
            Command::Reconstruct => write_signal(path, &reconstruct(&qwft(&f, &g)?, &g)?)?,
            Command::Verify => {}
        }
    }
    Ok(reports)
}

fn render_json(doc: &Document) -> Outcome<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(doc)?;
    out.push(b'\n');
    Ok(out)
}

/// One row per report; parameters and constants become `param.*` and `const.*` columns.
fn render_csv(reports: &[InequalityReport]) -> Outcome<Vec<u8>> {
    let params: BTreeSet<&str> = reports.iter().flat_map(|r| r.parameters.keys().map(String::as_str)).collect();
    let consts: BTreeSet<&str> = reports.iter().flat_map(|r| r.constant_values.keys().map(String::as_str)).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["name", "lhs", "rhs", "margin", "pass"].map(String::from).to_vec();
    header.extend(params.iter().map(|k| format!("param.{k}")));
    header.extend(consts.iter().map(|k| format!("const.{k}")));
    header.push("notes".into());
    w.write_record(&header)?;
    for r in reports {
        let mut row =
            vec![r.name.clone(), r.lhs.to_string(), r.rhs.to_string(), r.margin.to_string(), r.pass.to_string()];
        row.extend(params.iter().map(|k| r.parameters.get(*k).map(f64::to_string).unwrap_or_default()));
        row.extend(consts.iter().map(|k| r.constant_values.get(*k).map(f64::to_string).unwrap_or_default()));
        row.push(r.notes.join("; "));
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| Invalid(e.to_string()))
}

fn emit(config: &RunConfig, reports: &[InequalityReport], no_timestamp: bool) -> Outcome<Summary> {
    let summary = Summary::of(reports);
    let bytes = match config.format {
        Format::Json => {
            let timestamp = if no_timestamp {
                None
            } else {
                Some(SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0))
            };
            render_json(&Document { config, timestamp, reports, summary })?
        }
        Format::Csv => render_csv(reports)?,
    };
    match &config.output {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| Invalid(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(summary)
}

fn run(cli: Cli) -> Outcome<Summary> {
    configure_threads()?;
    let (config, inputs) = resolve(cli.command, &cli.opts)?;
    let reports = execute(&config, inputs)?;
    emit(&config, &reports, cli.opts.no_timestamp)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => {
            eprintln!("{} checks: {} passed, {} failed", summary.total, summary.passed, summary.failed);
            if summary.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Invalid(msg)) => {
            eprintln!("qtfa: {msg}");
            ExitCode::from(2)
        }
    }
}
