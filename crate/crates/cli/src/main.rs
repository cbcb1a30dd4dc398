mod commands;
mod manifest;
mod selftest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use residue_forge::report::{emit_report, Format, Table};
use residue_forge::{Error, Exec};

use manifest::RunManifest;

#[derive(Parser, Debug)]
#[command(name = "residue-forge", version, about = "Exact residue-class counts for smooth, squarefree and squarefull integers")]
struct Cli {
    /// JSON lines on stdout (the default sink; kept for explicit scripts)
    #[arg(long, global = true)]
    json: bool,
    /// Also write the result table as CSV
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Worker threads; overrides RESIDUE_FORGE_THREADS
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Upper limit for the factor sieve
    #[arg(long, global = true, value_name = "N")]
    sieve_limit: Option<u64>,
    /// Seed for randomized checks
    #[arg(long, global = true, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Where to write the run manifest (defaults to `<csv>.manifest.json` when --csv is given)
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smooth and squarefree-smooth counts in a residue class; M(p)
    Psi(commands::PsiArgs),
    /// Congruence counts N, N#, Q, R and the bilinear sum
    Congr(commands::CongrArgs),
    /// Character sums, fourth moments, quadratic non-residues
    Chars(commands::CharsArgs),
    /// Least squarefull integers in residue classes
    Squarefull(commands::SquarefullArgs),
    /// k-full integers in short intervals
    Kfull(KfullArgs),
    /// Exact threshold formulas
    Bounds(commands::BoundsArgs),
    /// Run every module's self-checks
    Selftest,
}

#[derive(Args, Debug)]
struct KfullArgs {
    #[command(subcommand)]
    cmd: KfullCommand,
}

#[derive(Subcommand, Debug)]
enum KfullCommand {
    /// Exhaustive scan of (N^k, (N+1)^k), or a record search
    Scan(commands::KfullScanArgs),
    /// Constructive cluster with a certificate
    Construct(commands::KfullConstructArgs),
    /// Re-verify a certificate file
    Verify(commands::KfullVerifyArgs),
}

/// Usage problems found after parsing, or a library error.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) => e.exit_code() as u8,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Settings every subcommand sees.
#[derive(Debug, Clone)]
pub struct Context {
    pub exec: Exec,
    pub sieve_limit: Option<u64>,
    pub seed: u64,
}

/// A result table plus free-form JSON lines printed after it.
#[derive(Debug, Default)]
pub struct Outcome {
    pub table: Table,
    pub extra: Vec<String>,
}

impl Outcome {
    pub fn table(table: Table) -> Self {
        Outcome { table, extra: Vec::new() }
    }
}

fn thread_count(flag: Option<usize>) -> CliResult<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("RESIDUE_FORGE_THREADS") {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("RESIDUE_FORGE_THREADS={s:?} is not a count"))),
        _ => Ok(None),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let start = Instant::now();
    let threads = thread_count(cli.threads)?;
    if threads == Some(0) {
        return usage("--threads must be at least 1");
    }
    let workers = residue_forge::exec::init_threads(threads.unwrap_or(0))?;
    let ctx = Context {
        exec: if workers <= 1 { Exec::Sequential } else { Exec::Parallel },
        sieve_limit: cli.sieve_limit,
        seed: cli.seed,
    };
    let (name, params, outcome) = match &cli.cmd {
        Command::Psi(a) => ("psi", manifest::params(a), commands::psi(a, &ctx)?),
        Command::Congr(a) => ("congr", manifest::params(a), commands::congr(a, &ctx)?),
        Command::Chars(a) => ("chars", manifest::params(a), commands::chars(a, &ctx)?),
        Command::Squarefull(a) => ("squarefull", manifest::params(a), commands::squarefull(a, &ctx)?),
        Command::Kfull(k) => match &k.cmd {
            KfullCommand::Scan(a) => ("kfull scan", manifest::params(a), commands::kfull_scan(a, &ctx)?),
            KfullCommand::Construct(a) => ("kfull construct", manifest::params(a), commands::kfull_construct(a, &ctx)?),
            KfullCommand::Verify(a) => ("kfull verify", manifest::params(a), commands::kfull_verify(a, &ctx)?),
        },
        Command::Bounds(a) => ("bounds", manifest::params(a), commands::bounds(a, &ctx)?),
        Command::Selftest => ("selftest", Default::default(), selftest::all(&ctx)?),
    };

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let io = |e: std::io::Error| CliError::Core(Error::resource("writing stdout", e));
    outcome.table.write(&mut out, Format::Json).map_err(io)?;
    for line in &outcome.extra {
        writeln!(out, "{line}").map_err(io)?;
    }
    out.flush().map_err(io)?;
    if let Some(path) = &cli.csv {
        emit_report(&outcome.table, path, Format::Csv)?;
    }

    let manifest_path = cli
        .manifest
        .clone()
        .or_else(|| cli.csv.as_ref().map(|p| PathBuf::from(format!("{}.manifest.json", p.display()))));
    if let Some(path) = manifest_path {
        let m = RunManifest {
            subcommand: name.to_string(),
            parameters: params,
            sieve_limit: ctx.sieve_limit,
            threads: workers,
            seed: ctx.seed,
            output: cli.csv.as_ref().map(|p| p.display().to_string()),
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_secs: start.elapsed().as_secs_f64(),
        };
        m.write(&path)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("residue-forge: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
