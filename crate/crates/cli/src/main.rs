mod commands;
mod config;
mod error;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{ConfigArg, ConfigFlags, DEFAULT_BUDGET};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "symapprox", version, about = "Season- and trend-aware symbolic time series approximation")]
struct Cli {
    /// Worker threads; defaults to the available parallelism. 1 runs the
    /// sequential path.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Log progress to stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic Season or Trend dataset.
    Generate(GenerateArgs),
    /// Encode a dataset and persist the index.
    Encode(EncodeArgs),
    /// Match query series against a dataset.
    Match(MatchArgs),
    /// Leave-one-out accuracy experiment.
    Eval(EvalArgs),
    /// Matching efficiency experiment over one or more datasets.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Season,
    Trend,
}

#[derive(Debug, clap::Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    length: usize,
    #[arg(long, default_value_t = config::DEFAULT_SEASON_LENGTH)]
    season_length: usize,
    /// Target strength; the mean target with --large.
    #[arg(long)]
    strength: f64,
    #[arg(long, default_value_t = symapprox::datagen::DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Spread per-series targets around --strength.
    #[arg(long)]
    large: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, clap::Args)]
struct EncodeArgs {
    /// Dataset directory.
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    config: ConfigFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Approx,
    Both,
}

#[derive(Debug, clap::Args)]
struct MatchArgs {
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    config: ConfigFlags,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// Query file of little-endian f64 values; relative paths are also tried
    /// against the dataset directory.
    #[arg(long)]
    query: Vec<PathBuf>,
    /// Use dataset member(s) as queries.
    #[arg(long)]
    query_index: Vec<usize>,
    /// Leave a member query out of its own candidates.
    #[arg(long)]
    exclude_self: bool,
    /// Abandon raw distances once they exceed the best so far.
    #[arg(long)]
    early_abandon: bool,
    /// Drop each series file from the page cache before reading it.
    #[arg(long)]
    uncached: bool,
    /// Write results as TSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct EvalArgs {
    #[arg(long)]
    data: PathBuf,
    /// Configuration such as `ssax:w=24,a_seas=256`; repeatable. Defaults to
    /// the full 320-bit grid.
    #[arg(long = "config")]
    configs: Vec<ConfigArg>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: f64,
    /// Seed for TLB pair sampling on large datasets.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report as TSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct BenchArgs {
    /// Dataset directory; repeatable.
    #[arg(long, required = true)]
    data: Vec<PathBuf>,
    #[arg(long = "config", required = true)]
    configs: Vec<ConfigArg>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: f64,
    #[arg(long, default_value_t = 50)]
    queries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock limit per dataset and configuration, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Keep queries among their own candidates.
    #[arg(long)]
    include_self: bool,
    #[arg(long)]
    uncached: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let threads = match cli.threads {
        Some(0) => return Err(CliError::Validation("--threads must be at least 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let parallel = threads > 1;
    match cli.command {
        Command::Generate(a) => commands::generate(&a),
        Command::Encode(a) => commands::encode(&a),
        Command::Match(a) => commands::matching(&a, parallel),
        Command::Eval(a) => commands::eval(&a, parallel),
        Command::Bench(a) => commands::bench(&a, parallel),
    }
}
