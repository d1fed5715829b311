//! `fusion` — decision-fusion benchmark front end.
//!
//! Subcommands: `gen` (synthetic datasets), `ingest-check` (CSV
//! validation + separability), `run` (experiment configs), `rank`
//! (feature ranking / subspace partition), `lae-curve` (plot-ready
//! local-accuracy curves from a model archive).

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fusion::data::csv_io::{export_csv, ingest_csv};
use fusion::data::generators::{generate_dataset, GeneratorKind};
use fusion::evaluation::bhattacharyya_distance;
use fusion::subspace::{fair_partition, rank_features};

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or usage: exit code 2.
    Config(String),
    /// Valid plan that failed at runtime: exit code 1.
    Run(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Run(m) => write!(f, "error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "fusion", about = "Two-class decision fusion benchmark", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Seed override (defaults to the config seed, or 0)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file or directory override
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker thread count (defaults to available cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Suppress the standard-output summary
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset and write it as CSV
    Gen {
        /// twonorm, ringnorm or waveform
        #[arg(long)]
        generator: String,
        /// Number of samples
        #[arg(long)]
        n: usize,
    },
    /// Validate a CSV dataset and print its shape and separability
    IngestCheck {
        #[arg(long)]
        input: PathBuf,
        /// Label column name or 0-based index
        #[arg(long)]
        label_column: String,
        #[arg(long)]
        positive_label: String,
    },
    /// Run every experiment in a config file and write reports
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Rank features of a dataset and optionally partition them
    Rank {
        /// Generator name (alternative to --input)
        #[arg(long)]
        generator: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// CSV path (alternative to --generator)
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        label_column: Option<String>,
        #[arg(long)]
        positive_label: Option<String>,
        /// Also emit a fair partition into this many groups
        #[arg(long)]
        k: Option<usize>,
    },
    /// Sample one member's local-accuracy curve from a model archive
    LaeCurve {
        #[arg(long)]
        archive: PathBuf,
        /// Archive cell index
        #[arg(long, default_value_t = 0)]
        cell: usize,
        /// Ensemble member index within the cell
        #[arg(long)]
        member: usize,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.global.jobs {
        if rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().is_err() {
            eprintln!("error: worker pool already initialized");
            return ExitCode::from(1);
        }
    }
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Run(_)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e @ CliError::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

pub(crate) fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Run(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn parse_label_column(raw: &str) -> fusion::data::csv_io::LabelColumn {
    use fusion::data::csv_io::LabelColumn;
    match raw.parse::<usize>() {
        Ok(i) => LabelColumn::Index(i),
        Err(_) => LabelColumn::Name(raw.to_string()),
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let seed = cli.global.seed;
    match &cli.command {
        Command::Gen { generator, n } => {
            let kind = GeneratorKind::parse(generator).map_err(|e| CliError::Config(e.to_string()))?;
            let data = generate_dataset(kind, *n, seed.unwrap_or(0))
                .map_err(|e| CliError::Config(e.to_string()))?;
            let mut buf = Vec::new();
            export_csv(&data, &mut buf).map_err(|e| CliError::Run(e.to_string()))?;
            write_output(&cli.global.out, std::str::from_utf8(&buf).unwrap())
        }
        Command::IngestCheck { input, label_column, positive_label } => {
            let data = ingest_csv(input, &parse_label_column(label_column), positive_label)
                .map_err(|e| CliError::Run(e.to_string()))?;
            let n2 = data
                .labels
                .iter()
                .filter(|&&l| l == fusion::types::ClassLabel::Omega2)
                .count();
            let sep = bhattacharyya_distance(&data).map_err(|e| CliError::Run(e.to_string()))?;
            if !cli.global.quiet {
                println!("dataset: {}", data.name);
                println!("samples: {}", data.len());
                println!("dimension: {}", data.dimension());
                println!("class counts: omega1={} omega2={n2}", data.len() - n2);
                println!("bhattacharyya distance: {sep:.4}");
            }
            Ok(())
        }
        Command::Run { config } => report::run_experiments(config, &cli.global.out, seed, cli.global.quiet),
        Command::Rank { generator, n, input, label_column, positive_label, k } => {
            let data = match (generator, input) {
                (Some(g), None) => {
                    let kind = GeneratorKind::parse(g).map_err(|e| CliError::Config(e.to_string()))?;
                    let n = n.ok_or_else(|| CliError::Config("--generator needs --n".into()))?;
                    generate_dataset(kind, n, seed.unwrap_or(0))
                        .map_err(|e| CliError::Config(e.to_string()))?
                }
                (None, Some(path)) => {
                    let label = label_column
                        .as_deref()
                        .map(parse_label_column)
                        .ok_or_else(|| CliError::Config("--input needs --label-column".into()))?;
                    let positive = positive_label
                        .as_deref()
                        .ok_or_else(|| CliError::Config("--input needs --positive-label".into()))?;
                    ingest_csv(path, &label, positive).map_err(|e| CliError::Run(e.to_string()))?
                }
                _ => {
                    return Err(CliError::Config(
                        "need exactly one of --generator or --input".into(),
                    ))
                }
            };
            let ranking = rank_features(&data).map_err(|e| CliError::Run(e.to_string()))?;
            let partition = k
                .map(|k| fair_partition(&ranking, k))
                .transpose()
                .map_err(|e| CliError::Config(e.to_string()))?;
            let doc = serde_json::json!({
                "ranking": ranking.scores,
                "groups": partition.map(|p| p.groups),
            });
            let mut text = serde_json::to_string_pretty(&doc).unwrap();
            text.push('\n');
            write_output(&cli.global.out, &text)
        }
        Command::LaeCurve { archive, cell, member, points } => {
            report::emit_lae_curve(archive, *cell, *member, *points, &cli.global.out)
        }
    }
}
