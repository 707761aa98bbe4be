use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use superset_cli::commands::{cmd_run, cmd_split_run, cmd_sweep_folds, cmd_synth, emit};
use superset_cli::config::{OutputFormat, RunConfig};
use superset_cli::error::{CliError, Result};
use superset_cli::ingest::LogBase;
use superset_cli::report::{render_sweep_csv, Report};
use superset_core::SynthConfig;

#[derive(Parser)]
#[command(name = "superset", version, about = "Superset model probabilities for covariate subsets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis on one dataset.
    Run(RunArgs),
    /// Repeat the analysis for a range of fold counts.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 2)]
        min_folds: usize,
        #[arg(long, default_value_t = 15)]
        max_folds: usize,
    },
    /// Separate analyses on the fine and coarse precision partitions.
    Split(RunArgs),
    /// Write a synthetic replicated-design dataset as CSV.
    Synth(SynthArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration, e.g. the `config` object of an earlier report.
    #[arg(long, conflicts_with = "data")]
    config: Option<PathBuf>,
    #[arg(long, required_unless_present = "config")]
    data: Option<PathBuf>,
    /// Response column; defaults to Y for the diabetes layout.
    #[arg(long)]
    response: Option<String>,
    /// Log-transform the response (natural log unless `=10`).
    #[arg(long, value_enum, num_args = 0..=1, require_equals = true, default_missing_value = "e")]
    log_response: Option<LogBase>,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3.0)]
    hyper_a: f64,
    /// Count M = M* as a superset.
    #[arg(long)]
    inclusive: bool,
    /// Include the intercept-only model in the enumeration.
    #[arg(long, num_args = 0..=1, require_equals = true, default_value_t = true,
          default_missing_value = "true", action = clap::ArgAction::Set)]
    include_empty: bool,
    #[arg(long, value_delimiter = ',', default_values_t = ["BP".to_string(), "S4".to_string()])]
    precision_cols: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig> {
        if let Some(path) = self.config {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            return serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())));
        }
        Ok(RunConfig {
            data: self.data.expect("clap enforces --data"),
            response: self.response,
            log_response: self.log_response,
            folds: self.folds,
            seed: self.seed,
            hyper_a: self.hyper_a,
            inclusive: self.inclusive,
            include_empty: self.include_empty,
            precision_cols: self.precision_cols,
            out: self.out,
            format: self.format,
        })
    }
}

#[derive(Args)]
struct SynthArgs {
    /// Observations per design point.
    #[arg(long, default_value_t = 40)]
    replicates: usize,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true,
          default_values_t = [-2.0, -1.0, 0.0, 1.0, 2.0])]
    grid: Vec<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    beta1: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    beta2: f64,
    #[arg(long, default_value_t = 0.5)]
    noise_sd: f64,
    #[arg(long, default_value_t = 2)]
    distractors: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn render_report(report: &Report, format: OutputFormat) -> Result<String> {
    Ok(match format {
        OutputFormat::Json => report.to_json()?,
        OutputFormat::Csv => format!("{}\n{}\n", Report::csv_header(), report.to_csv_row()),
    })
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let config = args.into_config()?;
            let report = cmd_run(&config)?;
            info!("superset probability {}", report.probability);
            emit(&render_report(&report, config.format)?, config.out.as_deref())
        }
        Command::Sweep { run, min_folds, max_folds } => {
            let config = run.into_config()?;
            let rows = cmd_sweep_folds(&config, min_folds, max_folds)?;
            if let Some(r) = rows.iter().find(|r| r.folds == 10) {
                eprintln!("10-fold probability: {}", r.probability);
            }
            emit(&render_sweep_csv(&rows), config.out.as_deref())
        }
        Command::Split(args) => {
            let config = args.into_config()?;
            let split = cmd_split_run(&config)?;
            let text = match config.format {
                OutputFormat::Json => serde_json::to_string_pretty(&split)? + "\n",
                OutputFormat::Csv => {
                    let mut s = format!("partition,rows,{}\n", Report::csv_header());
                    for (name, part) in [("fine", &split.fine), ("coarse", &split.coarse)] {
                        s.push_str(&format!("{name},{},{}\n", part.rows, part.report.to_csv_row()));
                    }
                    s
                }
            };
            emit(&text, config.out.as_deref())
        }
        Command::Synth(a) => {
            let cfg = SynthConfig {
                replicates: a.replicates,
                grid: a.grid,
                alpha: a.alpha,
                beta1: a.beta1,
                beta2: a.beta2,
                noise_sd: a.noise_sd,
                distractors: a.distractors,
                seed: a.seed,
            };
            cmd_synth(&cfg, a.out.as_deref()).map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
