use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use prefixselect::bench::{self, BenchOptions};
use prefixselect::report::EXIT_INPUT_ERROR;
use prefixselect::{gen, render_verify, verify_file, OutputFormat, VerifyConfig};
use prefixselect_core::engine::Limits;
use prefixselect_core::SelectionHeuristic;

#[derive(Parser)]
#[command(name = "prefixselect", version, about = "Value-analysis CEGAR with sliced-prefix selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyFormat {
    Human,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Verify one program.
    Verify {
        file: PathBuf,
        #[arg(long, default_value = "domain-type")]
        heuristic: SelectionHeuristic,
        #[arg(long, default_value_t = Limits::default().max_refinements)]
        max_refinements: usize,
        #[arg(long, default_value_t = Limits::default().max_states)]
        max_states: usize,
        /// Seconds.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long, value_enum, default_value = "human")]
        format: VerifyFormat,
        /// Write the automaton as GraphViz DOT.
        #[arg(long, value_name = "OUT.dot")]
        emit_cfa: Option<PathBuf>,
        /// Print run statistics (human format).
        #[arg(long)]
        stats: bool,
    },
    /// Run every `.imp` file of a directory under each heuristic.
    Bench {
        dir: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "classic,prefix-shortest,prefix-longest,domain-type")]
        heuristics: Vec<SelectionHeuristic>,
        #[arg(long, value_enum, default_value = "csv")]
        format: BenchFormat,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = Limits::default().max_refinements)]
        max_refinements: usize,
        #[arg(long, default_value_t = Limits::default().max_states)]
        max_states: usize,
        /// Seconds per task and heuristic.
        #[arg(long)]
        timeout: Option<f64>,
        /// Add a duration_ms column to the CSV.
        #[arg(long)]
        timing: bool,
    },
    /// Write generated programs.
    Gen {
        #[command(subcommand)]
        family: GenCommand,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Flag-and-counter program with loop bound N.
    Fig2 {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Seeded random programs.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// The mixed comparison corpus.
    Corpus {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        size: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn seconds(timeout: Option<f64>) -> Result<Option<Duration>> {
    timeout
        .map(|s| Duration::try_from_secs_f64(s).map_err(|e| anyhow::anyhow!("bad timeout {s}: {e}")))
        .transpose()
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify {
            file,
            heuristic,
            max_refinements,
            max_states,
            timeout,
            format,
            emit_cfa,
            stats,
        } => {
            let config = VerifyConfig {
                input: file,
                heuristic,
                limits: Limits {
                    max_refinements,
                    max_states,
                },
                timeout: seconds(timeout)?,
                format: match format {
                    VerifyFormat::Human => OutputFormat::Human,
                    VerifyFormat::Json => OutputFormat::Json,
                },
                emit_cfa,
                stats,
            };
            let (outcome, run_stats) = verify_file(&config)?;
            if let prefixselect::report::Outcome::Error(message) = &outcome {
                eprintln!("error: {message}");
            }
            io::stdout().write_all(render_verify(&config, &outcome, &run_stats)?.as_bytes())?;
            Ok(ExitCode::from(outcome.exit_code() as u8))
        }
        Command::Bench {
            dir,
            heuristics,
            format,
            jobs,
            max_refinements,
            max_states,
            timeout,
            timing,
        } => {
            let options = BenchOptions {
                heuristics,
                limits: Limits {
                    max_refinements,
                    max_states,
                },
                jobs,
                timeout: seconds(timeout)?,
            };
            let rows = bench::run_bench(&dir, &options)?;
            let summary = bench::summarize(&rows, &options.heuristics);
            match format {
                BenchFormat::Csv => {
                    bench::write_csv(&rows, timing, io::stdout().lock())?;
                    if !rows.is_empty() {
                        eprint!("{}", bench::render_summary(&summary));
                    }
                }
                BenchFormat::Json => println!("{}", bench::to_json(&rows, &summary)?),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { family } => {
            let written = match family {
                GenCommand::Fig2 { n, out } => vec![gen::write_fig2(n, &out)?],
                GenCommand::Random { seed, count, out } => gen::write_random(seed, count, &out)?,
                GenCommand::Corpus { seed, size, out } => {
                    gen::write_corpus(&gen::comparison_corpus(seed, size), &out)?
                }
            };
            for path in written {
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("PREFIXSELECT_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}
