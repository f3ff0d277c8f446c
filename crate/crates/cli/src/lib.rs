//! Command-line driver: `verify`, `bench` and the corpus generators.

pub mod bench;
pub mod gen;
pub mod report;

use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{Context, Result};
use prefixselect_core::engine::{Limits, RunStats};
use prefixselect_core::frontend::cfa_to_dot;
use prefixselect_core::{parse_cfa, SelectionHeuristic};

use crate::report::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Human,
    Json,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub input: PathBuf,
    pub heuristic: SelectionHeuristic,
    pub limits: Limits,
    pub timeout: Option<Duration>,
    pub format: OutputFormat,
    pub emit_cfa: Option<PathBuf>,
    /// Print the statistics block in human format.
    pub stats: bool,
}

/// Reads, parses and verifies one file. Errors are input errors; engine
/// outcomes, including timeouts, come back as `Outcome`.
pub fn verify_file(config: &VerifyConfig) -> Result<(Outcome, RunStats)> {
    let source = fs::read_to_string(&config.input)
        .with_context(|| format!("reading {}", config.input.display()))?;
    let cfa = parse_cfa(&source)
        .map_err(|e| anyhow::anyhow!("{}:{e}", config.input.display()))?;
    if let Some(dot) = &config.emit_cfa {
        fs::write(dot, cfa_to_dot(&cfa)).with_context(|| format!("writing {}", dot.display()))?;
    }
    Ok(bench::run_one(&source, config.heuristic, config.limits, config.timeout))
}

/// Renders the verify output for `config.format`.
pub fn render_verify(config: &VerifyConfig, outcome: &Outcome, stats: &RunStats) -> Result<String> {
    Ok(match config.format {
        OutputFormat::Json => {
            let report = report::StatsReport::new(outcome, config.heuristic, stats);
            serde_json::to_string_pretty(&report)? + "\n"
        }
        OutputFormat::Human if config.stats => report::render_human(outcome, config.heuristic, stats),
        OutputFormat::Human => {
            let mut out = String::new();
            if let Outcome::Engine(prefixselect_core::Verdict::False(path)) = outcome {
                out.push_str("witness:\n");
                for step in path.steps() {
                    out.push_str(&format!("  {step}\n"));
                }
            }
            out.push_str(&outcome.result_line());
            out.push('\n');
            out
        }
    })
}
