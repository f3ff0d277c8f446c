//! Verdict strings, JSON stats and the human-readable verify report.

use std::fmt::Write as _;

use prefixselect_core::engine::{RunStats, Verdict};
use prefixselect_core::SelectionHeuristic;
use serde::Serialize;

/// Exit codes of `verify`.
pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 3;

/// Verdict as reported by the harness, including outcomes the engine
/// itself never produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Engine(Verdict),
    Timeout,
    Error(String),
}

impl Outcome {
    pub fn label(&self) -> String {
        match self {
            Outcome::Engine(v) => v.to_string(),
            Outcome::Timeout => "UNKNOWN(timeout)".to_string(),
            Outcome::Error(_) => "UNKNOWN(error)".to_string(),
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, Outcome::Engine(Verdict::True | Verdict::False(_)))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Engine(Verdict::True) => EXIT_TRUE,
            Outcome::Engine(Verdict::False(_)) => EXIT_FALSE,
            _ => EXIT_UNKNOWN,
        }
    }

    pub fn result_line(&self) -> String {
        format!("RESULT: {}", self.label())
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct StatsReport {
    pub verdict: String,
    pub heuristic: String,
    pub refinements: usize,
    pub prefixes_total: usize,
    pub interpolation_calls: usize,
    pub states_created: usize,
    pub coverage_hits: usize,
    pub chosen_prefix_indices: Vec<Option<usize>>,
    pub chosen_prefix_scores: Vec<u64>,
    pub duration_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl StatsReport {
    pub fn new(outcome: &Outcome, heuristic: SelectionHeuristic, stats: &RunStats) -> Self {
        let witness = match outcome {
            Outcome::Engine(Verdict::False(path)) => {
                Some(path.steps().iter().map(|s| s.to_string()).collect())
            }
            _ => None,
        };
        Self {
            verdict: outcome.label(),
            heuristic: heuristic.name().to_string(),
            refinements: stats.refinements,
            prefixes_total: stats.prefixes_total,
            interpolation_calls: stats.interpolation_calls,
            states_created: stats.states_created,
            coverage_hits: stats.coverage_hits,
            chosen_prefix_indices: stats.chosen_prefix_indices.clone(),
            chosen_prefix_scores: stats.chosen_prefix_scores.clone(),
            duration_ms: stats.duration.as_millis(),
            witness,
        }
    }
}

pub fn render_human(outcome: &Outcome, heuristic: SelectionHeuristic, stats: &RunStats) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "heuristic:           {heuristic}");
    let _ = writeln!(out, "refinements:         {}", stats.refinements);
    let _ = writeln!(out, "sliced prefixes:     {}", stats.prefixes_total);
    let _ = writeln!(out, "interpolation calls: {}", stats.interpolation_calls);
    let _ = writeln!(out, "states created:      {}", stats.states_created);
    let _ = writeln!(out, "coverage hits:       {}", stats.coverage_hits);
    if !stats.chosen_prefix_indices.is_empty() {
        let chosen: Vec<String> = stats
            .chosen_prefix_indices
            .iter()
            .zip(&stats.chosen_prefix_scores)
            .map(|(idx, score)| match idx {
                Some(idx) => format!("#{idx}/{score}"),
                None => format!("-/{score}"),
            })
            .collect();
        let _ = writeln!(out, "chosen (idx/score):  {}", chosen.join(" "));
    }
    let _ = writeln!(out, "precision:           {}", stats.final_precision);
    let _ = writeln!(out, "time:                {} ms", stats.duration.as_millis());
    match outcome {
        Outcome::Engine(Verdict::False(path)) => {
            let _ = writeln!(out, "witness:");
            for step in path.steps() {
                let _ = writeln!(out, "  {step}");
            }
        }
        Outcome::Error(message) => {
            let _ = writeln!(out, "error:               {message}");
        }
        _ => {}
    }
    out.push_str(&outcome.result_line());
    out.push('\n');
    out
}
