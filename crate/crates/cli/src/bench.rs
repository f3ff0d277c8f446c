//! Runs every (task, heuristic) pair of a corpus and tabulates the results.

use std::fs;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use prefixselect_core::engine::{cegar, Limits, RunStats};
use prefixselect_core::{parse_cfa, SelectionHeuristic};
use serde::Serialize;

use crate::report::Outcome;

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub heuristics: Vec<SelectionHeuristic>,
    pub limits: Limits,
    pub jobs: usize,
    /// Wall-clock limit per (task, heuristic) run.
    pub timeout: Option<Duration>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            heuristics: SelectionHeuristic::ALL.to_vec(),
            limits: Limits::default(),
            jobs: 1,
            timeout: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub task: String,
    pub heuristic: SelectionHeuristic,
    pub outcome: Outcome,
    pub stats: RunStats,
    pub duration: Duration,
}

impl BenchRow {
    pub fn verdict(&self) -> String {
        self.outcome.label()
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct HeuristicSummary {
    pub heuristic: String,
    pub tasks: usize,
    pub solved: usize,
    pub true_verdicts: usize,
    pub false_verdicts: usize,
    pub unknown: usize,
    pub refinements: usize,
    pub states: usize,
    pub duration_ms: u128,
}

/// `.imp` files of `dir`, sorted by file name.
pub fn load_tasks(dir: &Path) -> Result<Vec<(String, String)>> {
    let mut tasks = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("imp") {
            continue;
        }
        let name = path
            .file_name()
            .and_then(|n| n.to_str())
            .context("non-UTF-8 file name")?
            .to_string();
        let source =
            fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        tasks.push((name, source));
    }
    tasks.sort();
    Ok(tasks)
}

fn verify_source(source: &str, heuristic: SelectionHeuristic, limits: Limits) -> (Outcome, RunStats) {
    let cfa = match parse_cfa(source) {
        Ok(cfa) => cfa,
        Err(e) => return (Outcome::Error(e.to_string()), RunStats::default()),
    };
    let run = panic::catch_unwind(AssertUnwindSafe(|| cegar(&cfa, heuristic, limits)));
    match run {
        Ok((verdict, stats)) => (Outcome::Engine(verdict), stats),
        Err(_) => (Outcome::Error("engine panicked".to_string()), RunStats::default()),
    }
}

/// One run, abandoned after `timeout`. An abandoned run keeps its thread
/// until it finishes on its own.
pub fn run_one(
    source: &str,
    heuristic: SelectionHeuristic,
    limits: Limits,
    timeout: Option<Duration>,
) -> (Outcome, RunStats) {
    let Some(timeout) = timeout else {
        return verify_source(source, heuristic, limits);
    };
    let (tx, rx) = mpsc::channel();
    let owned = source.to_string();
    thread::spawn(move || {
        let _ = tx.send(verify_source(&owned, heuristic, limits));
    });
    match rx.recv_timeout(timeout) {
        Ok(result) => result,
        Err(mpsc::RecvTimeoutError::Timeout) => (Outcome::Timeout, RunStats::default()),
        Err(mpsc::RecvTimeoutError::Disconnected) => {
            (Outcome::Error("worker died".to_string()), RunStats::default())
        }
    }
}

/// Rows in task order, then heuristic order, regardless of `jobs`.
pub fn run_tasks(tasks: &[(String, String)], options: &BenchOptions) -> Vec<BenchRow> {
    let pairs: Vec<(usize, SelectionHeuristic)> = (0..tasks.len())
        .flat_map(|t| options.heuristics.iter().map(move |&h| (t, h)))
        .collect();
    let slots: Mutex<Vec<Option<BenchRow>>> = Mutex::new(vec![None; pairs.len()]);
    let next = AtomicUsize::new(0);
    let workers = options.jobs.max(1).min(pairs.len().max(1));

    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(t, heuristic)) = pairs.get(k) else {
                    break;
                };
                let (name, source) = &tasks[t];
                let started = Instant::now();
                let (outcome, stats) = run_one(source, heuristic, options.limits, options.timeout);
                log::info!("{name} [{heuristic}] {}", outcome.label());
                let row = BenchRow {
                    task: name.clone(),
                    heuristic,
                    outcome,
                    stats,
                    duration: started.elapsed(),
                };
                slots.lock().expect("result slots")[k] = Some(row);
            });
        }
    });

    slots
        .into_inner()
        .expect("result slots")
        .into_iter()
        .map(|row| row.expect("every pair ran"))
        .collect()
}

pub fn run_bench(dir: &Path, options: &BenchOptions) -> Result<Vec<BenchRow>> {
    Ok(run_tasks(&load_tasks(dir)?, options))
}

pub fn summarize(rows: &[BenchRow], heuristics: &[SelectionHeuristic]) -> Vec<HeuristicSummary> {
    heuristics
        .iter()
        .map(|&h| {
            let mine: Vec<&BenchRow> = rows.iter().filter(|r| r.heuristic == h).collect();
            let count = |pred: &dyn Fn(&BenchRow) -> bool| mine.iter().filter(|r| pred(r)).count();
            HeuristicSummary {
                heuristic: h.name().to_string(),
                tasks: mine.len(),
                solved: count(&|r| r.outcome.is_solved()),
                true_verdicts: count(&|r| r.verdict() == "TRUE"),
                false_verdicts: count(&|r| r.verdict() == "FALSE"),
                unknown: count(&|r| !r.outcome.is_solved()),
                refinements: mine.iter().map(|r| r.stats.refinements).sum(),
                states: mine.iter().map(|r| r.stats.states_created).sum(),
                duration_ms: mine.iter().map(|r| r.duration.as_millis()).sum(),
            }
        })
        .collect()
}

pub const CSV_COLUMNS: [&str; 6] = [
    "task",
    "heuristic",
    "verdict",
    "refinements",
    "states",
    "interpolation_calls",
];

/// Without `timing` the output depends only on the corpus and options.
pub fn write_csv<W: Write>(rows: &[BenchRow], timing: bool, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
    if timing {
        header.push("duration_ms");
    }
    writer.write_record(&header)?;
    for row in rows {
        let mut record = vec![
            row.task.clone(),
            row.heuristic.name().to_string(),
            row.verdict(),
            row.stats.refinements.to_string(),
            row.stats.states_created.to_string(),
            row.stats.interpolation_calls.to_string(),
        ];
        if timing {
            record.push(row.duration.as_millis().to_string());
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn render_summary(summary: &[HeuristicSummary]) -> String {
    let mut out = format!(
        "{:<16} {:>6} {:>6} {:>6} {:>6} {:>8} {:>10}\n",
        "heuristic", "tasks", "solved", "true", "false", "unknown", "time_ms"
    );
    for s in summary {
        out.push_str(&format!(
            "{:<16} {:>6} {:>6} {:>6} {:>6} {:>8} {:>10}\n",
            s.heuristic, s.tasks, s.solved, s.true_verdicts, s.false_verdicts, s.unknown, s.duration_ms
        ));
    }
    out
}

#[derive(Serialize)]
struct JsonRow<'a> {
    task: &'a str,
    heuristic: &'a str,
    verdict: String,
    refinements: usize,
    states: usize,
    interpolation_calls: usize,
    duration_ms: u128,
}

#[derive(Serialize)]
struct JsonBench<'a> {
    rows: Vec<JsonRow<'a>>,
    summary: &'a [HeuristicSummary],
}

pub fn to_json(rows: &[BenchRow], summary: &[HeuristicSummary]) -> Result<String> {
    let rows = rows
        .iter()
        .map(|r| JsonRow {
            task: &r.task,
            heuristic: r.heuristic.name(),
            verdict: r.verdict(),
            refinements: r.stats.refinements,
            states: r.stats.states_created,
            interpolation_calls: r.stats.interpolation_calls,
            duration_ms: r.duration.as_millis(),
        })
        .collect();
    Ok(serde_json::to_string_pretty(&JsonBench { rows, summary })?)
}
