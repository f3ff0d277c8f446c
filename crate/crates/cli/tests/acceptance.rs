//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::iter;
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use prefixselect::gen::{self, RandomBounds};
use prefixselect_core::engine::{cegar, cegar_observed, reach, Limits, RunStats, Verdict};
use prefixselect_core::frontend::{Operation, Pred};
use prefixselect_core::interpolation::{interpolant_sequence, interpolant_to_constraints, interpolate, Interpolant};
use prefixselect_core::path::{extract_sliced_prefixes, sp_path, vars_of, Path, SlicedPrefix};
use prefixselect_core::refinement::refutes_under;
use prefixselect_core::value_domain::{implies, sp, AbstractAssignment};
use prefixselect_core::{parse_cfa, SelectionHeuristic};

const FIG2_BOUNDS: [u64; 3] = [10, 1_000, 10_000];
const FIG2_TIME_LIMIT: Duration = Duration::from_secs(2);
const CORPUS_SEED: u64 = 1;
const CORPUS_SIZE: usize = 50;
const CORPUS_MAX_STATES: usize = 100_000;
const HARVEST_SEED: u64 = 11;
const HARVEST_MIN_PATHS: usize = 500;
const HARVEST_MAX_PROGRAMS: usize = 4_000;
const ORACLE_MAX_ASSUMES: usize = 12;
const PREFIX_SUITE_TIME_LIMIT: Duration = Duration::from_secs(60);

struct Gate {
    failed: usize,
}

impl Gate {
    fn record(&mut self, name: &str, pass: bool, detail: impl AsRef<str>) {
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} {name}: {}", detail.as_ref());
        if !pass {
            self.failed += 1;
        }
    }
}

fn workers() -> usize {
    thread::available_parallelism().map_or(4, |n| n.get()).min(16)
}

/// `f` over `items` on several threads; results keep the input order.
fn parallel_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let slots: Mutex<Vec<Option<R>>> = Mutex::new(iter::repeat_with(|| None).take(items.len()).collect());
    let next = AtomicUsize::new(0);
    thread::scope(|scope| {
        for _ in 0..workers() {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(k) else { break };
                let result = f(item);
                slots.lock().unwrap()[k] = Some(result);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(Option::unwrap).collect()
}

/// Outcome of one observed run.
struct ObservedRun {
    task: String,
    heuristic: SelectionHeuristic,
    verdict: Verdict,
    stats: RunStats,
    spurious: Vec<Path>,
    progress_violations: usize,
}

fn observed_run(task: &str, source: &str, heuristic: SelectionHeuristic, limits: Limits) -> ObservedRun {
    let cfa = parse_cfa(source).expect("generated programs parse");
    let mut spurious = Vec::new();
    let mut progress_violations = 0;
    let (verdict, stats) = cegar_observed(&cfa, heuristic, limits, |event| {
        if !refutes_under(event.error_path, &event.refinement.precision) {
            progress_violations += 1;
        }
        spurious.push(event.error_path.clone());
    });
    ObservedRun {
        task: task.to_string(),
        heuristic,
        verdict,
        stats,
        spurious,
        progress_violations,
    }
}

fn observe_all(tasks: &[(String, String)], limits: Limits) -> Vec<ObservedRun> {
    let pairs: Vec<(&str, &str, SelectionHeuristic)> = tasks
        .iter()
        .flat_map(|(n, s)| SelectionHeuristic::ALL.into_iter().map(move |h| (n.as_str(), s.as_str(), h)))
        .collect();
    parallel_map(&pairs, |&(name, source, h)| observed_run(name, source, h, limits))
}

fn solved(verdict: &Verdict) -> bool {
    verdict.is_conclusive()
}

fn loop_avoidance(gate: &mut Gate) {
    let mut dt_runs = Vec::new();
    let mut slow = Vec::new();
    let mut all_true = true;
    let mut single_head_state = true;
    for n in FIG2_BOUNDS {
        let source = gen::fig2_program(n).unwrap();
        let started = Instant::now();
        let cfa = parse_cfa(&source).unwrap();
        let (verdict, stats) = cegar(&cfa, SelectionHeuristic::DomainTypeScore, Limits::default());
        let elapsed = started.elapsed();
        if elapsed >= FIG2_TIME_LIMIT {
            slow.push(format!("N={n} took {elapsed:?}"));
        }
        all_true &= verdict == Verdict::True;
        let head = cfa
            .edges()
            .iter()
            .find(|e| e.op.to_string() == format!("[i < {n}]"))
            .expect("loop guard edge")
            .source;
        let (reached, _) = reach(&cfa, &stats.final_precision);
        single_head_state &= reached.states_at(head).count() == 1;
        dt_runs.push((n, stats.refinements, stats.states_created, elapsed));
    }
    let same_refinements = dt_runs.windows(2).all(|w| w[0].1 == w[1].1);
    let same_states = dt_runs.windows(2).all(|w| w[0].2 == w[1].2);
    let summary: Vec<String> = dt_runs
        .iter()
        .map(|(n, r, s, t)| format!("N={n}: {r} refinements, {s} states, {} ms", t.as_millis()))
        .collect();
    gate.record(
        "loop-avoidance/domain-type",
        all_true && same_refinements && same_states && single_head_state && slow.is_empty(),
        format!(
            "TRUE for all N: {all_true}; identical refinements: {same_refinements}; identical states: {same_states}; \
             one loop-head state: {single_head_state}; {}{}",
            summary.join("; "),
            if slow.is_empty() { String::new() } else { format!("; too slow: {}", slow.join(", ")) }
        ),
    );

    let mut counter_runs = Vec::new();
    let mut counter_tracked = true;
    for n in FIG2_BOUNDS {
        let cfa = parse_cfa(&gen::fig2_program(n).unwrap()).unwrap();
        let (verdict, stats) = cegar(&cfa, SelectionHeuristic::PrefixShortest, Limits::default());
        counter_tracked &= stats.final_precision.vars().iter().any(|v| v.name() == "i");
        counter_runs.push((n, verdict, stats.states_created));
    }
    let linear = counter_runs.iter().all(|(n, _, s)| *s as u64 >= *n)
        && counter_runs.windows(2).all(|w| w[1].2 > w[0].2);
    let summary: Vec<String> = counter_runs
        .iter()
        .map(|(n, v, s)| format!("N={n}: {v}, {s} states"))
        .collect();
    gate.record(
        "loop-avoidance/counter-tracking-grows",
        linear && counter_tracked,
        format!("prefix-shortest tracks i: {counter_tracked}; states >= N and increasing: {linear}; {}", summary.join("; ")),
    );
}

fn corpus_comparison(gate: &mut Gate, runs: &[ObservedRun]) {
    let count = |h: SelectionHeuristic| runs.iter().filter(|r| r.heuristic == h && solved(&r.verdict)).count();
    let classic = count(SelectionHeuristic::Classic);
    let dt = count(SelectionHeuristic::DomainTypeScore);
    let mut by_task: BTreeMap<&str, BTreeMap<SelectionHeuristic, &Verdict>> = BTreeMap::new();
    for r in runs {
        by_task.entry(&r.task).or_default().insert(r.heuristic, &r.verdict);
    }
    let regressions: Vec<&str> = by_task
        .iter()
        .filter(|(_, v)| {
            solved(v[&SelectionHeuristic::Classic]) && !solved(v[&SelectionHeuristic::DomainTypeScore])
        })
        .map(|(t, _)| *t)
        .collect();
    let others: Vec<String> = [SelectionHeuristic::PrefixShortest, SelectionHeuristic::PrefixLongest]
        .into_iter()
        .map(|h| format!("{h}={}", count(h)))
        .collect();
    gate.record(
        "corpus/solved-domain-type-vs-classic",
        dt >= classic && regressions.is_empty(),
        format!(
            "{} tasks, max_states {CORPUS_MAX_STATES}: solved domain-type={dt}, classic={classic} ({}); regressions: {regressions:?}",
            by_task.len(),
            others.join(", ")
        ),
    );
}

fn verdict_agreement(gate: &mut Gate, runs: &[ObservedRun]) {
    let mut by_task: BTreeMap<&str, BTreeSet<&'static str>> = BTreeMap::new();
    let mut compared = 0;
    for r in runs {
        let label = match r.verdict {
            Verdict::True => "TRUE",
            Verdict::False(_) => "FALSE",
            Verdict::Unknown(_) => continue,
        };
        compared += 1;
        by_task.entry(&r.task).or_default().insert(label);
    }
    let disagreements: Vec<&str> = by_task.iter().filter(|(_, v)| v.len() > 1).map(|(t, _)| *t).collect();
    gate.record(
        "heuristic-agreement",
        disagreements.is_empty(),
        format!("{} tasks, {compared} conclusive runs, disagreements: {disagreements:?}", by_task.len()),
    );
}

fn refinement_progress(gate: &mut Gate, runs: &[ObservedRun]) {
    let refinements: usize = runs.iter().map(|r| r.stats.refinements).sum();
    let violations: usize = runs.iter().map(|r| r.progress_violations).sum();
    let witnesses_bad = runs
        .iter()
        .filter(|r| matches!(&r.verdict, Verdict::False(p) if !prefixselect_core::path::is_feasible(p)))
        .count();
    gate.record(
        "refinement-progress",
        violations == 0 && witnesses_bad == 0 && refinements > 0,
        format!("{} runs, {refinements} refinements, {violations} violations, {witnesses_bad} infeasible witnesses", runs.len()),
    );
}

/// Unique spurious paths from refinement runs over random programs.
fn harvest() -> (Vec<Path>, Vec<ObservedRun>, usize) {
    let limits = Limits {
        max_refinements: 40,
        max_states: 20_000,
    };
    let mut seen = HashSet::new();
    let mut paths = Vec::new();
    let mut runs = Vec::new();
    let mut programs = 0;
    let batch = 64;
    while paths.len() < HARVEST_MIN_PATHS && programs < HARVEST_MAX_PROGRAMS {
        let tasks: Vec<(String, String)> = (programs..programs + batch)
            .map(|i| {
                let program = gen::random_program_ast(HARVEST_SEED, i, RandomBounds::default());
                (format!("harvest_{i}"), program.to_string())
            })
            .collect();
        programs += batch;
        for run in observe_all(&tasks, limits) {
            for path in &run.spurious {
                if seen.insert(path.to_string()) {
                    paths.push(path.clone());
                }
            }
            runs.push(run);
        }
    }
    (paths, runs, programs)
}

fn is_real_assume(op: &Operation) -> bool {
    matches!(op, Operation::Assume(p) if *p != Pred::Bool(true))
}

/// Every (truncation point, replaced set) whose sliced prefix is infeasible
/// only at its end, and whose replaced assumes each contradicted the slice
/// built before them. Checked by SP from top on each candidate.
fn brute_force_prefixes(sigma: &Path) -> Vec<(usize, BTreeSet<usize>)> {
    let ops = sigma.constraints();
    let top = AbstractAssignment::top();
    let assumes: Vec<usize> = (0..ops.len()).filter(|&p| is_real_assume(&ops[p])).collect();
    let mut found = Vec::new();
    for (k, &t) in assumes.iter().enumerate() {
        let earlier = &assumes[..k];
        for mask in 0u32..(1 << earlier.len()) {
            let replaced: BTreeSet<usize> = earlier
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask & (1 << bit) != 0)
                .map(|(_, &p)| p)
                .collect();
            let candidate: Vec<Operation> = (0..=t)
                .map(|p| if replaced.contains(&p) { Operation::Noop } else { ops[p].clone() })
                .collect();
            let before = sp_path(&candidate[..t], &top);
            if before.is_bottom() || !sp(&candidate[t], &before).is_bottom() {
                continue;
            }
            let cascade = replaced
                .iter()
                .all(|&j| sp_path(candidate[..j].iter().chain(iter::once(&ops[j])), &top).is_bottom());
            if cascade {
                found.push((t, replaced));
            }
        }
    }
    found
}

/// The same set as `brute_force_prefixes`, enumerated depth-first over the
/// keep/replace choice at each assume. A kept assume that yields Bottom ends
/// the branch, and a replacement must pass its cascade check when chosen;
/// both conditions depend only on earlier choices, so nothing is lost.
fn pruned_prefixes(sigma: &Path) -> Vec<(usize, BTreeSet<usize>)> {
    fn go(
        ops: &[Operation],
        assumes: &[usize],
        candidate: &mut Vec<Operation>,
        replaced: &mut BTreeSet<usize>,
        found: &mut Vec<(usize, BTreeSet<usize>)>,
    ) {
        let Some((&t, rest)) = assumes.split_first() else { return };
        let base = candidate.len();
        candidate.extend(ops[base..t].iter().cloned());
        let before = sp_path(candidate.iter(), &AbstractAssignment::top());
        if !before.is_bottom() {
            let contradicts = sp(&ops[t], &before).is_bottom();
            if contradicts {
                found.push((t, replaced.clone()));
                candidate.push(Operation::Noop);
                replaced.insert(t);
                go(ops, rest, candidate, replaced, found);
                replaced.remove(&t);
                candidate.pop();
            }
            candidate.push(ops[t].clone());
            go(ops, rest, candidate, replaced, found);
            candidate.pop();
        }
        candidate.truncate(base);
    }
    let ops = sigma.constraints();
    let assumes: Vec<usize> = (0..ops.len()).filter(|&p| is_real_assume(&ops[p])).collect();
    let mut found = Vec::new();
    go(&ops, &assumes, &mut Vec::new(), &mut BTreeSet::new(), &mut found);
    found.sort();
    found
}

fn prefix_violations(sigma: &Path, prefixes: &[SlicedPrefix]) -> Vec<String> {
    let top = AbstractAssignment::top();
    let mut out = Vec::new();
    if prefixes.is_empty() {
        out.push("no prefixes".to_string());
    }
    let mut finals = BTreeSet::new();
    for (i, prefix) in prefixes.iter().enumerate() {
        let ops = prefix.path.constraints();
        let w = ops.len();
        if w == 0 || w > sigma.len() {
            out.push(format!("prefix {i}: length {w}"));
            continue;
        }
        if !sp_path(&ops, &top).is_bottom() {
            out.push(format!("prefix {i}: feasible"));
        }
        if sp_path(&ops[..w - 1], &top).is_bottom() {
            out.push(format!("prefix {i}: infeasible before its last step"));
        }
        for (p, (step, orig)) in prefix.path.steps().iter().zip(sigma.steps()).enumerate() {
            let same = step == orig || (step.op.is_noop() && orig.op.is_assume() && step.loc == orig.loc);
            if !same {
                out.push(format!("prefix {i}: position {p} differs from the path"));
            }
            let marked = prefix.replaced.contains(&p);
            if marked != (step.op.is_noop() && !orig.op.is_noop()) {
                out.push(format!("prefix {i}: replacement mark at {p} is wrong"));
            }
        }
        if prefix.replaced != finals {
            out.push(format!("prefix {i}: replaced {:?}, expected {:?}", prefix.replaced, finals));
        }
        if let Some(next) = prefixes.get(i + 1) {
            let kept = &prefix.path.steps()[..w - 1];
            if next.path.len() < w || &next.path.steps()[..w - 1] != kept || !next.path.steps()[w - 1].op.is_noop() {
                out.push(format!("prefixes {i}/{}: not nested", i + 1));
            }
        }
        finals.insert(w - 1);
    }
    out
}

fn condition_violations(minus: &[Operation], plus: &[Operation], gamma: &Interpolant) -> Vec<String> {
    let top = AbstractAssignment::top();
    let mut out = Vec::new();
    if !implies(&sp_path(minus, &top), gamma.assignment()) {
        out.push("(1) minus does not imply the interpolant".to_string());
    }
    if !sp_path(plus, gamma.assignment()).is_bottom() {
        out.push("(2) interpolant does not refute plus".to_string());
    }
    let shared: BTreeSet<_> = vars_of(minus).intersection(&vars_of(plus)).cloned().collect();
    if !gamma.vars().is_subset(&shared) {
        out.push("(3) interpolant mentions a non-shared variable".to_string());
    }
    out
}

fn minimality_violations(plus: &[Operation], gamma: &Interpolant) -> Vec<String> {
    gamma
        .vars()
        .iter()
        .filter(|v| sp_path(plus, &gamma.assignment().without(v)).is_bottom())
        .map(|v| format!("dropping {v} still refutes"))
        .collect()
}

struct SuiteCounts {
    checks: usize,
    violations: Vec<String>,
}

impl SuiteCounts {
    fn new() -> Self {
        Self { checks: 0, violations: Vec::new() }
    }

    fn add(&mut self, context: &str, found: Vec<String>) {
        self.checks += 1;
        for v in found {
            if self.violations.len() < 5 {
                self.violations.push(format!("{context}: {v}"));
            } else {
                self.violations.push(String::new());
            }
        }
    }

    fn detail(&self) -> String {
        let shown: Vec<&String> = self.violations.iter().filter(|v| !v.is_empty()).collect();
        format!("{} checks, {} violations {shown:?}", self.checks, self.violations.len())
    }
}

fn prefix_suite(gate: &mut Gate, paths: &[Path]) {
    let started = Instant::now();
    let results = parallel_map(paths, |sigma| {
        let mut found = Vec::new();
        let mut oracle_checked = false;
        let mut multi = false;
        match extract_sliced_prefixes(sigma) {
            Err(e) => found.push(format!("extraction failed: {e}")),
            Ok(prefixes) => {
                multi = prefixes.len() >= 2;
                found.extend(prefix_violations(sigma, &prefixes));
                let assumes = sigma.ops().filter(|op| is_real_assume(op)).count();
                let got: Vec<(usize, BTreeSet<usize>)> =
                    prefixes.iter().map(|p| (p.len() - 1, p.replaced.clone())).collect();
                let oracle = pruned_prefixes(sigma);
                if got != oracle {
                    found.push("differs from the exhaustive oracle".to_string());
                }
                if assumes <= ORACLE_MAX_ASSUMES {
                    oracle_checked = true;
                    let mut naive = brute_force_prefixes(sigma);
                    naive.sort();
                    if naive != oracle {
                        found.push("pruned oracle differs from the mask enumeration".to_string());
                    }
                }
            }
        }
        (found, oracle_checked, multi)
    });
    let elapsed = started.elapsed();
    let mut counts = SuiteCounts::new();
    for (i, (found, _, _)) in results.iter().enumerate() {
        counts.add(&format!("path {i}"), found.clone());
    }
    let oracle = results.iter().filter(|r| r.1).count();
    let multi = results.iter().filter(|r| r.2).count();
    gate.record(
        "sliced-prefix-properties",
        paths.len() >= HARVEST_MIN_PATHS && counts.violations.is_empty() && elapsed < PREFIX_SUITE_TIME_LIMIT,
        format!(
            "{} paths ({multi} with >= 2 prefixes), all matched against the exhaustive oracle, {oracle} also by mask enumeration, {}, {} ms",
            paths.len(),
            counts.detail(),
            elapsed.as_millis()
        ),
    );
}

fn proposition_suite(gate: &mut Gate, paths: &[Path]) {
    let results = parallel_map(paths, |sigma| {
        let ops = sigma.constraints();
        let mut local = SuiteCounts::new();
        let Ok(prefixes) = extract_sliced_prefixes(sigma) else {
            local.add("extraction", vec!["failed".to_string()]);
            return local;
        };
        for prefix in &prefixes {
            let sequence = match interpolant_sequence(&prefix.path) {
                Ok(s) => s,
                Err(e) => {
                    local.add("sequence", vec![e.to_string()]);
                    continue;
                }
            };
            for entry in sequence.entries() {
                let j = entry.position + 1;
                let context = format!("prefix {} cut {j}", prefix.index);
                local.add(&context, condition_violations(&ops[..j], &ops[j..], &entry.interpolant));
            }
        }
        local
    });
    let mut counts = SuiteCounts::new();
    for r in results {
        counts.checks += r.checks;
        counts.violations.extend(r.violations);
    }
    gate.record("prefix-interpolants-valid-for-path", counts.violations.is_empty() && counts.checks > 0, counts.detail());
}

fn interpolant_contract(gate: &mut Gate, paths: &[Path]) {
    let results = parallel_map(paths, |sigma| {
        let mut local = SuiteCounts::new();
        let Ok(prefixes) = extract_sliced_prefixes(sigma) else {
            local.add("extraction", vec!["failed".to_string()]);
            return local;
        };
        for prefix in &prefixes {
            let ops = prefix.path.constraints();
            for j in 1..ops.len() {
                let context = format!("prefix {} cut {j}", prefix.index);
                match interpolate(&ops[..j], &ops[j..]) {
                    Ok(gamma) => {
                        let mut found = condition_violations(&ops[..j], &ops[j..], &gamma);
                        found.extend(minimality_violations(&ops[j..], &gamma));
                        local.add(&context, found);
                    }
                    Err(e) => local.add(&context, vec![e.to_string()]),
                }
            }
            // the inductive steps are interpolation problems of their own
            let Ok(sequence) = interpolant_sequence(&prefix.path) else { continue };
            let mut previous = Interpolant::top();
            for entry in sequence.entries() {
                let pos = entry.position;
                let mut minus = interpolant_to_constraints(&previous).expect("prefix interpolants are not Bottom");
                minus.push(ops[pos].clone());
                let plus = &ops[pos + 1..];
                let context = format!("prefix {} step {pos}", prefix.index);
                let mut found = condition_violations(&minus, plus, &entry.interpolant);
                found.extend(minimality_violations(plus, &entry.interpolant));
                match interpolate(&minus, plus) {
                    Ok(direct) if direct == entry.interpolant => {}
                    _ => found.push("inductive step differs from interpolate".to_string()),
                }
                local.add(&context, found);
                previous = entry.interpolant.clone();
            }
        }
        local
    });
    let mut counts = SuiteCounts::new();
    for r in results {
        counts.checks += r.checks;
        counts.violations.extend(r.violations);
    }
    gate.record("interpolant-contract", counts.violations.is_empty() && counts.checks > 0, counts.detail());
}

fn bench_determinism(gate: &mut Gate) {
    let bin = env!("CARGO_BIN_EXE_prefixselect");
    let root = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    let mut problems = Vec::new();
    for run in 0..2 {
        let dir = root.path().join(format!("corpus{run}"));
        let gen = Command::new(bin)
            .args(["gen", "corpus", "--seed", &CORPUS_SEED.to_string(), "--size", &CORPUS_SIZE.to_string(), "--out"])
            .arg(&dir)
            .output()
            .unwrap();
        if !gen.status.success() {
            problems.push(format!("gen failed: {}", String::from_utf8_lossy(&gen.stderr)));
        }
        let bench = Command::new(bin)
            .arg("bench")
            .arg(&dir)
            .args(["--jobs", "1", "--max-states", &CORPUS_MAX_STATES.to_string()])
            .output()
            .unwrap();
        if !bench.status.success() {
            problems.push(format!("bench failed: {}", String::from_utf8_lossy(&bench.stderr)));
        }
        outputs.push(bench.stdout);
    }
    let files = |run: usize| {
        let mut entries: Vec<(String, Vec<u8>)> = fs::read_dir(root.path().join(format!("corpus{run}")))
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
            })
            .collect();
        entries.sort();
        entries
    };
    let same_corpus = files(0) == files(1);
    let rows = outputs[0].iter().filter(|&&b| b == b'\n').count().saturating_sub(1);
    gate.record(
        "bench-csv-determinism",
        problems.is_empty() && same_corpus && outputs[0] == outputs[1] && rows == CORPUS_SIZE * 4,
        format!(
            "corpus files identical: {same_corpus}; CSV identical: {}; {rows} rows; {problems:?}",
            outputs[0] == outputs[1]
        ),
    );
}

fn main() {
    let mut gate = Gate { failed: 0 };

    loop_avoidance(&mut gate);

    let corpus = gen::comparison_corpus(CORPUS_SEED, CORPUS_SIZE);
    let corpus_limits = Limits {
        max_states: CORPUS_MAX_STATES,
        ..Limits::default()
    };
    let corpus_runs = observe_all(&corpus, corpus_limits);
    corpus_comparison(&mut gate, &corpus_runs);

    let (paths, harvest_runs, programs) = harvest();
    println!("harvested {} spurious paths from {programs} random programs", paths.len());

    prefix_suite(&mut gate, &paths);
    proposition_suite(&mut gate, &paths);
    interpolant_contract(&mut gate, &paths);

    let mut all_runs = corpus_runs;
    all_runs.extend(harvest_runs);
    refinement_progress(&mut gate, &all_runs);
    verdict_agreement(&mut gate, &all_runs);

    bench_determinism(&mut gate);

    if gate.failed > 0 {
        println!("{} criteria failed", gate.failed);
        std::process::exit(1);
    }
    println!("all criteria passed");
}
