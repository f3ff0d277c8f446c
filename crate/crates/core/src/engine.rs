//! Abstract reachability under a precision and the CEGAR loop around it.
//!
//! Every refinement restarts exploration from scratch with the enlarged
//! precision.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::time::{Duration, Instant};

use crate::frontend::{ControlFlowAutomaton, Loc, Operation};
use crate::path::{is_feasible, Path, Step};
use crate::refinement::{
    classify_domain_types, refine, refutes_under, Precision, Refinement, SelectionHeuristic,
};
use crate::value_domain::{restrict, sp, AbstractAssignment};
use crate::ContractError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_refinements: usize,
    /// Bound on the size of one reached set.
    pub max_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_refinements: 200,
            max_states: 1_000_000,
        }
    }
}

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractState {
    pub loc: Loc,
    pub assignment: AbstractAssignment,
    /// Predecessor and the operation leading here; `None` for the root.
    pub parent: Option<(StateId, Operation)>,
}

/// States reached so far, indexed by location, plus the FIFO frontier.
#[derive(Debug, Clone, Default)]
pub struct ReachedSet {
    states: Vec<AbstractState>,
    at_loc: BTreeMap<Loc, LocStates>,
    waitlist: VecDeque<StateId>,
    error_state: Option<StateId>,
    coverage_hits: usize,
}

#[derive(Debug, Clone, Default)]
struct LocStates {
    ids: Vec<StateId>,
    exact: HashSet<AbstractAssignment>,
}

/// Above this many defined variables, coverage scans instead of
/// enumerating sub-assignments.
const SUBSET_ENUMERATION_LIMIT: usize = 16;

impl ReachedSet {
    pub fn states(&self) -> &[AbstractState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states_at(&self, loc: Loc) -> impl Iterator<Item = &AbstractState> {
        self.at_loc
            .get(&loc)
            .into_iter()
            .flat_map(|entry| entry.ids.iter().map(|&id| &self.states[id]))
    }

    pub fn waitlist(&self) -> impl Iterator<Item = StateId> + '_ {
        self.waitlist.iter().copied()
    }

    pub fn error_state(&self) -> Option<StateId> {
        self.error_state
    }

    pub fn coverage_hits(&self) -> usize {
        self.coverage_hits
    }

    /// Whether some state at `loc` is implied by `candidate`, i.e. defines a
    /// subset of its bindings.
    fn is_covered(&self, loc: Loc, candidate: &AbstractAssignment) -> bool {
        let Some(entry) = self.at_loc.get(&loc) else {
            return false;
        };
        let Some(map) = candidate.values() else {
            return true;
        };
        let width = map.len();
        if width <= SUBSET_ENUMERATION_LIMIT && (1usize << width) <= entry.ids.len() {
            let pairs: Vec<_> = map.iter().collect();
            (0..1usize << width).any(|mask| {
                let subset = AbstractAssignment::Values(
                    pairs
                        .iter()
                        .enumerate()
                        .filter(|(bit, _)| mask & (1 << bit) != 0)
                        .map(|(_, (var, value))| ((*var).clone(), (*value).clone()))
                        .collect(),
                );
                entry.exact.contains(&subset)
            })
        } else {
            entry.ids.iter().any(|&id| {
                crate::value_domain::implies(candidate, &self.states[id].assignment)
            })
        }
    }

    fn add(&mut self, state: AbstractState) -> StateId {
        let id = self.states.len();
        let entry = self.at_loc.entry(state.loc).or_default();
        entry.ids.push(id);
        entry.exact.insert(state.assignment.clone());
        self.states.push(state);
        self.waitlist.push_back(id);
        id
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReachStatus {
    /// Frontier exhausted without reaching the error location.
    Safe,
    ErrorReached,
    StateLimit,
}

/// Explores the abstract state space under `precision` with no state bound.
pub fn reach(cfa: &ControlFlowAutomaton, precision: &Precision) -> (ReachedSet, bool) {
    let (reached, status) = reach_bounded(cfa, precision, usize::MAX);
    (reached, status == ReachStatus::ErrorReached)
}

/// Breadth-first exploration from `(initial, ⊤)`. Successors are computed
/// with SP and restricted to the precision at the target location; Bottom
/// and covered successors are dropped. Stops at the first state added at
/// the error location.
pub fn reach_bounded(
    cfa: &ControlFlowAutomaton,
    precision: &Precision,
    max_states: usize,
) -> (ReachedSet, ReachStatus) {
    let mut reached = ReachedSet::default();
    let root = reached.add(AbstractState {
        loc: cfa.initial(),
        assignment: AbstractAssignment::top(),
        parent: None,
    });
    if Some(cfa.initial()) == cfa.error() {
        reached.error_state = Some(root);
        return (reached, ReachStatus::ErrorReached);
    }

    while let Some(id) = reached.waitlist.pop_front() {
        let loc = reached.states[id].loc;
        for edge in cfa.outgoing(loc) {
            let post = sp(&edge.op, &reached.states[id].assignment);
            if post.is_bottom() {
                continue;
            }
            let post = restrict(&post, precision.at(edge.target));
            if reached.is_covered(edge.target, &post) {
                reached.coverage_hits += 1;
                continue;
            }
            if reached.len() >= max_states {
                return (reached, ReachStatus::StateLimit);
            }
            let new_id = reached.add(AbstractState {
                loc: edge.target,
                assignment: post,
                parent: Some((id, edge.op.clone())),
            });
            if Some(edge.target) == cfa.error() {
                reached.error_state = Some(new_id);
                return (reached, ReachStatus::ErrorReached);
            }
        }
    }
    (reached, ReachStatus::Safe)
}

/// Walks predecessor links from the error state back to the root.
pub fn extract_error_path(reached: &ReachedSet) -> Result<Path, ContractError> {
    let mut id = reached.error_state.ok_or(ContractError::NoErrorState)?;
    let mut steps = Vec::new();
    while let Some((parent, op)) = &reached.states[id].parent {
        steps.push(Step::new(op.clone(), reached.states[id].loc));
        id = *parent;
    }
    steps.reverse();
    Ok(Path::new(steps))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownReason {
    RefinementLimit,
    StateLimit,
}

impl UnknownReason {
    pub fn name(self) -> &'static str {
        match self {
            UnknownReason::RefinementLimit => "refinement-limit",
            UnknownReason::StateLimit => "state-limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    True,
    /// Carries a feasible error path.
    False(Path),
    Unknown(UnknownReason),
}

impl Verdict {
    pub fn is_conclusive(&self) -> bool {
        !matches!(self, Verdict::Unknown(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::True => f.write_str("TRUE"),
            Verdict::False(_) => f.write_str("FALSE"),
            Verdict::Unknown(reason) => write!(f, "UNKNOWN({})", reason.name()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunStats {
    pub refinements: usize,
    pub prefixes_total: usize,
    pub interpolation_calls: usize,
    /// Summed over all restarts.
    pub states_created: usize,
    pub coverage_hits: usize,
    pub chosen_prefix_indices: Vec<Option<usize>>,
    pub chosen_prefix_scores: Vec<u64>,
    pub duration: Duration,
    pub final_precision: Precision,
}

/// Passed to the observer of [`cegar_observed`] after every refinement.
#[derive(Debug)]
pub struct RefinementEvent<'a> {
    /// 1-based refinement number.
    pub iteration: usize,
    pub error_path: &'a Path,
    pub refinement: &'a Refinement,
    /// Precision under which `error_path` was found.
    pub previous: &'a Precision,
}

pub fn cegar(
    cfa: &ControlFlowAutomaton,
    heuristic: SelectionHeuristic,
    limits: Limits,
) -> (Verdict, RunStats) {
    cegar_observed(cfa, heuristic, limits, |_| {})
}

/// The CEGAR loop: explore, extract the error path, and either report it
/// (feasible) or refine and restart (infeasible).
pub fn cegar_observed(
    cfa: &ControlFlowAutomaton,
    heuristic: SelectionHeuristic,
    limits: Limits,
    mut observer: impl FnMut(&RefinementEvent<'_>),
) -> (Verdict, RunStats) {
    let started = Instant::now();
    let table = classify_domain_types(cfa);
    let mut precision = Precision::new();
    let mut stats = RunStats::default();

    let verdict = loop {
        let (reached, status) = reach_bounded(cfa, &precision, limits.max_states);
        stats.states_created += reached.len();
        stats.coverage_hits += reached.coverage_hits();
        match status {
            ReachStatus::Safe => break Verdict::True,
            ReachStatus::StateLimit => break Verdict::Unknown(UnknownReason::StateLimit),
            ReachStatus::ErrorReached => {}
        }
        let error_path = extract_error_path(&reached).expect("error state was recorded");
        if is_feasible(&error_path) {
            break Verdict::False(error_path);
        }
        if stats.refinements >= limits.max_refinements {
            break Verdict::Unknown(UnknownReason::RefinementLimit);
        }

        let refinement =
            refine(&error_path, heuristic, &table).expect("error path is infeasible");
        assert!(
            refutes_under(&error_path, &refinement.precision),
            "refinement does not exclude the error path"
        );
        stats.refinements += 1;
        stats.prefixes_total += refinement.prefixes;
        stats.interpolation_calls += refinement.interpolation_calls;
        stats.chosen_prefix_indices.push(refinement.chosen_index);
        stats.chosen_prefix_scores.push(refinement.chosen_score);
        observer(&RefinementEvent {
            iteration: stats.refinements,
            error_path: &error_path,
            refinement: &refinement,
            previous: &precision,
        });
        log::debug!(
            "refinement {}: error path of length {}, precision += {}",
            stats.refinements,
            error_path.len(),
            refinement.precision
        );
        let grew = precision.union_with(&refinement.precision);
        assert!(grew, "refinement did not enlarge the precision");
    };

    stats.duration = started.elapsed();
    stats.final_precision = precision;
    (verdict, stats)
}
