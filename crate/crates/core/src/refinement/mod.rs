//! Refinement: classic inductive interpolation along the whole error path,
//! and selection among the interpolant sequences of its sliced prefixes.

mod domain_types;
mod precision;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub use domain_types::{classify_domain_types, DomainType, DomainTypeTable};
pub use precision::Precision;

use crate::frontend::Var;
use crate::interpolation::{interpolant_sequence, Interpolant, InterpolantSequence};
use crate::path::{extract_sliced_prefixes, is_feasible, Path, SlicedPrefix};
use crate::value_domain::{restrict, sp, AbstractAssignment};
use crate::ContractError;

/// How `refine` picks the precision for an infeasible error path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SelectionHeuristic {
    /// Interpolate the error path itself; no prefix extraction.
    Classic,
    /// The first extracted prefix.
    PrefixShortest,
    /// The last extracted prefix.
    PrefixLongest,
    /// The prefix whose interpolants reference the cheapest variables.
    DomainTypeScore,
}

impl SelectionHeuristic {
    pub const ALL: [SelectionHeuristic; 4] = [
        SelectionHeuristic::Classic,
        SelectionHeuristic::PrefixShortest,
        SelectionHeuristic::PrefixLongest,
        SelectionHeuristic::DomainTypeScore,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SelectionHeuristic::Classic => "classic",
            SelectionHeuristic::PrefixShortest => "prefix-shortest",
            SelectionHeuristic::PrefixLongest => "prefix-longest",
            SelectionHeuristic::DomainTypeScore => "domain-type",
        }
    }
}

impl fmt::Display for SelectionHeuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown heuristic `{0}` (expected classic, prefix-shortest, prefix-longest or domain-type)")]
pub struct UnknownHeuristic(pub String);

impl FromStr for SelectionHeuristic {
    type Err = UnknownHeuristic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|h| h.name() == s)
            .ok_or_else(|| UnknownHeuristic(s.to_string()))
    }
}

/// Variables referenced by an interpolant; none for Bottom.
pub fn extract_precision(interpolant: &Interpolant) -> BTreeSet<Var> {
    interpolant.vars()
}

/// Lower is better.
pub fn score_interpolant_sequence(sequence: &InterpolantSequence, table: &DomainTypeTable) -> u64 {
    table.score(&sequence.vars())
}

/// Picks one prefix. `sequences[k]` belongs to `prefixes[k]`. Domain-type
/// ties go to the longer prefix.
pub fn choose_sliced_prefix(
    prefixes: &[SlicedPrefix],
    sequences: &[InterpolantSequence],
    heuristic: SelectionHeuristic,
    table: &DomainTypeTable,
) -> Result<usize, ContractError> {
    if prefixes.is_empty() {
        return Err(ContractError::NoPrefixes);
    }
    if prefixes.len() != sequences.len() {
        return Err(ContractError::MissingInterpolants);
    }
    match heuristic {
        SelectionHeuristic::Classic => Err(ContractError::NoSelection),
        SelectionHeuristic::PrefixShortest => Ok(0),
        SelectionHeuristic::PrefixLongest => Ok(prefixes.len() - 1),
        SelectionHeuristic::DomainTypeScore => {
            let mut best = 0;
            let mut best_score = u64::MAX;
            for (idx, sequence) in sequences.iter().enumerate() {
                let score = score_interpolant_sequence(sequence, table);
                if score <= best_score {
                    best = idx;
                    best_score = score;
                }
            }
            Ok(best)
        }
    }
}

/// The outcome of one refinement, with the bookkeeping the engine reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub precision: Precision,
    /// Sliced prefixes extracted; zero for `Classic`.
    pub prefixes: usize,
    pub interpolation_calls: usize,
    /// Index of the selected prefix; `None` for `Classic`.
    pub chosen_index: Option<usize>,
    /// Domain-type score of the interpolant sequence the precision came from.
    pub chosen_score: u64,
}

fn precision_from(sequence: &InterpolantSequence) -> Precision {
    let mut precision = Precision::new();
    for entry in sequence.entries() {
        // a location repeated along the path keeps the union of its sets
        precision.add_all(entry.loc, extract_precision(&entry.interpolant));
    }
    precision
}

/// Inductive interpolation along the whole path.
pub fn refine_classic(path: &Path) -> Result<Precision, ContractError> {
    let sequence = interpolant_sequence(path)?;
    Ok(precision_from(&sequence))
}

/// Refinement with the given heuristic; `Classic` equals `refine_classic`.
pub fn refine_selecting(
    path: &Path,
    heuristic: SelectionHeuristic,
    table: &DomainTypeTable,
) -> Result<Precision, ContractError> {
    refine(path, heuristic, table).map(|r| r.precision)
}

/// Like `refine_selecting`, also returning selection statistics.
///
/// For the selecting heuristics, every prefix is interpolated before the
/// choice is made, whether or not the heuristic looks at the interpolants.
pub fn refine(
    path: &Path,
    heuristic: SelectionHeuristic,
    table: &DomainTypeTable,
) -> Result<Refinement, ContractError> {
    if is_feasible(path) {
        return Err(ContractError::FeasiblePath);
    }
    if heuristic == SelectionHeuristic::Classic {
        let sequence = interpolant_sequence(path)?;
        return Ok(Refinement {
            precision: precision_from(&sequence),
            prefixes: 0,
            interpolation_calls: sequence.interpolation_calls(),
            chosen_index: None,
            chosen_score: score_interpolant_sequence(&sequence, table),
        });
    }

    let prefixes = extract_sliced_prefixes(path)?;
    let sequences = prefixes
        .iter()
        .map(|prefix| interpolant_sequence(&prefix.path))
        .collect::<Result<Vec<_>, _>>()?;
    let chosen = choose_sliced_prefix(&prefixes, &sequences, heuristic, table)?;
    log::debug!(
        "{} sliced prefixes, chose #{} (length {}) with {heuristic}",
        prefixes.len(),
        chosen,
        prefixes[chosen].len()
    );
    Ok(Refinement {
        precision: precision_from(&sequences[chosen]),
        prefixes: prefixes.len(),
        interpolation_calls: sequences.iter().map(|s| s.interpolation_calls()).sum(),
        chosen_index: Some(chosen),
        chosen_score: score_interpolant_sequence(&sequences[chosen], table),
    })
}

/// Replays `path` from ⊤ the way reachability would under `precision`:
/// SP, then restriction to the precision at the step's location. True when
/// the replay hits Bottom.
pub fn refutes_under(path: &Path, precision: &Precision) -> bool {
    let mut state = AbstractAssignment::top();
    for step in path.steps() {
        state = sp(&step.op, &state);
        if state.is_bottom() {
            return true;
        }
        state = restrict(&state, precision.at(step.loc));
    }
    false
}
