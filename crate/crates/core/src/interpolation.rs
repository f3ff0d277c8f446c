//! Interpolation for contradicting constraint sequences over the value
//! domain.
//!
//! For a split `minus ⌢ plus` whose SP from top is Bottom, the interpolant
//! starts from `SP(minus)`, drops every variable that does not occur in
//! `plus`, and then tries to drop the remaining variables one at a time in
//! lexicographic order of their names, keeping a variable only when `plus`
//! is no longer refuted without it. The order is fixed; callers cannot
//! steer which of several sufficient variables survives.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::frontend::{CmpOp, Expr, Loc, Operation, Pred, Var};
use crate::path::{sp_path, vars_of, Path};
use crate::value_domain::{sp, AbstractAssignment};
use crate::ContractError;

/// A conjunction of forced equalities; top is the trivial interpolant and
/// Bottom the false one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interpolant(AbstractAssignment);

impl Interpolant {
    pub fn new(assignment: AbstractAssignment) -> Self {
        Self(assignment)
    }

    pub fn top() -> Self {
        Self(AbstractAssignment::top())
    }

    pub fn assignment(&self) -> &AbstractAssignment {
        &self.0
    }

    pub fn is_bottom(&self) -> bool {
        self.0.is_bottom()
    }

    /// Variables the interpolant constrains.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.0.defined()
    }
}

impl fmt::Display for Interpolant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Computes an interpolant for `minus` and `plus`.
pub fn interpolate(minus: &[Operation], plus: &[Operation]) -> Result<Interpolant, ContractError> {
    let top = AbstractAssignment::top();
    if !sp_path(minus.iter().chain(plus), &top).is_bottom() {
        return Err(ContractError::NotContradicting);
    }
    let start = sp_path(minus, &top);
    let plus_vars = vars_of(plus);
    Ok(shrink(start, &plus_vars, |candidate| {
        sp_path(plus, candidate).is_bottom()
    }))
}

fn shrink(
    start: AbstractAssignment,
    plus_vars: &BTreeSet<Var>,
    mut refutes: impl FnMut(&AbstractAssignment) -> bool,
) -> Interpolant {
    let AbstractAssignment::Values(map) = start else {
        return Interpolant(AbstractAssignment::Bottom);
    };
    let mut current: std::collections::BTreeMap<_, _> = map
        .into_iter()
        .filter(|(var, _)| plus_vars.contains(var))
        .collect();
    let mut order: Vec<Var> = current.keys().cloned().collect();
    order.sort_by(|a, b| a.name().cmp(b.name()));
    for var in order {
        let value = current.remove(&var).expect("key present");
        let candidate = AbstractAssignment::Values(current.clone());
        if !refutes(&candidate) {
            current.insert(var, value);
        }
    }
    Interpolant(AbstractAssignment::Values(current))
}

/// Materialises an interpolant as assumes `[x == c]` in declaration order.
pub fn interpolant_to_constraints(interpolant: &Interpolant) -> Result<Vec<Operation>, ContractError> {
    match interpolant.assignment() {
        AbstractAssignment::Bottom => Err(ContractError::BottomInterpolant),
        AbstractAssignment::Values(map) => Ok(map
            .iter()
            .map(|(var, value)| {
                Operation::Assume(Pred::cmp(
                    CmpOp::Eq,
                    Expr::Var(var.clone()),
                    Expr::Int(value.clone()),
                ))
            })
            .collect()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceEntry {
    /// 0-based path position the interpolant follows.
    pub position: usize,
    pub loc: Loc,
    pub interpolant: Interpolant,
}

/// Interpolants for the cuts after positions `0..len-1` of a path.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InterpolantSequence {
    entries: Vec<SequenceEntry>,
    calls: usize,
}

impl InterpolantSequence {
    pub fn entries(&self) -> &[SequenceEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of interpolation problems solved to build the sequence.
    pub fn interpolation_calls(&self) -> usize {
        self.calls
    }

    /// Every variable referenced by some interpolant.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.entries
            .iter()
            .flat_map(|entry| entry.interpolant.vars())
            .collect()
    }
}

/// Inductive interpolation along an infeasible path: each interpolant is
/// computed from the previous one extended by the next operation, against
/// the remaining suffix.
pub fn interpolant_sequence(path: &Path) -> Result<InterpolantSequence, ContractError> {
    let ops = path.constraints();
    if !sp_path(&ops, &AbstractAssignment::top()).is_bottom() {
        return Err(ContractError::FeasiblePath);
    }
    let mut suffix_vars = vec![BTreeSet::new(); ops.len() + 1];
    for pos in (0..ops.len()).rev() {
        let mut vars = suffix_vars[pos + 1].clone();
        ops[pos].collect_vars(&mut vars);
        suffix_vars[pos] = vars;
    }

    let mut checker = SuffixChecker::new(&ops);
    let mut previous = Interpolant::top();
    let mut sequence = InterpolantSequence::default();
    for pos in 0..ops.len().saturating_sub(1) {
        sequence.calls += 1;
        let next = if previous.is_bottom() {
            Interpolant(AbstractAssignment::Bottom)
        } else {
            let start = sp(&ops[pos], previous.assignment());
            debug_assert!(checker.refutes(pos + 1, start.clone()));
            shrink(start, &suffix_vars[pos + 1], |candidate| {
                checker.refutes(pos + 1, candidate.clone())
            })
        };
        sequence.entries.push(SequenceEntry {
            position: pos,
            loc: path.steps()[pos].loc,
            interpolant: next.clone(),
        });
        previous = next;
    }
    Ok(sequence)
}

const MEMO_CAPACITY: usize = 1 << 20;

/// Answers "does SP of the suffix starting at `from`, run from `state`,
/// reach Bottom", memoising every intermediate (position, state) pair.
struct SuffixChecker<'a> {
    ops: &'a [Operation],
    memo: HashMap<(usize, AbstractAssignment), bool>,
}

impl<'a> SuffixChecker<'a> {
    fn new(ops: &'a [Operation]) -> Self {
        Self {
            ops,
            memo: HashMap::new(),
        }
    }

    fn refutes(&mut self, from: usize, mut state: AbstractAssignment) -> bool {
        let mut visited = Vec::new();
        let mut pos = from;
        let result = loop {
            if state.is_bottom() {
                break true;
            }
            if pos == self.ops.len() {
                break false;
            }
            let key = (pos, state);
            if let Some(&known) = self.memo.get(&key) {
                break known;
            }
            let next = sp(&self.ops[pos], &key.1);
            visited.push(key);
            state = next;
            pos += 1;
        };
        for key in visited {
            if self.memo.len() >= MEMO_CAPACITY {
                break;
            }
            self.memo.insert(key, result);
        }
        result
    }
}
