//! Paths, constraint sequences and infeasible sliced prefixes.

use std::collections::BTreeSet;
use std::fmt;

use crate::frontend::{Loc, Operation, Var};
use crate::value_domain::{sp, AbstractAssignment};
use crate::ContractError;

/// One step of a path: the operation executed and the location reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub op: Operation,
    pub loc: Loc,
}

impl Step {
    pub fn new(op: Operation, loc: Loc) -> Self {
        Self { op, loc }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.op, self.loc)
    }
}

/// A sequence of (operation, location) pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Path {
    steps: Vec<Step>,
}

impl Path {
    pub fn new(steps: Vec<Step>) -> Self {
        Self { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    /// The constraint sequence: operations in order.
    pub fn constraints(&self) -> Vec<Operation> {
        self.steps.iter().map(|s| s.op.clone()).collect()
    }

    pub fn ops(&self) -> impl Iterator<Item = &Operation> + Clone {
        self.steps.iter().map(|s| &s.op)
    }

    pub fn truncated(&self, len: usize) -> Path {
        Path::new(self.steps[..len].to_vec())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        vars_of(self.ops())
    }
}

impl FromIterator<Step> for Path {
    fn from_iter<I: IntoIterator<Item = Step>>(iter: I) -> Self {
        Path::new(iter.into_iter().collect())
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

/// Variables occurring syntactically in a sequence of operations.
pub fn vars_of<'a>(ops: impl IntoIterator<Item = &'a Operation>) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    for op in ops {
        op.collect_vars(&mut out);
    }
    out
}

/// Folds `sp` over `ops`, starting from `start`. Stops early on Bottom.
pub fn sp_path<'a>(
    ops: impl IntoIterator<Item = &'a Operation>,
    start: &AbstractAssignment,
) -> AbstractAssignment {
    let mut v = start.clone();
    for op in ops {
        if v.is_bottom() {
            break;
        }
        v = sp(op, &v);
    }
    v
}

pub fn is_feasible(path: &Path) -> bool {
    !sp_path(path.ops(), &AbstractAssignment::top()).is_bottom()
}

/// An infeasible sliced prefix of an error path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlicedPrefix {
    /// The prefix, with replaced assumes stored as `Noop`.
    pub path: Path,
    /// 0-based positions whose assume was replaced by `Noop`.
    pub replaced: BTreeSet<usize>,
    /// Position in extraction order, 0-based.
    pub index: usize,
}

impl SlicedPrefix {
    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    /// Renders the prefix one step per line, annotating replaced positions
    /// with the assume they stand in for.
    pub fn render(&self, original: &Path) -> String {
        let mut out = String::new();
        for (pos, step) in self.path.steps().iter().enumerate() {
            if self.replaced.contains(&pos) {
                let was = &original.steps()[pos].op;
                out.push_str(&format!("([true] (was: {was}), {})\n", step.loc));
            } else {
                out.push_str(&format!("{step}\n"));
            }
        }
        out
    }
}

/// Extracts every infeasible sliced prefix of an infeasible path, in
/// emission order.
///
/// Walks the path keeping a feasible slice; each step that contradicts the
/// slice closes a prefix, and is then replaced by a no-op in the slice.
pub fn extract_sliced_prefixes(path: &Path) -> Result<Vec<SlicedPrefix>, ContractError> {
    if is_feasible(path) {
        return Err(ContractError::FeasiblePath);
    }
    let mut prefixes = Vec::new();
    let mut slice: Vec<Step> = Vec::with_capacity(path.len());
    let mut replaced = BTreeSet::new();
    // running SP of `slice`; never Bottom
    let mut state = AbstractAssignment::top();

    for (pos, step) in path.steps().iter().enumerate() {
        let next = sp(&step.op, &state);
        if next.is_bottom() {
            let mut steps = slice.clone();
            steps.push(step.clone());
            prefixes.push(SlicedPrefix {
                path: Path::new(steps),
                replaced: replaced.clone(),
                index: prefixes.len(),
            });
            slice.push(Step::new(Operation::Noop, step.loc));
            replaced.insert(pos);
        } else {
            slice.push(step.clone());
            state = next;
        }
    }
    debug_assert!(!prefixes.is_empty());
    Ok(prefixes)
}
