use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use super::ast::{Pred, Program, Stmt, Var};
use super::ast::Expr;

/// A program location.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loc(pub u32);

impl Loc {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}", self.0)
    }
}

/// An edge label: every operation is an assignment or an assume.
#[derive(Debug, Clone, Eq)]
pub enum Operation {
    Assign(Var, Expr),
    /// Assignment of an unknown value.
    Nondet(Var),
    Assume(Pred),
    /// Same meaning as `Assume(true)`.
    Noop,
}

impl Operation {
    pub fn is_assume(&self) -> bool {
        matches!(self, Operation::Assume(_) | Operation::Noop)
    }

    pub fn is_noop(&self) -> bool {
        matches!(self, Operation::Noop | Operation::Assume(Pred::Bool(true)))
    }

    /// Variables occurring syntactically in the operation.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Operation::Assign(var, value) => {
                out.insert(var.clone());
                value.collect_vars(out);
            }
            Operation::Nondet(var) => {
                out.insert(var.clone());
            }
            Operation::Assume(pred) => pred.collect_vars(out),
            Operation::Noop => {}
        }
    }
}

impl PartialEq for Operation {
    fn eq(&self, other: &Self) -> bool {
        if self.is_noop() || other.is_noop() {
            return self.is_noop() && other.is_noop();
        }
        match (self, other) {
            (Operation::Assign(a, e), Operation::Assign(b, f)) => a == b && e == f,
            (Operation::Nondet(a), Operation::Nondet(b)) => a == b,
            (Operation::Assume(p), Operation::Assume(q)) => p == q,
            _ => false,
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Assign(var, value) => write!(f, "{var} := {value}"),
            Operation::Nondet(var) => write!(f, "{var} := nondet()"),
            Operation::Assume(pred) => write!(f, "[{pred}]"),
            Operation::Noop => f.write_str("[true]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub source: Loc,
    pub op: Operation,
    pub target: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfaError {
    #[error("location {0} is out of range")]
    UnknownLocation(Loc),
}

/// Control-flow automaton: locations `0..num_locations`, labelled edges,
/// an initial location and an optional error location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlFlowAutomaton {
    num_locations: u32,
    initial: Loc,
    error: Option<Loc>,
    edges: Vec<Edge>,
    variables: Vec<Var>,
    outgoing: Vec<Vec<usize>>,
}

impl ControlFlowAutomaton {
    pub fn new(
        num_locations: u32,
        initial: Loc,
        error: Option<Loc>,
        edges: Vec<Edge>,
        variables: Vec<Var>,
    ) -> Result<Self, CfaError> {
        let check = |loc: Loc| {
            if loc.0 < num_locations {
                Ok(())
            } else {
                Err(CfaError::UnknownLocation(loc))
            }
        };
        check(initial)?;
        if let Some(error) = error {
            check(error)?;
        }
        let mut outgoing = vec![Vec::new(); num_locations as usize];
        for (idx, edge) in edges.iter().enumerate() {
            check(edge.source)?;
            check(edge.target)?;
            outgoing[edge.source.index()].push(idx);
        }
        Ok(Self {
            num_locations,
            initial,
            error,
            edges,
            variables,
            outgoing,
        })
    }

    pub fn num_locations(&self) -> usize {
        self.num_locations as usize
    }

    pub fn locations(&self) -> impl Iterator<Item = Loc> {
        (0..self.num_locations).map(Loc)
    }

    pub fn initial(&self) -> Loc {
        self.initial
    }

    pub fn error(&self) -> Option<Loc> {
        self.error
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Declared variables in declaration order.
    pub fn variables(&self) -> &[Var] {
        &self.variables
    }

    /// Outgoing edges of `loc` in construction order.
    pub fn outgoing(&self, loc: Loc) -> impl Iterator<Item = &Edge> {
        self.outgoing[loc.index()].iter().map(|&idx| &self.edges[idx])
    }
}

/// Lowers a parsed program to its control-flow automaton.
///
/// Locations are numbered in the order they are created while walking the
/// source; unreachable locations are pruned and the survivors renumbered
/// densely, preserving that order.
pub fn build_cfa(program: &Program) -> ControlFlowAutomaton {
    let mut builder = Builder {
        next: 1,
        edges: Vec::new(),
        error: None,
    };
    let initial = 0;
    builder.block(&program.body, Some(initial));
    builder.finish(initial, program.variables.clone())
}

struct Builder {
    next: u32,
    edges: Vec<(u32, Operation, u32)>,
    error: Option<u32>,
}

impl Builder {
    fn fresh(&mut self) -> u32 {
        let id = self.next;
        self.next += 1;
        id
    }

    fn edge(&mut self, source: u32, op: Operation, target: u32) {
        self.edges.push((source, op, target));
    }

    /// Redirects every use of `from` to `into`.
    fn merge(&mut self, from: u32, into: u32) {
        for (source, _, target) in &mut self.edges {
            if *source == from {
                *source = into;
            }
            if *target == from {
                *target = into;
            }
        }
    }

    /// Returns the location reached after the block, or `None` when every
    /// path through it ends in `error;`.
    fn block(&mut self, stmts: &[Stmt], mut current: Option<u32>) -> Option<u32> {
        for stmt in stmts {
            // statements after `error;` are dead code
            let from = current?;
            current = self.statement(stmt, from);
        }
        current
    }

    fn statement(&mut self, stmt: &Stmt, from: u32) -> Option<u32> {
        match stmt {
            Stmt::Assign(var, value) => {
                let to = self.fresh();
                self.edge(from, Operation::Assign(var.clone(), value.clone()), to);
                Some(to)
            }
            Stmt::Nondet(var) => {
                let to = self.fresh();
                self.edge(from, Operation::Nondet(var.clone()), to);
                Some(to)
            }
            Stmt::Assume(pred) => {
                let to = self.fresh();
                self.edge(from, Operation::Assume(pred.clone()), to);
                Some(to)
            }
            Stmt::Error => {
                let error = match self.error {
                    Some(error) => error,
                    None => {
                        let error = self.fresh();
                        self.error = Some(error);
                        error
                    }
                };
                self.edge(from, Operation::Noop, error);
                None
            }
            Stmt::If(cond, then_branch, else_branch) => {
                let then_start = self.fresh();
                self.edge(from, Operation::Assume(cond.clone()), then_start);
                let then_end = self.block(then_branch, Some(then_start));
                let else_start = self.fresh();
                self.edge(from, Operation::Assume(Pred::not(cond.clone())), else_start);
                let else_end = match else_branch {
                    Some(stmts) => self.block(stmts, Some(else_start)),
                    None => Some(else_start),
                };
                match (then_end, else_end) {
                    (Some(then_end), Some(else_end)) => {
                        self.merge(else_end, then_end);
                        Some(then_end)
                    }
                    (Some(end), None) | (None, Some(end)) => Some(end),
                    (None, None) => None,
                }
            }
            Stmt::While(cond, body) => {
                // keep the initial location free of incoming edges
                let head = if from == 0 {
                    let head = self.fresh();
                    self.edge(from, Operation::Noop, head);
                    head
                } else {
                    from
                };
                let body_start = self.fresh();
                self.edge(head, Operation::Assume(cond.clone()), body_start);
                if let Some(body_end) = self.block(body, Some(body_start)) {
                    self.merge(body_end, head);
                }
                let exit = self.fresh();
                self.edge(head, Operation::Assume(Pred::not(cond.clone())), exit);
                Some(exit)
            }
        }
    }

    fn finish(self, initial: u32, variables: Vec<Var>) -> ControlFlowAutomaton {
        let total = self.next as usize;
        let mut succ = vec![Vec::new(); total];
        for (source, _, target) in &self.edges {
            succ[*source as usize].push(*target);
        }
        let mut reachable = vec![false; total];
        let mut queue = VecDeque::from([initial]);
        reachable[initial as usize] = true;
        while let Some(loc) = queue.pop_front() {
            for &next in &succ[loc as usize] {
                if !reachable[next as usize] {
                    reachable[next as usize] = true;
                    queue.push_back(next);
                }
            }
        }

        let mut renumber = vec![None; total];
        let mut count = 0u32;
        for (old, live) in reachable.iter().enumerate() {
            if *live {
                renumber[old] = Some(Loc(count));
                count += 1;
            }
        }
        let edges = self
            .edges
            .into_iter()
            .filter_map(|(source, op, target)| {
                Some(Edge {
                    source: renumber[source as usize]?,
                    op,
                    target: renumber[target as usize]?,
                })
            })
            .collect();
        let error = self.error.and_then(|e| renumber[e as usize]);
        ControlFlowAutomaton::new(count, Loc(0), error, edges, variables)
            .expect("builder produces consistent locations")
    }
}
