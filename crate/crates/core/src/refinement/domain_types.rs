use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::frontend::{BinOp, CmpOp, ControlFlowAutomaton, Expr, Operation, Pred, Var};

/// Syntactic variable classes, cheapest to track first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DomainType {
    Boolean,
    IntegerOther,
    LoopCounter,
}

impl DomainType {
    pub fn weight(self) -> u64 {
        match self {
            DomainType::Boolean => 1,
            DomainType::IntegerOther => 10,
            DomainType::LoopCounter => 100,
        }
    }
}

impl fmt::Display for DomainType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainType::Boolean => "boolean",
            DomainType::IntegerOther => "integer",
            DomainType::LoopCounter => "loop-counter",
        })
    }
}

/// Class of every declared variable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DomainTypeTable {
    classes: BTreeMap<Var, DomainType>,
}

impl DomainTypeTable {
    pub fn from_classes(classes: impl IntoIterator<Item = (Var, DomainType)>) -> Self {
        Self {
            classes: classes.into_iter().collect(),
        }
    }

    /// Variables missing from the table count as `IntegerOther`.
    pub fn class_of(&self, var: &Var) -> DomainType {
        self.classes.get(var).copied().unwrap_or(DomainType::IntegerOther)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, DomainType)> {
        self.classes.iter().map(|(var, class)| (var, *class))
    }

    /// Sum of the class weights of `vars`.
    pub fn score<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> u64 {
        vars.into_iter().map(|var| self.class_of(var).weight()).sum()
    }
}

/// Classifies every declared variable.
///
/// * loop counter: some `x := x ± c` lies on a CFA cycle and `x` occurs in
///   an assume on an edge of the same strongly connected component;
/// * boolean: every assignment is `0`, `1` or a copy of a boolean, and every
///   comparison mentioning it is `==`/`!=` against `0`, `1` or a boolean;
/// * integer: everything else.
pub fn classify_domain_types(cfa: &ControlFlowAutomaton) -> DomainTypeTable {
    let counters = loop_counters(cfa);
    let booleans = boolean_vars(cfa);
    let classes = cfa.variables().iter().map(|var| {
        let class = if counters.contains(var) {
            DomainType::LoopCounter
        } else if booleans.contains(var) {
            DomainType::Boolean
        } else {
            DomainType::IntegerOther
        };
        (var.clone(), class)
    });
    DomainTypeTable::from_classes(classes)
}

fn loop_counters(cfa: &ControlFlowAutomaton) -> BTreeSet<Var> {
    let mut graph = DiGraph::<(), ()>::with_capacity(cfa.num_locations(), cfa.edges().len());
    let nodes: Vec<_> = cfa.locations().map(|_| graph.add_node(())).collect();
    for edge in cfa.edges() {
        graph.add_edge(nodes[edge.source.index()], nodes[edge.target.index()], ());
    }
    let mut component = vec![usize::MAX; cfa.num_locations()];
    for (id, scc) in tarjan_scc(&graph).into_iter().enumerate() {
        for node in scc {
            component[node.index()] = id;
        }
    }

    // per component: variables stepped by a constant, variables in guards
    let mut stepped: BTreeMap<usize, BTreeSet<Var>> = BTreeMap::new();
    let mut guarded: BTreeMap<usize, BTreeSet<Var>> = BTreeMap::new();
    for edge in cfa.edges() {
        let scc = component[edge.source.index()];
        if scc != component[edge.target.index()] {
            continue;
        }
        match &edge.op {
            Operation::Assign(var, value) if is_constant_step(var, value) => {
                stepped.entry(scc).or_default().insert(var.clone());
            }
            Operation::Assume(pred) => pred.collect_vars(guarded.entry(scc).or_default()),
            _ => {}
        }
    }
    stepped
        .into_iter()
        .flat_map(|(scc, vars)| {
            let guards = guarded.get(&scc).cloned().unwrap_or_default();
            vars.into_iter().filter(move |var| guards.contains(var))
        })
        .collect()
}

fn is_constant_step(var: &Var, value: &Expr) -> bool {
    let Expr::Binary(op, lhs, rhs) = value else {
        return false;
    };
    let is_self = |e: &Expr| matches!(e, Expr::Var(v) if v == var);
    match op {
        BinOp::Add => (is_self(lhs) && !rhs.has_vars()) || (!lhs.has_vars() && is_self(rhs)),
        BinOp::Sub => is_self(lhs) && !rhs.has_vars(),
        _ => false,
    }
}

fn boolean_vars(cfa: &ControlFlowAutomaton) -> BTreeSet<Var> {
    let mut candidates: BTreeSet<Var> = cfa.variables().iter().cloned().collect();
    loop {
        let rejected: Vec<Var> = candidates
            .iter()
            .filter(|var| !is_boolean_under(var, &candidates, cfa))
            .cloned()
            .collect();
        if rejected.is_empty() {
            return candidates;
        }
        for var in rejected {
            candidates.remove(&var);
        }
    }
}

fn is_zero_or_one(expr: &Expr) -> bool {
    matches!(expr, Expr::Int(n) if *n == 0.into() || *n == 1.into())
}

fn is_boolean_operand(expr: &Expr, candidates: &BTreeSet<Var>) -> bool {
    is_zero_or_one(expr) || matches!(expr, Expr::Var(v) if candidates.contains(v))
}

fn is_boolean_under(var: &Var, candidates: &BTreeSet<Var>, cfa: &ControlFlowAutomaton) -> bool {
    cfa.edges().iter().all(|edge| match &edge.op {
        Operation::Assign(target, value) if target == var => is_boolean_operand(value, candidates),
        Operation::Nondet(target) => target != var,
        Operation::Assume(pred) => comparisons_are_boolean(pred, var, candidates),
        _ => true,
    })
}

fn comparisons_are_boolean(pred: &Pred, var: &Var, candidates: &BTreeSet<Var>) -> bool {
    match pred {
        Pred::Bool(_) => true,
        Pred::Not(inner) => comparisons_are_boolean(inner, var, candidates),
        Pred::And(lhs, rhs) | Pred::Or(lhs, rhs) => {
            comparisons_are_boolean(lhs, var, candidates)
                && comparisons_are_boolean(rhs, var, candidates)
        }
        Pred::Cmp(op, lhs, rhs) => {
            let mut used = BTreeSet::new();
            lhs.collect_vars(&mut used);
            rhs.collect_vars(&mut used);
            if !used.contains(var) {
                return true;
            }
            let is_self = |e: &Expr| matches!(e, Expr::Var(v) if v == var);
            matches!(op, CmpOp::Eq | CmpOp::Ne)
                && ((is_self(lhs) && is_boolean_operand(rhs, candidates))
                    || (is_self(rhs) && is_boolean_operand(lhs, candidates)))
        }
    }
}
