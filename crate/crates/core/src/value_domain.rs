//! Abstract variable assignments and their strongest-post transformer.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::frontend::{BinOp, CmpOp, Expr, Operation, Pred, Var};

/// Either contradicting (`Bottom`) or a partial map from variables to
/// integers. The empty map is top.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AbstractAssignment {
    Bottom,
    Values(BTreeMap<Var, BigInt>),
}

impl Default for AbstractAssignment {
    fn default() -> Self {
        Self::top()
    }
}

impl AbstractAssignment {
    pub fn top() -> Self {
        Self::Values(BTreeMap::new())
    }

    pub fn from_pairs<I, V>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (Var, V)>,
        V: Into<BigInt>,
    {
        Self::Values(pairs.into_iter().map(|(k, v)| (k, v.into())).collect())
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Self::Bottom)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Self::Values(map) if map.is_empty())
    }

    pub fn get(&self, var: &Var) -> Option<&BigInt> {
        match self {
            Self::Bottom => None,
            Self::Values(map) => map.get(var),
        }
    }

    /// The definition range; empty for `Bottom`.
    pub fn defined(&self) -> BTreeSet<Var> {
        match self {
            Self::Bottom => BTreeSet::new(),
            Self::Values(map) => map.keys().cloned().collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Bottom => 0,
            Self::Values(map) => map.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> Option<&BTreeMap<Var, BigInt>> {
        match self {
            Self::Bottom => None,
            Self::Values(map) => Some(map),
        }
    }

    /// Copy without `var`; `Bottom` stays `Bottom`.
    pub fn without(&self, var: &Var) -> Self {
        match self {
            Self::Bottom => Self::Bottom,
            Self::Values(map) => {
                let mut map = map.clone();
                map.remove(var);
                Self::Values(map)
            }
        }
    }
}

impl fmt::Display for AbstractAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bottom => f.write_str("⊥"),
            Self::Values(map) => {
                f.write_str("{")?;
                for (idx, (var, value)) in map.iter().enumerate() {
                    if idx > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{var}={value}")?;
                }
                f.write_str("}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThreeValued {
    True,
    False,
    Unknown,
}

impl ThreeValued {
    fn from_bool(b: bool) -> Self {
        if b {
            Self::True
        } else {
            Self::False
        }
    }

    fn not(self) -> Self {
        match self {
            Self::True => Self::False,
            Self::False => Self::True,
            Self::Unknown => Self::Unknown,
        }
    }

    fn and(self, other: Self) -> Self {
        match (self, other) {
            (Self::False, _) | (_, Self::False) => Self::False,
            (Self::True, Self::True) => Self::True,
            _ => Self::Unknown,
        }
    }

    fn or(self, other: Self) -> Self {
        match (self, other) {
            (Self::True, _) | (_, Self::True) => Self::True,
            (Self::False, Self::False) => Self::False,
            _ => Self::Unknown,
        }
    }
}

/// Bottom if either side is Bottom or they disagree on a shared variable,
/// the union otherwise.
pub fn conjoin(lhs: &AbstractAssignment, rhs: &AbstractAssignment) -> AbstractAssignment {
    let (AbstractAssignment::Values(a), AbstractAssignment::Values(b)) = (lhs, rhs) else {
        return AbstractAssignment::Bottom;
    };
    let mut out = a.clone();
    for (var, value) in b {
        match out.get(var) {
            Some(existing) if existing != value => return AbstractAssignment::Bottom,
            Some(_) => {}
            None => {
                out.insert(var.clone(), value.clone());
            }
        }
    }
    AbstractAssignment::Values(out)
}

/// `lhs => rhs`: lhs is Bottom, or agrees with rhs on every variable rhs
/// defines.
pub fn implies(lhs: &AbstractAssignment, rhs: &AbstractAssignment) -> bool {
    match (lhs, rhs) {
        (AbstractAssignment::Bottom, _) => true,
        (AbstractAssignment::Values(_), AbstractAssignment::Bottom) => false,
        (AbstractAssignment::Values(a), AbstractAssignment::Values(b)) => {
            b.len() <= a.len() && b.iter().all(|(var, value)| a.get(var) == Some(value))
        }
    }
}

/// Evaluates under the defined part of `v`. `None` when a referenced
/// variable is undefined or a division by zero occurs. Division and
/// remainder truncate toward zero.
pub fn eval_expr(expr: &Expr, v: &AbstractAssignment) -> Option<BigInt> {
    match expr {
        Expr::Int(n) => Some(n.clone()),
        Expr::Var(var) => v.get(var).cloned(),
        Expr::Neg(inner) => eval_expr(inner, v).map(|n| -n),
        Expr::Binary(op, lhs, rhs) => {
            let a = eval_expr(lhs, v)?;
            let b = eval_expr(rhs, v)?;
            match op {
                BinOp::Add => Some(a + b),
                BinOp::Sub => Some(a - b),
                BinOp::Mul => Some(a * b),
                BinOp::Div if b.is_zero() => None,
                BinOp::Div => Some(a / b),
                BinOp::Rem if b.is_zero() => None,
                BinOp::Rem => Some(a % b),
            }
        }
    }
}

/// Kleene evaluation of a predicate.
pub fn eval_pred(pred: &Pred, v: &AbstractAssignment) -> ThreeValued {
    match pred {
        Pred::Bool(b) => ThreeValued::from_bool(*b),
        Pred::Cmp(op, lhs, rhs) => match (eval_expr(lhs, v), eval_expr(rhs, v)) {
            (Some(a), Some(b)) => ThreeValued::from_bool(compare(*op, &a, &b)),
            _ => ThreeValued::Unknown,
        },
        Pred::Not(inner) => eval_pred(inner, v).not(),
        Pred::And(lhs, rhs) => eval_pred(lhs, v).and(eval_pred(rhs, v)),
        Pred::Or(lhs, rhs) => eval_pred(lhs, v).or(eval_pred(rhs, v)),
    }
}

fn compare(op: CmpOp, a: &BigInt, b: &BigInt) -> bool {
    match op {
        CmpOp::Eq => a == b,
        CmpOp::Ne => a != b,
        CmpOp::Lt => a < b,
        CmpOp::Le => a <= b,
        CmpOp::Gt => a > b,
        CmpOp::Ge => a >= b,
    }
}

/// Equalities forced by `pred` under `v`: top-level conjuncts of the shape
/// `x == c`, `c == x`, or `x == y` with `x` undefined and `c` a
/// variable-free constant or `y` defined in `v`.
fn forced_bindings(pred: &Pred, v: &AbstractAssignment) -> AbstractAssignment {
    let mut conjuncts = Vec::new();
    flatten_conjuncts(pred, &mut conjuncts);
    let mut bindings = AbstractAssignment::top();
    for conjunct in conjuncts {
        let Pred::Cmp(CmpOp::Eq, lhs, rhs) = conjunct else {
            continue;
        };
        let binding = binding_for(lhs, rhs, v).or_else(|| binding_for(rhs, lhs, v));
        if let Some((var, value)) = binding {
            bindings = conjoin(&bindings, &AbstractAssignment::from_pairs([(var, value)]));
        }
    }
    bindings
}

fn binding_for(target: &Expr, source: &Expr, v: &AbstractAssignment) -> Option<(Var, BigInt)> {
    let Expr::Var(var) = target else {
        return None;
    };
    if v.get(var).is_some() {
        return None;
    }
    let value = match source {
        Expr::Var(other) => v.get(other).cloned()?,
        constant if !constant.has_vars() => eval_expr(constant, v)?,
        _ => return None,
    };
    Some((var.clone(), value))
}

fn flatten_conjuncts<'a>(pred: &'a Pred, out: &mut Vec<&'a Pred>) {
    match pred {
        Pred::And(lhs, rhs) => {
            flatten_conjuncts(lhs, out);
            flatten_conjuncts(rhs, out);
        }
        other => out.push(other),
    }
}

/// Strongest post of one operation.
pub fn sp(op: &Operation, v: &AbstractAssignment) -> AbstractAssignment {
    let AbstractAssignment::Values(map) = v else {
        return AbstractAssignment::Bottom;
    };
    match op {
        Operation::Assign(var, value) => {
            let result = eval_expr(value, v);
            let mut map = map.clone();
            match result {
                Some(c) => {
                    map.insert(var.clone(), c);
                }
                None => {
                    map.remove(var);
                }
            }
            AbstractAssignment::Values(map)
        }
        Operation::Nondet(var) => v.without(var),
        Operation::Assume(pred) => match eval_pred(pred, v) {
            ThreeValued::False => AbstractAssignment::Bottom,
            ThreeValued::True => v.clone(),
            ThreeValued::Unknown => conjoin(v, &forced_bindings(pred, v)),
        },
        Operation::Noop => v.clone(),
    }
}

/// `v` restricted to `tracked`.
pub fn restrict(v: &AbstractAssignment, tracked: &BTreeSet<Var>) -> AbstractAssignment {
    match v {
        AbstractAssignment::Bottom => AbstractAssignment::Bottom,
        AbstractAssignment::Values(map) => AbstractAssignment::Values(
            map.iter()
                .filter(|(var, _)| tracked.contains(*var))
                .map(|(var, value)| (var.clone(), value.clone()))
                .collect(),
        ),
    }
}
