use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::frontend::{Loc, Var};

/// Tracked variables per location; locations not mentioned track nothing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Precision {
    tracked: BTreeMap<Loc, BTreeSet<Var>>,
}

impl Precision {
    pub fn new() -> Self {
        Self::default()
    }

    /// Tracks `var` everywhere in `locs`.
    pub fn uniform(locs: impl IntoIterator<Item = Loc>, vars: &BTreeSet<Var>) -> Self {
        let mut precision = Self::new();
        for loc in locs {
            precision.add_all(loc, vars.iter().cloned());
        }
        precision
    }

    pub fn at(&self, loc: Loc) -> &BTreeSet<Var> {
        static EMPTY: BTreeSet<Var> = BTreeSet::new();
        self.tracked.get(&loc).unwrap_or(&EMPTY)
    }

    pub fn add_all(&mut self, loc: Loc, vars: impl IntoIterator<Item = Var>) {
        let mut vars = vars.into_iter().peekable();
        if vars.peek().is_some() {
            self.tracked.entry(loc).or_default().extend(vars);
        }
    }

    /// Pointwise union. Returns whether any location gained a variable.
    pub fn union_with(&mut self, other: &Precision) -> bool {
        let mut grew = false;
        for (loc, vars) in &other.tracked {
            let entry = self.tracked.entry(*loc).or_default();
            for var in vars {
                grew |= entry.insert(var.clone());
            }
        }
        grew
    }

    /// Whether `self(l) ⊇ other(l)` for every location.
    pub fn covers(&self, other: &Precision) -> bool {
        other
            .tracked
            .iter()
            .all(|(loc, vars)| vars.is_subset(self.at(*loc)))
    }

    /// Locations with a non-empty set, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (Loc, &BTreeSet<Var>)> {
        self.tracked
            .iter()
            .filter(|(_, vars)| !vars.is_empty())
            .map(|(loc, vars)| (*loc, vars))
    }

    pub fn is_empty(&self) -> bool {
        self.iter().next().is_none()
    }

    /// All variables tracked somewhere.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.tracked.values().flatten().cloned().collect()
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|(loc, vars)| {
                let names: Vec<&str> = vars.iter().map(Var::name).collect();
                format!("{loc}: {{{}}}", names.join(", "))
            })
            .collect();
        write!(f, "[{}]", parts.join("; "))
    }
}
