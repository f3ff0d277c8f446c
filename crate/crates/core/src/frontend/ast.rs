//! Syntax trees for the toy imperative language.
//!
//! `Display` on [`Program`] is a pretty-printer whose output re-parses to
//! the same tree.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

/// A declared program variable.
///
/// Variables order by declaration index, so ordered maps keyed by `Var`
/// iterate in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    index: u32,
    name: Arc<str>,
}

impl Var {
    pub fn new(index: u32, name: impl Into<Arc<str>>) -> Self {
        Self {
            index,
            name: name.into(),
        }
    }

    /// Position in the declaration list.
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div | BinOp::Rem => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(BigInt),
    Var(Var),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn int(value: impl Into<BigInt>) -> Self {
        Expr::Int(value.into())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// Collects every variable the expression reads.
    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(inner) => inner.collect_vars(out),
            Expr::Binary(_, lhs, rhs) => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
        }
    }

    pub fn has_vars(&self) -> bool {
        match self {
            Expr::Int(_) => false,
            Expr::Var(_) => true,
            Expr::Neg(inner) => inner.has_vars(),
            Expr::Binary(_, lhs, rhs) => lhs.has_vars() || rhs.has_vars(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, _, _) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Int(_) | Expr::Var(_) => 4,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) if n.sign() == num_bigint::Sign::Minus => write!(f, "(-{})", -n),
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(inner) => {
                if inner.precedence() < 3 || matches!(**inner, Expr::Int(_)) {
                    write!(f, "-({inner})")
                } else {
                    write!(f, "-{inner}")
                }
            }
            Expr::Binary(op, lhs, rhs) => {
                let prec = op.precedence();
                if lhs.precedence() < prec {
                    write!(f, "({lhs})")?;
                } else {
                    write!(f, "{lhs}")?;
                }
                write!(f, " {} ", op.symbol())?;
                // left-associative: equal precedence on the right needs parens
                if rhs.precedence() <= prec {
                    write!(f, "({rhs})")
                } else {
                    write!(f, "{rhs}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pred {
    Bool(bool),
    Cmp(CmpOp, Expr, Expr),
    Not(Box<Pred>),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
}

impl Pred {
    pub fn cmp(op: CmpOp, lhs: Expr, rhs: Expr) -> Self {
        Pred::Cmp(op, lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Pred) -> Self {
        Pred::Not(Box::new(inner))
    }

    pub fn and(lhs: Pred, rhs: Pred) -> Self {
        Pred::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Pred, rhs: Pred) -> Self {
        Pred::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Pred::Bool(_) => {}
            Pred::Cmp(_, lhs, rhs) => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
            Pred::Not(inner) => inner.collect_vars(out),
            Pred::And(lhs, rhs) | Pred::Or(lhs, rhs) => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Pred::Or(..) => 1,
            Pred::And(..) => 2,
            Pred::Not(_) | Pred::Cmp(..) | Pred::Bool(_) => 3,
        }
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::Bool(b) => write!(f, "{b}"),
            Pred::Cmp(op, lhs, rhs) => write!(f, "{lhs} {} {rhs}", op.symbol()),
            Pred::Not(inner) => match inner.as_ref() {
                Pred::Bool(_) => write!(f, "!{inner}"),
                _ => write!(f, "!({inner})"),
            },
            Pred::And(lhs, rhs) => write_junction(f, "&&", 2, lhs, rhs),
            Pred::Or(lhs, rhs) => write_junction(f, "||", 1, lhs, rhs),
        }
    }
}

fn write_junction(
    f: &mut fmt::Formatter<'_>,
    symbol: &str,
    prec: u8,
    lhs: &Pred,
    rhs: &Pred,
) -> fmt::Result {
    if lhs.precedence() < prec {
        write!(f, "({lhs})")?;
    } else {
        write!(f, "{lhs}")?;
    }
    write!(f, " {symbol} ")?;
    if rhs.precedence() <= prec {
        write!(f, "({rhs})")
    } else {
        write!(f, "{rhs}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Assign(Var, Expr),
    Nondet(Var),
    If(Pred, Vec<Stmt>, Option<Vec<Stmt>>),
    While(Pred, Vec<Stmt>),
    Assume(Pred),
    Error,
}

/// A parsed program: declarations followed by a statement list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub variables: Vec<Var>,
    pub body: Vec<Stmt>,
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.variables.is_empty() {
            let names: Vec<&str> = self.variables.iter().map(Var::name).collect();
            writeln!(f, "var {};", names.join(", "))?;
        }
        write_block(f, &self.body, 0)
    }
}

fn write_block(f: &mut fmt::Formatter<'_>, stmts: &[Stmt], depth: usize) -> fmt::Result {
    for stmt in stmts {
        write_stmt(f, stmt, depth)?;
    }
    Ok(())
}

fn write_stmt(f: &mut fmt::Formatter<'_>, stmt: &Stmt, depth: usize) -> fmt::Result {
    let pad = "    ".repeat(depth);
    match stmt {
        Stmt::Assign(v, e) => writeln!(f, "{pad}{v} := {e};"),
        Stmt::Nondet(v) => writeln!(f, "{pad}{v} := nondet();"),
        Stmt::Assume(p) => writeln!(f, "{pad}assume({p});"),
        Stmt::Error => writeln!(f, "{pad}error;"),
        Stmt::If(p, then_branch, else_branch) => {
            writeln!(f, "{pad}if ({p}) {{")?;
            write_block(f, then_branch, depth + 1)?;
            match else_branch {
                Some(else_branch) => {
                    writeln!(f, "{pad}}} else {{")?;
                    write_block(f, else_branch, depth + 1)?;
                    writeln!(f, "{pad}}}")
                }
                None => writeln!(f, "{pad}}}"),
            }
        }
        Stmt::While(p, body) => {
            writeln!(f, "{pad}while ({p}) {{")?;
            write_block(f, body, depth + 1)?;
            writeln!(f, "{pad}}}")
        }
    }
}
