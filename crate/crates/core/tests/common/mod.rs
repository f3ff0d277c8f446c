#![allow(dead_code)]

use prefixselect_core::frontend::{BinOp, CmpOp, Expr, Pred, Program, Stmt, Var};
use proptest::prelude::*;

pub fn vars() -> Vec<Var> {
    ["x", "y", "z"]
        .iter()
        .enumerate()
        .map(|(i, n)| Var::new(i as u32, *n))
        .collect()
}

fn var() -> impl Strategy<Value = Var> {
    prop::sample::select(vars())
}

fn literal() -> impl Strategy<Value = Expr> {
    (-8i64..=8).prop_map(Expr::int)
}

pub fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![literal(), var().prop_map(Expr::Var)];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (
                prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Rem]),
                inner.clone(),
                inner
            )
                .prop_map(|(op, l, r)| Expr::binary(op, l, r)),
        ]
    })
}

fn cmp_op() -> impl Strategy<Value = CmpOp> {
    prop::sample::select(vec![CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge])
}

/// Comparisons of a variable against a small expression.
fn simple_pred() -> impl Strategy<Value = Pred> {
    (cmp_op(), var(), prop_oneof![literal(), var().prop_map(Expr::Var)])
        .prop_map(|(op, v, rhs)| Pred::cmp(op, Expr::Var(v), rhs))
}

pub fn pred() -> impl Strategy<Value = Pred> {
    let leaf = prop_oneof![
        4 => (cmp_op(), expr(), expr()).prop_map(|(op, l, r)| Pred::cmp(op, l, r)),
        1 => any::<bool>().prop_map(Pred::Bool),
    ];
    leaf.prop_recursive(3, 10, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Pred::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Pred::and(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Pred::or(l, r)),
        ]
    })
}

/// Statements over the full grammar, for syntax round trips.
pub fn any_stmt() -> impl Strategy<Value = Stmt> {
    let leaf = prop_oneof![
        (var(), expr()).prop_map(|(v, e)| Stmt::Assign(v, e)),
        var().prop_map(Stmt::Nondet),
        pred().prop_map(Stmt::Assume),
        Just(Stmt::Error),
    ];
    leaf.prop_recursive(3, 16, 4, |inner| {
        prop_oneof![
            (
                pred(),
                prop::collection::vec(inner.clone(), 0..3),
                prop::option::of(prop::collection::vec(inner.clone(), 0..3))
            )
                .prop_map(|(p, t, e)| Stmt::If(p, t, e)),
            (pred(), prop::collection::vec(inner, 0..3)).prop_map(|(p, b)| Stmt::While(p, b)),
        ]
    })
}

pub fn any_program() -> impl Strategy<Value = Program> {
    prop::collection::vec(any_stmt(), 0..6).prop_map(|body| Program {
        variables: vars(),
        body,
    })
}

/// Small programs that terminate: literal-bound loops over a counter the
/// body never assigns, and guarded errors.
fn small_stmt() -> impl Strategy<Value = Stmt> {
    let small_expr = prop_oneof![
        literal(),
        var().prop_map(Expr::Var),
        (var(), -2i64..=2).prop_map(|(v, k)| Expr::binary(BinOp::Add, Expr::Var(v), Expr::int(k))),
    ];
    let leaf = prop_oneof![
        3 => (var(), small_expr).prop_map(|(v, e)| Stmt::Assign(v, e)),
        1 => var().prop_map(Stmt::Nondet),
        1 => simple_pred().prop_map(Stmt::Assume),
        2 => simple_pred().prop_map(|p| Stmt::If(p, vec![Stmt::Error], None)),
    ];
    leaf.prop_recursive(2, 10, 3, |inner| {
        prop_oneof![
            (
                simple_pred(),
                prop::collection::vec(inner.clone(), 1..3),
                prop::option::of(prop::collection::vec(inner.clone(), 1..2))
            )
                .prop_map(|(p, t, e)| Stmt::If(p, t, e)),
            (0..3usize, 1i64..=3, prop::collection::vec(inner, 0..2)).prop_map(|(c, bound, body)| {
                let counter = vars()[c].clone();
                let mut body: Vec<Stmt> = body.into_iter().filter(|s| !assigns(s, &counter)).collect();
                body.push(Stmt::Assign(
                    counter.clone(),
                    Expr::binary(BinOp::Add, Expr::Var(counter.clone()), Expr::int(1)),
                ));
                Stmt::If(
                    Pred::Bool(true),
                    vec![
                        Stmt::Assign(counter.clone(), Expr::int(0)),
                        Stmt::While(Pred::cmp(CmpOp::Lt, Expr::Var(counter), Expr::int(bound)), body),
                    ],
                    None,
                )
            }),
        ]
    })
}

fn assigns(stmt: &Stmt, var: &Var) -> bool {
    match stmt {
        Stmt::Assign(v, _) | Stmt::Nondet(v) => v == var,
        Stmt::If(_, t, e) => t.iter().chain(e.iter().flatten()).any(|s| assigns(s, var)),
        Stmt::While(_, b) => b.iter().any(|s| assigns(s, var)),
        Stmt::Assume(_) | Stmt::Error => false,
    }
}

pub fn small_program() -> impl Strategy<Value = Program> {
    prop::collection::vec(small_stmt(), 1..6).prop_map(|body| Program {
        variables: vars(),
        body,
    })
}
