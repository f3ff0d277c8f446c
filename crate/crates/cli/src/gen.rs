//! Corpus generators: the flag-and-counter family and seeded random programs.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use prefixselect_core::frontend::{BinOp, CmpOp, Expr, Pred, Program, Stmt, Var};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Shapes of the flag-and-counter family. All but `Unsafe` are safe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fig2Variant {
    /// Flag set, counter loop up to N, error guarded on the flag.
    Base,
    /// Counter runs from N down to 0.
    CountDown,
    /// Two flags and two guarded error statements.
    TwoFlags,
    /// Loop guard against a nondeterministic bound; only the flag refutes.
    NondetBound,
    /// The flag is cleared, so the error is reachable after N iterations.
    Unsafe,
}

impl Fig2Variant {
    pub const ALL: [Fig2Variant; 5] = [
        Fig2Variant::Base,
        Fig2Variant::CountDown,
        Fig2Variant::TwoFlags,
        Fig2Variant::NondetBound,
        Fig2Variant::Unsafe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fig2Variant::Base => "base",
            Fig2Variant::CountDown => "countdown",
            Fig2Variant::TwoFlags => "twoflags",
            Fig2Variant::NondetBound => "nondet",
            Fig2Variant::Unsafe => "unsafe",
        }
    }
}

pub fn fig2_program(n: u64) -> Result<String> {
    fig2_variant(n, Fig2Variant::Base)
}

pub fn fig2_variant(n: u64, variant: Fig2Variant) -> Result<String> {
    if n == 0 {
        bail!("loop bound must be at least 1");
    }
    let src = match variant {
        Fig2Variant::Base => format!(
            "var b, i;\nb := 1;\ni := 0;\nwhile (i < {n}) {{\n    i := i + 1;\n}}\nif (b == 0) {{\n    error;\n}}\n"
        ),
        Fig2Variant::CountDown => format!(
            "var b, i;\nb := 1;\ni := {n};\nwhile (i > 0) {{\n    i := i - 1;\n}}\nif (b == 0) {{\n    error;\n}}\n"
        ),
        Fig2Variant::TwoFlags => format!(
            "var a, b, i;\na := 0;\nb := 1;\ni := 0;\nwhile (i < {n}) {{\n    i := i + 1;\n}}\nif (a == 1) {{\n    error;\n}}\nif (b == 0) {{\n    error;\n}}\n"
        ),
        Fig2Variant::NondetBound => format!(
            "var b, i, m;\nb := 1;\nm := nondet();\nassume(m <= {n});\ni := 0;\nwhile (i < m) {{\n    i := i + 1;\n}}\nif (b == 0) {{\n    error;\n}}\n"
        ),
        Fig2Variant::Unsafe => format!(
            "var b, i;\nb := 0;\ni := 0;\nwhile (i < {n}) {{\n    i := i + 1;\n}}\nif (b == 0) {{\n    error;\n}}\n"
        ),
    };
    Ok(src)
}

fn write_file(dir: &Path, name: &str, source: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, source).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

pub fn write_fig2(n: u64, out: &Path) -> Result<PathBuf> {
    write_file(out, &format!("fig2_n{n}.imp"), &fig2_program(n)?)
}

/// Size bounds for random programs.
#[derive(Debug, Clone, Copy)]
pub struct RandomBounds {
    pub max_vars: usize,
    pub max_statements: usize,
    pub literal_range: i64,
}

impl Default for RandomBounds {
    fn default() -> Self {
        Self {
            max_vars: 5,
            max_statements: 30,
            literal_range: 8,
        }
    }
}

const NAMES: [&str; 5] = ["x", "y", "z", "u", "w"];

struct Generator {
    rng: ChaCha8Rng,
    bounds: RandomBounds,
    vars: Vec<Var>,
    budget: usize,
    errors: usize,
}

impl Generator {
    fn literal(&mut self) -> i64 {
        let r = self.bounds.literal_range;
        self.rng.gen_range(-r..=r)
    }

    fn var_from(&mut self, pool: &[Var]) -> Var {
        pool.choose(&mut self.rng).expect("non-empty pool").clone()
    }

    fn atom(&mut self) -> Expr {
        if self.rng.gen_bool(0.6) {
            Expr::Var(self.var_from(&self.vars.clone()))
        } else {
            Expr::int(self.literal())
        }
    }

    fn expr(&mut self) -> Expr {
        match self.rng.gen_range(0..10) {
            0..=3 => self.atom(),
            4..=6 => {
                let v = Expr::Var(self.var_from(&self.vars.clone()));
                let op = *[BinOp::Add, BinOp::Sub].choose(&mut self.rng).unwrap();
                Expr::binary(op, v, Expr::int(self.rng.gen_range(1..=3)))
            }
            7 => {
                let op = *[BinOp::Add, BinOp::Sub, BinOp::Mul].choose(&mut self.rng).unwrap();
                Expr::binary(op, self.atom(), self.atom())
            }
            8 => {
                let op = *[BinOp::Div, BinOp::Rem].choose(&mut self.rng).unwrap();
                Expr::binary(op, self.atom(), Expr::int(self.rng.gen_range(1..=4)))
            }
            _ => Expr::Neg(Box::new(Expr::Var(self.var_from(&self.vars.clone())))),
        }
    }

    fn comparison(&mut self) -> Pred {
        let op = *[CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge]
            .choose(&mut self.rng)
            .unwrap();
        let lhs = Expr::Var(self.var_from(&self.vars.clone()));
        let rhs = if self.rng.gen_bool(0.75) {
            Expr::int(self.literal())
        } else {
            self.atom()
        };
        Pred::cmp(op, lhs, rhs)
    }

    fn pred(&mut self) -> Pred {
        match self.rng.gen_range(0..10) {
            0..=6 => self.comparison(),
            7 => Pred::and(self.comparison(), self.comparison()),
            8 => Pred::or(self.comparison(), self.comparison()),
            _ => Pred::not(self.comparison()),
        }
    }

    /// A block of statements drawn from `assignable`; `depth` bounds nesting.
    fn block(&mut self, assignable: &[Var], depth: usize, max_len: usize) -> Vec<Stmt> {
        let len = self.rng.gen_range(1..=max_len);
        let mut out = Vec::new();
        for _ in 0..len {
            if self.budget == 0 {
                break;
            }
            self.stmt(assignable, depth, &mut out);
        }
        out
    }

    fn stmt(&mut self, assignable: &[Var], depth: usize, out: &mut Vec<Stmt>) {
        self.budget -= 1;
        let roll = self.rng.gen_range(0..100);
        let nested = depth > 0 && self.budget >= 3;
        let stmt = match roll {
            0..=39 => Stmt::Assign(self.var_from(assignable), self.expr()),
            40..=44 => Stmt::Nondet(self.var_from(assignable)),
            45..=54 => Stmt::Assume(self.pred()),
            55..=64 if self.budget > 0 => {
                self.budget -= 1;
                self.errors += 1;
                Stmt::If(self.pred(), vec![Stmt::Error], None)
            }
            65..=84 if nested => {
                let then = self.block(assignable, depth - 1, 3);
                let els = if self.rng.gen_bool(0.4) && self.budget > 0 {
                    Some(self.block(assignable, depth - 1, 2))
                } else {
                    None
                };
                Stmt::If(self.pred(), then, els)
            }
            85..=99 if nested && assignable.len() > 1 => {
                return self.counted_loop(assignable, depth, out);
            }
            _ => Stmt::Assign(self.var_from(assignable), self.expr()),
        };
        out.push(stmt);
    }

    /// `c := lo; while (c < hi) { ...; c := c + 1; }` where the body never
    /// assigns `c`.
    fn counted_loop(&mut self, assignable: &[Var], depth: usize, out: &mut Vec<Stmt>) {
        // initialisation and increment
        self.budget -= 2;
        let counter = self.var_from(assignable);
        let rest: Vec<Var> = assignable.iter().filter(|v| **v != counter).cloned().collect();
        let lo = self.rng.gen_range(-2..=1);
        let hi = lo + self.rng.gen_range(1..=4);
        let mut body = if self.budget > 0 {
            self.block(&rest, depth - 1, 3)
        } else {
            Vec::new()
        };
        body.push(Stmt::Assign(
            counter.clone(),
            Expr::binary(BinOp::Add, Expr::Var(counter.clone()), Expr::int(1)),
        ));
        let guard = Pred::cmp(CmpOp::Lt, Expr::Var(counter.clone()), Expr::int(hi));
        out.push(Stmt::Assign(counter, Expr::int(lo)));
        out.push(Stmt::While(guard, body));
    }

    fn program(&mut self) -> Program {
        let count = self.rng.gen_range(1..=self.bounds.max_vars.min(NAMES.len()));
        self.vars = NAMES[..count]
            .iter()
            .enumerate()
            .map(|(i, name)| Var::new(i as u32, *name))
            .collect();
        self.budget = self.bounds.max_statements;
        self.errors = 0;
        let vars = self.vars.clone();
        let mut body = Vec::new();
        // mostly concrete initial values, so that error guards need tracking
        for var in &vars {
            self.budget -= 1;
            if self.rng.gen_bool(0.85) {
                body.push(Stmt::Assign(var.clone(), Expr::int(self.literal())));
            } else {
                body.push(Stmt::Nondet(var.clone()));
            }
        }
        // reserve a guarded error check in case none gets generated
        self.budget -= 2;
        let len = self.rng.gen_range(3..=12);
        for _ in 0..len {
            if self.budget == 0 {
                break;
            }
            self.stmt(&vars, 2, &mut body);
        }
        if self.errors == 0 {
            body.push(Stmt::If(self.pred(), vec![Stmt::Error], None));
        }
        Program {
            variables: vars,
            body,
        }
    }
}

/// Number of statements, counting nested ones.
pub fn statement_count(stmts: &[Stmt]) -> usize {
    stmts
        .iter()
        .map(|s| {
            1 + match s {
                Stmt::If(_, then, els) => {
                    statement_count(then) + els.as_deref().map_or(0, statement_count)
                }
                Stmt::While(_, body) => statement_count(body),
                _ => 0,
            }
        })
        .sum()
}

pub fn random_program_ast(seed: u64, index: usize, bounds: RandomBounds) -> Program {
    let stream = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index as u64;
    let mut generator = Generator {
        rng: ChaCha8Rng::seed_from_u64(stream),
        bounds,
        vars: Vec::new(),
        budget: 0,
        errors: 0,
    };
    generator.program()
}

/// `(file name, source)` pairs, deterministic in `seed`.
pub fn random_programs(seed: u64, count: usize, bounds: RandomBounds) -> Vec<(String, String)> {
    (0..count)
        .map(|i| {
            let program = random_program_ast(seed, i, bounds);
            (format!("rand_s{seed}_{i:04}.imp"), program.to_string())
        })
        .collect()
}

pub fn write_random(seed: u64, count: usize, out: &Path) -> Result<Vec<PathBuf>> {
    random_programs(seed, count, RandomBounds::default())
        .into_iter()
        .map(|(name, source)| write_file(out, &name, &source))
        .collect()
}

const CORPUS_BOUNDS: [u64; 4] = [10, 200, 5_000, 80_000];

/// The mixed comparison corpus: family variants over several loop bounds
/// plus random programs, `size` tasks in total.
pub fn comparison_corpus(seed: u64, size: usize) -> Vec<(String, String)> {
    let mut tasks = Vec::new();
    for n in CORPUS_BOUNDS {
        for variant in Fig2Variant::ALL {
            // the unsafe variant only terminates by unrolling; keep it small
            if variant == Fig2Variant::Unsafe && n > 200 {
                continue;
            }
            let source = fig2_variant(n, variant).expect("positive bound");
            tasks.push((format!("fig2_{}_n{n}.imp", variant.name()), source));
        }
    }
    tasks.truncate(size);
    let remaining = size - tasks.len();
    tasks.extend(random_programs(seed, remaining, RandomBounds::default()));
    tasks
}

pub fn write_corpus(tasks: &[(String, String)], out: &Path) -> Result<Vec<PathBuf>> {
    tasks
        .iter()
        .map(|(name, source)| write_file(out, name, source))
        .collect()
}
