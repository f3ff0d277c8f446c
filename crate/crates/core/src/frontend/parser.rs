use std::collections::HashMap;

use super::ast::{BinOp, CmpOp, Expr, Pred, Program, Stmt, Var};
use super::lexer::{tokenize, Spanned, Token};
use super::{ParseError, ParseErrorKind};

/// Parses program text into an AST, resolving every identifier against the
/// declarations.
pub fn parse(source: &str) -> Result<Program, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        scope: HashMap::new(),
        variables: Vec::new(),
    };
    parser.program().map_err(|failure| failure.error)
}

/// A parse error tagged with the token index where it was raised, so the
/// alternative that got further wins when backtracking.
struct Failure {
    at: usize,
    error: ParseError,
}

type PResult<T> = Result<T, Failure>;

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    scope: HashMap<String, Var>,
    variables: Vec<Var>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn peek_at(&self, offset: usize) -> &Token {
        let idx = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[idx].token
    }

    fn advance(&mut self) -> Token {
        let token = self.tokens[self.pos].token.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        token
    }

    fn fail<T>(&self, kind: ParseErrorKind) -> PResult<T> {
        let span = &self.tokens[self.pos];
        Err(Failure {
            at: self.pos,
            error: ParseError {
                line: span.line,
                column: span.column,
                kind,
            },
        })
    }

    fn unexpected<T>(&self, expected: &str) -> PResult<T> {
        self.fail(ParseErrorKind::Syntax {
            expected: expected.to_string(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, token: Token, expected: &str) -> PResult<()> {
        if *self.peek() == token {
            self.advance();
            Ok(())
        } else {
            self.unexpected(expected)
        }
    }

    fn program(&mut self) -> PResult<Program> {
        while *self.peek() == Token::Var {
            self.declaration()?;
        }
        let mut body = Vec::new();
        while *self.peek() != Token::Eof {
            body.push(self.statement()?);
        }
        Ok(Program {
            variables: std::mem::take(&mut self.variables),
            body,
        })
    }

    fn declaration(&mut self) -> PResult<()> {
        self.expect(Token::Var, "`var`")?;
        loop {
            let Token::Ident(name) = self.peek().clone() else {
                return self.unexpected("variable name");
            };
            if self.scope.contains_key(&name) {
                return self.fail(ParseErrorKind::DuplicateDeclaration(name));
            }
            self.advance();
            let var = Var::new(self.variables.len() as u32, name.as_str());
            self.scope.insert(name, var.clone());
            self.variables.push(var);
            match self.peek() {
                Token::Comma => {
                    self.advance();
                }
                Token::Semi => {
                    self.advance();
                    return Ok(());
                }
                _ => return self.unexpected("`,` or `;`"),
            }
        }
    }

    fn resolve(&self, name: &str) -> PResult<Var> {
        match self.scope.get(name) {
            Some(var) => Ok(var.clone()),
            None => self.fail(ParseErrorKind::UndeclaredVariable(name.to_string())),
        }
    }

    fn block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect(Token::LBrace, "`{`")?;
        let mut stmts = Vec::new();
        while *self.peek() != Token::RBrace {
            if *self.peek() == Token::Eof {
                return self.unexpected("`}`");
            }
            stmts.push(self.statement()?);
        }
        self.advance();
        Ok(stmts)
    }

    fn statement(&mut self) -> PResult<Stmt> {
        match self.peek().clone() {
            Token::Ident(name) => {
                let var = self.resolve(&name)?;
                self.advance();
                self.expect(Token::Assign, "`:=`")?;
                if *self.peek() == Token::Nondet {
                    self.advance();
                    self.expect(Token::LParen, "`(`")?;
                    self.expect(Token::RParen, "`)`")?;
                    self.expect(Token::Semi, "`;`")?;
                    return Ok(Stmt::Nondet(var));
                }
                let value = self.expr()?;
                self.expect(Token::Semi, "`;`")?;
                Ok(Stmt::Assign(var, value))
            }
            Token::If => {
                self.advance();
                let cond = self.paren_pred()?;
                let then_branch = self.block()?;
                let else_branch = if *self.peek() == Token::Else {
                    self.advance();
                    Some(self.block()?)
                } else {
                    None
                };
                Ok(Stmt::If(cond, then_branch, else_branch))
            }
            Token::While => {
                self.advance();
                let cond = self.paren_pred()?;
                let body = self.block()?;
                Ok(Stmt::While(cond, body))
            }
            Token::Assume => {
                self.advance();
                let cond = self.paren_pred()?;
                self.expect(Token::Semi, "`;`")?;
                Ok(Stmt::Assume(cond))
            }
            Token::Error => {
                self.advance();
                self.expect(Token::Semi, "`;`")?;
                Ok(Stmt::Error)
            }
            Token::Var => self.unexpected("statement (declarations must come first)"),
            _ => self.unexpected("statement"),
        }
    }

    fn paren_pred(&mut self) -> PResult<Pred> {
        self.expect(Token::LParen, "`(`")?;
        let pred = self.pred()?;
        self.expect(Token::RParen, "`)`")?;
        Ok(pred)
    }

    fn pred(&mut self) -> PResult<Pred> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Token::OrOr {
            self.advance();
            let rhs = self.conjunction()?;
            lhs = Pred::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Pred> {
        let mut lhs = self.pred_unary()?;
        while *self.peek() == Token::AndAnd {
            self.advance();
            let rhs = self.pred_unary()?;
            lhs = Pred::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn pred_unary(&mut self) -> PResult<Pred> {
        match self.peek() {
            Token::Bang => {
                self.advance();
                Ok(Pred::not(self.pred_unary()?))
            }
            Token::True => {
                self.advance();
                Ok(Pred::Bool(true))
            }
            Token::False => {
                self.advance();
                Ok(Pred::Bool(false))
            }
            Token::LParen => {
                // `(` opens either an arithmetic operand of a comparison or a
                // nested predicate; try the comparison first.
                let start = self.pos;
                match self.comparison() {
                    Ok(pred) => Ok(pred),
                    Err(first) => {
                        self.pos = start;
                        match self.paren_pred() {
                            Ok(pred) => Ok(pred),
                            Err(second) if second.at >= first.at => Err(second),
                            Err(_) => Err(first),
                        }
                    }
                }
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> PResult<Pred> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Token::EqEq => CmpOp::Eq,
            Token::NotEq => CmpOp::Ne,
            Token::Lt => CmpOp::Lt,
            Token::Le => CmpOp::Le,
            Token::Gt => CmpOp::Gt,
            Token::Ge => CmpOp::Ge,
            _ => return self.unexpected("comparison operator"),
        };
        self.advance();
        let rhs = self.expr()?;
        Ok(Pred::cmp(op, lhs, rhs))
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                Token::Percent => BinOp::Rem,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Token::Minus => {
                self.advance();
                // `-3` is the literal -3; `-(3)` negates the literal 3
                if let Token::Int(n) = self.peek().clone() {
                    self.advance();
                    return Ok(Expr::Int(-n));
                }
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Token::Int(n) => {
                self.advance();
                Ok(Expr::Int(n))
            }
            Token::Ident(name) => {
                let var = self.resolve(&name)?;
                self.advance();
                Ok(Expr::Var(var))
            }
            Token::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::Nondet if *self.peek_at(1) == Token::LParen => {
                self.unexpected("expression (`nondet()` may only appear as `x := nondet();`)")
            }
            _ => self.unexpected("expression"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_declaration_and_assignment() {
        let program = parse("var x; x := 1;").unwrap();
        assert_eq!(program.variables.len(), 1);
        assert_eq!(program.variables[0].name(), "x");
        assert_eq!(
            program.body,
            vec![Stmt::Assign(program.variables[0].clone(), Expr::int(1))]
        );
    }

    #[test]
    fn undeclared_variable_is_rejected() {
        let err = parse("var x; x := y;").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UndeclaredVariable("y".into()));
        assert_eq!((err.line, err.column), (1, 13));
    }

    #[test]
    fn duplicate_declaration_is_rejected() {
        let err = parse("var x, y;\nvar x;").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateDeclaration("x".into()));
        assert_eq!(err.line, 2);
    }

    #[test]
    fn loop_with_guarded_error() {
        let src = "var b,i; b := 1; i := 0; while (i < 1000) { i := i + 1; } if (b == 0) { error; }";
        let program = parse(src).unwrap();
        assert_eq!(program.body.len(), 4);
        assert!(matches!(program.body[2], Stmt::While(..)));
        match &program.body[3] {
            Stmt::If(_, then_branch, None) => assert_eq!(then_branch, &vec![Stmt::Error]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parenthesised_operands_and_predicates() {
        let program =
            parse("var x, y; assume((x + 1) * 2 < y && (x == 0 || !(y != 3)));").unwrap();
        let Stmt::Assume(Pred::And(lhs, rhs)) = &program.body[0] else {
            panic!("expected conjunction");
        };
        assert!(matches!(lhs.as_ref(), Pred::Cmp(CmpOp::Lt, ..)));
        assert!(matches!(rhs.as_ref(), Pred::Or(..)));
    }

    #[test]
    fn nondet_only_as_assignment() {
        assert!(parse("var x; x := nondet();").is_ok());
        assert!(parse("var x; x := nondet() + 1;").is_err());
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse("var x;\nx := 1\nx := 2;").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax { .. }));
        assert_eq!((err.line, err.column), (3, 1));
    }

    #[test]
    fn comments_are_skipped() {
        let program = parse("// header\nvar x; // trailing\nx := 2; // done").unwrap();
        assert_eq!(program.body.len(), 1);
    }
}
