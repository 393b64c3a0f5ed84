use thiserror::Error;

use super::{is_wildcard, lex, name, Expr, Name, Tok, TokKind};
use crate::trace::Label;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

const KEYWORDS: &[&str] = &["fun", "case", "eff", "let", "in", "z", "s"];

/// Token cursor shared by the PCF and IMP parsers.
pub(crate) struct Cursor {
    toks: Vec<Tok>,
    pos: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Cursor {
            toks: lex(src)?,
            pos: 0,
        })
    }

    pub fn peek(&self) -> &TokKind {
        &self.toks[self.pos].kind
    }

    pub fn bump(&mut self) -> TokKind {
        let k = self.toks[self.pos].kind.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        k
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            col: t.col,
            message: message.into(),
        }
    }

    pub fn describe(&self) -> String {
        match self.peek() {
            TokKind::Ident(s) => format!("`{s}`"),
            TokKind::Int(n) => format!("`{n}`"),
            TokKind::Sym(s) => format!("`{s}`"),
            TokKind::Eof => "end of input".to_string(),
        }
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), TokKind::Sym(t) if *t == s)
    }

    pub fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), TokKind::Ident(t) if t == w)
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`, found {}", self.describe())))
        }
    }

    pub fn expect_word(&mut self, w: &str) -> Result<(), ParseError> {
        if self.is_word(w) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected `{w}`, found {}", self.describe())))
        }
    }

    pub fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            TokKind::Eof => Ok(()),
            _ => Err(self.error(format!("unexpected {}", self.describe()))),
        }
    }
}

struct Parser {
    cur: Cursor,
    allow_let: bool,
}

/// Parses a plain PCF expression. `let` is rejected.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    parse_with(src, false)
}

/// Parses an expression of the dialect that also admits `let x = e in e`.
pub fn parse_mnf_expr(src: &str) -> Result<Expr, ParseError> {
    parse_with(src, true)
}

fn parse_with(src: &str, allow_let: bool) -> Result<Expr, ParseError> {
    let mut p = Parser {
        cur: Cursor::new(src)?,
        allow_let,
    };
    let e = p.expr()?;
    p.cur.expect_eof()?;
    Ok(e)
}

impl Parser {
    fn expr(&mut self) -> Result<Expr, ParseError> {
        if self.cur.is_word("fun") {
            self.cur.bump();
            let self_var = self.binder()?;
            self.cur.expect_sym("(")?;
            let param = self.binder()?;
            self.cur.expect_sym(")")?;
            self.cur.expect_sym("=>")?;
            let body = self.expr()?;
            return Ok(Expr::Lam {
                self_var,
                param,
                body: Box::new(body),
            });
        }
        if self.cur.is_word("case") {
            self.cur.bump();
            let scrutinee = self.expr()?;
            self.cur.expect_sym("{")?;
            self.cur.expect_word("z")?;
            self.cur.expect_sym("=>")?;
            let zero = self.expr()?;
            self.cur.expect_sym("|")?;
            self.cur.expect_word("s")?;
            self.cur.expect_sym("(")?;
            let succ_var = self.binder()?;
            self.cur.expect_sym(")")?;
            self.cur.expect_sym("=>")?;
            let succ = self.expr()?;
            self.cur.expect_sym("}")?;
            return Ok(Expr::Case {
                zero: Box::new(zero),
                succ_var,
                succ: Box::new(succ),
                scrutinee: Box::new(scrutinee),
            });
        }
        if self.cur.is_word("eff") {
            self.cur.bump();
            self.cur.expect_sym("[")?;
            let label = match self.cur.peek().clone() {
                TokKind::Ident(s) => Label::new(s).map_err(|e| self.cur.error(e.to_string()))?,
                _ => return Err(self.cur.error(format!("expected label, found {}", self.cur.describe()))),
            };
            self.cur.bump();
            self.cur.expect_sym("]")?;
            let body = self.expr()?;
            return Ok(Expr::Eff(label, Box::new(body)));
        }
        if self.cur.is_word("let") {
            if !self.allow_let {
                return Err(self.cur.error("`let` is only available in normal-form programs"));
            }
            self.cur.bump();
            let var = self.binder()?;
            self.cur.expect_sym("=")?;
            let bound = self.expr()?;
            self.cur.expect_word("in")?;
            let body = self.expr()?;
            return Ok(Expr::Let {
                var,
                bound: Box::new(bound),
                body: Box::new(body),
            });
        }
        self.app()
    }

    fn starts_atom(&self) -> bool {
        match self.cur.peek() {
            TokKind::Sym("(") => true,
            TokKind::Ident(s) => {
                s == "z" || s == "s" || (!KEYWORDS.contains(&s.as_str()) && !is_wildcard(s))
            }
            _ => false,
        }
    }

    fn app(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            e = Expr::app(e, arg);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        if self.cur.is_sym("(") {
            self.cur.bump();
            let e = self.expr()?;
            self.cur.expect_sym(")")?;
            return Ok(e);
        }
        if self.cur.is_word("z") {
            self.cur.bump();
            return Ok(Expr::Zero);
        }
        if self.cur.is_word("s") {
            self.cur.bump();
            self.cur.expect_sym("(")?;
            let e = self.expr()?;
            self.cur.expect_sym(")")?;
            return Ok(Expr::succ(e));
        }
        match self.cur.peek().clone() {
            TokKind::Ident(s) if !KEYWORDS.contains(&s.as_str()) && !is_wildcard(&s) => {
                self.cur.bump();
                Ok(Expr::Var(name(&s)))
            }
            _ => Err(self.cur.error(format!("expected expression, found {}", self.cur.describe()))),
        }
    }

    fn binder(&mut self) -> Result<Name, ParseError> {
        match self.cur.peek().clone() {
            TokKind::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.cur.bump();
                Ok(name(&s))
            }
            _ => Err(self.cur.error(format!("expected binder, found {}", self.cur.describe()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn application_is_left_associative() {
        let e = parse_expr("f g h").unwrap();
        assert_eq!(
            e,
            Expr::app(Expr::app(Expr::var("f"), Expr::var("g")), Expr::var("h"))
        );
        let e = parse_expr("fun f(x) => f x x").unwrap();
        match e {
            Expr::Lam { body, .. } => match *body {
                Expr::App(f, _) => assert!(matches!(*f, Expr::App(_, _))),
                _ => panic!(),
            },
            _ => panic!(),
        }
    }

    #[test]
    fn let_only_in_mnf() {
        assert!(parse_expr("let x = z in x").is_err());
        assert!(parse_mnf_expr("let x = z in x").is_ok());
    }

    #[test]
    fn error_position() {
        let err = parse_expr("s(z").unwrap_err();
        assert_eq!((err.line, err.col), (1, 4));
        let err = parse_expr("-- comment\n  case").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn comments_and_case() {
        let e = parse_expr("-- pred\ncase s(z) { z => z | s(n) => n }").unwrap();
        assert!(matches!(e, Expr::Case { .. }));
    }
}
