use super::{AExpr, ImpState, Stmt};
use crate::syntax::parse::Cursor;
use crate::syntax::{name, ParseError, TokKind};

const KEYWORDS: &[&str] = &["skip", "if", "then", "while", "do"];

/// Parses `skip`, `x := a`, `s ; s`, `if a then { s }`, `while a do { s }`
/// and `{ s }` for grouping. Sequencing associates to the right.
pub fn parse_stmt(src: &str) -> Result<Stmt, ParseError> {
    let mut cur = Cursor::new(src)?;
    let s = seq(&mut cur)?;
    cur.expect_eof()?;
    Ok(s)
}

fn seq(cur: &mut Cursor) -> Result<Stmt, ParseError> {
    let first = simple(cur)?;
    if cur.is_sym(";") {
        cur.bump();
        return Ok(Stmt::seq(first, seq(cur)?));
    }
    Ok(first)
}

fn block(cur: &mut Cursor) -> Result<Stmt, ParseError> {
    cur.expect_sym("{")?;
    let s = seq(cur)?;
    cur.expect_sym("}")?;
    Ok(s)
}

fn simple(cur: &mut Cursor) -> Result<Stmt, ParseError> {
    if cur.is_sym("{") {
        return block(cur);
    }
    if cur.is_word("skip") {
        cur.bump();
        return Ok(Stmt::Skip);
    }
    if cur.is_word("if") {
        cur.bump();
        let a = aexpr(cur)?;
        cur.expect_word("then")?;
        return Ok(Stmt::if_(a, block(cur)?));
    }
    if cur.is_word("while") {
        cur.bump();
        let a = aexpr(cur)?;
        cur.expect_word("do")?;
        return Ok(Stmt::while_(a, block(cur)?));
    }
    match cur.peek().clone() {
        TokKind::Ident(x) if !KEYWORDS.contains(&x.as_str()) => {
            cur.bump();
            cur.expect_sym(":=")?;
            Ok(Stmt::Assign(name(&x), aexpr(cur)?))
        }
        _ => Err(cur.error(format!("expected statement, found {}", cur.describe()))),
    }
}

fn aexpr(cur: &mut Cursor) -> Result<AExpr, ParseError> {
    let mut a = term(cur)?;
    loop {
        if cur.is_sym("+") {
            cur.bump();
            a = AExpr::plus(a, term(cur)?);
        } else if cur.is_sym("-") {
            cur.bump();
            a = AExpr::minus(a, term(cur)?);
        } else {
            return Ok(a);
        }
    }
}

fn term(cur: &mut Cursor) -> Result<AExpr, ParseError> {
    let mut a = factor(cur)?;
    while cur.is_sym("*") {
        cur.bump();
        a = AExpr::times(a, factor(cur)?);
    }
    Ok(a)
}

fn factor(cur: &mut Cursor) -> Result<AExpr, ParseError> {
    match cur.peek().clone() {
        TokKind::Int(n) => {
            cur.bump();
            Ok(AExpr::Lit(n))
        }
        TokKind::Sym("-") => {
            cur.bump();
            match cur.peek().clone() {
                TokKind::Int(n) => {
                    cur.bump();
                    Ok(AExpr::Lit(-n))
                }
                _ => Err(cur.error("expected integer after unary `-`")),
            }
        }
        TokKind::Sym("(") => {
            cur.bump();
            let a = aexpr(cur)?;
            cur.expect_sym(")")?;
            Ok(a)
        }
        TokKind::Ident(x) if !KEYWORDS.contains(&x.as_str()) => {
            cur.bump();
            Ok(AExpr::Var(name(&x)))
        }
        _ => Err(cur.error(format!("expected arithmetic expression, found {}", cur.describe()))),
    }
}

/// Parses an initial state written `x=2,y=0`.
pub fn parse_bindings(src: &str) -> Result<ImpState, ParseError> {
    let mut cur = Cursor::new(src)?;
    let mut state = ImpState::new();
    if matches!(cur.peek(), TokKind::Eof) {
        return Ok(state);
    }
    loop {
        let x = match cur.peek().clone() {
            TokKind::Ident(x) => x,
            _ => return Err(cur.error(format!("expected variable, found {}", cur.describe()))),
        };
        cur.bump();
        cur.expect_sym("=")?;
        let v = match factor(&mut cur)? {
            AExpr::Lit(n) => n,
            _ => return Err(cur.error("expected integer value")),
        };
        state.update(&name(&x), v);
        if cur.is_sym(",") {
            cur.bump();
        } else {
            cur.expect_eof()?;
            return Ok(state);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statements() {
        let s = parse_stmt("x := 2; while x do { x := x - 1 }").unwrap();
        assert!(matches!(s, Stmt::Seq(..)));
        assert!(parse_stmt("while x { skip }").is_err());
        assert_eq!(parse_stmt("x := -3").unwrap(), Stmt::assign("x", AExpr::Lit(-3)));
    }

    #[test]
    fn bindings() {
        let s = parse_bindings("x=2,y=-1").unwrap();
        assert_eq!((s.get("x"), s.get("y")), (2, -1));
        assert!(parse_bindings("x").is_err());
        assert_eq!(parse_bindings("").unwrap(), ImpState::new());
    }
}
