//! A while-language over integer variables.

mod parse;
mod semantics;

use std::collections::BTreeMap;
use std::fmt;

use crate::syntax::Name;

pub use parse::{parse_bindings, parse_stmt};
pub use semantics::{
    imp_bigstep, imp_bigstop, imp_bigstop_freeze, imp_multi_step, imp_small_step, Done,
    FuelExhausted, ImpRule, ImpRun, ImpStatus,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AExpr {
    Lit(i64),
    Var(Name),
    Add(Box<AExpr>, Box<AExpr>),
    Sub(Box<AExpr>, Box<AExpr>),
    Mul(Box<AExpr>, Box<AExpr>),
}

impl AExpr {
    pub fn var(x: &str) -> AExpr {
        AExpr::Var(crate::syntax::name(x))
    }

    pub fn plus(a: AExpr, b: AExpr) -> AExpr {
        AExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn minus(a: AExpr, b: AExpr) -> AExpr {
        AExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn times(a: AExpr, b: AExpr) -> AExpr {
        AExpr::Mul(Box::new(a), Box::new(b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Stmt {
    Skip,
    Assign(Name, AExpr),
    Seq(Box<Stmt>, Box<Stmt>),
    If(AExpr, Box<Stmt>),
    While(AExpr, Box<Stmt>),
}

impl Stmt {
    pub fn assign(x: &str, a: AExpr) -> Stmt {
        Stmt::Assign(crate::syntax::name(x), a)
    }

    pub fn seq(a: Stmt, b: Stmt) -> Stmt {
        Stmt::Seq(Box::new(a), Box::new(b))
    }

    pub fn if_(a: AExpr, s: Stmt) -> Stmt {
        Stmt::If(a, Box::new(s))
    }

    pub fn while_(a: AExpr, s: Stmt) -> Stmt {
        Stmt::While(a, Box::new(s))
    }

    /// Number of statement nodes.
    pub fn size(&self) -> usize {
        match self {
            Stmt::Skip | Stmt::Assign(..) => 1,
            Stmt::Seq(a, b) => 1 + a.size() + b.size(),
            Stmt::If(_, s) | Stmt::While(_, s) => 1 + s.size(),
        }
    }
}

/// A variable store. Unbound variables read as 0. A frozen state ignores
/// updates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ImpState {
    pub bindings: BTreeMap<Name, i64>,
    pub frozen: bool,
}

impl ImpState {
    pub fn new() -> Self {
        ImpState::default()
    }

    pub fn from_pairs(pairs: &[(&str, i64)]) -> Self {
        let mut s = ImpState::new();
        for (x, v) in pairs {
            s.bindings.insert(crate::syntax::name(x), *v);
        }
        s
    }

    pub fn get(&self, x: &str) -> i64 {
        self.bindings.get(x).copied().unwrap_or(0)
    }

    /// `[v/x]σ`; the identity on frozen states.
    pub fn update(&mut self, x: &Name, v: i64) {
        if !self.frozen {
            self.bindings.insert(x.clone(), v);
        }
    }

    pub fn freeze(mut self) -> Self {
        self.frozen = true;
        self
    }
}

/// `σ(a)`, with wrapping machine arithmetic.
pub fn aeval(s: &ImpState, a: &AExpr) -> i64 {
    match a {
        AExpr::Lit(n) => *n,
        AExpr::Var(x) => s.get(x),
        AExpr::Add(a, b) => aeval(s, a).wrapping_add(aeval(s, b)),
        AExpr::Sub(a, b) => aeval(s, a).wrapping_sub(aeval(s, b)),
        AExpr::Mul(a, b) => aeval(s, a).wrapping_mul(aeval(s, b)),
    }
}

/// `⟨s | σ⟩`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImpConfig {
    pub stmt: Stmt,
    pub state: ImpState,
}

impl ImpConfig {
    pub fn new(stmt: Stmt, state: ImpState) -> Self {
        ImpConfig { stmt, state }
    }
}

fn write_aexpr(a: &AExpr, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (mine, op, l, r) = match a {
        AExpr::Lit(n) if *n < 0 && prec > 0 => return write!(f, "({n})"),
        AExpr::Lit(n) => return write!(f, "{n}"),
        AExpr::Var(x) => return f.write_str(x),
        AExpr::Add(l, r) => (1, "+", l, r),
        AExpr::Sub(l, r) => (1, "-", l, r),
        AExpr::Mul(l, r) => (2, "*", l, r),
    };
    if mine < prec {
        f.write_str("(")?;
    }
    write_aexpr(l, mine, f)?;
    write!(f, " {op} ")?;
    write_aexpr(r, mine + 1, f)?;
    if mine < prec {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for AExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_aexpr(self, 0, f)
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Skip => f.write_str("skip"),
            Stmt::Assign(x, a) => write!(f, "{x} := {a}"),
            Stmt::Seq(a, b) => {
                if matches!(**a, Stmt::Seq(..)) {
                    write!(f, "{{ {a} }}; {b}")
                } else {
                    write!(f, "{a}; {b}")
                }
            }
            Stmt::If(a, s) => write!(f, "if {a} then {{ {s} }}"),
            Stmt::While(a, s) => write!(f, "while {a} do {{ {s} }}"),
        }
    }
}

impl fmt::Display for ImpState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.frozen {
            f.write_str("freeze(")?;
        }
        f.write_str("{")?;
        for (i, (x, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}:{v}")?;
        }
        f.write_str("}")?;
        if self.frozen {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for ImpConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{} | {}⟩", self.stmt, self.state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let s = ImpState::from_pairs(&[("x", 2)]);
        assert_eq!(aeval(&s, &AExpr::minus(AExpr::var("x"), AExpr::Lit(1))), 1);
        assert_eq!(aeval(&ImpState::new(), &AExpr::var("y")), 0);
        let s = ImpState::from_pairs(&[("x", 3)]);
        let a = AExpr::plus(AExpr::times(AExpr::var("x"), AExpr::var("x")), AExpr::Lit(1));
        assert_eq!(aeval(&s, &a), 10);
    }

    #[test]
    fn frozen_states_ignore_updates() {
        let mut s = ImpState::from_pairs(&[("x", 1)]).freeze();
        s.update(&crate::syntax::name("x"), 9);
        assert_eq!(s.get("x"), 1);
    }

    #[test]
    fn printing() {
        let s = parse_stmt("while x do { x := x - 1 }; if y * (x + 1) then { skip }").unwrap();
        assert_eq!(s.to_string(), "while x do { x := x - 1 }; if y * (x + 1) then { skip }");
        let left = Stmt::seq(Stmt::seq(Stmt::Skip, Stmt::Skip), Stmt::Skip);
        assert_eq!(parse_stmt(&left.to_string()).unwrap(), left);
        assert_eq!(ImpState::from_pairs(&[("y", 1), ("x", 0)]).to_string(), "{x:0, y:1}");
    }
}
