//! Abstract syntax of call-by-value PCF with effect emission.

mod lex;
pub mod mnf;
pub(crate) mod parse;
mod print;
pub mod types;

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::trace::Label;

pub(crate) use lex::{lex, Tok, TokKind};
pub use parse::{parse_expr, parse_mnf_expr, ParseError};

/// A variable name. `_` is the wildcard binder, which binds nothing.
pub type Name = Arc<str>;

pub const WILDCARD: &str = "_";

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

pub fn is_wildcard(n: &str) -> bool {
    n == WILDCARD
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(Name),
    Zero,
    Succ(Box<Expr>),
    /// `case scrutinee { z => zero | s(succ_var) => succ }`
    Case {
        zero: Box<Expr>,
        succ_var: Name,
        succ: Box<Expr>,
        scrutinee: Box<Expr>,
    },
    /// `fun self_var(param) => body`, a recursive function.
    Lam {
        self_var: Name,
        param: Name,
        body: Box<Expr>,
    },
    App(Box<Expr>, Box<Expr>),
    Eff(Label, Box<Expr>),
    /// Only part of the monadic-normal-form dialect.
    Let {
        var: Name,
        bound: Box<Expr>,
        body: Box<Expr>,
    },
}

impl Expr {
    pub fn var(n: &str) -> Expr {
        Expr::Var(name(n))
    }

    pub fn succ(e: Expr) -> Expr {
        Expr::Succ(Box::new(e))
    }

    pub fn case(scrutinee: Expr, zero: Expr, succ_var: &str, succ: Expr) -> Expr {
        Expr::Case {
            zero: Box::new(zero),
            succ_var: name(succ_var),
            succ: Box::new(succ),
            scrutinee: Box::new(scrutinee),
        }
    }

    pub fn lam(self_var: &str, param: &str, body: Expr) -> Expr {
        Expr::Lam {
            self_var: name(self_var),
            param: name(param),
            body: Box::new(body),
        }
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }

    pub fn eff(label: Label, body: Expr) -> Expr {
        Expr::Eff(label, Box::new(body))
    }

    pub fn let_(var: &str, bound: Expr, body: Expr) -> Expr {
        Expr::Let {
            var: name(var),
            bound: Box::new(bound),
            body: Box::new(body),
        }
    }

    /// The numeral `s^n(z)`.
    pub fn numeral(n: usize) -> Expr {
        (0..n).fold(Expr::Zero, |e, _| Expr::succ(e))
    }

    /// `Some(n)` when the expression is the numeral `s^n(z)`.
    pub fn as_numeral(&self) -> Option<usize> {
        let mut n = 0;
        let mut e = self;
        loop {
            match e {
                Expr::Zero => return Some(n),
                Expr::Succ(inner) => {
                    n += 1;
                    e = inner;
                }
                _ => return None,
            }
        }
    }

    pub fn is_lam(&self) -> bool {
        matches!(self, Expr::Lam { .. })
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Immediate subexpressions in source order.
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Var(_) | Expr::Zero => vec![],
            Expr::Succ(e) | Expr::Eff(_, e) => vec![e],
            Expr::Lam { body, .. } => vec![body],
            Expr::Case {
                zero,
                succ,
                scrutinee,
                ..
            } => vec![scrutinee, zero, succ],
            Expr::App(f, a) => vec![f, a],
            Expr::Let { bound, body, .. } => vec![bound, body],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        let mut bound = Vec::new();
        closed_under(self, &mut bound)
    }
}

fn collect_free(e: &Expr, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match e {
        Expr::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Expr::Zero => {}
        Expr::Succ(e) | Expr::Eff(_, e) => collect_free(e, bound, out),
        Expr::App(f, a) => {
            collect_free(f, bound, out);
            collect_free(a, bound, out);
        }
        Expr::Case {
            zero,
            succ_var,
            succ,
            scrutinee,
        } => {
            collect_free(scrutinee, bound, out);
            collect_free(zero, bound, out);
            bound.push(succ_var.clone());
            collect_free(succ, bound, out);
            bound.pop();
        }
        Expr::Lam {
            self_var,
            param,
            body,
        } => {
            bound.push(self_var.clone());
            bound.push(param.clone());
            collect_free(body, bound, out);
            bound.truncate(bound.len() - 2);
        }
        Expr::Let { var, bound: b, body } => {
            collect_free(b, bound, out);
            bound.push(var.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
    }
}

fn closed_under(e: &Expr, bound: &mut Vec<Name>) -> bool {
    match e {
        Expr::Var(x) => bound.contains(x),
        Expr::Zero => true,
        Expr::Succ(e) | Expr::Eff(_, e) => closed_under(e, bound),
        Expr::App(f, a) => closed_under(f, bound) && closed_under(a, bound),
        Expr::Case {
            zero,
            succ_var,
            succ,
            scrutinee,
        } => {
            if !closed_under(scrutinee, bound) || !closed_under(zero, bound) {
                return false;
            }
            bound.push(succ_var.clone());
            let ok = closed_under(succ, bound);
            bound.pop();
            ok
        }
        Expr::Lam {
            self_var,
            param,
            body,
        } => {
            bound.push(self_var.clone());
            bound.push(param.clone());
            let ok = closed_under(body, bound);
            bound.truncate(bound.len() - 2);
            ok
        }
        Expr::Let { var, bound: b, body } => {
            if !closed_under(b, bound) {
                return false;
            }
            bound.push(var.clone());
            let ok = closed_under(body, bound);
            bound.pop();
            ok
        }
    }
}

/// Values of the plain dialect: numerals and functions.
pub fn is_value(e: &Expr) -> bool {
    match e {
        Expr::Zero | Expr::Lam { .. } => true,
        Expr::Succ(e) => is_value(e),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("substituted value for `{0}` is not closed")]
    OpenValue(Name),
}

/// A finite map from names to closed values, applied simultaneously.
/// Later entries win over earlier ones with the same name; entries for `_`
/// are ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Binding(Vec<(Name, Expr)>);

impl Binding {
    pub fn new() -> Self {
        Binding(Vec::new())
    }

    pub fn single(x: &Name, v: Expr) -> Self {
        let mut b = Binding::new();
        b.bind(x, v);
        b
    }

    pub fn bind(&mut self, x: &Name, v: Expr) -> &mut Self {
        if !is_wildcard(x) {
            self.0.push((x.clone(), v));
        }
        self
    }

    pub fn pairs(&self) -> &[(Name, Expr)] {
        &self.0
    }

    fn lookup<'a>(active: &[&'a (Name, Expr)], x: &Name) -> Option<&'a Expr> {
        active.iter().rev().find(|(n, _)| n == x).map(|(_, v)| v)
    }
}

/// `e[b]`: simultaneous substitution of closed values. Closedness makes
/// capture impossible, so no renaming is needed.
pub fn subst(e: &Expr, b: &Binding) -> Result<Expr, SubstError> {
    for (x, v) in &b.0 {
        if !v.is_closed() {
            return Err(SubstError::OpenValue(x.clone()));
        }
    }
    let active: Vec<&(Name, Expr)> = b.0.iter().collect();
    Ok(subst_active(e, &active))
}

fn shadow<'a>(active: &[&'a (Name, Expr)], binders: &[&Name]) -> Option<Vec<&'a (Name, Expr)>> {
    if active.iter().any(|(n, _)| binders.contains(&n)) {
        Some(
            active
                .iter()
                .copied()
                .filter(|(n, _)| !binders.contains(&n))
                .collect(),
        )
    } else {
        None
    }
}

fn subst_active(e: &Expr, active: &[&(Name, Expr)]) -> Expr {
    if active.is_empty() {
        return e.clone();
    }
    match e {
        Expr::Var(x) => Binding::lookup(active, x).cloned().unwrap_or_else(|| e.clone()),
        Expr::Zero => Expr::Zero,
        Expr::Succ(inner) => Expr::succ(subst_active(inner, active)),
        Expr::Eff(l, inner) => Expr::Eff(l.clone(), Box::new(subst_active(inner, active))),
        Expr::App(f, a) => Expr::app(subst_active(f, active), subst_active(a, active)),
        Expr::Case {
            zero,
            succ_var,
            succ,
            scrutinee,
        } => {
            let inner = shadow(active, &[succ_var]);
            Expr::Case {
                zero: Box::new(subst_active(zero, active)),
                succ_var: succ_var.clone(),
                succ: Box::new(subst_active(succ, inner.as_deref().unwrap_or(active))),
                scrutinee: Box::new(subst_active(scrutinee, active)),
            }
        }
        Expr::Lam {
            self_var,
            param,
            body,
        } => {
            let inner = shadow(active, &[self_var, param]);
            Expr::Lam {
                self_var: self_var.clone(),
                param: param.clone(),
                body: Box::new(subst_active(body, inner.as_deref().unwrap_or(active))),
            }
        }
        Expr::Let { var, bound, body } => {
            let inner = shadow(active, &[var]);
            Expr::Let {
                var: var.clone(),
                bound: Box::new(subst_active(bound, active)),
                body: Box::new(subst_active(body, inner.as_deref().unwrap_or(active))),
            }
        }
    }
}

/// The body of `fun f(x) => body` applied to `arg`: `body[f ↦ fun, x ↦ arg]`.
pub fn beta(lam: &Expr, arg: &Expr) -> Result<Expr, SubstError> {
    match lam {
        Expr::Lam {
            self_var,
            param,
            body,
        } => {
            let mut b = Binding::new();
            b.bind(self_var, lam.clone()).bind(param, arg.clone());
            subst(body, &b)
        }
        _ => unreachable!("beta on a non-function"),
    }
}

/// The successor branch of a case instantiated with predecessor `v`.
pub fn case_succ_branch(succ_var: &Name, succ: &Expr, v: &Expr) -> Result<Expr, SubstError> {
    subst(succ, &Binding::single(succ_var, v.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn values() {
        assert!(is_value(&p("s(s(z))")));
        assert!(is_value(&p("fun f(x) => f x")));
        assert!(!is_value(&p("s((fun _(x) => x) z)")));
        assert!(!is_value(&p("eff[a] z")));
    }

    #[test]
    fn wildcard_binds_nothing() {
        let e = p("fun _(x) => x");
        let got = beta(&e, &Expr::Zero).unwrap();
        assert_eq!(got, Expr::Zero);
    }

    #[test]
    fn later_binding_wins() {
        let x = name("x");
        let mut b = Binding::new();
        b.bind(&x, Expr::Zero).bind(&x, Expr::numeral(1));
        assert_eq!(subst(&Expr::var("x"), &b).unwrap(), Expr::numeral(1));
    }

    #[test]
    fn binders_shadow() {
        let e = p("fun f(x) => x");
        let got = subst(&e, &Binding::single(&name("x"), Expr::Zero)).unwrap();
        assert_eq!(got, e);
    }

    #[test]
    fn open_value_rejected() {
        let b = Binding::single(&name("x"), Expr::var("y"));
        assert_eq!(
            subst(&Expr::var("x"), &b),
            Err(SubstError::OpenValue(name("x")))
        );
    }

    #[test]
    fn recursive_beta_substitutes_self() {
        let lam = p("fun f(x) => f x");
        let got = beta(&lam, &Expr::Zero).unwrap();
        assert_eq!(got, Expr::app(lam.clone(), Expr::Zero));
    }

    #[test]
    fn free_variables() {
        let e = p("fun f(x) => case y { z => x | s(w) => w }");
        assert_eq!(e.free_vars().into_iter().collect::<Vec<_>>(), vec![name("y")]);
        assert!(!e.is_closed());
        assert!(p("fun f(x) => f x").is_closed());
    }
}
