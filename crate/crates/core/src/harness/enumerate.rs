//! Exhaustive enumeration of small closed well-typed programs and small
//! while-programs.
//!
//! Term size counts every node except variables, so `(fun _(x) => x) z` has
//! size 3. Enumerated programs have type `nat`. Argument types are drawn from
//! `nat` and `nat -> nat`. A term binds at most two names, `x` then `y` in
//! preorder, with no shadowing; every other binder is `_`. Named binders are
//! always referenced, so each renaming class appears once.

use std::collections::{HashMap, HashSet};
use std::fmt::Write;
use std::rc::Rc;

use thiserror::Error;

use crate::imp::{AExpr, Stmt};
use crate::syntax::types::{infer_type, Type, TypeEnv};
use crate::syntax::{name, Expr, Name, WILDCARD};
use crate::trace::Label;

pub const MAX_ENUMERATION_SIZE: usize = 8;

const NAMES: [&str; 2] = ["x", "y"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("enumeration size {0} exceeds the limit of {MAX_ENUMERATION_SIZE}")]
pub struct TooLarge(pub usize);

/// Nodes other than variables.
pub fn enumeration_size(e: &Expr) -> usize {
    match e {
        Expr::Var(_) => 0,
        _ => 1 + e.children().iter().map(|c| enumeration_size(c)).sum::<usize>(),
    }
}

type Ctx = Vec<(Name, Type)>;
/// A term with the number of names bound so far in preorder.
type Terms = Rc<Vec<(Expr, usize)>>;

struct Enumerator<'a> {
    labels: &'a [Label],
    arg_types: Vec<Type>,
    memo: HashMap<(usize, Ctx, Type, usize), Terms>,
}

impl Enumerator<'_> {
    /// Terms of type `ty` with exactly `n` non-variable nodes under `ctx`,
    /// given `used` names already bound.
    fn terms(&mut self, n: usize, ctx: &Ctx, ty: &Type, used: usize) -> Terms {
        let key = (n, ctx.clone(), ty.clone(), used);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut out = Vec::new();
        if n == 0 {
            for (x, t) in ctx {
                if t == ty {
                    out.push((Expr::Var(x.clone()), used));
                }
            }
        } else {
            if n == 1 && *ty == Type::Nat {
                out.push((Expr::Zero, used));
            }
            if *ty == Type::Nat {
                for (t, u) in self.terms(n - 1, ctx, &Type::Nat, used).iter() {
                    out.push((Expr::succ(t.clone()), *u));
                }
            }
            let labels = self.labels.to_vec();
            let bodies = self.terms(n - 1, ctx, ty, used);
            for l in &labels {
                for (t, u) in bodies.iter() {
                    out.push((Expr::eff(l.clone(), t.clone()), *u));
                }
            }
            for a in self.arg_types.clone() {
                let fty = Type::arrow(a.clone(), ty.clone());
                for k in 0..n {
                    let fs = self.terms(k, ctx, &fty, used);
                    for (f, u) in fs.iter() {
                        for (x, u2) in self.terms(n - 1 - k, ctx, &a, *u).iter() {
                            out.push((Expr::app(f.clone(), x.clone()), *u2));
                        }
                    }
                }
            }
            if let Type::Arrow(a, b) = ty {
                for named_f in [false, true] {
                    for named_x in [false, true] {
                        let mut inner = ctx.clone();
                        let mut u = used;
                        let mut bind = |t: &Type, named: bool| {
                            if !named {
                                return Some(name(WILDCARD));
                            }
                            let x = name(NAMES.get(u)?);
                            inner.push((x.clone(), t.clone()));
                            u += 1;
                            Some(x)
                        };
                        let (Some(f), Some(x)) = (bind(ty, named_f), bind(a, named_x)) else {
                            continue;
                        };
                        for (body, u2) in self.terms(n - 1, &inner, b, u).iter() {
                            if uses(body, &f) && uses(body, &x) {
                                out.push((
                                    Expr::Lam {
                                        self_var: f.clone(),
                                        param: x.clone(),
                                        body: Box::new(body.clone()),
                                    },
                                    *u2,
                                ));
                            }
                        }
                    }
                }
            }
            for ks in 0..n {
                for kz in 0..n - ks {
                    let kb = n - 1 - ks - kz;
                    for (s, u1) in self.terms(ks, ctx, &Type::Nat, used).iter() {
                        for (z, u2) in self.terms(kz, ctx, ty, *u1).iter() {
                            let case = |y: &Name, b: &Expr| Expr::Case {
                                zero: Box::new(z.clone()),
                                succ_var: y.clone(),
                                succ: Box::new(b.clone()),
                                scrutinee: Box::new(s.clone()),
                            };
                            let wild = name(WILDCARD);
                            for (b, u3) in self.terms(kb, ctx, ty, *u2).iter() {
                                out.push((case(&wild, b), *u3));
                            }
                            if let Some(y) = NAMES.get(*u2) {
                                let y = name(y);
                                let mut inner = ctx.clone();
                                inner.push((y.clone(), Type::Nat));
                                for (b, u3) in self.terms(kb, &inner, ty, *u2 + 1).iter() {
                                    if uses(b, &y) {
                                        out.push((case(&y, b), *u3));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        out
    }
}

fn uses(body: &Expr, binder: &Name) -> bool {
    binder.as_ref() == WILDCARD || body.free_vars().contains(binder)
}

/// A rendering in which bound names are replaced by binding depth, so terms
/// equal up to renaming share a key.
pub fn alpha_key(e: &Expr) -> String {
    fn go(e: &Expr, env: &mut Vec<Name>, out: &mut String) {
        match e {
            Expr::Var(x) => match env.iter().rposition(|y| y == x) {
                Some(i) => write!(out, "#{}", env.len() - 1 - i).unwrap(),
                None => write!(out, "{x}").unwrap(),
            },
            Expr::Zero => out.push('z'),
            Expr::Succ(e) => {
                out.push_str("s(");
                go(e, env, out);
                out.push(')');
            }
            Expr::Eff(l, e) => {
                write!(out, "eff[{l}](").unwrap();
                go(e, env, out);
                out.push(')');
            }
            Expr::App(f, a) => {
                out.push('(');
                go(f, env, out);
                out.push(' ');
                go(a, env, out);
                out.push(')');
            }
            Expr::Lam { self_var, param, body } => {
                out.push_str("fun(");
                env.push(self_var.clone());
                env.push(param.clone());
                go(body, env, out);
                env.truncate(env.len() - 2);
                out.push(')');
            }
            Expr::Case {
                zero,
                succ_var,
                succ,
                scrutinee,
            } => {
                out.push_str("case(");
                go(scrutinee, env, out);
                out.push(',');
                go(zero, env, out);
                out.push(',');
                env.push(succ_var.clone());
                go(succ, env, out);
                env.pop();
                out.push(')');
            }
            Expr::Let { var, bound, body } => {
                out.push_str("let(");
                go(bound, env, out);
                out.push(',');
                env.push(var.clone());
                go(body, env, out);
                env.pop();
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    go(e, &mut Vec::new(), &mut out);
    out
}

/// Every closed program of type `nat` with enumeration size at most
/// `max_size`, once per renaming class, smallest first.
pub fn enumerate_exprs(max_size: usize, labels: &[Label]) -> Result<Vec<Expr>, TooLarge> {
    if max_size > MAX_ENUMERATION_SIZE {
        return Err(TooLarge(max_size));
    }
    let mut en = Enumerator {
        labels,
        arg_types: vec![Type::Nat, Type::arrow(Type::Nat, Type::Nat)],
        memo: HashMap::new(),
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n in 1..=max_size {
        for (e, _) in en.terms(n, &Vec::new(), &Type::Nat, 0).iter() {
            if seen.insert(alpha_key(e)) {
                debug_assert!(infer_type(&TypeEnv::new(), e).is_ok(), "{e}");
                out.push(e.clone());
            }
        }
    }
    Ok(out)
}

fn guards() -> Vec<AExpr> {
    vec![
        AExpr::Lit(0),
        AExpr::Lit(1),
        AExpr::var("x"),
        AExpr::minus(AExpr::var("x"), AExpr::Lit(1)),
    ]
}

fn assignments() -> Vec<Stmt> {
    vec![
        Stmt::assign("x", AExpr::minus(AExpr::var("x"), AExpr::Lit(1))),
        Stmt::assign("x", AExpr::plus(AExpr::var("x"), AExpr::Lit(1))),
        Stmt::assign("y", AExpr::plus(AExpr::var("y"), AExpr::var("x"))),
    ]
}

/// Every statement of at most `max_size` statement nodes over a fixed pool of
/// guards (`0`, `1`, `x`, `x - 1`) and assignments (`x := x - 1`,
/// `x := x + 1`, `y := y + x`).
pub fn enumerate_stmts(max_size: usize) -> Vec<Stmt> {
    let mut by_size: Vec<Vec<Stmt>> = vec![Vec::new()];
    for n in 1..=max_size {
        let mut out = Vec::new();
        if n == 1 {
            out.push(Stmt::Skip);
            out.extend(assignments());
        } else {
            for g in guards() {
                for s in &by_size[n - 1] {
                    out.push(Stmt::if_(g.clone(), s.clone()));
                    out.push(Stmt::while_(g.clone(), s.clone()));
                }
            }
            for k in 1..n - 1 {
                for a in &by_size[k] {
                    for b in &by_size[n - 1 - k] {
                        out.push(Stmt::seq(a.clone(), b.clone()));
                    }
                }
            }
        }
        by_size.push(out);
    }
    by_size.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::default_labels;
    use crate::syntax::parse_expr;

    #[test]
    fn size_one_is_zero() {
        assert_eq!(enumerate_exprs(1, &default_labels()).unwrap(), vec![Expr::Zero]);
    }

    #[test]
    fn size_three_examples() {
        let es = enumerate_exprs(3, &default_labels()).unwrap();
        assert!(es.contains(&parse_expr("s(s(z))").unwrap()));
        assert!(es.contains(&parse_expr("(fun _(x) => x) z").unwrap()));
    }

    #[test]
    fn no_duplicates_and_all_closed() {
        let es = enumerate_exprs(5, &default_labels()).unwrap();
        let keys: HashSet<_> = es.iter().map(alpha_key).collect();
        assert_eq!(keys.len(), es.len());
        assert!(es.iter().all(|e| e.is_closed() && enumeration_size(e) <= 5));
        assert!(es.iter().all(|e| infer_type(&TypeEnv::new(), e) == Ok(Type::Nat)));
    }

    #[test]
    fn count_pin() {
        assert_eq!(enumerate_exprs(4, &default_labels()).unwrap().len(), 73);
    }

    #[test]
    fn guard() {
        assert_eq!(enumerate_exprs(9, &[]), Err(TooLarge(9)));
    }

    #[test]
    fn stmt_sizes() {
        let ss = enumerate_stmts(3);
        assert!(ss.iter().all(|s| s.size() <= 3));
        assert_eq!(ss.iter().filter(|s| s.size() == 1).count(), 4);
        // size 2: 4 guards x 2 forms x 4 bodies
        assert_eq!(ss.iter().filter(|s| s.size() == 2).count(), 32);
    }
}
