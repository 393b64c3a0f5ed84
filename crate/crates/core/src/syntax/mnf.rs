//! Monadic normal form: every intermediate result is named by a `let`.
//!
//! ```text
//! v ::= x | z | s(v) | fun f(x) => m
//! m ::= v | case v { z => m | s(x) => m } | v v | let x = m in m | eff[l] m
//! ```

use std::collections::BTreeSet;

use super::{name, Expr, Name};

/// Values of the normal-form dialect, which include variables.
pub fn is_mnf_value(e: &Expr) -> bool {
    match e {
        Expr::Var(_) | Expr::Zero => true,
        Expr::Succ(v) => is_mnf_value(v),
        Expr::Lam { body, .. } => check_mnf(body),
        _ => false,
    }
}

/// Whether `e` is in monadic normal form.
pub fn check_mnf(e: &Expr) -> bool {
    match e {
        Expr::Case {
            zero,
            succ,
            scrutinee,
            ..
        } => is_mnf_value(scrutinee) && check_mnf(zero) && check_mnf(succ),
        Expr::App(f, a) => is_mnf_value(f) && is_mnf_value(a),
        Expr::Let { bound, body, .. } => check_mnf(bound) && check_mnf(body),
        Expr::Eff(_, body) => check_mnf(body),
        other => is_mnf_value(other),
    }
}

fn all_names(e: &Expr, out: &mut BTreeSet<Name>) {
    match e {
        Expr::Var(x) => {
            out.insert(x.clone());
        }
        Expr::Case { succ_var, .. } => {
            out.insert(succ_var.clone());
        }
        Expr::Lam {
            self_var, param, ..
        } => {
            out.insert(self_var.clone());
            out.insert(param.clone());
        }
        Expr::Let { var, .. } => {
            out.insert(var.clone());
        }
        _ => {}
    }
    for c in e.children() {
        all_names(c, out);
    }
}

struct Normalizer {
    taken: BTreeSet<Name>,
    next: usize,
}

type Lets = Vec<(Name, Expr)>;

impl Normalizer {
    fn fresh(&mut self) -> Name {
        loop {
            let n = name(&format!("t{}", self.next));
            self.next += 1;
            if !self.taken.contains(&n) {
                return n;
            }
        }
    }

    fn wrap(lets: Lets, body: Expr) -> Expr {
        lets.into_iter().rev().fold(body, |acc, (x, bound)| Expr::Let {
            var: x,
            bound: Box::new(bound),
            body: Box::new(acc),
        })
    }

    fn term(&mut self, e: &Expr) -> Expr {
        let mut lets = Vec::new();
        let c = self.comp(e, &mut lets);
        Self::wrap(lets, c)
    }

    /// A computation whose operands are values, with the lets it needs.
    fn comp(&mut self, e: &Expr, lets: &mut Lets) -> Expr {
        match e {
            Expr::App(f, a) => {
                let vf = self.atom(f, lets);
                let va = self.atom(a, lets);
                Expr::app(vf, va)
            }
            Expr::Case {
                zero,
                succ_var,
                succ,
                scrutinee,
            } => {
                let v = self.atom(scrutinee, lets);
                Expr::Case {
                    zero: Box::new(self.term(zero)),
                    succ_var: succ_var.clone(),
                    succ: Box::new(self.term(succ)),
                    scrutinee: Box::new(v),
                }
            }
            Expr::Eff(l, body) => Expr::Eff(l.clone(), Box::new(self.term(body))),
            Expr::Let { var, bound, body } => Expr::Let {
                var: var.clone(),
                bound: Box::new(self.term(bound)),
                body: Box::new(self.term(body)),
            },
            _ => self.atom(e, lets),
        }
    }

    /// A value standing for `e`, naming `e` first when it is a computation.
    fn atom(&mut self, e: &Expr, lets: &mut Lets) -> Expr {
        match e {
            Expr::Var(_) | Expr::Zero => e.clone(),
            Expr::Succ(inner) => Expr::succ(self.atom(inner, lets)),
            Expr::Lam {
                self_var,
                param,
                body,
            } => Expr::Lam {
                self_var: self_var.clone(),
                param: param.clone(),
                body: Box::new(self.term(body)),
            },
            _ => {
                let c = self.comp(e, lets);
                let t = self.fresh();
                lets.push((t.clone(), c));
                Expr::Var(t)
            }
        }
    }
}

/// Left-to-right let-insertion. Fresh names `t0, t1, …` avoid every name
/// occurring in `e`.
pub fn to_mnf(e: &Expr) -> Expr {
    let mut taken = BTreeSet::new();
    all_names(e, &mut taken);
    let mut n = Normalizer { taken, next: 0 };
    n.term(e)
}

/// Inlines every `let`. Undoes [`to_mnf`], whose let-bound names occur only
/// outside binders of their bodies.
pub fn erase_lets(e: &Expr) -> Expr {
    match e {
        Expr::Let { var, bound, body } => inline(&erase_lets(body), var, &erase_lets(bound)),
        Expr::Var(_) | Expr::Zero => e.clone(),
        Expr::Succ(a) => Expr::succ(erase_lets(a)),
        Expr::Eff(l, a) => Expr::eff(l.clone(), erase_lets(a)),
        Expr::App(f, a) => Expr::app(erase_lets(f), erase_lets(a)),
        Expr::Lam {
            self_var,
            param,
            body,
        } => Expr::Lam {
            self_var: self_var.clone(),
            param: param.clone(),
            body: Box::new(erase_lets(body)),
        },
        Expr::Case {
            zero,
            succ_var,
            succ,
            scrutinee,
        } => Expr::Case {
            zero: Box::new(erase_lets(zero)),
            succ_var: succ_var.clone(),
            succ: Box::new(erase_lets(succ)),
            scrutinee: Box::new(erase_lets(scrutinee)),
        },
    }
}

/// Replaces free occurrences of `x` by `by`, without renaming.
fn inline(e: &Expr, x: &Name, by: &Expr) -> Expr {
    match e {
        Expr::Var(y) if y == x => by.clone(),
        Expr::Var(_) | Expr::Zero => e.clone(),
        Expr::Succ(a) => Expr::succ(inline(a, x, by)),
        Expr::Eff(l, a) => Expr::eff(l.clone(), inline(a, x, by)),
        Expr::App(f, a) => Expr::app(inline(f, x, by), inline(a, x, by)),
        Expr::Lam { self_var, param, .. } if self_var == x || param == x => e.clone(),
        Expr::Lam {
            self_var,
            param,
            body,
        } => Expr::Lam {
            self_var: self_var.clone(),
            param: param.clone(),
            body: Box::new(inline(body, x, by)),
        },
        Expr::Case {
            zero,
            succ_var,
            succ,
            scrutinee,
        } => Expr::Case {
            zero: Box::new(inline(zero, x, by)),
            succ_var: succ_var.clone(),
            succ: Box::new(if succ_var == x { (**succ).clone() } else { inline(succ, x, by) }),
            scrutinee: Box::new(inline(scrutinee, x, by)),
        },
        Expr::Let { var, bound, body } => Expr::Let {
            var: var.clone(),
            bound: Box::new(inline(bound, x, by)),
            body: Box::new(if var == x { (**body).clone() } else { inline(body, x, by) }),
        },
    }
}
