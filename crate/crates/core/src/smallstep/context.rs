use std::fmt;

use thiserror::Error;

use super::{contract_root, StepResult};
use crate::syntax::{is_value, Expr, Name};

/// Evaluation contexts: `C ::= □ | s(C) | case C {…} | C e | v C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalContext {
    Hole,
    Succ(Box<EvalContext>),
    Case {
        inner: Box<EvalContext>,
        zero: Expr,
        succ_var: Name,
        succ: Expr,
    },
    AppFn(Box<EvalContext>, Expr),
    AppArg(Expr, Box<EvalContext>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` has no redex in evaluation position")]
pub struct NotDecomposable(pub Expr);

/// `C⟨e⟩`.
pub fn plug(c: &EvalContext, e: Expr) -> Expr {
    match c {
        EvalContext::Hole => e,
        EvalContext::Succ(inner) => Expr::succ(plug(inner, e)),
        EvalContext::Case {
            inner,
            zero,
            succ_var,
            succ,
        } => Expr::Case {
            zero: Box::new(zero.clone()),
            succ_var: succ_var.clone(),
            succ: Box::new(succ.clone()),
            scrutinee: Box::new(plug(inner, e)),
        },
        EvalContext::AppFn(inner, a) => Expr::app(plug(inner, e), a.clone()),
        EvalContext::AppArg(f, inner) => Expr::app(f.clone(), plug(inner, e)),
    }
}

/// Splits a non-value into the unique `C⟨r⟩` whose hole holds the leftmost
/// innermost redex candidate `r`.
pub fn decompose(e: &Expr) -> Result<(EvalContext, Expr), NotDecomposable> {
    if is_value(e) {
        return Err(NotDecomposable(e.clone()));
    }
    let wrap = |inner: &Expr, mk: &dyn Fn(Box<EvalContext>) -> EvalContext| {
        decompose(inner).map(|(c, r)| (mk(Box::new(c)), r))
    };
    match e {
        Expr::Succ(inner) => wrap(inner, &EvalContext::Succ),
        Expr::Case {
            zero,
            succ_var,
            succ,
            scrutinee,
        } if !is_value(scrutinee) => wrap(scrutinee, &|c| EvalContext::Case {
            inner: c,
            zero: (**zero).clone(),
            succ_var: succ_var.clone(),
            succ: (**succ).clone(),
        }),
        Expr::App(f, a) if !is_value(f) => wrap(f, &|c| EvalContext::AppFn(c, (**a).clone())),
        Expr::App(f, a) if !is_value(a) => wrap(a, &|c| EvalContext::AppArg((**f).clone(), c)),
        Expr::Case { .. } | Expr::App(..) | Expr::Eff(..) => Ok((EvalContext::Hole, e.clone())),
        _ => Err(NotDecomposable(e.clone())),
    }
}

/// Contracts a redex at the root. `None` when `r` is not a redex.
pub fn contract(r: &Expr) -> Option<StepResult> {
    contract_root(r)
}

impl fmt::Display for EvalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hole = Expr::var("□");
        write!(f, "{}", plug(self, hole))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallstep::small_step;
    use crate::syntax::parse_expr;

    #[test]
    fn decompose_then_contract_is_a_step() {
        for src in [
            "s((fun _(x) => x) z)",
            "(eff[a] fun _(x) => x) (eff[b] z)",
            "case (fun _(x) => s(x)) z { z => z | s(y) => y }",
            "(fun f(x) => f x) z",
        ] {
            let e = parse_expr(src).unwrap();
            let (c, r) = decompose(&e).unwrap();
            assert_eq!(plug(&c, r.clone()), e);
            let step = contract(&r).unwrap();
            let expected = small_step(&e).unwrap();
            assert_eq!(plug(&c, step.next), expected.next);
            assert_eq!(step.emitted, expected.emitted);
        }
    }

    #[test]
    fn values_do_not_decompose() {
        assert!(decompose(&Expr::numeral(2)).is_err());
        assert!(decompose(&Expr::var("x")).is_err());
    }
}
