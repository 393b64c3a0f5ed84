//! Structural small-step reduction, leftmost-innermost, call-by-value.

mod context;
pub mod mnf;

use std::fmt;

use thiserror::Error;

use crate::syntax::{beta, case_succ_branch, is_value, Expr};
use crate::trace::Trace;

pub use context::{contract, decompose, plug, EvalContext, NotDecomposable};

/// One reduction step with the effect it emitted (at most one label).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult {
    pub next: Expr,
    pub emitted: Trace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum NoStep {
    #[error("expression is a value")]
    Value,
    #[error("expression is stuck")]
    Stuck,
}

/// `e → e'`, if a rule applies.
pub fn small_step(e: &Expr) -> Result<StepResult, NoStep> {
    if is_value(e) {
        return Err(NoStep::Value);
    }
    match e {
        Expr::Succ(inner) => {
            let r = small_step(inner)?;
            Ok(StepResult {
                next: Expr::succ(r.next),
                emitted: r.emitted,
            })
        }
        Expr::Case {
            zero,
            succ_var,
            succ,
            scrutinee,
        } => {
            if !is_value(scrutinee) {
                let r = small_step(scrutinee).map_err(|_| NoStep::Stuck)?;
                return Ok(StepResult {
                    next: Expr::Case {
                        zero: zero.clone(),
                        succ_var: succ_var.clone(),
                        succ: succ.clone(),
                        scrutinee: Box::new(r.next),
                    },
                    emitted: r.emitted,
                });
            }
            contract(e).ok_or(NoStep::Stuck)
        }
        Expr::App(f, a) => {
            if !is_value(f) {
                let r = small_step(f).map_err(|_| NoStep::Stuck)?;
                return Ok(StepResult {
                    next: Expr::App(Box::new(r.next), a.clone()),
                    emitted: r.emitted,
                });
            }
            if !is_value(a) {
                let r = small_step(a).map_err(|_| NoStep::Stuck)?;
                return Ok(StepResult {
                    next: Expr::App(f.clone(), Box::new(r.next)),
                    emitted: r.emitted,
                });
            }
            contract(e).ok_or(NoStep::Stuck)
        }
        Expr::Eff(..) => contract(e).ok_or(NoStep::Stuck),
        _ => Err(NoStep::Stuck),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    ReachedValue,
    OutOfBudget,
    Stuck,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::ReachedValue => "value",
            RunStatus::OutOfBudget => "out of budget",
            RunStatus::Stuck => "stuck",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiStepRun {
    pub final_expr: Expr,
    pub trace: Trace,
    pub steps: u64,
    pub status: RunStatus,
}

/// Takes up to `budget` steps, stopping early at a value or a stuck term.
pub fn multi_step(e: &Expr, budget: u64) -> MultiStepRun {
    run_steps(e, budget, small_step)
}

pub(crate) fn run_steps(
    e: &Expr,
    budget: u64,
    step: impl Fn(&Expr) -> Result<StepResult, NoStep>,
) -> MultiStepRun {
    let mut cur = e.clone();
    let mut trace = Trace::empty();
    let mut steps = 0;
    loop {
        let r = match step(&cur) {
            Err(NoStep::Value) => RunStatus::ReachedValue,
            Err(NoStep::Stuck) => RunStatus::Stuck,
            Ok(_) if steps == budget => RunStatus::OutOfBudget,
            Ok(r) => {
                cur = r.next;
                trace.append(&r.emitted);
                steps += 1;
                continue;
            }
        };
        return MultiStepRun {
            final_expr: cur,
            trace,
            steps,
            status: r,
        };
    }
}

/// The reduction sequence `e, e1, …` of at most `budget + 1` terms.
pub fn step_trace(e: &Expr, budget: u64) -> Vec<Expr> {
    let mut out = vec![e.clone()];
    let mut cur = e.clone();
    for _ in 0..budget {
        match small_step(&cur) {
            Ok(r) => {
                cur = r.next;
                out.push(cur.clone());
            }
            Err(_) => break,
        }
    }
    out
}

/// Contraction of a root redex (no congruence).
pub(crate) fn contract_root(e: &Expr) -> Option<StepResult> {
    let next = match e {
        Expr::Case {
            zero,
            succ_var,
            succ,
            scrutinee,
        } => match &**scrutinee {
            Expr::Zero => (**zero).clone(),
            Expr::Succ(v) if is_value(v) => case_succ_branch(succ_var, succ, v).ok()?,
            _ => return None,
        },
        Expr::App(f, a) if f.is_lam() && is_value(a) => beta(f, a).ok()?,
        Expr::Eff(l, body) => {
            return Some(StepResult {
                next: (**body).clone(),
                emitted: Trace::single(l.clone()),
            })
        }
        _ => return None,
    };
    Some(StepResult {
        next,
        emitted: Trace::empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn leftmost_first() {
        let e = p("(eff[a] fun _(x) => x) (eff[b] z)");
        let r = multi_step(&e, 10);
        assert_eq!(r.final_expr, Expr::Zero);
        assert_eq!(r.trace.to_string(), "a·b");
        assert_eq!(r.steps, 3);
        assert_eq!(r.status, RunStatus::ReachedValue);
    }

    #[test]
    fn values_and_stuck() {
        assert_eq!(small_step(&Expr::Zero), Err(NoStep::Value));
        assert_eq!(small_step(&p("z z")), Err(NoStep::Stuck));
        assert_eq!(small_step(&p("s(z z)")), Err(NoStep::Stuck));
        assert_eq!(small_step(&p("x")), Err(NoStep::Stuck));
        assert_eq!(multi_step(&p("case fun _(x) => x { z => z | s(y) => y }"), 3).status, RunStatus::Stuck);
    }

    #[test]
    fn budget_zero() {
        let e = p("(fun f(x) => f x) z");
        let r = multi_step(&e, 0);
        assert_eq!((r.final_expr, r.steps, r.status), (e.clone(), 0, RunStatus::OutOfBudget));
        assert_eq!(multi_step(&e, 5).final_expr, e);
        assert_eq!(step_trace(&e, 3).len(), 4);
    }

    #[test]
    fn case_steps() {
        let e = p("case s(s(z)) { z => z | s(n) => n }");
        assert_eq!(small_step(&e).unwrap().next, Expr::numeral(1));
    }
}
