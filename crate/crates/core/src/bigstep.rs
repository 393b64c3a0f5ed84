//! Fuelled big-step evaluation `e ⇓ v | t` and big-step derivation trees.

use std::fmt;

use thiserror::Error;

use crate::syntax::{beta, case_succ_branch, is_value, Expr};
use crate::trace::Trace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BigStepOutcome {
    Value(Expr, Trace),
    FuelExhausted,
    /// The redex that no rule could contract.
    Stuck(Expr),
}

enum Halt {
    Fuel,
    Stuck(Expr),
}

fn burn(fuel: &mut u64) -> Result<(), Halt> {
    if *fuel == 0 {
        return Err(Halt::Fuel);
    }
    *fuel -= 1;
    Ok(())
}

fn eval(e: &Expr, fuel: &mut u64, trace: &mut Trace) -> Result<Expr, Halt> {
    if is_value(e) {
        return Ok(e.clone());
    }
    match e {
        Expr::Succ(inner) => Ok(Expr::succ(eval(inner, fuel, trace)?)),
        Expr::Case {
            zero,
            succ_var,
            succ,
            scrutinee,
        } => match eval(scrutinee, fuel, trace)? {
            Expr::Zero => {
                burn(fuel)?;
                eval(zero, fuel, trace)
            }
            Expr::Succ(v) => {
                burn(fuel)?;
                let next = case_succ_branch(succ_var, succ, &v).map_err(|_| Halt::Stuck(e.clone()))?;
                eval(&next, fuel, trace)
            }
            other => Err(Halt::Stuck(Expr::Case {
                zero: zero.clone(),
                succ_var: succ_var.clone(),
                succ: succ.clone(),
                scrutinee: Box::new(other),
            })),
        },
        Expr::App(f, a) => {
            let vf = eval(f, fuel, trace)?;
            let va = eval(a, fuel, trace)?;
            if !vf.is_lam() {
                return Err(Halt::Stuck(Expr::app(vf, va)));
            }
            burn(fuel)?;
            let next = beta(&vf, &va).map_err(|_| Halt::Stuck(e.clone()))?;
            eval(&next, fuel, trace)
        }
        Expr::Eff(l, body) => {
            burn(fuel)?;
            trace.push(l.clone());
            eval(body, fuel, trace)
        }
        _ => Err(Halt::Stuck(e.clone())),
    }
}

/// Evaluates with at most `fuel` contractions (beta, case selection, emission).
pub fn big_step(e: &Expr, fuel: u64) -> BigStepOutcome {
    let mut fuel = fuel;
    let mut trace = Trace::empty();
    match eval(e, &mut fuel, &mut trace) {
        Ok(v) => BigStepOutcome::Value(v, trace),
        Err(Halt::Fuel) => BigStepOutcome::FuelExhausted,
        Err(Halt::Stuck(r)) => BigStepOutcome::Stuck(r),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BigRule {
    Val,
    Succ,
    CaseZ,
    CaseS,
    App,
    Eff,
}

impl BigRule {
    pub fn name(self) -> &'static str {
        match self {
            BigRule::Val => "BE-Val",
            BigRule::Succ => "BE-Succ",
            BigRule::CaseZ => "BE-CaseZ",
            BigRule::CaseS => "BE-CaseS",
            BigRule::App => "BE-App",
            BigRule::Eff => "BE-Eff",
        }
    }
}

/// A big-step derivation tree concluding `from ⇓ to | trace`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigStepDerivation {
    pub rule: BigRule,
    pub from: Expr,
    pub to: Expr,
    pub trace: Trace,
    pub premises: Vec<BigStepDerivation>,
}

impl BigStepDerivation {
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(|p| p.node_count()).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid {rule} node at {path:?}: {reason}")]
pub struct BigStepViolation {
    pub path: Vec<usize>,
    pub rule: &'static str,
    pub reason: String,
}

/// Validates every node of a big-step derivation.
pub fn check_bigstep(d: &BigStepDerivation) -> Result<(), BigStepViolation> {
    let mut path = Vec::new();
    check_node(d, &mut path)
}

fn check_node(d: &BigStepDerivation, path: &mut Vec<usize>) -> Result<(), BigStepViolation> {
    let fail = |reason: &str| BigStepViolation {
        path: path.clone(),
        rule: d.rule.name(),
        reason: reason.to_string(),
    };
    let ps = &d.premises;
    let arity = match d.rule {
        BigRule::Val => 0,
        BigRule::Succ | BigRule::Eff => 1,
        BigRule::CaseZ | BigRule::CaseS => 2,
        BigRule::App => 3,
    };
    if ps.len() != arity {
        return Err(fail("wrong number of premises"));
    }
    let ok = match (d.rule, &d.from) {
        (BigRule::Val, e) => is_value(e) && d.to == *e && d.trace.is_empty(),
        (BigRule::Succ, Expr::Succ(inner)) => {
            ps[0].from == **inner && d.to == Expr::succ(ps[0].to.clone()) && d.trace == ps[0].trace
        }
        (
            BigRule::CaseZ,
            Expr::Case {
                zero, scrutinee, ..
            },
        ) => {
            ps[0].from == **scrutinee
                && ps[0].to == Expr::Zero
                && ps[1].from == **zero
                && d.to == ps[1].to
                && d.trace == ps[0].trace.concat(&ps[1].trace)
        }
        (
            BigRule::CaseS,
            Expr::Case {
                succ_var,
                succ,
                scrutinee,
                ..
            },
        ) => match &ps[0].to {
            Expr::Succ(v) if ps[0].from == **scrutinee && is_value(v) => {
                case_succ_branch(succ_var, succ, v).ok() == Some(ps[1].from.clone())
                    && d.to == ps[1].to
                    && d.trace == ps[0].trace.concat(&ps[1].trace)
            }
            _ => false,
        },
        (BigRule::App, Expr::App(f, a)) => {
            ps[0].from == **f
                && ps[0].to.is_lam()
                && ps[1].from == **a
                && is_value(&ps[1].to)
                && beta(&ps[0].to, &ps[1].to).ok() == Some(ps[2].from.clone())
                && d.to == ps[2].to
                && d.trace == ps[0].trace.concat(&ps[1].trace).concat(&ps[2].trace)
        }
        (BigRule::Eff, Expr::Eff(l, body)) => {
            ps[0].from == **body
                && d.to == ps[0].to
                && d.trace == Trace::single(l.clone()).concat(&ps[0].trace)
        }
        _ => false,
    };
    if !ok {
        return Err(fail("conclusion does not follow from premises"));
    }
    for (i, p) in ps.iter().enumerate() {
        path.push(i);
        check_node(p, path)?;
        path.pop();
    }
    Ok(())
}

impl fmt::Display for BigStepDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(d: &BigStepDerivation, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            writeln!(
                f,
                "{:indent$}{}: {} ⇓ {} | {}",
                "",
                d.rule.name(),
                d.from,
                d.to,
                d.trace,
                indent = depth * 2
            )?;
            d.premises.iter().try_for_each(|p| go(p, depth + 1, f))
        }
        go(self, 0, f)
    }
}
