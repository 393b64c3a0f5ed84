//! Independent validation of derivation trees, node by node.

use thiserror::Error;

use super::{Derivation, Dialect, Rule};
use crate::smallstep::{plug, EvalContext};
use crate::syntax::{beta, case_succ_branch, is_value, Expr};
use crate::trace::AnnTrace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule} at {path:?}: {reason}")]
pub struct RuleViolation {
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub rule: String,
    pub reason: String,
}

/// Checks every node of `d` against the rules of `dialect`, reporting the
/// first offending node in preorder.
pub fn check_derivation(d: &Derivation, dialect: Dialect) -> Result<(), RuleViolation> {
    let mut path = Vec::new();
    walk(d, dialect, &mut path)
}

fn walk(d: &Derivation, dialect: Dialect, path: &mut Vec<usize>) -> Result<(), RuleViolation> {
    check_node(d, dialect).map_err(|reason| RuleViolation {
        path: path.clone(),
        rule: d.rule.name(),
        reason,
    })?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        walk(p, dialect, path)?;
        path.pop();
    }
    Ok(())
}

type Check = Result<(), String>;

fn ensure(cond: bool, reason: &str) -> Check {
    if cond {
        Ok(())
    } else {
        Err(reason.to_string())
    }
}

fn arity(d: &Derivation, n: usize) -> Check {
    ensure(
        d.premises.len() == n,
        &format!("expected {n} premises, found {}", d.premises.len()),
    )
}

fn val_premise(p: &Derivation, v: &Expr) -> Check {
    ensure(p.rule == Rule::Val, "missing value premise")?;
    ensure(p.from == *v, "value premise is about the wrong term")
}

fn trace_is(d: &Derivation, parts: &[&Derivation]) -> Check {
    let expected = parts
        .iter()
        .fold(AnnTrace::empty(), |acc, p| acc.concat(&p.trace));
    ensure(d.trace == expected, "trace is not the concatenation of premise traces")
}

fn emits(d: &Derivation, l: &crate::trace::Label, p: &Derivation) -> Check {
    ensure(
        d.trace == AnnTrace::single(l.clone()).concat(&p.trace),
        "trace does not start with the emitted label",
    )
}

fn concludes(d: &Derivation, p: &Derivation) -> Check {
    ensure(d.to == p.to, "conclusion differs from the last premise")
}

fn from_is(p: &Derivation, e: &Expr, what: &str) -> Check {
    ensure(p.from == *e, &format!("{what} premise evaluates the wrong term"))
}

fn stop_leaf(d: &Derivation) -> Check {
    arity(d, 0)?;
    ensure(d.from == d.to, "stop must conclude its own subject")?;
    ensure(d.trace == AnnTrace::empty(), "stop has a non-empty trace")
}

fn check_node(d: &Derivation, dialect: Dialect) -> Check {
    if let Some(owner) = d.rule.dialect() {
        ensure(owner == dialect, "rule does not belong to this dialect")?;
    }
    if dialect != Dialect::Annihilating {
        ensure(!d.trace.annihilated, "annihilated trace outside the annihilating dialect")?;
    }
    let ps = &d.premises;
    match d.rule {
        Rule::Val => {
            arity(d, 0)?;
            ensure(is_value(&d.from), "value premise on a non-value")?;
            ensure(d.from == d.to && d.trace == AnnTrace::empty(), "malformed value premise")
        }
        Rule::Stop(0) | Rule::MStop | Rule::EcStop => stop_leaf(d),
        Rule::Stop(1) => {
            arity(d, 1)?;
            let p = &ps[0];
            let to = match &d.from {
                Expr::Succ(inner) => {
                    from_is(p, inner, "operand")?;
                    Expr::succ(p.to.clone())
                }
                Expr::Case {
                    zero,
                    succ_var,
                    succ,
                    scrutinee,
                } => {
                    from_is(p, scrutinee, "scrutinee")?;
                    Expr::Case {
                        zero: zero.clone(),
                        succ_var: succ_var.clone(),
                        succ: succ.clone(),
                        scrutinee: Box::new(p.to.clone()),
                    }
                }
                Expr::App(f, a) => {
                    from_is(p, f, "function")?;
                    Expr::App(Box::new(p.to.clone()), a.clone())
                }
                _ => return Err("term has no first evaluation position".into()),
            };
            ensure(d.to == to, "conclusion does not rebuild the term")?;
            trace_is(d, &[p])
        }
        Rule::Stop(2) => {
            arity(d, 3)?;
            let Expr::App(f, a) = &d.from else {
                return Err("term has no second evaluation position".into());
            };
            from_is(&ps[0], f, "function")?;
            val_premise(&ps[1], &ps[0].to)?;
            from_is(&ps[2], a, "argument")?;
            ensure(
                d.to == Expr::app(ps[0].to.clone(), ps[2].to.clone()),
                "conclusion does not rebuild the term",
            )?;
            trace_is(d, &[&ps[0], &ps[2]])
        }
        Rule::Stop(k) => Err(format!("no term has {k} evaluation positions")),
        Rule::CaseZ => {
            arity(d, 2)?;
            let Expr::Case {
                zero, scrutinee, ..
            } = &d.from
            else {
                return Err("subject is not a case".into());
            };
            from_is(&ps[0], scrutinee, "scrutinee")?;
            ensure(ps[0].to == Expr::Zero, "scrutinee does not evaluate to z")?;
            from_is(&ps[1], zero, "branch")?;
            concludes(d, &ps[1])?;
            trace_is(d, &[&ps[0], &ps[1]])
        }
        Rule::CaseS => {
            arity(d, 3)?;
            let Expr::Case {
                succ_var,
                succ,
                scrutinee,
                ..
            } = &d.from
            else {
                return Err("subject is not a case".into());
            };
            from_is(&ps[0], scrutinee, "scrutinee")?;
            let Expr::Succ(v) = &ps[0].to else {
                return Err("scrutinee does not evaluate to a successor".into());
            };
            val_premise(&ps[1], v)?;
            ensure(is_value(v), "value premise on a non-value")?;
            let next = case_succ_branch(succ_var, succ, v).map_err(|e| e.to_string())?;
            from_is(&ps[2], &next, "branch")?;
            concludes(d, &ps[2])?;
            trace_is(d, &[&ps[0], &ps[2]])
        }
        Rule::App => {
            arity(d, 4)?;
            let Expr::App(f, a) = &d.from else {
                return Err("subject is not an application".into());
            };
            from_is(&ps[0], f, "function")?;
            ensure(ps[0].to.is_lam(), "function does not evaluate to a function")?;
            from_is(&ps[1], a, "argument")?;
            val_premise(&ps[2], &ps[1].to)?;
            ensure(is_value(&ps[1].to), "value premise on a non-value")?;
            let next = beta(&ps[0].to, &ps[1].to).map_err(|e| e.to_string())?;
            from_is(&ps[3], &next, "body")?;
            concludes(d, &ps[3])?;
            trace_is(d, &[&ps[0], &ps[1], &ps[3]])
        }
        Rule::Eff | Rule::MEff | Rule::EcEff | Rule::AEff => {
            arity(d, 1)?;
            let Expr::Eff(l, body) = &d.from else {
                return Err("subject is not an effect".into());
            };
            from_is(&ps[0], body, "body")?;
            concludes(d, &ps[0])?;
            emits(d, l, &ps[0])
        }
        Rule::MLet1 => {
            arity(d, 1)?;
            let Expr::Let { var, bound, body } = &d.from else {
                return Err("subject is not a let".into());
            };
            from_is(&ps[0], bound, "bound")?;
            let to = Expr::Let {
                var: var.clone(),
                bound: Box::new(ps[0].to.clone()),
                body: body.clone(),
            };
            ensure(d.to == to, "conclusion does not rebuild the term")?;
            trace_is(d, &[&ps[0]])
        }
        Rule::MLet2 => {
            arity(d, 3)?;
            let Expr::Let { var, bound, body } = &d.from else {
                return Err("subject is not a let".into());
            };
            from_is(&ps[0], bound, "bound")?;
            val_premise(&ps[1], &ps[0].to)?;
            let next = crate::syntax::subst(body, &crate::syntax::Binding::single(var, ps[0].to.clone()))
                .map_err(|e| e.to_string())?;
            from_is(&ps[2], &next, "body")?;
            concludes(d, &ps[2])?;
            trace_is(d, &[&ps[0], &ps[2]])
        }
        Rule::MCaseZ | Rule::MCaseS | Rule::MApp => {
            arity(d, 1)?;
            let next = root_contractum(&d.from, d.rule)?;
            from_is(&ps[0], &next, "body")?;
            concludes(d, &ps[0])?;
            trace_is(d, &[&ps[0]])
        }
        Rule::EcVal | Rule::AVal => {
            stop_leaf(d)?;
            ensure(is_value(&d.from), "subject is not a value")
        }
        Rule::EcSeq => {
            arity(d, 2)?;
            let (p, q) = (&ps[0], &ps[1]);
            let ok = contexts(&d.from)
                .into_iter()
                .any(|(c, hole)| hole == p.from && plug(&c, p.to.clone()) == q.from);
            ensure(ok, "no evaluation context relates the premises to the subject")?;
            concludes(d, q)?;
            trace_is(d, &[p, q])
        }
        Rule::EcCaseZ => {
            arity(d, 1)?;
            let next = root_contractum(&d.from, Rule::MCaseZ)?;
            from_is(&ps[0], &next, "branch")?;
            concludes(d, &ps[0])?;
            trace_is(d, &[&ps[0]])
        }
        Rule::EcCaseS | Rule::EcApp => {
            arity(d, 2)?;
            let v = match &d.from {
                Expr::Case { scrutinee, .. } => match &**scrutinee {
                    Expr::Succ(v) => (**v).clone(),
                    _ => return Err("scrutinee is not a successor".into()),
                },
                Expr::App(_, a) => (**a).clone(),
                _ => return Err("subject is not a redex".into()),
            };
            val_premise(&ps[0], &v)?;
            let as_rule = if d.rule == Rule::EcApp { Rule::MApp } else { Rule::MCaseS };
            let next = root_contractum(&d.from, as_rule)?;
            from_is(&ps[1], &next, "body")?;
            concludes(d, &ps[1])?;
            trace_is(d, &[&ps[1]])
        }
        Rule::AStop => {
            arity(d, 0)?;
            ensure(is_value(&d.to), "stop must yield a value")?;
            ensure(d.trace == AnnTrace::zero(), "stop must annihilate the trace")
        }
        Rule::ASucc => {
            arity(d, 1)?;
            let Expr::Succ(inner) = &d.from else {
                return Err("subject is not a successor".into());
            };
            from_is(&ps[0], inner, "operand")?;
            ensure(d.to == Expr::succ(ps[0].to.clone()), "conclusion does not rebuild the term")?;
            trace_is(d, &[&ps[0]])
        }
        Rule::ACaseZ => {
            arity(d, 2)?;
            let Expr::Case {
                zero, scrutinee, ..
            } = &d.from
            else {
                return Err("subject is not a case".into());
            };
            from_is(&ps[0], scrutinee, "scrutinee")?;
            ensure(ps[0].to == Expr::Zero, "scrutinee does not evaluate to z")?;
            from_is(&ps[1], zero, "branch")?;
            concludes(d, &ps[1])?;
            trace_is(d, &[&ps[0], &ps[1]])
        }
        Rule::ACaseS => {
            arity(d, 2)?;
            let Expr::Case {
                succ_var,
                succ,
                scrutinee,
                ..
            } = &d.from
            else {
                return Err("subject is not a case".into());
            };
            from_is(&ps[0], scrutinee, "scrutinee")?;
            let Expr::Succ(v) = &ps[0].to else {
                return Err("scrutinee does not evaluate to a successor".into());
            };
            ensure(is_value(v), "scrutinee does not evaluate to a value")?;
            let next = case_succ_branch(succ_var, succ, v).map_err(|e| e.to_string())?;
            from_is(&ps[1], &next, "branch")?;
            concludes(d, &ps[1])?;
            trace_is(d, &[&ps[0], &ps[1]])
        }
        Rule::AApp => {
            arity(d, 3)?;
            let Expr::App(f, a) = &d.from else {
                return Err("subject is not an application".into());
            };
            from_is(&ps[0], f, "function")?;
            ensure(ps[0].to.is_lam(), "function does not evaluate to a function")?;
            from_is(&ps[1], a, "argument")?;
            ensure(is_value(&ps[1].to), "argument does not evaluate to a value")?;
            let next = beta(&ps[0].to, &ps[1].to).map_err(|e| e.to_string())?;
            from_is(&ps[2], &next, "body")?;
            concludes(d, &ps[2])?;
            trace_is(d, &[&ps[0], &ps[1], &ps[2]])
        }
    }
}

/// The contractum of a root redex whose operands are already values.
fn root_contractum(e: &Expr, rule: Rule) -> Result<Expr, String> {
    match (rule, e) {
        (Rule::MCaseZ, Expr::Case { zero, scrutinee, .. }) if **scrutinee == Expr::Zero => {
            Ok((**zero).clone())
        }
        (
            Rule::MCaseS,
            Expr::Case {
                succ_var,
                succ,
                scrutinee,
                ..
            },
        ) => match &**scrutinee {
            Expr::Succ(v) if is_value(v) => case_succ_branch(succ_var, succ, v).map_err(|e| e.to_string()),
            _ => Err("scrutinee is not a successor value".into()),
        },
        (Rule::MApp, Expr::App(f, a)) if f.is_lam() && is_value(a) => {
            beta(f, a).map_err(|e| e.to_string())
        }
        _ => Err("subject is not a redex for this rule".into()),
    }
}

/// Every split of `e` into an evaluation context and the term in its hole.
fn contexts(e: &Expr) -> Vec<(EvalContext, Expr)> {
    let mut out = vec![(EvalContext::Hole, e.clone())];
    match e {
        Expr::Succ(inner) => out.extend(
            contexts(inner)
                .into_iter()
                .map(|(c, h)| (EvalContext::Succ(Box::new(c)), h)),
        ),
        Expr::Case {
            zero,
            succ_var,
            succ,
            scrutinee,
        } => out.extend(contexts(scrutinee).into_iter().map(|(c, h)| {
            (
                EvalContext::Case {
                    inner: Box::new(c),
                    zero: (**zero).clone(),
                    succ_var: succ_var.clone(),
                    succ: (**succ).clone(),
                },
                h,
            )
        })),
        Expr::App(f, a) => {
            out.extend(
                contexts(f)
                    .into_iter()
                    .map(|(c, h)| (EvalContext::AppFn(Box::new(c), (**a).clone()), h)),
            );
            if is_value(f) {
                out.extend(
                    contexts(a)
                        .into_iter()
                        .map(|(c, h)| (EvalContext::AppArg((**f).clone(), Box::new(c)), h)),
                );
            }
        }
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigstop::bigstop_eval;
    use crate::syntax::parse_expr;

    #[test]
    fn evaluator_output_checks() {
        let e = parse_expr("(fun f(x) => case x { z => eff[a] z | s(y) => f y }) s(s(z))").unwrap();
        for n in 0..12 {
            let d = bigstop_eval(&e, n).unwrap().derivation;
            check_derivation(&d, Dialect::Plain).unwrap();
        }
    }

    #[test]
    fn value_premise_on_non_value_is_rejected() {
        let e = parse_expr("case s(s(z)) { z => z | s(n) => n }").unwrap();
        let mut d = bigstop_eval(&e, 5).unwrap().derivation;
        assert_eq!(d.rule, Rule::CaseS);
        let bad = parse_expr("(fun _(x) => x) z").unwrap();
        d.premises[1].from = bad.clone();
        d.premises[1].to = bad;
        let err = check_derivation(&d, Dialect::Plain).unwrap_err();
        assert_eq!(err.path, Vec::<usize>::new());
        assert!(err.reason.contains("value premise"));
    }

    #[test]
    fn wrong_dialect_is_rejected() {
        let d = Derivation::leaf(Rule::MStop, &Expr::Zero);
        assert!(check_derivation(&d, Dialect::Plain).is_err());
        assert!(check_derivation(&d, Dialect::Mnf).is_ok());
    }
}
