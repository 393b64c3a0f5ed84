//! Transitivity: `e ⤋ e' | t1` and `e' ⤋ e'' | t2` give `e ⤋ e'' | t1·t2`.

use thiserror::Error;

use super::{concat_traces, emit, node, Derivation, Rule};
use crate::syntax::Expr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("first derivation ends at `{0}` but the second starts at `{1}`")]
    Mismatch(Expr, Expr),
    #[error("cannot compose: {0}")]
    Malformed(String),
}

fn malformed(d: &Derivation) -> ComposeError {
    ComposeError::Malformed(format!("unexpected {} node on `{}`", d.rule, d.from))
}

/// Composes two valid plain derivations, by induction on the first.
pub fn compose(d1: &Derivation, d2: &Derivation) -> Result<Derivation, ComposeError> {
    if d1.to != d2.from {
        return Err(ComposeError::Mismatch(d1.to.clone(), d2.from.clone()));
    }
    let ps = &d1.premises;
    match d1.rule {
        Rule::Stop(0) => Ok(d2.clone()),
        Rule::CaseZ | Rule::CaseS | Rule::App | Rule::Eff => {
            let last = ps.len().checked_sub(1).ok_or_else(|| malformed(d1))?;
            let mut premises = ps.clone();
            premises[last] = compose(&ps[last], d2)?;
            let trace = if let Expr::Eff(l, _) = &d1.from {
                emit(l, &premises[last].trace)
            } else {
                let real: Vec<&Derivation> = premises.iter().filter(|p| p.rule != Rule::Val).collect();
                concat_traces(&real)
            };
            Ok(node(d1.rule, &d1.from, d2.to.clone(), trace, premises))
        }
        Rule::Stop(1) => {
            let p = ps.first().ok_or_else(|| malformed(d1))?;
            match d2.rule {
                Rule::Stop(0) => Ok(d1.clone()),
                Rule::Stop(1) | Rule::Stop(2) | Rule::CaseZ | Rule::CaseS | Rule::App => {
                    let q = d2.premises.first().ok_or_else(|| malformed(d2))?;
                    let mut premises = d2.premises.clone();
                    premises[0] = compose(p, q)?;
                    Ok(rebuild(d2.rule, &d1.from, d2.to.clone(), premises))
                }
                _ => Err(malformed(d2)),
            }
        }
        Rule::Stop(2) => {
            let (p, q) = match ps.as_slice() {
                [p, _, q] => (p, q),
                _ => return Err(malformed(d1)),
            };
            match (d2.rule, d2.premises.as_slice()) {
                (Rule::Stop(0), _) => Ok(d1.clone()),
                (Rule::Stop(1), [r]) => {
                    let pr = compose(p, r)?;
                    let v = Derivation::val(&pr.to);
                    Ok(rebuild(Rule::Stop(2), &d1.from, d2.to.clone(), vec![pr, v, q.clone()]))
                }
                (Rule::Stop(2), [r, _, s]) => {
                    let pr = compose(p, r)?;
                    let v = Derivation::val(&pr.to);
                    Ok(rebuild(Rule::Stop(2), &d1.from, d2.to.clone(), vec![pr, v, compose(q, s)?]))
                }
                (Rule::App, [r, s, v, u]) => Ok(rebuild(
                    Rule::App,
                    &d1.from,
                    d2.to.clone(),
                    vec![compose(p, r)?, compose(q, s)?, v.clone(), u.clone()],
                )),
                _ => Err(malformed(d2)),
            }
        }
        _ => Err(malformed(d1)),
    }
}

fn rebuild(rule: Rule, from: &Expr, to: Expr, premises: Vec<Derivation>) -> Derivation {
    let real: Vec<&Derivation> = premises.iter().filter(|p| p.rule != Rule::Val).collect();
    let trace = concat_traces(&real);
    node(rule, from, to, trace, premises)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigstop::{bigstop_eval, check_derivation, Dialect};
    use crate::syntax::parse_expr;

    #[test]
    fn composes_split_runs() {
        let e = parse_expr("(fun f(x) => case x { z => eff[a] z | s(y) => eff[b] f y }) (eff[c] s(s(z)))").unwrap();
        let total = bigstop_eval(&e, 40).unwrap();
        for n in 0..12 {
            let d1 = bigstop_eval(&e, n).unwrap().derivation;
            let d2 = bigstop_eval(&d1.to, 40).unwrap().derivation;
            let d = compose(&d1, &d2).unwrap();
            check_derivation(&d, Dialect::Plain).unwrap();
            assert_eq!(d.to, total.stopped);
            assert_eq!(d.trace.prefix, total.trace);
        }
    }

    #[test]
    fn mismatch() {
        let a = bigstop_eval(&Expr::Zero, 0).unwrap().derivation;
        let b = bigstop_eval(&Expr::numeral(1), 0).unwrap().derivation;
        assert!(matches!(compose(&a, &b), Err(ComposeError::Mismatch(..))));
    }
}
