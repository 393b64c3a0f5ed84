//! Strict big-stop derivations (those ending in a value with only trivial
//! stops) correspond one-to-one with big-step derivations.

use thiserror::Error;

use super::{Derivation, Rule};
use crate::bigstep::{BigRule, BigStepDerivation};
use crate::syntax::{is_value, Expr};
use crate::trace::AnnTrace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("derivation is not strict at {path:?}: {reason}")]
pub struct NotStrict {
    pub path: Vec<usize>,
    pub reason: String,
}

/// Strict derivations conclude values everywhere and use no other rules than
/// the plain ones.
pub fn is_strict(d: &Derivation) -> bool {
    strict_to_bigstep(d).is_ok()
}

pub fn strict_to_bigstep(d: &Derivation) -> Result<BigStepDerivation, NotStrict> {
    let mut path = Vec::new();
    convert(d, &mut path)
}

fn convert(d: &Derivation, path: &mut Vec<usize>) -> Result<BigStepDerivation, NotStrict> {
    let fail = |path: &Vec<usize>, reason: &str| NotStrict {
        path: path.clone(),
        reason: reason.to_string(),
    };
    if !is_value(&d.to) {
        return Err(fail(path, "conclusion is not a value"));
    }
    if d.trace.annihilated {
        return Err(fail(path, "annihilated trace"));
    }
    let (rule, keep): (BigRule, &[usize]) = match d.rule {
        Rule::Stop(0) => (BigRule::Val, &[]),
        Rule::Stop(1) if matches!(d.from, Expr::Succ(_)) => (BigRule::Succ, &[0]),
        Rule::CaseZ => (BigRule::CaseZ, &[0, 1]),
        Rule::CaseS => (BigRule::CaseS, &[0, 2]),
        Rule::App => (BigRule::App, &[0, 1, 3]),
        Rule::Eff => (BigRule::Eff, &[0]),
        _ => return Err(fail(path, "rule has no big-step counterpart")),
    };
    let mut premises = Vec::with_capacity(keep.len());
    for &i in keep {
        let p = d.premises.get(i).ok_or_else(|| fail(path, "missing premise"))?;
        path.push(i);
        premises.push(convert(p, path)?);
        path.pop();
    }
    Ok(BigStepDerivation {
        rule,
        from: d.from.clone(),
        to: d.to.clone(),
        trace: d.trace.prefix.clone(),
        premises,
    })
}

/// Inverse of [`strict_to_bigstep`]: reinserts the value side conditions.
pub fn bigstep_to_strict(b: &BigStepDerivation) -> Derivation {
    let mut ps: Vec<Derivation> = b.premises.iter().map(bigstep_to_strict).collect();
    let rule = match b.rule {
        BigRule::Val => Rule::Stop(0),
        BigRule::Succ => Rule::Stop(1),
        BigRule::CaseZ => Rule::CaseZ,
        BigRule::CaseS => {
            if let Expr::Succ(v) = &b.premises[0].to {
                ps.insert(1, Derivation::val(v));
            }
            Rule::CaseS
        }
        BigRule::App => {
            ps.insert(2, Derivation::val(&b.premises[1].to));
            Rule::App
        }
        BigRule::Eff => Rule::Eff,
    };
    Derivation {
        rule,
        from: b.from.clone(),
        to: b.to.clone(),
        trace: AnnTrace::plain(b.trace.clone()),
        premises: ps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigstep::check_bigstep;
    use crate::bigstop::bigstop_eval;
    use crate::syntax::parse_expr;

    #[test]
    fn round_trip() {
        let e = parse_expr("(fun f(x) => case x { z => eff[a] z | s(y) => s(f y) }) s(s(z))").unwrap();
        let d = bigstop_eval(&e, 100).unwrap().derivation;
        let b = strict_to_bigstep(&d).unwrap();
        check_bigstep(&b).unwrap();
        assert_eq!(bigstep_to_strict(&b), d);
        let vals = d.nodes().iter().filter(|n| n.rule == Rule::Val).count();
        assert_eq!(b.node_count() + vals, d.node_count());
    }

    #[test]
    fn partial_derivations_are_not_strict() {
        let e = parse_expr("s((fun _(x) => x) z)").unwrap();
        let d = bigstop_eval(&e, 0).unwrap().derivation;
        assert!(!is_strict(&d));
    }
}
