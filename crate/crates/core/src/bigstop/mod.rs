//! Big-stop semantics `e ⤋ e' | t`: big-step rules plus a stop rule that may
//! halt evaluation at any point. Evaluators resolve the choice of where to stop
//! with a budget of contractions; when the budget runs out, every remaining
//! subderivation is a stop.

mod annihilator;
mod check;
mod compose;
mod ec;
mod iso;
mod json;
mod mnf;

use std::fmt;

use thiserror::Error;

use crate::syntax::{beta, case_succ_branch, is_value, Expr};
use crate::trace::{AnnTrace, Label, Trace};

pub use annihilator::{annihilator_eval, placeholder, AnnResult, Demand};
pub use check::{check_derivation, RuleViolation};
pub use compose::{compose, ComposeError};
pub use ec::ec_bigstop_eval;
pub use iso::{bigstep_to_strict, is_strict, strict_to_bigstep, NotStrict};
pub use json::{derivation_from_json, derivation_to_json, ImportError};
pub use mnf::mnf_bigstop_eval;

/// The rule families checked by [`check_derivation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    /// Structural rules over plain terms.
    Plain,
    /// Rules over terms in monadic normal form.
    Mnf,
    /// Stop and sequencing through evaluation contexts.
    EvalCtx,
    /// The stop rule yields an arbitrary value and an annihilated trace.
    Annihilating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Side condition `val v`, as a leaf.
    Val,
    /// Stop after evaluating the first `k` evaluation positions.
    Stop(u8),
    CaseZ,
    CaseS,
    App,
    Eff,
    MStop,
    MLet1,
    MLet2,
    MCaseZ,
    MCaseS,
    MApp,
    MEff,
    EcStop,
    EcVal,
    EcSeq,
    EcCaseZ,
    EcCaseS,
    EcApp,
    EcEff,
    AStop,
    AVal,
    ASucc,
    ACaseZ,
    ACaseS,
    AApp,
    AEff,
}

const NAMED: &[(Rule, &str)] = &[
    (Rule::Val, "Val"),
    (Rule::CaseZ, "StE-CaseZ"),
    (Rule::CaseS, "StE-CaseS"),
    (Rule::App, "StE-App"),
    (Rule::Eff, "StE-Eff"),
    (Rule::MStop, "StM-Stop"),
    (Rule::MLet1, "StM-Let1"),
    (Rule::MLet2, "StM-Let2"),
    (Rule::MCaseZ, "StM-CaseZ"),
    (Rule::MCaseS, "StM-CaseS"),
    (Rule::MApp, "StM-App"),
    (Rule::MEff, "StM-Eff"),
    (Rule::EcStop, "EC-Stop"),
    (Rule::EcVal, "EC-Val"),
    (Rule::EcSeq, "EC-Seq"),
    (Rule::EcCaseZ, "EC-CaseZ"),
    (Rule::EcCaseS, "EC-CaseS"),
    (Rule::EcApp, "EC-App"),
    (Rule::EcEff, "EC-Eff"),
    (Rule::AStop, "StA-Stop"),
    (Rule::AVal, "StA-Val"),
    (Rule::ASucc, "StA-Succ"),
    (Rule::ACaseZ, "StA-CaseZ"),
    (Rule::ACaseS, "StA-CaseS"),
    (Rule::AApp, "StA-App"),
    (Rule::AEff, "StA-Eff"),
];

impl Rule {
    pub fn name(self) -> String {
        match self {
            Rule::Stop(k) => format!("StE-Stop({k})"),
            r => NAMED
                .iter()
                .find(|(n, _)| *n == r)
                .map(|(_, s)| s.to_string())
                .unwrap_or_default(),
        }
    }

    pub fn parse(s: &str) -> Option<Rule> {
        if let Some(k) = s.strip_prefix("StE-Stop(").and_then(|r| r.strip_suffix(')')) {
            return k.parse().ok().map(Rule::Stop);
        }
        NAMED.iter().find(|(_, n)| *n == s).map(|(r, _)| *r)
    }

    /// The dialect a rule belongs to. `None` for [`Rule::Val`], which all
    /// dialects share.
    pub fn dialect(self) -> Option<Dialect> {
        use Rule::*;
        match self {
            Val => None,
            Stop(_) | CaseZ | CaseS | App | Eff => Some(Dialect::Plain),
            MStop | MLet1 | MLet2 | MCaseZ | MCaseS | MApp | MEff => Some(Dialect::Mnf),
            EcStop | EcVal | EcSeq | EcCaseZ | EcCaseS | EcApp | EcEff => Some(Dialect::EvalCtx),
            AStop | AVal | ASucc | ACaseZ | ACaseS | AApp | AEff => Some(Dialect::Annihilating),
        }
    }

    /// Rules that perform a contraction.
    pub fn is_progressing(self) -> bool {
        use Rule::*;
        matches!(
            self,
            CaseZ | CaseS | App | Eff | MLet2 | MCaseZ | MCaseS | MApp | MEff | EcCaseZ
                | EcCaseS | EcApp | EcEff | ACaseZ | ACaseS | AApp | AEff
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A derivation tree concluding `from ⤋ to | trace`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub from: Expr,
    pub to: Expr,
    pub trace: AnnTrace,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(rule: Rule, e: &Expr) -> Derivation {
        Derivation {
            rule,
            from: e.clone(),
            to: e.clone(),
            trace: AnnTrace::empty(),
            premises: vec![],
        }
    }

    /// The side-condition leaf `val v`.
    pub fn val(v: &Expr) -> Derivation {
        Derivation::leaf(Rule::Val, v)
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(|p| p.node_count()).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(|p| p.height()).max().unwrap_or(0)
    }

    /// Preorder traversal.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            out.push(d);
            stack.extend(d.premises.iter().rev());
        }
        out
    }

    /// The node at a path of premise indices.
    pub fn at(&self, path: &[usize]) -> Option<&Derivation> {
        path.iter().try_fold(self, |d, &i| d.premises.get(i))
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Derivation> {
        path.iter().try_fold(self, |d, &i| d.premises.get_mut(i))
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(d: &Derivation, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if d.rule == Rule::Val {
                writeln!(f, "{:indent$}val {}", "", d.from, indent = depth * 2)?;
            } else {
                writeln!(
                    f,
                    "{:indent$}{}: {} ⤋ {} | {}",
                    "",
                    d.rule,
                    d.from,
                    d.to,
                    d.trace,
                    indent = depth * 2
                )?;
            }
            d.premises.iter().try_for_each(|p| go(p, depth + 1, f))
        }
        go(self, 0, f)
    }
}

/// True iff some node performs a contraction.
pub fn is_progressing(d: &Derivation) -> bool {
    d.nodes().iter().any(|n| n.rule.is_progressing())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BigStopError {
    #[error("evaluation is stuck at `{0}`")]
    Stuck(Expr),
    #[error("`{0}` is not in monadic normal form")]
    NotMnf(Expr),
}

/// Outcome of a budgeted big-stop evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigStop {
    pub stopped: Expr,
    pub trace: Trace,
    pub derivation: Derivation,
}

impl BigStop {
    pub(crate) fn from_derivation(derivation: Derivation) -> BigStop {
        BigStop {
            stopped: derivation.to.clone(),
            trace: derivation.trace.prefix.clone(),
            derivation,
        }
    }
}

pub(crate) fn node(rule: Rule, from: &Expr, to: Expr, trace: AnnTrace, premises: Vec<Derivation>) -> Derivation {
    Derivation {
        rule,
        from: from.clone(),
        to,
        trace,
        premises,
    }
}

pub(crate) fn concat_traces(ps: &[&Derivation]) -> AnnTrace {
    ps.iter().fold(AnnTrace::empty(), |acc, p| acc.concat(&p.trace))
}

pub(crate) fn emit(l: &Label, rest: &AnnTrace) -> AnnTrace {
    AnnTrace::single(l.clone()).concat(rest)
}

struct Stopper {
    budget: u64,
}

impl Stopper {
    fn eval(&mut self, e: &Expr) -> Result<Derivation, BigStopError> {
        if is_value(e) || self.budget == 0 {
            return Ok(Derivation::leaf(Rule::Stop(0), e));
        }
        match e {
            Expr::Succ(inner) => {
                let d = self.eval(inner)?;
                Ok(node(Rule::Stop(1), e, Expr::succ(d.to.clone()), d.trace.clone(), vec![d]))
            }
            Expr::Case {
                zero,
                succ_var,
                succ,
                scrutinee,
            } => {
                let d = self.eval(scrutinee)?;
                if !is_value(&d.to) || self.budget == 0 {
                    let to = Expr::Case {
                        zero: zero.clone(),
                        succ_var: succ_var.clone(),
                        succ: succ.clone(),
                        scrutinee: Box::new(d.to.clone()),
                    };
                    return Ok(node(Rule::Stop(1), e, to, d.trace.clone(), vec![d]));
                }
                match d.to.clone() {
                    Expr::Zero => {
                        self.budget -= 1;
                        let d1 = self.eval(zero)?;
                        let t = concat_traces(&[&d, &d1]);
                        Ok(node(Rule::CaseZ, e, d1.to.clone(), t, vec![d, d1]))
                    }
                    Expr::Succ(v) => {
                        self.budget -= 1;
                        let next = case_succ_branch(succ_var, succ, &v)
                            .map_err(|_| BigStopError::Stuck(e.clone()))?;
                        let d2 = self.eval(&next)?;
                        let t = concat_traces(&[&d, &d2]);
                        Ok(node(Rule::CaseS, e, d2.to.clone(), t, vec![d, Derivation::val(&v), d2]))
                    }
                    other => Err(BigStopError::Stuck(Expr::Case {
                        zero: zero.clone(),
                        succ_var: succ_var.clone(),
                        succ: succ.clone(),
                        scrutinee: Box::new(other),
                    })),
                }
            }
            Expr::App(f, a) => {
                let d1 = self.eval(f)?;
                if !is_value(&d1.to) {
                    let to = Expr::app(d1.to.clone(), (**a).clone());
                    return Ok(node(Rule::Stop(1), e, to, d1.trace.clone(), vec![d1]));
                }
                let d2 = self.eval(a)?;
                if !is_value(&d2.to) || self.budget == 0 {
                    let to = Expr::app(d1.to.clone(), d2.to.clone());
                    let t = concat_traces(&[&d1, &d2]);
                    let v1 = Derivation::val(&d1.to);
                    return Ok(node(Rule::Stop(2), e, to, t, vec![d1, v1, d2]));
                }
                if !d1.to.is_lam() {
                    return Err(BigStopError::Stuck(Expr::app(d1.to, d2.to)));
                }
                self.budget -= 1;
                let next = beta(&d1.to, &d2.to).map_err(|_| BigStopError::Stuck(e.clone()))?;
                let d3 = self.eval(&next)?;
                let t = concat_traces(&[&d1, &d2, &d3]);
                let v2 = Derivation::val(&d2.to);
                Ok(node(Rule::App, e, d3.to.clone(), t, vec![d1, d2, v2, d3]))
            }
            Expr::Eff(l, body) => {
                self.budget -= 1;
                let d = self.eval(body)?;
                let t = emit(l, &d.trace);
                Ok(node(Rule::Eff, e, d.to.clone(), t, vec![d]))
            }
            _ => Err(BigStopError::Stuck(e.clone())),
        }
    }
}

/// Big-stop evaluation allowed `budget` contractions. With budget `n` the
/// result agrees with `n` small steps.
pub fn bigstop_eval(e: &Expr, budget: u64) -> Result<BigStop, BigStopError> {
    let mut s = Stopper { budget };
    s.eval(e).map(BigStop::from_derivation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn budget_zero_is_a_single_stop() {
        let e = p("s((fun _(x) => x) z)");
        let r = bigstop_eval(&e, 0).unwrap();
        assert_eq!(r.stopped, e);
        assert_eq!(r.derivation.rule, Rule::Stop(0));
        assert!(!is_progressing(&r.derivation));
    }

    #[test]
    fn stops_inside_argument() {
        let e = p("(fun _(x) => x) (eff[a] eff[b] z)");
        let r = bigstop_eval(&e, 1).unwrap();
        assert_eq!(r.stopped, p("(fun _(x) => x) (eff[b] z)"));
        assert_eq!(r.trace.to_string(), "a");
        assert_eq!(r.derivation.rule, Rule::Stop(2));
    }

    #[test]
    fn rule_names_round_trip() {
        for (r, n) in NAMED {
            assert_eq!(Rule::parse(n), Some(*r));
        }
        assert_eq!(Rule::parse("StE-Stop(2)"), Some(Rule::Stop(2)));
        assert_eq!(Rule::Stop(1).name(), "StE-Stop(1)");
        assert_eq!(Rule::parse("StE-Nope"), None);
    }

    #[test]
    fn stuck_terms() {
        assert_eq!(
            bigstop_eval(&p("case fun _(x) => x { z => z | s(y) => y }"), 4),
            Err(BigStopError::Stuck(p("case fun _(x) => x { z => z | s(y) => y }")))
        );
        assert!(bigstop_eval(&p("z z"), 0).is_ok());
    }
}
