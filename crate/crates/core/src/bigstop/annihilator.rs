//! Big-stop with an annihilating stop: stopping yields an arbitrary value and
//! the trace `0`, so a stopped run still ends in a value but its trace can be
//! told apart from a completed one.
//!
//! The stop fires on every subderivation entered with no budget left, values
//! included. That makes the stop points after the last contraction reachable,
//! so every prefix of the small-step trace is observable as `t·0` for some
//! budget.

use super::{concat_traces, emit, node, BigStopError, Derivation, Rule};
use crate::syntax::{beta, case_succ_branch, is_value, Expr};
use crate::trace::AnnTrace;

/// What the surrounding rule will do with a stopped result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Demand {
    /// The result is applied.
    Function,
    /// Anything else.
    Any,
}

/// The value a stop produces: the identity where a function is needed, `z`
/// everywhere else.
pub fn placeholder(demand: Demand) -> Expr {
    match demand {
        Demand::Function => Expr::lam("_", "x", Expr::var("x")),
        Demand::Any => Expr::Zero,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnResult {
    pub value: Expr,
    pub trace: AnnTrace,
    pub derivation: Derivation,
}

struct Annihilator {
    budget: u64,
}

impl Annihilator {
    fn spend(&mut self) {
        self.budget = self.budget.saturating_sub(1);
    }

    fn eval(&mut self, e: &Expr, demand: Demand) -> Result<Derivation, BigStopError> {
        if self.budget == 0 {
            return Ok(node(Rule::AStop, e, placeholder(demand), AnnTrace::zero(), vec![]));
        }
        if is_value(e) {
            return Ok(Derivation::leaf(Rule::AVal, e));
        }
        match e {
            Expr::Succ(inner) => {
                let p = self.eval(inner, Demand::Any)?;
                Ok(node(Rule::ASucc, e, Expr::succ(p.to.clone()), p.trace.clone(), vec![p]))
            }
            Expr::Case {
                zero,
                succ_var,
                succ,
                scrutinee,
            } => {
                let p = self.eval(scrutinee, Demand::Any)?;
                match p.to.clone() {
                    Expr::Zero => {
                        self.spend();
                        let q = self.eval(zero, demand)?;
                        let t = concat_traces(&[&p, &q]);
                        Ok(node(Rule::ACaseZ, e, q.to.clone(), t, vec![p, q]))
                    }
                    Expr::Succ(v) => {
                        self.spend();
                        let next = case_succ_branch(succ_var, succ, &v)
                            .map_err(|_| BigStopError::Stuck(e.clone()))?;
                        let q = self.eval(&next, demand)?;
                        let t = concat_traces(&[&p, &q]);
                        Ok(node(Rule::ACaseS, e, q.to.clone(), t, vec![p, q]))
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
                let p1 = self.eval(f, Demand::Function)?;
                let p2 = self.eval(a, Demand::Any)?;
                if !p1.to.is_lam() {
                    return Err(BigStopError::Stuck(Expr::app(p1.to, p2.to)));
                }
                self.spend();
                let next = beta(&p1.to, &p2.to).map_err(|_| BigStopError::Stuck(e.clone()))?;
                let p3 = self.eval(&next, demand)?;
                let t = concat_traces(&[&p1, &p2, &p3]);
                Ok(node(Rule::AApp, e, p3.to.clone(), t, vec![p1, p2, p3]))
            }
            Expr::Eff(l, body) => {
                self.spend();
                let p = self.eval(body, demand)?;
                let t = emit(l, &p.trace);
                Ok(node(Rule::AEff, e, p.to.clone(), t, vec![p]))
            }
            _ => Err(BigStopError::Stuck(e.clone())),
        }
    }
}

/// Evaluates with `budget` contractions. The trace is annihilated iff the
/// budget ran out before a value was reached.
pub fn annihilator_eval(e: &Expr, budget: u64) -> Result<AnnResult, BigStopError> {
    let d = Annihilator { budget }.eval(e, Demand::Any)?;
    Ok(AnnResult {
        value: d.to.clone(),
        trace: d.trace.clone(),
        derivation: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigstop::{check_derivation, Dialect};
    use crate::syntax::parse_expr;

    fn run(src: &str, n: u64) -> AnnResult {
        let r = annihilator_eval(&parse_expr(src).unwrap(), n).unwrap();
        check_derivation(&r.derivation, Dialect::Annihilating).unwrap();
        r
    }

    #[test]
    fn values() {
        let r = run("z", 1);
        assert_eq!((r.value, r.trace), (Expr::Zero, AnnTrace::empty()));
        assert_eq!(run("z", 0).trace, AnnTrace::zero());
    }

    #[test]
    fn stopped_diverger() {
        let r = run("eff[a] (fun f(x) => f x) z", 1);
        assert_eq!(r.trace.to_string(), "a·0");
        assert_eq!(r.value, Expr::Zero);
    }

    #[test]
    fn completed_and_cut_short() {
        assert_eq!(run("eff[a] eff[b] z", 2).trace.to_string(), "a·b·0");
        let r = run("eff[a] eff[b] z", 3);
        assert_eq!((r.value, r.trace.to_string()), (Expr::Zero, "a·b".to_string()));
    }

    #[test]
    fn placeholder_in_function_position() {
        let r = run("(eff[a] fun _(x) => x) z", 1);
        assert_eq!(r.trace.to_string(), "a·0");
    }
}
