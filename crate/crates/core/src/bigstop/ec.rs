use super::{concat_traces, emit, node, BigStop, BigStopError, Derivation, Rule};
use crate::smallstep::{decompose, plug, EvalContext};
use crate::syntax::{beta, case_succ_branch, is_value, Expr};

struct CtxStopper {
    budget: u64,
}

impl CtxStopper {
    fn eval(&mut self, e: &Expr) -> Result<Derivation, BigStopError> {
        if is_value(e) {
            return Ok(Derivation::leaf(Rule::EcVal, e));
        }
        if self.budget == 0 {
            return Ok(Derivation::leaf(Rule::EcStop, e));
        }
        let (ctx, redex) = decompose(e).map_err(|_| BigStopError::Stuck(e.clone()))?;
        if ctx != EvalContext::Hole {
            let p = self.eval(&redex)?;
            let q = self.eval(&plug(&ctx, p.to.clone()))?;
            let t = concat_traces(&[&p, &q]);
            return Ok(node(Rule::EcSeq, e, q.to.clone(), t, vec![p, q]));
        }
        let stuck = || BigStopError::Stuck(e.clone());
        match e {
            Expr::Case {
                zero,
                succ_var,
                succ,
                scrutinee,
            } => match &**scrutinee {
                Expr::Zero => {
                    self.budget -= 1;
                    let p = self.eval(zero)?;
                    Ok(node(Rule::EcCaseZ, e, p.to.clone(), p.trace.clone(), vec![p]))
                }
                Expr::Succ(v) => {
                    self.budget -= 1;
                    let next = case_succ_branch(succ_var, succ, v).map_err(|_| stuck())?;
                    let p = self.eval(&next)?;
                    Ok(node(Rule::EcCaseS, e, p.to.clone(), p.trace.clone(), vec![Derivation::val(v), p]))
                }
                _ => Err(stuck()),
            },
            Expr::App(f, a) if f.is_lam() => {
                self.budget -= 1;
                let next = beta(f, a).map_err(|_| stuck())?;
                let p = self.eval(&next)?;
                Ok(node(Rule::EcApp, e, p.to.clone(), p.trace.clone(), vec![Derivation::val(a), p]))
            }
            Expr::Eff(l, body) => {
                self.budget -= 1;
                let p = self.eval(body)?;
                let t = emit(l, &p.trace);
                Ok(node(Rule::EcEff, e, p.to.clone(), t, vec![p]))
            }
            _ => Err(stuck()),
        }
    }
}

/// Big-stop evaluation that stops or sequences through evaluation contexts.
pub fn ec_bigstop_eval(e: &Expr, budget: u64) -> Result<BigStop, BigStopError> {
    CtxStopper { budget }.eval(e).map(BigStop::from_derivation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigstop::{check_derivation, Dialect};
    use crate::smallstep::multi_step;
    use crate::syntax::parse_expr;

    #[test]
    fn agrees_with_small_steps() {
        let e = parse_expr("s((fun f(x) => case x { z => eff[a] z | s(y) => eff[b] f y }) (eff[c] s(s(z))))").unwrap();
        for n in 0..20 {
            let r = ec_bigstop_eval(&e, n).unwrap();
            check_derivation(&r.derivation, Dialect::EvalCtx).unwrap();
            let m = multi_step(&e, n);
            assert_eq!((r.stopped, r.trace), (m.final_expr, m.trace), "budget {n}");
        }
    }

    #[test]
    fn root_redex_chain() {
        let omega = parse_expr("(fun f(x) => f x) z").unwrap();
        let d = ec_bigstop_eval(&omega, 3).unwrap().derivation;
        assert_eq!(d.rule, Rule::EcApp);
        assert_eq!(d.to, omega);
    }
}
