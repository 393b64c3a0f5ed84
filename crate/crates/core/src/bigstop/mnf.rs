use super::{concat_traces, emit, node, BigStop, BigStopError, Derivation, Rule};
use crate::syntax::mnf::check_mnf;
use crate::syntax::{beta, case_succ_branch, is_value, subst, Binding, Expr};

struct MnfStopper {
    budget: u64,
}

impl MnfStopper {
    fn eval(&mut self, e: &Expr) -> Result<Derivation, BigStopError> {
        if is_value(e) || self.budget == 0 {
            return Ok(Derivation::leaf(Rule::MStop, e));
        }
        let stuck = || BigStopError::Stuck(e.clone());
        match e {
            Expr::Let { var, bound, body } => {
                let p = self.eval(bound)?;
                if !is_value(&p.to) || self.budget == 0 {
                    let to = Expr::Let {
                        var: var.clone(),
                        bound: Box::new(p.to.clone()),
                        body: body.clone(),
                    };
                    return Ok(node(Rule::MLet1, e, to, p.trace.clone(), vec![p]));
                }
                self.budget -= 1;
                let next = subst(body, &Binding::single(var, p.to.clone())).map_err(|_| stuck())?;
                let q = self.eval(&next)?;
                let t = concat_traces(&[&p, &q]);
                let v = Derivation::val(&p.to);
                Ok(node(Rule::MLet2, e, q.to.clone(), t, vec![p, v, q]))
            }
            Expr::Case {
                zero,
                succ_var,
                succ,
                scrutinee,
            } => {
                let (rule, next) = match &**scrutinee {
                    Expr::Zero => (Rule::MCaseZ, (**zero).clone()),
                    Expr::Succ(v) if is_value(v) => (
                        Rule::MCaseS,
                        case_succ_branch(succ_var, succ, v).map_err(|_| stuck())?,
                    ),
                    _ => return Err(stuck()),
                };
                self.budget -= 1;
                let p = self.eval(&next)?;
                Ok(node(rule, e, p.to.clone(), p.trace.clone(), vec![p]))
            }
            Expr::App(f, a) if f.is_lam() && is_value(a) => {
                self.budget -= 1;
                let next = beta(f, a).map_err(|_| stuck())?;
                let p = self.eval(&next)?;
                Ok(node(Rule::MApp, e, p.to.clone(), p.trace.clone(), vec![p]))
            }
            Expr::Eff(l, body) => {
                self.budget -= 1;
                let p = self.eval(body)?;
                let t = emit(l, &p.trace);
                Ok(node(Rule::MEff, e, p.to.clone(), t, vec![p]))
            }
            _ => Err(stuck()),
        }
    }
}

/// Big-stop evaluation of a closed term in monadic normal form.
pub fn mnf_bigstop_eval(e: &Expr, budget: u64) -> Result<BigStop, BigStopError> {
    if !check_mnf(e) {
        return Err(BigStopError::NotMnf(e.clone()));
    }
    MnfStopper { budget }.eval(e).map(BigStop::from_derivation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigstop::{check_derivation, Dialect};
    use crate::smallstep::mnf::mnf_multi_step;
    use crate::syntax::mnf::to_mnf;
    use crate::syntax::parse_expr;

    #[test]
    fn agrees_with_mnf_steps() {
        let e = to_mnf(
            &parse_expr("(fun f(x) => case x { z => eff[a] z | s(y) => eff[b] f y }) (eff[c] s(s(z)))").unwrap(),
        );
        for n in 0..25 {
            let r = mnf_bigstop_eval(&e, n).unwrap();
            check_derivation(&r.derivation, Dialect::Mnf).unwrap();
            let m = mnf_multi_step(&e, n);
            assert_eq!((r.stopped, r.trace), (m.final_expr, m.trace), "budget {n}");
        }
    }

    #[test]
    fn rejects_non_mnf() {
        let e = parse_expr("s((fun _(x) => x) z)").unwrap();
        assert!(matches!(mnf_bigstop_eval(&e, 3), Err(BigStopError::NotMnf(_))));
    }
}
