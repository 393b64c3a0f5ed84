//! Small-step reduction for the normal-form dialect.

use super::{contract_root, run_steps, MultiStepRun, NoStep, StepResult};
use crate::syntax::{is_value, subst, Binding, Expr};

pub fn mnf_small_step(e: &Expr) -> Result<StepResult, NoStep> {
    if is_value(e) {
        return Err(NoStep::Value);
    }
    match e {
        Expr::Let { var, bound, body } => {
            if is_value(bound) {
                let next = subst(body, &Binding::single(var, (**bound).clone()))
                    .map_err(|_| NoStep::Stuck)?;
                return Ok(StepResult {
                    next,
                    emitted: Default::default(),
                });
            }
            let r = mnf_small_step(bound).map_err(|_| NoStep::Stuck)?;
            Ok(StepResult {
                next: Expr::Let {
                    var: var.clone(),
                    bound: Box::new(r.next),
                    body: body.clone(),
                },
                emitted: r.emitted,
            })
        }
        _ => contract_root(e).ok_or(NoStep::Stuck),
    }
}

pub fn mnf_multi_step(e: &Expr, budget: u64) -> MultiStepRun {
    run_steps(e, budget, mnf_small_step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_mnf_expr;

    #[test]
    fn let_reduces_bound_first() {
        let e = parse_mnf_expr("let x = eff[a] z in let y = (fun _(w) => s(w)) x in y").unwrap();
        let r = mnf_multi_step(&e, 10);
        assert_eq!(r.final_expr, Expr::numeral(1));
        assert_eq!(r.trace.to_string(), "a");
        assert_eq!(r.steps, 4);
    }
}
