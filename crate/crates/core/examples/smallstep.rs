//! Single steps, budgeted runs and evaluation contexts.

use bigstop::smallstep::{decompose, multi_step, small_step, step_trace};
use bigstop::syntax::parse_expr;

fn main() {
    let e = parse_expr("(fun _(x) => eff[out] s(x)) (eff[in] s(z))").unwrap();

    let (ctx, redex) = decompose(&e).unwrap();
    println!("context {ctx}, redex {redex}");

    let step = small_step(&e).unwrap();
    println!("one step: {} emitting {}", step.next, step.emitted);

    for term in step_trace(&e, 10) {
        println!("  {term}");
    }
    for n in [0, 1, 2, 3] {
        let r = multi_step(&e, n);
        println!("budget {n}: {} | {} ({})", r.final_expr, r.trace, r.status);
    }
}
