//! The stack machine, its readback, and agreement with big-stop.

use bigstop::kmachine::{compile, completeness_check, k_run, soundness_check, trajectory, unwind};
use bigstop::syntax::parse_expr;

fn main() {
    let e = parse_expr("s((fun _(x) => eff[a] x) z)").unwrap();
    for (rule, state) in trajectory(&e, 50) {
        let rule = rule.map(|r| r.to_string()).unwrap_or_default();
        println!("{rule:>10}  {state}");
    }
    let r = k_run(&compile(&e), 50);
    println!("{} | {} after {} steps", unwind(&r.final_state), r.trace, r.steps);

    println!("{:?}", soundness_check(&e, 50).unwrap());
    let loop_ = parse_expr("(fun f(x) => eff[a] f x) z").unwrap();
    println!("{:?}", completeness_check(&loop_, 20).unwrap());
}
