//! The evaluation-context dialect: one rule per redex kind plus sequencing
//! through a context.

use bigstop::bigstop::{check_derivation, ec_bigstop_eval, Dialect};
use bigstop::smallstep::{decompose, plug};
use bigstop::syntax::parse_expr;

fn main() {
    let e = parse_expr("case (fun _(x) => s(x)) z { z => z | s(y) => eff[a] y }").unwrap();
    let (ctx, redex) = decompose(&e).unwrap();
    println!("{e}\n  = {ctx} filled with {redex}");
    println!("  refilled: {}", plug(&ctx, redex));
    for n in 0..=3 {
        let r = ec_bigstop_eval(&e, n).unwrap();
        check_derivation(&r.derivation, Dialect::EvalCtx).unwrap();
        println!("budget {n}: {} | {}", r.stopped, r.trace);
    }
    print!("{}", ec_bigstop_eval(&e, 3).unwrap().derivation);
}
