//! Fuelled big-step evaluation and its derivations.

use bigstop::bigstep::{big_step, BigStepOutcome};
use bigstop::bigstop::{bigstop_eval, strict_to_bigstep};
use bigstop::syntax::parse_expr;

fn main() {
    let double = "fun d(n) => case n { z => z | s(m) => s(s(d m)) }";
    let e = parse_expr(&format!("({double}) s(s(z))")).unwrap();
    match big_step(&e, 100) {
        BigStepOutcome::Value(v, t) => println!("{e}\n  => {v} | {t}"),
        other => println!("{other:?}"),
    }

    // a big-stop derivation that only stops at values is a big-step one
    let d = bigstop_eval(&e, 100).unwrap().derivation;
    let b = strict_to_bigstep(&d).unwrap();
    println!("{b}");

    let omega = parse_expr("(fun f(x) => f x) z").unwrap();
    println!("omega with fuel 1000: {:?}", big_step(&omega, 1000));
}
