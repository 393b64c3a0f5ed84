//! Big-stop evaluation: every budget gives a derivation, even for divergent
//! programs, and derivations compose.

use bigstop::bigstop::{bigstop_eval, check_derivation, compose, derivation_to_json, Dialect};
use bigstop::syntax::parse_expr;

fn main() {
    let e = parse_expr("(fun _(x) => eff[b] s(x)) (eff[a] z)").unwrap();
    for n in 0..=3 {
        let r = bigstop_eval(&e, n).unwrap();
        println!("budget {n}: {} | {}", r.stopped, r.trace);
    }
    let r = bigstop_eval(&e, 1).unwrap();
    print!("{}", r.derivation);
    check_derivation(&r.derivation, Dialect::Plain).unwrap();

    let rest = bigstop_eval(&r.stopped, 2).unwrap();
    let whole = compose(&r.derivation, &rest.derivation).unwrap();
    println!("composed: {} ⤋ {} | {}", whole.from, whole.to, whole.trace);

    let omega = parse_expr("(fun f(x) => eff[tick] f x) z").unwrap();
    let r = bigstop_eval(&omega, 6).unwrap();
    println!("divergent at budget 6: {} | {}", r.stopped, r.trace);
    println!("{}", derivation_to_json(&bigstop_eval(&parse_expr("eff[a] z").unwrap(), 1).unwrap().derivation));
}
