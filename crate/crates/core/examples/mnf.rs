//! Monadic normal form: translation, evaluation and erasure.

use bigstop::bigstop::mnf_bigstop_eval;
use bigstop::smallstep::mnf::mnf_multi_step;
use bigstop::syntax::mnf::{check_mnf, erase_lets, to_mnf};
use bigstop::syntax::{parse_expr, parse_mnf_expr};

fn main() {
    let e = parse_expr("s((fun _(x) => eff[a] x) (eff[b] z))").unwrap();
    let m = to_mnf(&e);
    println!("{e}\n  as {m}\n  in normal form: {}", check_mnf(&m));
    println!("  erased: {}", erase_lets(&m));
    for n in 0..=5 {
        let r = mnf_multi_step(&m, n);
        let b = mnf_bigstop_eval(&m, n).unwrap();
        println!("budget {n}: {} | {}  /  {} | {}", r.final_expr, r.trace, b.stopped, b.trace);
    }
    let direct = parse_mnf_expr("let y = eff[a] z in s(y)").unwrap();
    println!("{}", mnf_bigstop_eval(&direct, 5).unwrap().derivation);
}
