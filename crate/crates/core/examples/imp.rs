//! The while-language: small steps, big-stop and the freezing variant.

use bigstop::imp::{
    imp_bigstep, imp_bigstop, imp_bigstop_freeze, imp_multi_step, imp_small_step, parse_bindings, parse_stmt,
    ImpConfig,
};

fn main() {
    let stmt = parse_stmt("y := 0; while x do { y := y + x; x := x - 1 }").unwrap();
    let c = ImpConfig::new(stmt, parse_bindings("x=3").unwrap());

    let mut cur = c.clone();
    while let Ok((next, rule)) = imp_small_step(&cur) {
        println!("{:>10}  {next}", rule.name());
        cur = next;
    }
    println!("big-step: {:?}", imp_bigstep(&c, 100));
    let done = imp_multi_step(&c, 100);
    println!("{} steps to finish", done.steps);
    for n in [0, 4, 8, done.steps] {
        println!("budget {n}: {}  frozen: {}", imp_bigstop(&c, n), imp_bigstop_freeze(&c, n));
    }
}
