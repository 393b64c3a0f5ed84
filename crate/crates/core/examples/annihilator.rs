//! Stopping with the annihilator: an unfinished run yields a placeholder
//! value and a trace ending in 0.

use bigstop::bigstop::annihilator_eval;
use bigstop::syntax::parse_expr;
use bigstop::trace::AnnTrace;

fn main() {
    for (src, budget) in [("z", 0), ("z", 1), ("eff[a] eff[b] z", 1), ("eff[a] eff[b] z", 3)] {
        let e = parse_expr(src).unwrap();
        let r = annihilator_eval(&e, budget).unwrap();
        println!("{src} at budget {budget}: {} | {}", r.value, r.trace);
    }
    let f = parse_expr("((fun f(x) => eff[a] f x) z) z").unwrap();
    let r = annihilator_eval(&f, 2).unwrap();
    println!("{f} at budget 2: {} | {}", r.value, r.trace);

    let abc0: AnnTrace = "a·b·c·0".parse().unwrap();
    let def: AnnTrace = "d·e·f".parse().unwrap();
    println!("{abc0} * {def} = {}", abc0.concat(&def));
}
