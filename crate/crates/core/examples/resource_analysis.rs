//! Bounding allocations by looking at partial runs: a program whose every
//! partial run allocates at most once allocates at most once in total, even
//! if it never finishes.

use bigstop::bigstop::bigstop_eval;
use bigstop::harness::corpus::{ALLOC_BOUNDED, ALLOC_UNBOUNDED};
use bigstop::syntax::{parse_expr, Expr};

fn allocations(f: &Expr, arg: usize, budget: u64) -> usize {
    let e = Expr::app(f.clone(), Expr::numeral(arg));
    let t = bigstop_eval(&e, budget).unwrap().trace;
    t.labels().iter().filter(|l| l.as_str() == "alloc").count()
}

fn main() {
    for (name, src) in [("bounded", ALLOC_BOUNDED), ("unbounded", ALLOC_UNBOUNDED)] {
        let f = parse_expr(src).unwrap();
        println!("{name}: {f}");
        for arg in 0..3 {
            let counts: Vec<usize> = (0..=12).map(|n| allocations(&f, arg, n)).collect();
            let max = counts.iter().max().unwrap();
            println!("  on {}: allocations by budget {counts:?}, most {max}", Expr::numeral(arg));
        }
    }
}
