//! Differential testing: run property suites, or check a single term.

use bigstop::harness::suites::{check_stop_multi, run_property_suite, suite_names, SuiteConfig};
use bigstop::harness::{enumerate_exprs, gen_typed_expr, default_labels, GenConfig};

fn main() {
    let cfg = SuiteConfig {
        trials: 100,
        enum_size: 4,
        max_budget: 8,
        include_corpus: true,
        ..SuiteConfig::default()
    };
    for name in suite_names() {
        print!("{}", run_property_suite(name, &cfg).unwrap());
    }
    println!("{} terms of size at most 4", enumerate_exprs(4, &default_labels()).unwrap().len());
    let e = gen_typed_expr(&GenConfig::new(7, 20)).unwrap();
    println!("{e}: {:?}", check_stop_multi(&e, &cfg));
}
