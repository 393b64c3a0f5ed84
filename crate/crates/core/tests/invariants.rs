use proptest::prelude::*;

use bigstop::bigstop::{bigstop_eval, compose};
use bigstop::harness::{alpha_key, gen_imp_config, gen_typed_expr, GenConfig};
use bigstop::imp::{imp_multi_step, parse_stmt};
use bigstop::kmachine::{compile, k_run, unwind};
use bigstop::smallstep::multi_step;
use bigstop::syntax::mnf::{check_mnf, erase_lets, to_mnf};
use bigstop::syntax::{parse_expr, Expr};
use bigstop::trace::{AnnTrace, Label, Trace};

fn term() -> impl Strategy<Value = Expr> {
    (any::<u64>(), 1usize..30).prop_filter_map("generation exhausted", |(seed, size)| {
        gen_typed_expr(&GenConfig::new(seed, size)).ok()
    })
}

fn trace() -> impl Strategy<Value = Trace> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "alloc"]), 0..6)
        .prop_map(|ls| ls.into_iter().map(|l| Label::new(l).unwrap()).collect())
}

fn ann_trace() -> impl Strategy<Value = AnnTrace> {
    (trace(), any::<bool>()).prop_map(|(prefix, annihilated)| AnnTrace { prefix, annihilated })
}

proptest! {
    #[test]
    fn trace_monoid(a in trace(), b in trace(), c in trace()) {
        prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        prop_assert_eq!(Trace::empty().concat(&a), a.clone());
        prop_assert_eq!(a.concat(&Trace::empty()), a.clone());
        prop_assert_eq!(a.to_string().parse::<Trace>().unwrap(), a);
    }

    #[test]
    fn annihilator_absorbs_on_the_left(a in ann_trace(), b in ann_trace(), c in ann_trace()) {
        prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        let stopped = AnnTrace { annihilated: true, ..a.clone() };
        prop_assert_eq!(stopped.concat(&b), stopped.clone());
        prop_assert_eq!(a.to_string().parse::<AnnTrace>().unwrap(), a);
    }

    #[test]
    fn printing_round_trips(e in term()) {
        prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn normal_form_erases_back(e in term()) {
        let m = to_mnf(&e);
        prop_assert!(check_mnf(&m), "{}", m);
        prop_assert_eq!(erase_lets(&m), e.clone());
        prop_assert_eq!(to_mnf(&m), m);
    }

    #[test]
    fn alpha_key_ignores_bound_names(e in term()) {
        let renamed = parse_expr(&e.to_string().replace("x", "q").replace("y", "r")).unwrap();
        prop_assert_eq!(alpha_key(&renamed), alpha_key(&e));
    }

    #[test]
    fn budgets_extend_traces(e in term(), n in 0u64..20) {
        let short = multi_step(&e, n);
        let long = multi_step(&e, n + 1);
        prop_assert!(short.trace.is_prefix_of(&long.trace));
        prop_assert!(long.steps <= short.steps + 1);
    }

    #[test]
    fn evaluation_is_deterministic(e in term(), n in 0u64..20) {
        prop_assert_eq!(bigstop_eval(&e, n), bigstop_eval(&e, n));
        prop_assert_eq!(multi_step(&e, n), multi_step(&e, n));
    }

    #[test]
    fn stops_compose(e in term(), n in 0u64..10, m in 0u64..10) {
        let d1 = bigstop_eval(&e, n).unwrap().derivation;
        let d2 = bigstop_eval(&d1.to, m).unwrap().derivation;
        let whole = bigstop_eval(&e, n + m).unwrap();
        let c = compose(&d1, &d2).unwrap();
        prop_assert_eq!(&c.to, &whole.stopped);
        prop_assert_eq!(&c.trace.prefix, &whole.trace);
    }

    #[test]
    fn machine_readback_of_initial_state(e in term()) {
        prop_assert_eq!(unwind(&compile(&e)), e.clone());
        let r = k_run(&compile(&e), 0);
        prop_assert_eq!(unwind(&r.final_state), e);
    }

    #[test]
    fn imp_printing_round_trips(seed in any::<u64>()) {
        let c = gen_imp_config(seed, 10);
        prop_assert_eq!(parse_stmt(&c.stmt.to_string()).unwrap(), c.stmt);
    }

    #[test]
    fn imp_budgets_are_additive(seed in any::<u64>(), n in 0u64..15, m in 0u64..15) {
        let c = gen_imp_config(seed, 8);
        let first = imp_multi_step(&c, n);
        let rest = imp_multi_step(&first.config, m);
        prop_assert_eq!(rest.config, imp_multi_step(&c, n + m).config);
    }
}
