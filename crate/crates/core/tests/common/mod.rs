#![allow(dead_code)]

use bigstop::bigstop::{annihilator_eval, bigstop_eval, Derivation, Dialect, Rule};
use bigstop::syntax::{parse_expr, Expr};
use bigstop::trace::AnnTrace;

pub fn p(s: &str) -> Expr {
    parse_expr(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn t(s: &str) -> AnnTrace {
    s.parse().unwrap()
}

fn plain(src: &str, budget: u64) -> Derivation {
    bigstop_eval(&p(src), budget).unwrap().derivation
}

fn node<'a>(d: &'a mut Derivation, path: &[usize]) -> &'a mut Derivation {
    d.at_mut(path).expect("path exists")
}

/// A valid derivation, a broken copy and the dialect to check both in.
pub struct Mutation {
    pub name: &'static str,
    pub dialect: Dialect,
    pub original: Derivation,
    pub mutated: Derivation,
}

fn mutation(
    name: &'static str,
    dialect: Dialect,
    original: Derivation,
    edit: impl FnOnce(&mut Derivation),
) -> Mutation {
    let mut mutated = original.clone();
    edit(&mut mutated);
    assert_ne!(mutated, original, "{name} changed nothing");
    Mutation {
        name,
        dialect,
        original,
        mutated,
    }
}

const APP: &str = "(fun _(x) => eff[a] s(x)) (eff[b] z)";
const CASE_S: &str = "case s(z) { z => z | s(y) => eff[a] y }";
const CASE_Z: &str = "case z { z => s(z) | s(y) => y }";
const NESTED: &str = "(fun _(x) => x) ((fun _(y) => y) z)";
const REC: &str = "(fun f(x) => case x { z => z | s(y) => f y }) s(z)";

/// Twenty hand-made corruptions of valid derivations.
pub fn mutations() -> Vec<Mutation> {
    use Dialect::*;
    let app = || plain(APP, 10);
    vec![
        mutation("wrong result", Plain, app(), |d| d.to = p("s(s(z))")),
        mutation("trace order swapped", Plain, app(), |d| d.trace = t("a·b")),
        mutation("trace entry dropped", Plain, app(), |d| d.trace = t("a")),
        mutation("value premiss dropped", Plain, app(), |d| {
            d.premises.retain(|q| q.rule != Rule::Val);
        }),
        mutation("wrong effect label", Plain, app(), |d| node(d, &[1]).trace = t("a")),
        mutation("substituted the wrong value", Plain, app(), |d| {
            let body = node(d, &[3]);
            body.from = p("eff[a] s(s(z))");
        }),
        mutation("self variable left unsubstituted", Plain, plain(REC, 10), |d| {
            let body = node(d, &[3]);
            body.from = p("case s(z) { z => z | s(y) => f y }");
        }),
        mutation("case bound the scrutinee itself", Plain, plain(CASE_S, 10), |d| {
            node(d, &[2]).from = p("eff[a] s(z)");
        }),
        mutation("case rule mislabelled", Plain, plain(CASE_S, 10), |d| d.rule = Rule::CaseZ),
        mutation("zero case evaluated another branch", Plain, plain(CASE_Z, 10), |d| {
            node(d, &[1]).from = p("z");
            node(d, &[1]).to = p("z");
            d.to = p("z");
        }),
        mutation("stop index too small", Plain, plain(NESTED, 1), |d| d.rule = Rule::Stop(1)),
        mutation("stop ignores its premiss", Plain, plain(NESTED, 1), |d| d.to = p(NESTED)),
        mutation("stop invents an effect", Plain, plain(NESTED, 1), |d| d.trace = t("a")),
        mutation("stop changes its term", Plain, plain("z", 0), |d| d.to = p("s(z)")),
        mutation("value leaf on a non-value", Plain, app(), |d| {
            let v = d.premises.iter_mut().find(|q| q.rule == Rule::Val).unwrap();
            v.from = p("eff[b] z");
            v.to = p("eff[b] z");
        }),
        mutation("premisses out of order", Plain, app(), |d| d.premises.swap(0, 1)),
        mutation("premiss result not passed on", Plain, app(), |d| {
            node(d, &[3]).to = p("s(s(z))");
        }),
        mutation("conclusion about another term", Plain, app(), |d| {
            d.from = p("(fun _(x) => eff[a] s(x)) (eff[a] z)");
        }),
        mutation("extra premiss", Plain, plain(CASE_Z, 10), |d| {
            let extra = Derivation::leaf(Rule::Stop(0), &Expr::Zero);
            d.premises.push(extra);
        }),
        mutation(
            "annihilating stop without the annihilator",
            Annihilating,
            annihilator_eval(&p("(fun f(x) => f x) z"), 1).unwrap().derivation,
            |d| {
                fn clear(d: &mut Derivation) {
                    if d.rule == Rule::AStop {
                        d.trace = AnnTrace::empty();
                    }
                    d.premises.iter_mut().for_each(clear);
                }
                clear(d);
                d.trace = AnnTrace::empty();
            },
        ),
    ]
}
