use crate::imp::{parse_stmt, ImpConfig, ImpState};
use crate::syntax::{parse_expr, Expr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusItem {
    Pcf(Expr),
    Imp(ImpConfig),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub source: &'static str,
    pub item: CorpusItem,
}

pub const LEROY_GRALL: &str = "(fun _(x) => z) ((fun f(y) => f y) z)";
pub const FILINSKI: &str = "(fun f(x) => fun _(y) => f x y) z";
pub const OMEGA: &str = "(fun f(x) => f x) z";
/// Allocates forever on a positive argument, nothing on zero.
pub const ALLOC_UNBOUNDED: &str =
    "fun f(x) => case x { z => z | s(y) => (fun g(w) => eff[alloc] g w) z }";
/// Allocates once, then loops without allocating on a positive argument.
pub const ALLOC_BOUNDED: &str =
    "fun f(x) => eff[alloc] case x { z => z | s(y) => (fun g(w) => g w) z }";
pub const COUNTDOWN: &str = "while x do { x := x - 1 }";
pub const IMP_LOOP: &str = "while 1 do { skip }";

fn pcf(name: &'static str, source: &'static str) -> CorpusEntry {
    CorpusEntry {
        name,
        source,
        item: CorpusItem::Pcf(parse_expr(source).expect("corpus term parses")),
    }
}

fn imp(name: &'static str, source: &'static str, init: &[(&str, i64)]) -> CorpusEntry {
    let stmt = parse_stmt(source).expect("corpus program parses");
    CorpusEntry {
        name,
        source,
        item: CorpusItem::Imp(ImpConfig::new(stmt, ImpState::from_pairs(init))),
    }
}

pub fn corpus() -> Vec<CorpusEntry> {
    vec![
        pcf("leroy-grall", LEROY_GRALL),
        pcf("filinski", FILINSKI),
        pcf("omega", OMEGA),
        pcf("alloc-unbounded", ALLOC_UNBOUNDED),
        pcf("alloc-bounded", ALLOC_BOUNDED),
        imp("countdown", COUNTDOWN, &[("x", 2)]),
        imp("imp-loop", IMP_LOOP, &[]),
    ]
}

pub fn corpus_entry(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|c| c.name == name)
}

/// The PCF corpus term `name`, panicking if absent.
pub fn corpus_expr(name: &str) -> Expr {
    match corpus_entry(name).map(|c| c.item) {
        Some(CorpusItem::Pcf(e)) => e,
        _ => panic!("no PCF corpus entry `{name}`"),
    }
}

/// PCF corpus terms closed into programs: the functions are applied to
/// `z`, `s(z)` and `s(s(z))`.
pub fn corpus_programs() -> Vec<(String, Expr)> {
    let mut out = Vec::new();
    for c in corpus() {
        let CorpusItem::Pcf(e) = c.item else { continue };
        if e.is_lam() {
            for n in 0..3 {
                out.push((format!("{} {}", c.name, Expr::numeral(n)), Expr::app(e.clone(), Expr::numeral(n))));
            }
        } else {
            out.push((c.name.to_string(), e));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::types::{infer_type, TypeEnv};

    #[test]
    fn corpus_is_well_typed() {
        for (n, e) in corpus_programs() {
            assert!(infer_type(&TypeEnv::new(), &e).is_ok(), "{n}");
        }
    }

    #[test]
    fn shapes() {
        let lg = corpus_expr("leroy-grall");
        let omega = corpus_expr("omega");
        let Expr::App(f, a) = &lg else { panic!() };
        assert_eq!(**f, Expr::lam("_", "x", Expr::Zero));
        assert_eq!(crate::harness::alpha_key(a), crate::harness::alpha_key(&omega));
        assert_eq!(corpus().len(), 7);
    }
}
