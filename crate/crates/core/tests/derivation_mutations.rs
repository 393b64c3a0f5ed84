mod common;

use bigstop::bigstop::check_derivation;
use common::mutations;

#[test]
fn there_are_twenty() {
    assert_eq!(mutations().len(), 20);
}

#[test]
fn originals_pass() {
    for m in mutations() {
        check_derivation(&m.original, m.dialect).unwrap_or_else(|v| panic!("{}: {v}", m.name));
    }
}

#[test]
fn every_mutation_is_rejected() {
    let missed: Vec<_> = mutations()
        .into_iter()
        .filter(|m| check_derivation(&m.mutated, m.dialect).is_ok())
        .map(|m| m.name)
        .collect();
    assert!(missed.is_empty(), "accepted: {missed:?}");
}
