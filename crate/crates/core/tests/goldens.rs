//! Worked examples: translations, derivation, strategy transitions and
//! rendered plays.

mod common;

use std::path::PathBuf;

use common::proc;
use pigame::play::{parse_play, play_to_dot, SeedKind};
use pigame::position::Position;
use pigame::sd::{succ, SDState};
use pigame::strategy::{derive, pick, translate, Definite, Strategy};

fn table(n: usize, entries: Vec<(SeedKind, Vec<Definite>)>) -> Definite {
    let entries = entries.into_iter().map(|(b, ds)| {
        let arity = ds.first().map_or(n, Definite::arity);
        (b, Strategy::sum(arity, ds).unwrap())
    });
    Definite::table(n, entries).unwrap()
}

fn inert(n: usize) -> Definite {
    Definite::inert(n)
}

// Γ = {a, b, c}, P = tick, Q = x!a where x is the received channel,
// R = a?.0.
const SUM: &str = "free a b c; a?(x).tick + a?(x).x!a + b!c.a?.0";

fn p() -> Definite {
    table(4, vec![(SeedKind::Tick(4), vec![inert(4)])])
}

fn q() -> Definite {
    table(4, vec![(SeedKind::Out(4, 4, 1), vec![inert(4)])])
}

fn r() -> Definite {
    table(3, vec![(SeedKind::In(3, 1), vec![inert(4)])])
}

#[test]
fn translation_of_a_sum() {
    let expected = table(3, vec![(SeedKind::In(3, 1), vec![p(), q()]), (SeedKind::Out(3, 2, 3), vec![r()])]);
    assert_eq!(translate(&proc(SUM)), expected);
    assert_eq!(
        translate(&proc(SUM)).to_string(),
        "<3 in(3,1): (+ <4 tick(4): (+ <4>)> <4 out(4,4,1): (+ <4>)>) out(3,2,3): (+ <3 in(3,1): (+ <4>)>)>"
    );
}

#[test]
fn translation_of_parallel_and_restriction() {
    let par = translate(&proc("free a; tick | a!a"));
    let l = table(1, vec![(SeedKind::Tick(1), vec![inert(1)])]);
    let rr = table(1, vec![(SeedKind::Out(1, 1, 1), vec![inert(1)])]);
    assert_eq!(par, table(1, vec![(SeedKind::ForkL(1), vec![l]), (SeedKind::ForkR(1), vec![rr])]));

    let nu = translate(&proc("free a; new x.x!a"));
    let body = table(2, vec![(SeedKind::Out(2, 2, 1), vec![inert(2)])]);
    assert_eq!(nu, table(1, vec![(SeedKind::Nu(1), vec![body])]));
}

#[test]
fn derivation_then_restriction() {
    let d = translate(&proc(SUM));
    assert_eq!(pick(&derive(&d, SeedKind::In(3, 1)).unwrap(), 2).unwrap(), q());
    assert_eq!(pick(&derive(&d, SeedKind::Out(3, 2, 3)).unwrap(), 1).unwrap(), r());
    assert!(derive(&d, SeedKind::Tick(3)).unwrap().is_empty());
    assert!(pick(&derive(&d, SeedKind::Out(3, 2, 3)).unwrap(), 2).is_err());
}

fn targets(s: &SDState, kind: SeedKind) -> Vec<SDState> {
    succ(s)
        .unwrap()
        .into_iter()
        .filter(|e| e.mv.as_ref().is_some_and(|m| m.kind == kind))
        .map(|e| e.target)
        .collect()
}

#[test]
fn strategy_transitions() {
    // Two inputs on a, one per summand.
    let s = SDState::translated(&proc(SUM));
    let got = targets(&s, SeedKind::In(3, 1));
    let four = Position::single(4);
    assert_eq!(got, vec![SDState { position: four.clone(), assign: vec![p()] }, SDState { position: four, assign: vec![q()] }]);

    // Fork onto [Γ] | [Γ].
    let s = SDState::translated(&proc("free a b c; a?.tick | b!c"));
    let got = targets(&s, SeedKind::Fork(3));
    let left = translate(&proc("free a b c; a?.tick"));
    let right = translate(&proc("free a b c; b!c"));
    let both = Position::new(3, vec![vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
    assert_eq!(got, vec![SDState { position: both, assign: vec![left, right] }]);

    // ν onto [Γ + 1].
    let s = SDState::translated(&proc("free a b c; new x.x!a"));
    let got = targets(&s, SeedKind::Nu(3));
    assert_eq!(got, vec![SDState { position: Position::single(4), assign: vec![translate(&proc("free a b c x; x!a"))] }]);
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares with the stored file; `PIGAME_BLESS=1` rewrites it.
fn check_golden(name: &str, got: &str) {
    let path = golden(name);
    if std::env::var_os("PIGAME_BLESS").is_some() {
        std::fs::write(&path, got).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "{name} differs");
}

#[test]
fn rendered_plays() {
    for name in ["fork", "tau", "chain"] {
        let text = std::fs::read_to_string(golden(&format!("{name}.play"))).unwrap();
        let play = parse_play(&text).unwrap();
        check_golden(&format!("{name}.dot"), &play_to_dot(&play));
    }
}
