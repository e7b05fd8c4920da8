//! Invariants checked on generated cases. Each property takes a seed for
//! its own generator, so the same code runs under the property-test
//! harness and under the acceptance runner.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use pigame::alphabet::{a_successors, ALabel, AVertex};
use pigame::lts::{Budget, Verdict};
use pigame::play::{normalize_play, restrict, Play};
use pigame::position::{HorizMap, Position};
use pigame::process::{Process, TypedProcess};
use pigame::reduction::{bot_pi, normalize, processes_of_size};
use pigame::sd::{bot_d, succ, SDState};
use pigame::strategy::{accepts_play, translate, Definite, PositionStrategy, Strategy};
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{random_play, random_position, random_restriction};

pub const CASES: u32 = 500;

type Outcome = Result<(), TestCaseError>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

/// Processes of a given size, computed once.
fn processes(ctx: usize, size: usize) -> Arc<Vec<Process>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Vec<Process>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    cache.lock().unwrap().entry((ctx, size)).or_insert_with(|| Arc::new(processes_of_size(ctx, size))).clone()
}

fn random_proc(rng: &mut ChaCha8Rng, ctx: usize, max: usize) -> TypedProcess {
    let all = processes(ctx, rng.gen_range(0..=max));
    TypedProcess::closed_defs(ctx, all.choose(rng).cloned().unwrap_or_else(Process::nil)).unwrap()
}

/// Runs `prop` on `CASES` seeds.
pub fn run(prop: fn(u64) -> Outcome) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&proptest::num::u64::ANY, prop).map_err(|e| e.to_string())
}

/// Plays walked in the strategy transition system are accepted, and so
/// are all their prefixes. Arbitrary plays that are accepted have
/// accepted prefixes too.
pub fn prefix_closure(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let channels = rng.gen_range(1..=2);
    let players: Vec<Vec<usize>> =
        (0..rng.gen_range(1..=3)).map(|_| (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..channels)).collect()).collect();
    let x = Position::new(channels, players).unwrap();
    let assign: Vec<Definite> = x.players.iter().map(|a| translate(&random_proc(&mut rng, a.len(), 3))).collect();
    let ps = PositionStrategy::new(x.clone(), assign.iter().cloned().map(Strategy::single).collect()).unwrap();

    let mut state = SDState { position: x.clone(), assign };
    let mut walked = Play::identity(x.clone());
    for _ in 0..rng.gen_range(0..=5) {
        let edges: Vec<_> = succ(&state).unwrap().into_iter().filter(|e| e.mv.is_some()).collect();
        let Some(e) = edges.choose(&mut rng) else { break };
        let mv = e.mv.as_ref().unwrap();
        walked.push(mv.kind, &mv.acting).unwrap();
        state = e.target.clone();
    }
    for n in 0..=walked.len() {
        let prefix = walked.prefix(n);
        ensure(accepts_play(&ps, &prefix).unwrap(), || format!("prefix {n} of a walked play rejected: {prefix:?}"))?;
    }

    let other = random_play(&mut rng, &x, 3);
    if accepts_play(&ps, &other).unwrap() {
        for n in 0..other.len() {
            ensure(accepts_play(&ps, &other.prefix(n)).unwrap(), || format!("prefix {n} rejected"))?;
        }
    }
    Ok(())
}

/// Restricting along the identity changes nothing; restricting twice is
/// restricting along the composite.
pub fn restrict_functoriality(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = random_position(&mut rng, 3);
    let u = random_play(&mut rng, &x, 3);
    let id = restrict(&u, &HorizMap::identity(&x)).unwrap();
    ensure(id.play == u, || format!("identity restriction changed {u:?}"))?;
    ensure(id.embedding == HorizMap::identity(u.final_position()), || "identity embedding".into())?;

    let r1 = random_restriction(&mut rng, &x);
    let r2 = random_restriction(&mut rng, &r1.source);
    let once = restrict(&u, &r1.after(&r2).unwrap()).unwrap();
    let first = restrict(&u, &r1).unwrap();
    let twice = restrict(&first.play, &r2).unwrap();
    let a = normalize_play(&once.play).unwrap().moves();
    let b = normalize_play(&twice.play).unwrap().moves();
    ensure(a == b, || format!("{u:?}\nr1 {r1:?}\nr2 {r2:?}\nat once {a:?}\nin turn {b:?}"))?;
    let composite = first.embedding.after(&twice.embedding).unwrap();
    ensure(composite.chan_map.len() == once.embedding.chan_map.len(), || "embeddings of different sizes".into())
}

/// An exact verdict under a small budget stays the same under a larger
/// one, for processes and for their translations.
pub fn bot_monotone(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = rng.gen_range(0..=2);
    let p = random_proc(&mut rng, ctx, 4);
    let small = Budget::nodes(rng.gen_range(1..=6));
    let large = Budget::nodes(10_000);
    let s = normalize(&p);
    let (vs, vl) = (bot_pi(&s, small).verdict, bot_pi(&s, large).verdict);
    ensure(vs == Verdict::Unknown || vs == vl, || format!("{p}: {vs:?} then {vl:?}"))?;
    let d = SDState::translated(&p);
    let (ds, dl) = (bot_d(&d, small).unwrap().verdict, bot_d(&d, large).unwrap().verdict);
    ensure(ds == Verdict::Unknown || ds == dl, || format!("⟦{p}⟧: {ds:?} then {dl:?}"))?;
    ensure(vl == dl || !vl.is_exact() || !dl.is_exact(), || format!("{p}: {vl:?} against ⟦⟧ {dl:?}"))
}

/// Normal forms of processes and of plays are fixed points.
pub fn normalize_idempotent(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = rng.gen_range(0..=2);
    let p = random_proc(&mut rng, ctx, 4);
    let n = normalize(&p);
    ensure(normalize(&n.to_process()) == n, || format!("{p} normalises to {n}, which does not"))?;
    let x = random_position(&mut rng, 3);
    let u = random_play(&mut rng, &x, 4);
    let once = normalize_play(&u).unwrap();
    ensure(normalize_play(&once).unwrap() == once, || format!("{u:?}"))
}

/// Every edge of `A` out of a random vertex is an instance of exactly one
/// rule, and a label has a target exactly when it labels such an edge.
pub fn a_edge_shapes(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma = rng.gen_range(0..=4);
    let delta = if gamma == 0 { 0 } else { rng.gen_range(0..=4) };
    let v = AVertex::new(gamma, (0..delta).map(|_| rng.gen_range(1..=gamma)).collect()).unwrap();
    let edges = a_successors(&v);
    for e in &edges {
        ensure(e.rules().len() == 1, || format!("{:?} from {v} matches {:?}", e.label, e.rules()))?;
        ensure(e.label.target(&v).ok() == Some(e.target.clone()), || format!("{:?}", e.label))?;
    }
    let c = |rng: &mut ChaCha8Rng| rng.gen_range(0..=gamma + 1);
    let label = match rng.gen_range(0..6) {
        0 => ALabel::Heart,
        1 => ALabel::Delay,
        2 => ALabel::NuStep,
        3 => ALabel::Inp(c(&mut rng)),
        4 => ALabel::Outp(c(&mut rng), c(&mut rng)),
        _ => ALabel::PartialSync(c(&mut rng), c(&mut rng), c(&mut rng)),
    };
    let listed = edges.iter().any(|e| e.label == label);
    ensure(label.target(&v).is_ok() == listed, || format!("{label:?} from {v}: listed {listed}"))
}
