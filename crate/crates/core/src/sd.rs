//! The transition system of definite strategies on positions, its
//! closed-world part, the `⊥` predicate and fair testing on strategies.

use std::fmt;
use std::sync::Arc;

use crate::canon::{canonicalize, Canonical};
use crate::error::{Error, Result};
use crate::lts::{bot, BotReport, Budget, Step, Verdict};
use crate::play::{instantiate, GlobalMove, SeedKind};
use crate::position::{glue, interface_of, HorizMap, Position};
use crate::reduction::{enumerate_tests, Equivalence, PiTest};
use crate::strategy::{derive, pick, translate, Definite, DefinitePositionStrategy, PositionStrategy, Strategy, Table};
use crate::process::TypedProcess;

/// A position with a definite strategy for each player.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SDState {
    pub position: Position,
    pub assign: Vec<Definite>,
}

/// Canonical key of a state: see [`SDState::canonical`].
pub type SDKey = Canonical<Definite>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SDLabel {
    Id,
    /// Fork, `ν` and synchronisation.
    Silent,
    Heart,
    /// Lone inputs and outputs, outside the closed world.
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SDEdge {
    /// `None` for the identity edge.
    pub mv: Option<GlobalMove>,
    /// The summand picked for each avatar of the acting players, from 1.
    pub choices: Vec<usize>,
    pub target: SDState,
    pub label: SDLabel,
}

impl SDState {
    pub fn new(position: Position, assign: Vec<Definite>) -> Result<SDState> {
        DefinitePositionStrategy::new(position.clone(), assign.clone())?;
        position.validate()?;
        Ok(SDState { position, assign })
    }

    /// `([Γ], ⟦P⟧)`.
    pub fn translated(p: &TypedProcess) -> SDState {
        SDState { position: Position::single(p.ctx), assign: vec![translate(p)] }
    }

    /// A representative of the state up to isomorphism, and its key.
    /// Players whose table is empty can never move and are dropped;
    /// channels a player's strategy never acts on are forgotten, and the
    /// remaining ones renumbered.
    pub fn canonical(&self) -> Result<(SDKey, SDState)> {
        let mut items = Vec::new();
        for (d, attach) in self.assign.iter().zip(&self.position.players) {
            let table = d.resolve()?;
            if table.entries.is_empty() {
                continue;
            }
            let resolved = Definite::Table(table);
            let free: Vec<usize> = resolved.free_channels().into_iter().collect();
            let mut map = vec![0; attach.len()];
            for (i, &f) in free.iter().enumerate() {
                map[f - 1] = i + 1;
            }
            let local = resolved.rename_injective(&map, free.len());
            items.push((local, free.iter().map(|&f| attach[f - 1]).collect::<Vec<usize>>()));
        }
        let (canon, _) = canonicalize(&items, self.position.channels, 0);
        let rep = SDState {
            position: Position { channels: canon.permutable, players: canon.items.iter().map(|(_, a)| a.clone()).collect() },
            assign: canon.items.iter().map(|(d, _)| d.clone()).collect(),
        };
        Ok((canon, rep))
    }

    pub fn as_position_strategy(&self) -> PositionStrategy {
        DefinitePositionStrategy { base: self.position.clone(), assign: self.assign.clone() }.into()
    }
}

impl From<DefinitePositionStrategy> for SDState {
    fn from(d: DefinitePositionStrategy) -> SDState {
        SDState { position: d.base, assign: d.assign }
    }
}

impl fmt::Display for SDState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.position)?;
        for (p, d) in self.assign.iter().enumerate() {
            writeln!(f, "  {p}: {d}")?;
        }
        Ok(())
    }
}

fn label_of(kind: SeedKind) -> SDLabel {
    match kind {
        SeedKind::Tick(_) => SDLabel::Heart,
        SeedKind::In(..) | SeedKind::Out(..) => SDLabel::Open,
        _ => SDLabel::Silent,
    }
}

fn edge(s: &SDState, kind: SeedKind, acting: &[usize], avatars: &[Definite], choices: Vec<usize>) -> Result<SDEdge> {
    let mv = instantiate(kind, &s.position, acting)?;
    let assign = mv
        .origin
        .iter()
        .map(|o| match o.seed_player {
            None => s.assign[o.base_player].clone(),
            Some(j) => avatars[j].clone(),
        })
        .collect();
    let target = SDState { position: mv.result.clone(), assign };
    Ok(SDEdge { mv: Some(mv), choices, target, label: label_of(kind) })
}

/// Player `p` plays the lone basic seed `b`, its avatar continuing with
/// summand `choice` of the derived strategy.
pub fn basic_edge(s: &SDState, p: usize, b: SeedKind, choice: usize) -> Result<SDEdge> {
    if p >= s.assign.len() {
        return Err(Error::InvalidMove(format!("no player {p}")));
    }
    let derived = derive(&s.assign[p], b)?;
    edge(s, b, &[p], &[pick(&derived, choice)?], vec![choice])
}

/// All pairs of summand indices.
fn pairs(l: &Strategy, r: &Strategy) -> impl Iterator<Item = (usize, usize)> {
    let rn = r.len();
    (1..=l.len()).flat_map(move |i| (1..=rn).map(move |j| (i, j)))
}

fn successors(s: &SDState, closed: bool) -> Result<Vec<SDEdge>> {
    let tables: Vec<Arc<Table>> = s.assign.iter().map(Definite::resolve).collect::<Result<_>>()?;
    let mut out = vec![SDEdge { mv: None, choices: vec![], target: s.clone(), label: SDLabel::Id }];
    for (p, t) in tables.iter().enumerate() {
        let n = t.arity;
        if let (Some(l), Some(r)) = (t.entries.get(&SeedKind::ForkL(n)), t.entries.get(&SeedKind::ForkR(n))) {
            for (i, j) in pairs(l, r) {
                out.push(edge(s, SeedKind::Fork(n), &[p], &[pick(l, i)?, pick(r, j)?], vec![i, j])?);
            }
        }
        for (&b, strat) in &t.entries {
            let wanted = match b {
                SeedKind::Tick(_) | SeedKind::Nu(_) => true,
                SeedKind::In(..) | SeedKind::Out(..) => !closed,
                _ => false,
            };
            if wanted {
                for i in 1..=strat.len() {
                    out.push(edge(s, b, &[p], &[pick(strat, i)?], vec![i])?);
                }
            }
        }
    }
    let players = &s.position.players;
    for (snd, ts) in tables.iter().enumerate() {
        for (&b, so) in &ts.entries {
            let SeedKind::Out(m, c, d) = b else { continue };
            for (rcv, tr) in tables.iter().enumerate() {
                if rcv == snd {
                    continue;
                }
                for (&b2, ri) in &tr.entries {
                    let SeedKind::In(n, a) = b2 else { continue };
                    if players[snd][c - 1] != players[rcv][a - 1] {
                        continue;
                    }
                    for (i, j) in pairs(so, ri) {
                        let kind = SeedKind::Tau(n, a, m, c, d);
                        out.push(edge(s, kind, &[snd, rcv], &[pick(so, i)?, pick(ri, j)?], vec![i, j])?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Every edge out of `s`: the identity, then forks and lone basic moves
/// player by player, then synchronisations. There is one edge per choice
/// of summands for the avatars; moves leading to `∅` have none.
pub fn succ(s: &SDState) -> Result<Vec<SDEdge>> {
    successors(s, false)
}

/// The edges of `succ` whose move is a synchronisation, `ν`, tick or fork,
/// plus the identity.
pub fn closed_world_succ(s: &SDState) -> Result<Vec<SDEdge>> {
    successors(s, true)
}

/// Membership of `s` in `⊥`, exploring states up to isomorphism.
pub fn bot_d(s: &SDState, budget: Budget) -> Result<BotReport<SDState>> {
    let start = s.canonical()?.1;
    let mut failure = None;
    let report = bot(
        start,
        |x| match step_closed(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                Vec::new()
            }
        },
        budget,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

fn step_closed(x: &SDState) -> Result<Vec<(Step, SDState)>> {
    let mut out = Vec::new();
    for e in closed_world_succ(x)? {
        let step = match e.label {
            SDLabel::Heart => Step::Heart,
            SDLabel::Silent => Step::Silent,
            SDLabel::Id | SDLabel::Open => continue,
        };
        out.push((step, e.target.canonical()?.1));
    }
    Ok(out)
}

/// `⊥` for a position with arbitrary strategies: every choice of initial
/// summands must be in `⊥`. With no choice at all (some player has `∅`)
/// there is no state to leave `⊥` from, and the answer is `InBot`.
pub fn bot_general(ps: &PositionStrategy, budget: Budget) -> Result<Verdict> {
    let mut verdict = Verdict::InBot;
    for r in ps.resolutions() {
        match bot_d(&r.into(), budget)?.verdict {
            Verdict::NotInBot => return Ok(Verdict::NotInBot),
            Verdict::Unknown => verdict = Verdict::Unknown,
            Verdict::InBot => {}
        }
    }
    Ok(verdict)
}

/// A test: glue a position along the interface, with a definite
/// strategy for each of its players.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemTest {
    pub h: HorizMap,
    pub t: DefinitePositionStrategy,
}

impl fmt::Display for SemTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let map: Vec<String> = self.h.chan_map.iter().map(|c| c.to_string()).collect();
        write!(f, "h = [{}] into {}", map.join(", "), self.t.base)?;
        for d in &self.t.assign {
            write!(f, "; {d}")?;
        }
        Ok(())
    }
}

impl SemTest {
    pub fn new(h: HorizMap, t: DefinitePositionStrategy) -> Result<SemTest> {
        h.check()?;
        if !h.source.is_interface() {
            return Err(Error::InterfaceMismatch("a test starts from an interface".into()));
        }
        if h.target != t.base {
            return Err(Error::InterfaceMismatch("the test strategy lives on another position".into()));
        }
        Ok(SemTest { h, t })
    }

    /// The strategy counterpart of a process test: one player on all of
    /// the test's channels, playing the translation of the observer.
    pub fn from_pi(test: &PiTest) -> Result<SemTest> {
        let y = Position::single(test.h.target);
        let h = HorizMap {
            source: Position::interface(test.h.source),
            target: y.clone(),
            chan_map: test.h.map.iter().map(|&c| c - 1).collect(),
            player_map: vec![],
        };
        SemTest::new(h, DefinitePositionStrategy { base: y, assign: vec![translate(&test.r)] })
    }
}

/// The state on the pushout of `s`'s position and the test's, test
/// players first.
pub fn compose_test(s: &SDState, t: &SemTest) -> Result<SDState> {
    if t.h.source != interface_of(&s.position).0 {
        return Err(Error::InterfaceMismatch(format!(
            "test for {} channels applied to a position with {}",
            t.h.source.channels, s.position.channels
        )));
    }
    let glued = glue(&s.position, &t.h)?;
    let mut assign = t.t.assign.clone();
    assign.extend(s.assign.iter().cloned());
    Ok(SDState { position: glued.result, assign })
}

fn compose_general(ps: &PositionStrategy, t: &SemTest) -> Result<PositionStrategy> {
    let s = SDState { position: ps.base.clone(), assign: vec![] };
    let position = compose_test(&s, t)?.position;
    let mut assign: Vec<Strategy> = t.t.assign.iter().cloned().map(Strategy::single).collect();
    assign.extend(ps.assign.iter().cloned());
    PositionStrategy::new(position, assign)
}

/// Whether `ps` passes `t`.
pub fn passes_d(ps: &PositionStrategy, t: &SemTest, budget: Budget) -> Result<Verdict> {
    bot_general(&compose_general(ps, t)?, budget)
}

/// The semantic tests used for bound `k`: translations of the process
/// tests of size at most `k`.
pub fn enumerate_sem_tests(channels: usize, k: usize) -> Result<Vec<SemTest>> {
    enumerate_tests(channels, k).iter().map(SemTest::from_pi).collect()
}

/// Compares two strategies on every test of bound `k`.
pub fn fair_equiv_d(
    s1: &PositionStrategy,
    s2: &PositionStrategy,
    k: usize,
    budget: Budget,
) -> Result<Equivalence<SemTest>> {
    if s1.base.channels != s2.base.channels {
        return Err(Error::InterfaceMismatch(format!(
            "{} channels against {}",
            s1.base.channels, s2.base.channels
        )));
    }
    let tests = enumerate_sem_tests(s1.base.channels, k)?;
    let mut undecided = 0;
    for t in &tests {
        let left = passes_d(s1, t, budget)?;
        let right = passes_d(s2, t, budget)?;
        if left.is_exact() && right.is_exact() {
            if left != right {
                return Ok(Equivalence::Distinguished { test: t.clone(), left, right });
            }
        } else {
            undecided += 1;
        }
    }
    Ok(if undecided == 0 {
        Equivalence::AgreeUpTo { k, tests: tests.len() }
    } else {
        Equivalence::Unknown { k, tests: tests.len(), undecided }
    })
}

/// Closed-world states reachable from `s` up to isomorphism, with their
/// non-identity edges.
#[derive(Clone, Debug)]
pub struct Exploration {
    pub states: Vec<SDState>,
    pub edges: Vec<(usize, SDLabel, usize)>,
    pub saturated: bool,
}

pub fn explore(s: &SDState, budget: Budget) -> Result<Exploration> {
    let mut index = std::collections::HashMap::new();
    let start = s.canonical()?.1;
    index.insert(start.clone(), 0);
    let mut states = vec![start];
    let mut depth = vec![0];
    let mut edges = Vec::new();
    let mut saturated = true;
    let mut next = 0;
    while next < states.len() {
        if depth[next] >= budget.max_depth {
            saturated = false;
            next += 1;
            continue;
        }
        for (step, target) in step_closed(&states[next].clone())? {
            let j = match index.get(&target) {
                Some(&j) => j,
                None if states.len() >= budget.max_nodes => {
                    saturated = false;
                    continue;
                }
                None => {
                    index.insert(target.clone(), states.len());
                    states.push(target);
                    depth.push(depth[next] + 1);
                    states.len() - 1
                }
            };
            let label = if step == Step::Heart { SDLabel::Heart } else { SDLabel::Silent };
            edges.push((next, label, j));
        }
        next += 1;
    }
    Ok(Exploration { states, edges, saturated })
}
