//! The alphabet graph `A` and transition systems over it.
//!
//! A vertex `Δ → Γ` says which of an agent's `Γ` local channels are known
//! to the environment through the interface `Δ`. Edges are interface
//! steps: ticks, delays, private channel creation, inputs and outputs on
//! known channels, and partial synchronisations between two channels the
//! agent cannot tell apart locally. Both processes and strategies project
//! to transition systems labelled by these edges, where they can be
//! compared up to weak bisimilarity with `δ` silent.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::canon::canonicalize;
use crate::error::{Error, Result};
use crate::lts::Budget;
use crate::play::SeedKind;
use crate::position::Position;
use crate::process::{pretty_process, unfold, Chan, Context, Defs, Prefix, Process, TypedProcess};
use crate::sd::{basic_edge, succ, SDLabel, SDState};

/// A total map `h : Δ → Γ`, with `h[i]` the image of interface channel
/// `i + 1`. Channels are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AVertex {
    pub delta: usize,
    pub gamma: usize,
    pub h: Vec<Chan>,
}

impl AVertex {
    pub fn new(gamma: usize, h: Vec<Chan>) -> Result<AVertex> {
        if let Some(&c) = h.iter().find(|&&c| c == 0 || c > gamma) {
            return Err(Error::IndexOutOfRange { index: c, ctx: gamma });
        }
        Ok(AVertex { delta: h.len(), gamma, h })
    }

    /// Every local channel is known to the environment.
    pub fn full(n: usize) -> AVertex {
        AVertex { delta: n, gamma: n, h: (1..=n).collect() }
    }

    pub fn known(&self, a: Chan) -> bool {
        self.h.contains(&a)
    }
}

impl fmt::Display for AVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.h.iter().enumerate().map(|(i, c)| format!("{}↦{c}", i + 1)).collect();
        write!(f, "h:[{}] Δ={} Γ={}", pairs.join(","), self.delta, self.gamma)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ALabel {
    Heart,
    Delay,
    NuStep,
    Inp(Chan),
    Outp(Chan, Chan),
    /// An output of `b` on `a` and an input on `c`.
    PartialSync(Chan, Chan, Chan),
}

impl fmt::Display for ALabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ALabel::Heart => write!(f, "♥"),
            ALabel::Delay => write!(f, "δ"),
            ALabel::NuStep => write!(f, "ν"),
            ALabel::Inp(a) => write!(f, "ι({a})"),
            ALabel::Outp(a, b) => write!(f, "o({a},{b})"),
            ALabel::PartialSync(a, b, c) => write!(f, "o({a},{b})⇀ι({c})"),
        }
    }
}

impl ALabel {
    /// The target of this label from `v`, if its side conditions hold.
    pub fn target(&self, v: &AVertex) -> Result<AVertex> {
        let bad = |why: &str| Err(Error::Typing(format!("{self} from {v}: {why}")));
        let local = |c: Chan| c >= 1 && c <= v.gamma;
        match *self {
            ALabel::Heart | ALabel::Delay => Ok(v.clone()),
            ALabel::NuStep => Ok(AVertex { delta: v.delta, gamma: v.gamma + 1, h: v.h.clone() }),
            ALabel::Inp(a) => {
                if !v.known(a) {
                    return bad("channel not in the interface");
                }
                let mut h = v.h.clone();
                h.push(v.gamma + 1);
                Ok(AVertex { delta: v.delta + 1, gamma: v.gamma + 1, h })
            }
            ALabel::Outp(a, b) => {
                if !v.known(a) || !local(b) {
                    return bad("channel not in the interface");
                }
                let mut h = v.h.clone();
                h.push(b);
                Ok(AVertex { delta: v.delta + 1, gamma: v.gamma, h })
            }
            ALabel::PartialSync(a, b, c) => {
                if !v.known(a) || !v.known(c) || a == c || !local(b) || v.known(b) {
                    return bad("side conditions fail");
                }
                Ok(AVertex { delta: v.delta, gamma: v.gamma + 1, h: v.h.clone() })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AEdge {
    pub label: ALabel,
    pub source: AVertex,
    pub target: AVertex,
}

/// The rules edges of `A` are built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Heart,
    Nu,
    Input,
    Output,
    PartialSync,
    Delay,
}

impl AEdge {
    /// The rules whose conclusion this edge is an instance of.
    pub fn rules(&self) -> Vec<Rule> {
        let (s, t) = (&self.source, &self.target);
        let mut out = Vec::new();
        let extends = |extra: &[Chan]| t.h.len() == s.h.len() + extra.len() && t.h[..s.h.len()] == s.h[..] && t.h[s.h.len()..] == *extra;
        if s == t && self.label == ALabel::Heart {
            out.push(Rule::Heart);
        }
        if s == t && self.label == ALabel::Delay {
            out.push(Rule::Delay);
        }
        if self.label == ALabel::NuStep && t.delta == s.delta && t.gamma == s.gamma + 1 && t.h == s.h {
            out.push(Rule::Nu);
        }
        if let ALabel::Inp(a) = self.label {
            if s.known(a) && t.delta == s.delta + 1 && t.gamma == s.gamma + 1 && extends(&[s.gamma + 1]) {
                out.push(Rule::Input);
            }
        }
        if let ALabel::Outp(a, b) = self.label {
            if s.known(a) && b >= 1 && b <= s.gamma && t.delta == s.delta + 1 && t.gamma == s.gamma && extends(&[b]) {
                out.push(Rule::Output);
            }
        }
        if let ALabel::PartialSync(a, b, c) = self.label {
            let ok = s.known(a) && s.known(c) && a != c && b >= 1 && b <= s.gamma && !s.known(b);
            if ok && t.delta == s.delta && t.gamma == s.gamma + 1 && t.h == s.h {
                out.push(Rule::PartialSync);
            }
        }
        out
    }
}

/// All edges out of `v`.
pub fn a_successors(v: &AVertex) -> Vec<AEdge> {
    let known: BTreeSet<Chan> = v.h.iter().copied().collect();
    let mut labels = vec![ALabel::Heart, ALabel::Delay, ALabel::NuStep];
    labels.extend(known.iter().map(|&a| ALabel::Inp(a)));
    for &a in &known {
        labels.extend((1..=v.gamma).map(|b| ALabel::Outp(a, b)));
    }
    for &a in &known {
        for b in (1..=v.gamma).filter(|b| !known.contains(b)) {
            for &c in known.iter().filter(|&&c| c != a) {
                labels.push(ALabel::PartialSync(a, b, c));
            }
        }
    }
    labels
        .into_iter()
        .map(|label| AEdge { label, source: v.clone(), target: label.target(v).expect("generated labels are typed") })
        .collect()
}

/// A finite transition system over `A`, explored from `start`.
#[derive(Clone, Debug)]
pub struct ALts {
    pub vertices: Vec<AVertex>,
    /// A printable description of each state.
    pub names: Vec<String>,
    pub edges: Vec<Vec<(ALabel, usize)>>,
    pub saturated: bool,
}

impl ALts {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// One line per edge: `src -label-> tgt`, states printed with their
    /// vertex.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, es) in self.edges.iter().enumerate() {
            for (l, j) in es {
                out.push_str(&format!("s{i} {} -{l}-> s{j} {}\n", self.vertices[i], self.vertices[*j]));
            }
        }
        out
    }
}

fn explore<S, F>(start: S, v: AVertex, mut succ: F, budget: Budget) -> Result<ALts>
where
    S: Clone + Eq + Hash + fmt::Display,
    F: FnMut(&S, &AVertex) -> Result<Vec<(ALabel, S)>>,
{
    let mut index: HashMap<(AVertex, S), usize> = HashMap::new();
    let mut states = vec![(v.clone(), start.clone())];
    index.insert((v, start), 0);
    let mut edges = Vec::new();
    let mut depth = vec![0usize];
    let mut saturated = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        while edges.len() <= i {
            edges.push(Vec::new());
        }
        if depth[i] >= budget.max_depth {
            saturated = false;
            continue;
        }
        let (v, s) = states[i].clone();
        let mut out = Vec::new();
        for (label, t) in succ(&s, &v)? {
            let key = (label.target(&v)?, t);
            let j = match index.get(&key) {
                Some(&j) => j,
                None if states.len() >= budget.max_nodes => {
                    saturated = false;
                    continue;
                }
                None => {
                    let j = states.len();
                    index.insert(key.clone(), j);
                    states.push(key);
                    depth.push(depth[i] + 1);
                    queue.push_back(j);
                    j
                }
            };
            if !out.contains(&(label, j)) {
                out.push((label, j));
            }
        }
        edges[i] = out;
    }
    edges.resize(states.len(), Vec::new());
    Ok(ALts {
        vertices: states.iter().map(|(v, _)| v.clone()).collect(),
        names: states.iter().map(|(_, s)| s.to_string()).collect(),
        edges,
        saturated,
    })
}

/// A process as seen over `A`: parallel components, each a guarded sum
/// or a restriction not yet performed, typed in `ctx`.
#[derive(Clone, Debug)]
struct Agent {
    ctx: Context,
    components: Vec<Process>,
    defs: Arc<Defs>,
}

impl PartialEq for Agent {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.components == other.components
    }
}

impl Eq for Agent {}

impl Hash for Agent {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.hash(state);
        self.components.hash(state);
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.components.iter().map(|c| pretty_process(c, self.ctx)).collect();
        f.write_str(&parts.join(" | "))
    }
}

impl Agent {
    fn new(ctx: Context, parts: Vec<Process>, defs: Arc<Defs>) -> Result<Agent> {
        let mut components = Vec::new();
        let mut todo = parts;
        while let Some(p) = todo.pop() {
            match unfold(&p, ctx, &defs)? {
                Process::Par(l, r) => {
                    todo.push(*l);
                    todo.push(*r);
                }
                Process::Sum(b) if b.is_empty() => {}
                other => components.push(other),
            }
        }
        components.sort();
        Ok(Agent { ctx, components, defs })
    }

    /// Replaces components `done` by `new`, typed in `ctx + grow`.
    fn step(&self, done: &[usize], new: Vec<Process>, grow: usize) -> Result<Agent> {
        let mut parts: Vec<Process> = self
            .components
            .iter()
            .enumerate()
            .filter(|(i, _)| !done.contains(i))
            .map(|(_, c)| c.weaken(self.ctx, grow))
            .collect();
        parts.extend(new);
        Agent::new(self.ctx + grow, parts, self.defs.clone())
    }

    fn branches(&self) -> Vec<(usize, &Prefix, &Process)> {
        let mut out = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            if let Process::Sum(bs) = c {
                out.extend(bs.iter().map(|(p, k)| (i, p, k)));
            }
        }
        out
    }

    fn successors(&self, v: &AVertex) -> Result<Vec<(ALabel, Agent)>> {
        let ctx = self.ctx;
        let mut out = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            if let Process::Nu(body) = c {
                out.push((ALabel::NuStep, self.step(&[i], vec![(**body).clone()], 1)?));
            }
        }
        let branches = self.branches();
        for &(i, prefix, cont) in &branches {
            match *prefix {
                Prefix::Tick => out.push((ALabel::Heart, self.step(&[i], vec![cont.clone()], 0)?)),
                Prefix::In(a) if v.known(a) => out.push((ALabel::Inp(a), self.step(&[i], vec![cont.clone()], 1)?)),
                Prefix::Out(a, b) if v.known(a) => {
                    out.push((ALabel::Outp(a, b), self.step(&[i], vec![cont.clone()], 0)?))
                }
                _ => {}
            }
        }
        for &(i, p, k) in &branches {
            let Prefix::Out(a, b) = *p else { continue };
            for &(j, q, l) in &branches {
                let Prefix::In(c) = *q else { continue };
                if i == j {
                    continue;
                }
                if a == c {
                    out.push((ALabel::Delay, self.step(&[i, j], vec![k.clone(), l.instantiate_top(ctx, b)], 0)?));
                } else if v.known(a) && v.known(c) && !v.known(b) {
                    let k = k.weaken(ctx, 1);
                    out.push((ALabel::PartialSync(a, b, c), self.step(&[i, j], vec![k, l.clone()], 1)?));
                }
            }
        }
        Ok(out)
    }
}

/// The transition system over `A` of a process, seen through `iface`.
/// Restrictions stay where they are in the term and are performed by `ν`
/// steps.
pub fn project_pi(p: &TypedProcess, iface: &AVertex, budget: Budget) -> Result<ALts> {
    if iface.gamma != p.ctx {
        return Err(Error::InterfaceMismatch(format!("vertex has Γ={} for a process in {}", iface.gamma, p.ctx)));
    }
    let start = Agent::new(p.ctx, vec![p.process.clone()], p.defs.clone())?;
    explore(start, iface.clone(), |s, v| s.successors(v), budget)
}

/// A strategy state with channels kept in place, so that labels can name
/// them. Players are sorted and compacted as in `SDState::canonical`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Placed(SDState);

impl fmt::Display for Placed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .assign
            .iter()
            .zip(&self.0.position.players)
            .map(|(d, a)| {
                let a: Vec<String> = a.iter().map(|c| (c + 1).to_string()).collect();
                format!("({}) {d}", a.join(" "))
            })
            .collect();
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" | "))
    }
}

impl Placed {
    fn new(s: SDState) -> Result<Placed> {
        let channels = s.position.channels;
        let mut items = Vec::new();
        for (d, attach) in s.assign.iter().zip(&s.position.players) {
            let table = d.resolve()?;
            if table.entries.is_empty() {
                continue;
            }
            let resolved = crate::strategy::Definite::Table(table);
            let free: Vec<usize> = resolved.free_channels().into_iter().collect();
            let mut map = vec![0; attach.len()];
            for (i, &f) in free.iter().enumerate() {
                map[f - 1] = i + 1;
            }
            items.push((resolved.rename_injective(&map, free.len()), free.iter().map(|&f| attach[f - 1]).collect()));
        }
        let (canon, _) = canonicalize(&items, channels, channels);
        Ok(Placed(SDState {
            position: Position { channels, players: canon.items.iter().map(|(_, a)| a.clone()).collect() },
            assign: canon.items.into_iter().map(|(d, _)| d).collect(),
        }))
    }

    fn successors(&self, v: &AVertex) -> Result<Vec<(ALabel, Placed)>> {
        let s = &self.0;
        let players = &s.position.players;
        let global = |p: usize, a: usize| players[p][a - 1] + 1;
        let mut out = Vec::new();
        for e in succ(s)? {
            let Some(mv) = &e.mv else { continue };
            let label = match (e.label, mv.kind) {
                (SDLabel::Heart, _) => ALabel::Heart,
                (_, SeedKind::Nu(_)) => ALabel::NuStep,
                (SDLabel::Silent, _) => ALabel::Delay,
                (_, SeedKind::In(_, a)) if v.known(global(mv.acting[0], a)) => ALabel::Inp(global(mv.acting[0], a)),
                (_, SeedKind::Out(_, a, b)) if v.known(global(mv.acting[0], a)) => {
                    ALabel::Outp(global(mv.acting[0], a), global(mv.acting[0], b))
                }
                _ => continue,
            };
            out.push((label, Placed::new(e.target)?));
        }
        // Partial synchronisations: an output, then an input by another player.
        for p in 0..players.len() {
            let table = s.assign[p].resolve()?;
            for (&b, so) in &table.entries {
                let SeedKind::Out(_, a, c) = b else { continue };
                let (ga, gb) = (global(p, a), global(p, c));
                if !v.known(ga) || v.known(gb) {
                    continue;
                }
                for i in 1..=so.len() {
                    let first = basic_edge(s, p, b, i)?;
                    let mv = first.mv.as_ref().expect("a move");
                    for q in (0..players.len()).filter(|&q| q != p) {
                        let tq = s.assign[q].resolve()?;
                        let q1 = mv.origin.iter().position(|o| o.base_player == q && o.seed_player.is_none()).unwrap();
                        for (&b2, ri) in &tq.entries {
                            let SeedKind::In(_, x) = b2 else { continue };
                            let gc = global(q, x);
                            if !v.known(gc) || gc == ga {
                                continue;
                            }
                            for j in 1..=ri.len() {
                                let second = basic_edge(&first.target, q1, b2, j)?;
                                out.push((ALabel::PartialSync(ga, gb, gc), Placed::new(second.target)?));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The transition system over `A` of a strategy state, seen through
/// `iface`, whose local channels are the channels of the position.
pub fn project_sd(s: &SDState, iface: &AVertex, budget: Budget) -> Result<ALts> {
    if iface.gamma != s.position.channels {
        return Err(Error::InterfaceMismatch(format!(
            "vertex has Γ={} for a position with {} channels",
            iface.gamma, s.position.channels
        )));
    }
    explore(Placed::new(s.clone())?, iface.clone(), |x, v| x.successors(v), budget)
}

/// The vertices a label sequence visits from `v`.
pub fn typed_path(v: &AVertex, w: &[ALabel]) -> Result<Vec<AVertex>> {
    let mut out = vec![v.clone()];
    for l in w {
        let next = l.target(out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

/// Whether two agents sharing an interface can perform `w1` and `w2`
/// as the two halves of one closed-world evolution. Delays may be
/// inserted on either side; aligned steps must be a delay against a delay,
/// a tick or a restriction against a delay, or an input against an output
/// on the same interface channel.
pub fn complementary(v1: &AVertex, w1: &[ALabel], v2: &AVertex, w2: &[ALabel]) -> Result<bool> {
    if v1.delta != v2.delta {
        return Err(Error::Typing(format!("interfaces of size {} and {}", v1.delta, v2.delta)));
    }
    let p1 = typed_path(v1, w1)?;
    let p2 = typed_path(v2, w2)?;
    let alone = |l: ALabel| matches!(l, ALabel::Delay | ALabel::Heart | ALabel::NuStep);
    let same = |x: &AVertex, a: Chan, y: &AVertex, b: Chan| (0..x.delta).any(|i| x.h[i] == a && y.h[i] == b);
    let paired = |i: usize, j: usize| match (w1[i], w2[j]) {
        (ALabel::Delay, ALabel::Delay) | (ALabel::Heart, ALabel::Delay) | (ALabel::Delay, ALabel::Heart) => true,
        (ALabel::Inp(a), ALabel::Outp(b, _)) => p1[i].delta == p2[j].delta && same(&p1[i], a, &p2[j], b),
        (ALabel::Outp(a, _), ALabel::Inp(b)) => p1[i].delta == p2[j].delta && same(&p1[i], a, &p2[j], b),
        _ => false,
    };
    let (n, m) = (w1.len(), w2.len());
    let mut reach = vec![vec![false; m + 1]; n + 1];
    reach[0][0] = true;
    for i in 0..=n {
        for j in 0..=m {
            if !reach[i][j] {
                continue;
            }
            if i < n && alone(w1[i]) {
                reach[i + 1][j] = true;
            }
            if j < m && alone(w2[j]) {
                reach[i][j + 1] = true;
            }
            if i < n && j < m && paired(i, j) {
                reach[i + 1][j + 1] = true;
            }
        }
    }
    Ok(reach[n][m])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bisim {
    Bisimilar,
    /// A sequence of labels after which the two sides differ, ending with
    /// a step one side can take and the other cannot match.
    NotBisimilar { witness: Vec<ALabel> },
    Unknown,
}

/// Weak bisimilarity of the initial states, `δ` being silent.
pub fn weak_bisim(l1: &ALts, l2: &ALts) -> Result<Bisim> {
    if l1.vertices.first() != l2.vertices.first() {
        return Err(Error::InterfaceMismatch("transition systems start from different vertices".into()));
    }
    if !l1.saturated || !l2.saturated {
        return Ok(Bisim::Unknown);
    }
    let off = l1.len();
    let mut edges: Vec<Vec<(ALabel, usize)>> = l1.edges.clone();
    edges.extend(l2.edges.iter().map(|es| es.iter().map(|&(l, j)| (l, j + off)).collect()));
    let n = edges.len();

    let closure: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            let mut out = Vec::new();
            while let Some(x) = stack.pop() {
                out.push(x);
                for &(l, y) in &edges[x] {
                    if l == ALabel::Delay && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            out.sort();
            out
        })
        .collect();
    // Weak moves: `δ` reaches the closure, a visible label `δ* l δ*`.
    let weak: Vec<Vec<(ALabel, usize)>> = (0..n)
        .map(|s| {
            let mut set: BTreeSet<(ALabel, usize)> = closure[s].iter().map(|&t| (ALabel::Delay, t)).collect();
            for &x in &closure[s] {
                for &(l, y) in &edges[x] {
                    if l != ALabel::Delay {
                        set.extend(closure[y].iter().map(|&t| (l, t)));
                    }
                }
            }
            set.into_iter().collect()
        })
        .collect();

    let mut rounds: Vec<Vec<usize>> = vec![vec![0; n]];
    loop {
        let block = rounds.last().unwrap();
        let mut ids: HashMap<(usize, BTreeSet<(ALabel, usize)>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|s| {
                let sig: BTreeSet<(ALabel, usize)> = weak[s].iter().map(|&(l, t)| (l, block[t])).collect();
                let k = ids.len();
                *ids.entry((block[s], sig)).or_insert(k)
            })
            .collect();
        let count = |b: &[usize]| b.iter().collect::<BTreeSet<_>>().len();
        let done = count(&next) == count(block);
        rounds.push(next);
        if done {
            break;
        }
    }
    let last = rounds.last().unwrap();
    if last[0] == last[off] {
        return Ok(Bisim::Bisimilar);
    }
    Ok(Bisim::NotBisimilar { witness: witness(&weak, &rounds, 0, off) })
}

/// Follows the refinement history back to the first round, collecting
/// labels that keep the two states apart.
fn witness(weak: &[Vec<(ALabel, usize)>], rounds: &[Vec<usize>], s: usize, t: usize) -> Vec<ALabel> {
    let r = rounds.iter().position(|b| b[s] != b[t]).expect("states are apart");
    if r == 0 {
        return Vec::new();
    }
    let prev = &rounds[r - 1];
    // A move of one side into a block the other side cannot reach.
    for (x, y) in [(s, t), (t, s)] {
        for &(l, x1) in &weak[x] {
            let answers: Vec<usize> = weak[y].iter().filter(|&&(m, _)| m == l).map(|&(_, y1)| y1).collect();
            if answers.iter().all(|&y1| prev[y1] != prev[x1]) {
                let mut out = vec![l];
                if let Some(&y1) = answers.first() {
                    out.extend(witness(weak, rounds, x1, y1));
                }
                return out;
            }
        }
    }
    unreachable!("split states have differing signatures")
}

/// A sum whose branches may start with a restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NuBranch {
    Prefixed(Prefix, Process),
    Nu(Process),
}

/// Encodes a sum with `ν`-guarded branches, typed in `ctx`, into the
/// process grammar: `ν.P + Σ` becomes `ν c.(c!c.ν.P + Σ | c?.0)`, so that
/// choosing the restriction is an internal step on a private channel.
pub fn encode_nu_in_sum(ctx: Context, branches: &[NuBranch]) -> Process {
    if !branches.iter().any(|b| matches!(b, NuBranch::Nu(_))) {
        return Process::Sum(
            branches
                .iter()
                .map(|b| match b {
                    NuBranch::Prefixed(p, k) => (p.clone(), k.clone()),
                    NuBranch::Nu(_) => unreachable!(),
                })
                .collect(),
        );
    }
    let c = ctx + 1;
    let sum = branches
        .iter()
        .map(|b| match b {
            NuBranch::Prefixed(p, k) => (p.clone(), k.weaken(ctx, 1)),
            NuBranch::Nu(body) => (Prefix::Out(c, c), Process::nu(body.weaken(ctx, 1))),
        })
        .collect();
    Process::nu(Process::par(Process::Sum(sum), Process::prefixed(Prefix::In(c), Process::nil())))
}
