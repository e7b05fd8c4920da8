//! Reduction semantics: normal forms up to structural congruence, the
//! reduction graph, the `⊥` predicate and fair testing on processes.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::canon::canonicalize;
use crate::error::{Error, Result};
use crate::lts::{bot, BotReport, Budget, Step, Verdict};
use crate::process::{pretty_process, unfold, Chan, Context, Defs, Prefix, Process, Renaming, TypedProcess};

/// A process up to structural congruence: `ν^k (S1 | ... | Sn)` where the
/// `Si` are non-empty guarded sums. Each component is stored as a template
/// over its own free channels, in order of first occurrence, together with
/// the global channels those stand for. Free channels are `1..=ctx`, the
/// restricted ones `ctx+1..=ctx+restricted`. Components are sorted and the
/// restricted channels canonically numbered, so congruent processes give
/// equal states.
#[derive(Clone, Debug)]
pub struct PiState {
    pub ctx: Context,
    pub restricted: usize,
    pub components: Vec<(Process, Vec<Chan>)>,
    pub defs: Arc<Defs>,
}

// The definition table is shared by all states of one exploration and is
// left out of comparisons.
impl PartialEq for PiState {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.restricted == other.restricted && self.components == other.components
    }
}

impl Eq for PiState {}

impl Hash for PiState {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.hash(state);
        self.restricted.hash(state);
        self.components.hash(state);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PiLabel {
    Tau,
    Heart,
    Id,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiEdge {
    pub label: PiLabel,
    pub target: PiState,
}

/// Compacts a sum typed in `global` over its free channels.
fn compact(sum: &Process, global: Context) -> (Process, Vec<Chan>) {
    let free = sum.free_channels(global);
    let template = sum.rename_with(&|c| free.iter().position(|&f| f == c).unwrap() + 1, global, free.len());
    (template, free)
}

struct Flattener<'a> {
    defs: &'a Defs,
    ctx: Context,
    restricted: usize,
    components: Vec<(Process, Vec<Chan>)>,
}

impl Flattener<'_> {
    /// `env[i]` is the global channel for local level `i + 1`.
    fn walk(&mut self, p: &Process, env: &mut Vec<Chan>) {
        match p {
            Process::Sum(branches) if branches.is_empty() => {}
            Process::Sum(_) => {
                let global = self.ctx + self.restricted;
                let local = env.len();
                let sum = p.rename_with(&|c| env[c - 1], local, global);
                self.components.push(compact(&sum, global));
            }
            Process::Par(l, r) => {
                self.walk(l, env);
                self.walk(r, env);
            }
            Process::Nu(body) => {
                self.restricted += 1;
                env.push(self.ctx + self.restricted);
                self.walk(body, env);
                env.pop();
            }
            Process::Call(..) => {
                let unfolded = unfold(p, env.len(), self.defs).expect("validated definitions unfold");
                self.walk(&unfolded, env);
            }
        }
    }
}

/// Normal form of `p` up to structural congruence.
pub fn normalize(p: &TypedProcess) -> PiState {
    normalize_parts(&p.process, p.ctx, p.defs.clone())
}

fn normalize_parts(p: &Process, ctx: Context, defs: Arc<Defs>) -> PiState {
    let mut flat = Flattener { defs: &defs, ctx, restricted: 0, components: Vec::new() };
    let mut env: Vec<Chan> = (1..=ctx).collect();
    flat.walk(p, &mut env);
    let channels = ctx + flat.restricted;
    let items: Vec<(Process, Vec<usize>)> =
        flat.components.into_iter().map(|(t, args)| (t, args.into_iter().map(|c| c - 1).collect())).collect();
    let (canon, _) = canonicalize(&items, channels, ctx);
    let components = canon.items.into_iter().map(|(t, args)| (t, args.into_iter().map(|c| c + 1).collect())).collect();
    PiState { ctx, restricted: canon.permutable, components, defs }
}

impl PiState {
    fn global(&self) -> Context {
        self.ctx + self.restricted
    }

    /// Components instantiated in the global context.
    pub fn instantiated(&self) -> Vec<Process> {
        let global = self.global();
        self.components.iter().map(|(t, args)| t.rename_with(&|c| args[c - 1], args.len(), global)).collect()
    }

    /// The process `ν^k (S1 | ... | Sn)` typed in `ctx`.
    pub fn to_process(&self) -> TypedProcess {
        TypedProcess { ctx: self.ctx, process: self.rebuild(self.instantiated()), defs: self.defs.clone() }
    }

    fn rebuild(&self, parts: Vec<Process>) -> Process {
        let mut body = parts.into_iter().reduce(Process::par).unwrap_or_else(Process::nil);
        for _ in 0..self.restricted {
            body = Process::nu(body);
        }
        body
    }

    fn rebuilt_state(&self, parts: Vec<Process>) -> PiState {
        normalize_parts(&self.rebuild(parts), self.ctx, self.defs.clone())
    }

    /// Reduction edges: one `τ` per communicating pair of branches, one
    /// `♥` per tick branch, and the identity.
    pub fn successors(&self) -> Vec<PiEdge> {
        let global = self.global();
        let comps = self.instantiated();
        let branches = |i: usize| match &comps[i] {
            Process::Sum(b) => b.as_slice(),
            _ => unreachable!("components are sums"),
        };
        let others = |skip: &[usize]| -> Vec<Process> {
            comps.iter().enumerate().filter(|(k, _)| !skip.contains(k)).map(|(_, p)| p.clone()).collect()
        };
        let mut edges = Vec::new();
        for i in 0..comps.len() {
            for (prefix, cont) in branches(i) {
                if *prefix == Prefix::Tick {
                    let mut parts = others(&[i]);
                    parts.push(cont.clone());
                    edges.push(PiEdge { label: PiLabel::Heart, target: self.rebuilt_state(parts) });
                }
            }
        }
        for i in 0..comps.len() {
            for (prefix, out_cont) in branches(i) {
                let Prefix::Out(a, b) = *prefix else { continue };
                for j in 0..comps.len() {
                    if i == j {
                        continue;
                    }
                    for (prefix, in_cont) in branches(j) {
                        if *prefix != Prefix::In(a) {
                            continue;
                        }
                        let mut parts = others(&[i, j]);
                        parts.push(out_cont.clone());
                        parts.push(in_cont.instantiate_top(global, b));
                        edges.push(PiEdge { label: PiLabel::Tau, target: self.rebuilt_state(parts) });
                    }
                }
            }
        }
        edges.push(PiEdge { label: PiLabel::Id, target: self.clone() });
        edges
    }
}

impl fmt::Display for PiState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_process(&self.to_process().process, self.ctx))
    }
}

/// Membership in `⊥` for the reduction graph.
pub fn bot_pi(s: &PiState, budget: Budget) -> BotReport<PiState> {
    bot(
        s.clone(),
        |s| {
            s.successors()
                .into_iter()
                .filter_map(|e| match e.label {
                    PiLabel::Tau => Some((Step::Silent, e.target)),
                    PiLabel::Heart => Some((Step::Heart, e.target)),
                    PiLabel::Id => None,
                })
                .collect()
        },
        budget,
    )
}

/// States reachable from `s` by reduction, with their non-identity
/// edges, in breadth-first order.
#[derive(Clone, Debug)]
pub struct PiExploration {
    pub states: Vec<PiState>,
    pub edges: Vec<(usize, PiLabel, usize)>,
    /// Whether every reachable state was visited within the budget.
    pub saturated: bool,
}

pub fn explore_pi(s: &PiState, budget: Budget) -> PiExploration {
    let mut index = std::collections::HashMap::new();
    index.insert(s.clone(), 0);
    let mut states = vec![s.clone()];
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
        for e in states[next].successors() {
            if e.label == PiLabel::Id {
                continue;
            }
            let j = match index.get(&e.target) {
                Some(&j) => j,
                None if states.len() >= budget.max_nodes => {
                    saturated = false;
                    continue;
                }
                None => {
                    index.insert(e.target.clone(), states.len());
                    states.push(e.target);
                    depth.push(depth[next] + 1);
                    states.len() - 1
                }
            };
            edges.push((next, e.label, j));
        }
        next += 1;
    }
    PiExploration { states, edges, saturated }
}

/// A test: rename the process along `h`, then run it against `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiTest {
    pub h: Renaming,
    pub r: TypedProcess,
}

impl fmt::Display for PiTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h = {}, R = {}", self.h, pretty_process(&self.r.process, self.r.ctx))
    }
}

/// The composite `P[h] | R`.
pub fn compose(p: &TypedProcess, t: &PiTest) -> Result<TypedProcess> {
    if t.h.source != p.ctx {
        return Err(Error::ContextMismatch { expected: p.ctx, found: t.h.source });
    }
    if t.r.ctx != t.h.target {
        return Err(Error::ContextMismatch { expected: t.h.target, found: t.r.ctx });
    }
    let defs = Arc::new(p.defs.merge(&t.r.defs)?);
    Ok(TypedProcess { ctx: t.h.target, process: Process::par(p.process.rename(&t.h), t.r.process.clone()), defs })
}

pub fn passes(p: &TypedProcess, t: &PiTest, budget: Budget) -> Result<BotReport<PiState>> {
    Ok(bot_pi(&normalize(&compose(p, t)?), budget))
}

/// All set partitions of `1..=n` as maps onto `1..=blocks`, in
/// restricted-growth order.
pub fn partitions(n: usize) -> Vec<Renaming> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let max = prefix.iter().copied().max().unwrap_or(0);
        for c in 1..=max + 1 {
            prefix.push(c);
            go(prefix, n, out);
            prefix.pop();
        }
    }
    let mut maps = Vec::new();
    go(&mut Vec::new(), n, &mut maps);
    maps.into_iter()
        .map(|map| {
            let target = map.iter().copied().max().unwrap_or(0);
            Renaming { source: n, target, map }
        })
        .collect()
}

/// Processes in `ctx` of exactly `size`, where each prefix and each
/// restriction counts one. Sums have at most two branches, unordered; a
/// restriction is only generated when its channel is used.
pub fn processes_of_size(ctx: Context, size: usize) -> Vec<Process> {
    let mut memo = std::collections::HashMap::new();
    gen(ctx, size, &mut memo)
}

type Memo = std::collections::HashMap<(Context, usize), Vec<Process>>;

fn prefixes(ctx: Context) -> Vec<Prefix> {
    let mut out = Vec::new();
    for a in 1..=ctx {
        for b in 1..=ctx {
            out.push(Prefix::Out(a, b));
        }
    }
    out.extend((1..=ctx).map(Prefix::In));
    out.push(Prefix::Tick);
    out
}

fn guarded(ctx: Context, size: usize, memo: &mut Memo) -> Vec<(Prefix, Process)> {
    let mut out = Vec::new();
    if size == 0 {
        return out;
    }
    for prefix in prefixes(ctx) {
        for cont in gen(prefix.extend(ctx), size - 1, memo) {
            out.push((prefix.clone(), cont));
        }
    }
    out
}

fn gen(ctx: Context, size: usize, memo: &mut Memo) -> Vec<Process> {
    if let Some(v) = memo.get(&(ctx, size)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if size == 0 {
        out.push(Process::nil());
    } else {
        for (prefix, cont) in guarded(ctx, size, memo) {
            out.push(Process::prefixed(prefix, cont));
        }
        for body in gen(ctx + 1, size - 1, memo) {
            if body.free_channels(ctx + 1).contains(&(ctx + 1)) {
                out.push(Process::nu(body));
            }
        }
        for left in 1..size {
            let right = size - left;
            if left > right {
                break;
            }
            let ls = guarded(ctx, left, memo);
            let rs = guarded(ctx, right, memo);
            for (i, l) in ls.iter().enumerate() {
                for (j, r) in rs.iter().enumerate() {
                    if left == right && j < i {
                        continue;
                    }
                    out.push(Process::Sum(vec![l.clone(), r.clone()]));
                }
            }
            let ls = gen(ctx, left, memo);
            let rs = gen(ctx, right, memo);
            for (i, l) in ls.iter().enumerate() {
                for (j, r) in rs.iter().enumerate() {
                    if left == right && j < i {
                        continue;
                    }
                    out.push(Process::par(l.clone(), r.clone()));
                }
            }
        }
    }
    memo.insert((ctx, size), out.clone());
    out
}

/// Deterministic enumeration of tests for processes in `ctx`: every
/// partition of the channels, against every observer of size at most `k`,
/// without duplicates up to structural congruence.
pub fn enumerate_tests(ctx: Context, k: usize) -> Vec<PiTest> {
    let defs = Arc::new(Defs::new());
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for h in partitions(ctx) {
        for size in 0..=k {
            for r in processes_of_size(h.target, size) {
                let r = TypedProcess { ctx: h.target, process: r, defs: defs.clone() };
                if seen.insert((h.clone(), normalize(&r))) {
                    out.push(PiTest { h: h.clone(), r });
                }
            }
        }
    }
    out
}

/// Outcome of a bounded equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence<T> {
    /// A test with exact and different verdicts.
    Distinguished { test: T, left: Verdict, right: Verdict },
    /// Every enumerated test got exact, agreeing verdicts.
    AgreeUpTo { k: usize, tests: usize },
    /// No test distinguishes, but some verdicts were not exact.
    Unknown { k: usize, tests: usize, undecided: usize },
}

/// Compares `p` and `q` on every test of size at most `k`.
pub fn fair_equiv_pi(p: &TypedProcess, q: &TypedProcess, k: usize, budget: Budget) -> Result<Equivalence<PiTest>> {
    if p.ctx != q.ctx {
        return Err(Error::ContextMismatch { expected: p.ctx, found: q.ctx });
    }
    let tests = enumerate_tests(p.ctx, k);
    let mut undecided = 0;
    for t in &tests {
        let left = passes(p, t, budget)?.verdict;
        let right = passes(q, t, budget)?.verdict;
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
