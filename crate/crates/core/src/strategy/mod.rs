//! Innocent strategies in syntactic form.
//!
//! A definite strategy over `[n]` is a table sending every basic seed from
//! `[n]` to a strategy over the seed's final arity; a strategy is an
//! ordered sum of definite ones. Processes translate into definite
//! strategies; recursive calls become references that are unfolded on
//! demand, which keeps every strategy a finite tree.

mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::play::{views_of, Play, SeedKind, View};
use crate::position::Position;
use crate::process::{unfold, Chan, Context, Defs, Prefix, Process, TypedProcess};

pub use text::{parse_definite, parse_strategy, parse_strategy_file, strategy_file, StrategyFile};

/// The basic seeds from `[n]`, in table order.
pub fn basic_seeds(n: usize) -> Vec<SeedKind> {
    let mut out = vec![SeedKind::ForkL(n), SeedKind::ForkR(n), SeedKind::Tick(n), SeedKind::Nu(n)];
    out.extend((1..=n).map(|a| SeedKind::In(n, a)));
    for a in 1..=n {
        out.extend((1..=n).map(|b| SeedKind::Out(n, a, b)));
    }
    out.sort();
    out
}

/// Arity of the player after a basic seed.
pub fn final_arity(b: SeedKind) -> usize {
    match b {
        SeedKind::In(n, _) | SeedKind::Nu(n) => n + 1,
        SeedKind::ForkL(n) | SeedKind::ForkR(n) | SeedKind::Tick(n) | SeedKind::Out(n, _, _) => n,
        SeedKind::Fork(n) | SeedKind::Tau(n, ..) => n,
    }
}

fn seed_arity(b: SeedKind) -> usize {
    b.initial_arities()[0]
}

fn check_basic(b: SeedKind, n: usize) -> Result<()> {
    b.validate()?;
    if !b.is_basic() {
        return Err(Error::InvalidSeed(format!("{b} is not a basic seed")));
    }
    if seed_arity(b) != n {
        return Err(Error::ArityMismatch { expected: n, found: seed_arity(b) });
    }
    Ok(())
}

/// A total table; seeds that are not listed map to the empty sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    pub arity: usize,
    pub entries: BTreeMap<SeedKind, Strategy>,
}

/// The translation of a recursive call, unfolded on demand.
#[derive(Clone, Debug)]
pub struct Reference {
    pub name: String,
    pub args: Vec<Chan>,
    pub arity: usize,
    pub defs: Arc<Defs>,
}

impl Reference {
    fn parts(&self) -> (&str, &[Chan], usize) {
        (&self.name, &self.args, self.arity)
    }
}

impl PartialEq for Reference {
    fn eq(&self, other: &Self) -> bool {
        self.parts() == other.parts()
    }
}

impl Eq for Reference {}

impl Hash for Reference {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.parts().hash(state);
    }
}

impl PartialOrd for Reference {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Reference {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.parts().cmp(&other.parts())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Definite {
    Table(Arc<Table>),
    Ref(Arc<Reference>),
}

/// An ordered sum of definite strategies. The empty sum is `∅`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strategy {
    pub arity: usize,
    pub summands: Vec<Definite>,
}

impl Definite {
    /// Builds a table, checking every entry. Entries mapped to `∅` are
    /// dropped, so tables differing only in explicit `∅`s are equal.
    pub fn table(arity: usize, entries: impl IntoIterator<Item = (SeedKind, Strategy)>) -> Result<Definite> {
        let mut map = BTreeMap::new();
        for (b, s) in entries {
            check_basic(b, arity)?;
            if s.arity != final_arity(b) {
                return Err(Error::ArityMismatch { expected: final_arity(b), found: s.arity });
            }
            if map.contains_key(&b) {
                return Err(Error::InvalidSeed(format!("{b} listed twice")));
            }
            if !s.is_empty() {
                map.insert(b, s);
            }
        }
        Ok(Definite::Table(Arc::new(Table { arity, entries: map })))
    }

    /// The table sending every basic seed to `∅`.
    pub fn inert(arity: usize) -> Definite {
        Definite::Table(Arc::new(Table { arity, entries: BTreeMap::new() }))
    }

    pub fn reference(name: &str, args: Vec<Chan>, arity: usize, defs: Arc<Defs>) -> Result<Definite> {
        let def = defs.get(name)?;
        if def.arity != args.len() {
            return Err(Error::ArityMismatch { expected: def.arity, found: args.len() });
        }
        if let Some(&c) = args.iter().find(|&&c| c == 0 || c > arity) {
            return Err(Error::IndexOutOfRange { index: c, ctx: arity });
        }
        Ok(Definite::Ref(Arc::new(Reference { name: name.to_string(), args, arity, defs })))
    }

    pub fn arity(&self) -> usize {
        match self {
            Definite::Table(t) => t.arity,
            Definite::Ref(r) => r.arity,
        }
    }

    /// The table of this strategy, unfolding a reference if needed.
    pub fn resolve(&self) -> Result<Arc<Table>> {
        match self {
            Definite::Table(t) => Ok(t.clone()),
            Definite::Ref(r) => {
                let body = unfold(&Process::Call(r.name.clone(), r.args.clone()), r.arity, &r.defs)?;
                match translate_at(&body, r.arity, &r.defs) {
                    Definite::Table(t) => Ok(t),
                    Definite::Ref(_) => Err(Error::UnguardedRecursion(r.name.clone())),
                }
            }
        }
    }

    /// Whether the table maps every seed to `∅`.
    pub fn is_inert(&self) -> Result<bool> {
        Ok(self.resolve()?.entries.is_empty())
    }

    /// The definitions references in this strategy point to, if any.
    pub fn defs(&self) -> Option<Arc<Defs>> {
        match self {
            Definite::Ref(r) => Some(r.defs.clone()),
            Definite::Table(t) => t.entries.values().flat_map(|s| &s.summands).find_map(Definite::defs),
        }
    }

    /// Channels of `1..=arity` the strategy may ever act on, in increasing
    /// order. References count all their arguments.
    pub fn free_channels(&self) -> BTreeSet<Chan> {
        let mut out = BTreeSet::new();
        self.collect_free(self.arity(), &mut out);
        out
    }

    fn collect_free(&self, bound: usize, out: &mut BTreeSet<Chan>) {
        match self {
            Definite::Ref(r) => out.extend(r.args.iter().filter(|&&c| c <= bound)),
            Definite::Table(t) => {
                for (b, s) in &t.entries {
                    match *b {
                        SeedKind::In(_, a) => {
                            if a <= bound {
                                out.insert(a);
                            }
                        }
                        SeedKind::Out(_, a, c) => out.extend([a, c].into_iter().filter(|&x| x <= bound)),
                        _ => {}
                    }
                    for d in &s.summands {
                        d.collect_free(bound, out);
                    }
                }
            }
        }
    }

    /// Renames along an injective map from `1..=arity` (entry `0` for
    /// channels that must not occur) into `1..=target`.
    pub fn rename_injective(&self, map: &[Chan], target: usize) -> Definite {
        debug_assert_eq!(map.len(), self.arity());
        match self {
            Definite::Ref(r) => Definite::Ref(Arc::new(Reference {
                name: r.name.clone(),
                args: r.args.iter().map(|&c| map[c - 1]).collect(),
                arity: target,
                defs: r.defs.clone(),
            })),
            Definite::Table(t) => {
                let mut lifted = map.to_vec();
                lifted.push(target + 1);
                let entries = t
                    .entries
                    .iter()
                    .map(|(b, s)| {
                        let (nb, m) = match *b {
                            SeedKind::ForkL(_) => (SeedKind::ForkL(target), map),
                            SeedKind::ForkR(_) => (SeedKind::ForkR(target), map),
                            SeedKind::Tick(_) => (SeedKind::Tick(target), map),
                            SeedKind::Nu(_) => (SeedKind::Nu(target), &lifted[..]),
                            SeedKind::In(_, a) => (SeedKind::In(target, map[a - 1]), &lifted[..]),
                            SeedKind::Out(_, a, c) => (SeedKind::Out(target, map[a - 1], map[c - 1]), map),
                            other => unreachable!("{other} in a table"),
                        };
                        let arity = final_arity(nb);
                        let summands = s.summands.iter().map(|d| d.rename_injective(m, arity)).collect();
                        (nb, Strategy { arity, summands })
                    })
                    .collect();
                Definite::Table(Arc::new(Table { arity: target, entries }))
            }
        }
    }

    /// The view acceptance count of the definite strategy.
    fn ways(&self, steps: &[SeedKind]) -> Result<u64> {
        match steps.split_first() {
            None => Ok(1),
            Some((&b, rest)) => derive(self, b)?.ways(rest),
        }
    }
}

impl Strategy {
    pub fn empty(arity: usize) -> Strategy {
        Strategy { arity, summands: Vec::new() }
    }

    pub fn single(d: Definite) -> Strategy {
        Strategy { arity: d.arity(), summands: vec![d] }
    }

    pub fn sum(arity: usize, summands: Vec<Definite>) -> Result<Strategy> {
        if let Some(d) = summands.iter().find(|d| d.arity() != arity) {
            return Err(Error::ArityMismatch { expected: arity, found: d.arity() });
        }
        Ok(Strategy { arity, summands })
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    fn ways(&self, steps: &[SeedKind]) -> Result<u64> {
        let mut total = 0u64;
        for d in &self.summands {
            total = total.saturating_add(d.ways(steps)?);
        }
        Ok(total)
    }
}

/// Translation of a process into its definite strategy.
pub fn translate(p: &TypedProcess) -> Definite {
    let body = unfold(&p.process, p.ctx, &p.defs).expect("typed processes have guarded definitions");
    translate_at(&body, p.ctx, &p.defs)
}

fn translate_at(p: &Process, ctx: Context, defs: &Arc<Defs>) -> Definite {
    let table = |entries: BTreeMap<SeedKind, Strategy>| Definite::Table(Arc::new(Table { arity: ctx, entries }));
    match p {
        Process::Sum(branches) => {
            let mut entries: BTreeMap<SeedKind, Strategy> = BTreeMap::new();
            for (prefix, cont) in branches {
                let b = match *prefix {
                    Prefix::Out(a, c) => SeedKind::Out(ctx, a, c),
                    Prefix::In(a) => SeedKind::In(ctx, a),
                    Prefix::Tick => SeedKind::Tick(ctx),
                };
                let inner = prefix.extend(ctx);
                entries.entry(b).or_insert_with(|| Strategy::empty(inner)).summands.push(translate_at(cont, inner, defs));
            }
            table(entries)
        }
        Process::Par(l, r) => table(BTreeMap::from([
            (SeedKind::ForkL(ctx), Strategy::single(translate_at(l, ctx, defs))),
            (SeedKind::ForkR(ctx), Strategy::single(translate_at(r, ctx, defs))),
        ])),
        Process::Nu(body) => {
            table(BTreeMap::from([(SeedKind::Nu(ctx), Strategy::single(translate_at(body, ctx + 1, defs)))]))
        }
        Process::Call(name, args) => Definite::Ref(Arc::new(Reference {
            name: name.clone(),
            args: args.clone(),
            arity: ctx,
            defs: defs.clone(),
        })),
    }
}

/// Derivation along a basic seed: the table entry.
pub fn derive(d: &Definite, b: SeedKind) -> Result<Strategy> {
    check_basic(b, d.arity())?;
    let t = d.resolve()?;
    Ok(t.entries.get(&b).cloned().unwrap_or_else(|| Strategy::empty(final_arity(b))))
}

/// The `i`-th summand, counting from 1.
pub fn pick(s: &Strategy, i: usize) -> Result<Definite> {
    if i == 0 || i > s.len() {
        return Err(Error::PickOutOfRange { index: i, len: s.len() });
    }
    Ok(s.summands[i - 1].clone())
}

/// The number of ways `s` accepts the view `v`.
pub fn accepts_view(s: &Strategy, v: &View) -> Result<u64> {
    if s.arity != v.arity {
        return Err(Error::ArityMismatch { expected: s.arity, found: v.arity });
    }
    s.ways(&v.steps)
}

/// Syntactic equality up to unfolding references, at most `fuel` deep.
/// Answers `false` when the fuel runs out before a difference or a
/// syntactic match is found.
pub fn equal_up_to(a: &Definite, b: &Definite, fuel: usize) -> Result<bool> {
    if a == b {
        return Ok(true);
    }
    if fuel == 0 || a.arity() != b.arity() {
        return Ok(false);
    }
    let (ta, tb) = (a.resolve()?, b.resolve()?);
    if !ta.entries.keys().eq(tb.entries.keys()) {
        return Ok(false);
    }
    for (sa, sb) in ta.entries.values().zip(tb.entries.values()) {
        if sa.len() != sb.len() {
            return Ok(false);
        }
        for (da, db) in sa.summands.iter().zip(&sb.summands) {
            if !equal_up_to(da, db, fuel - 1)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A strategy for each player of a position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositionStrategy {
    pub base: Position,
    pub assign: Vec<Strategy>,
}

impl PositionStrategy {
    pub fn new(base: Position, assign: Vec<Strategy>) -> Result<PositionStrategy> {
        check_assign(&base, assign.iter().map(|s| s.arity))?;
        Ok(PositionStrategy { base, assign })
    }

    /// The strategy on `[n]` given by a single definite strategy.
    pub fn single(d: Definite) -> PositionStrategy {
        PositionStrategy { base: Position::single(d.arity()), assign: vec![Strategy::single(d)] }
    }

    /// Every way of choosing one summand per player.
    pub fn resolutions(&self) -> Vec<DefinitePositionStrategy> {
        let mut out = vec![Vec::new()];
        for s in &self.assign {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Definite>| {
                    s.summands.iter().map(move |d| {
                        let mut v = prefix.clone();
                        v.push(d.clone());
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(|assign| DefinitePositionStrategy { base: self.base.clone(), assign }).collect()
    }
}

impl From<DefinitePositionStrategy> for PositionStrategy {
    fn from(d: DefinitePositionStrategy) -> PositionStrategy {
        PositionStrategy { base: d.base, assign: d.assign.into_iter().map(Strategy::single).collect() }
    }
}

/// A definite strategy for each player of a position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DefinitePositionStrategy {
    pub base: Position,
    pub assign: Vec<Definite>,
}

impl DefinitePositionStrategy {
    pub fn new(base: Position, assign: Vec<Definite>) -> Result<DefinitePositionStrategy> {
        check_assign(&base, assign.iter().map(Definite::arity))?;
        Ok(DefinitePositionStrategy { base, assign })
    }
}

fn check_assign(base: &Position, arities: impl ExactSizeIterator<Item = usize>) -> Result<()> {
    if arities.len() != base.players.len() {
        return Err(Error::InvalidMove(format!(
            "{} strategies for {} players",
            arities.len(),
            base.players.len()
        )));
    }
    for (p, n) in arities.enumerate() {
        if n != base.arity(p) {
            return Err(Error::ArityMismatch { expected: base.arity(p), found: n });
        }
    }
    Ok(())
}

/// Whether every view of every player of `p` is accepted.
pub fn accepts_play(ps: &PositionStrategy, p: &Play) -> Result<bool> {
    if p.initial != ps.base {
        return Err(Error::BoundaryMismatch);
    }
    for (player, s) in ps.assign.iter().enumerate() {
        for v in views_of(p, player)? {
            if accepts_view(s, &v)? == 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(+")?;
        for d in &self.summands {
            write!(f, " {d}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Definite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Definite::Ref(r) => {
                let args: Vec<String> = r.args.iter().map(|c| c.to_string()).collect();
                write!(f, "<{} = {}({})>", r.arity, r.name, args.join(", "))
            }
            Definite::Table(t) => {
                write!(f, "<{}", t.arity)?;
                for (b, s) in &t.entries {
                    write!(f, " {b}: {s}")?;
                }
                f.write_str(">")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::parse_file;

    fn tr(text: &str) -> Definite {
        translate(&parse_file(text).unwrap().process)
    }

    #[test]
    fn sum_groups_branches_in_order() {
        let d = tr("free a b c; a?(x).x!x + a?(y).tick + b!c.c?.0");
        let t = d.resolve().unwrap();
        assert_eq!(t.entries.len(), 2);
        let inputs = derive(&d, SeedKind::In(3, 1)).unwrap();
        assert_eq!(inputs.summands, vec![tr("free a b c x; x!x"), tr("free a b c x; tick")]);
        assert_eq!(pick(&derive(&d, SeedKind::Out(3, 2, 3)).unwrap(), 1).unwrap(), tr("free a b c; c?.0"));
        assert!(derive(&d, SeedKind::Tick(3)).unwrap().is_empty());
    }

    #[test]
    fn references_unfold() {
        let d = tr("free a; X(a) where X(c) = c?.X(c)");
        let next = pick(&derive(&d, SeedKind::In(1, 1)).unwrap(), 1).unwrap();
        assert!(matches!(next, Definite::Ref(_)));
        assert_eq!(next.arity(), 2);
        assert_eq!(next.free_channels(), BTreeSet::from([1]));
        assert!(equal_up_to(&next.rename_injective(&[1, 0], 1), &d, 2).unwrap());
        assert_eq!(derive(&next, SeedKind::In(2, 1)).unwrap().len(), 1);
    }

    #[test]
    fn free_channels_and_renaming() {
        let d = tr("free a b c; c?(x).x!b");
        assert_eq!(d.free_channels(), BTreeSet::from([2, 3]));
        let r = d.rename_injective(&[0, 1, 2], 2);
        assert_eq!(r, tr("free b c; c?(x).x!b"));
    }

    #[test]
    fn pick_out_of_range() {
        assert_eq!(pick(&Strategy::empty(1), 1), Err(Error::PickOutOfRange { index: 1, len: 0 }));
    }

    #[test]
    fn view_ways() {
        let d = tr("free a; a?.0 + a?.tick");
        let s = Strategy::single(d);
        assert_eq!(accepts_view(&s, &View::empty(1)).unwrap(), 1);
        assert_eq!(accepts_view(&s, &View { arity: 1, steps: vec![SeedKind::In(1, 1)] }).unwrap(), 2);
        let deeper = View { arity: 1, steps: vec![SeedKind::In(1, 1), SeedKind::Tick(2)] };
        assert_eq!(accepts_view(&s, &deeper).unwrap(), 1);
    }
}
