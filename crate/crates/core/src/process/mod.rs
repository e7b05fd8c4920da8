//! Pi-calculus terms in de Bruijn form.
//!
//! Channels are 1-based *levels*: in a context of size `n` the channels are
//! `1..=n`, and every binder (an input prefix or a restriction) introduces
//! channel `n + 1` for its body. Possibly infinite terms are represented
//! by a table of named, parameterised definitions which are unfolded one
//! step at a time.

mod parse;
mod pretty;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;


use crate::error::{Error, Result};

pub use parse::{parse_file, parse_process, Program};
pub use pretty::{debruijn, pretty, pretty_process};

/// A channel: a 1-based de Bruijn level.
pub type Chan = usize;

/// Typing context: the number of channels in scope.
pub type Context = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prefix {
    /// `a!b`: send channel `b` on channel `a`.
    Out(Chan, Chan),
    /// `a?`: receive on `a`; the continuation sees one extra channel.
    In(Chan),
    Tick,
}

impl Prefix {
    /// Size of the continuation's context.
    pub fn extend(&self, ctx: Context) -> Context {
        match self {
            Prefix::In(_) => ctx + 1,
            _ => ctx,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Process {
    /// Guarded sum; the empty sum is the inert process `0`. Branch order
    /// is kept.
    Sum(Vec<(Prefix, Process)>),
    Par(Box<Process>, Box<Process>),
    /// Restriction; the body is typed in the context extended by one.
    Nu(Box<Process>),
    /// Call of a named definition with actual channel arguments.
    Call(String, Vec<Chan>),
}

impl Process {
    pub fn nil() -> Process {
        Process::Sum(Vec::new())
    }

    pub fn prefixed(prefix: Prefix, cont: Process) -> Process {
        Process::Sum(vec![(prefix, cont)])
    }

    pub fn par(left: Process, right: Process) -> Process {
        Process::Par(Box::new(left), Box::new(right))
    }

    pub fn nu(body: Process) -> Process {
        Process::Nu(Box::new(body))
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Process::Sum(b) if b.is_empty())
    }

    /// Free channels (levels `<= ctx`) in order of first occurrence.
    pub fn free_channels(&self, ctx: Context) -> Vec<Chan> {
        let mut seen = Vec::new();
        self.visit_channels(ctx, &mut |c| {
            if c <= ctx && !seen.contains(&c) {
                seen.push(c);
            }
        });
        seen
    }

    fn visit_channels(&self, ctx: Context, f: &mut impl FnMut(Chan)) {
        match self {
            Process::Sum(branches) => {
                for (prefix, cont) in branches {
                    match prefix {
                        Prefix::Out(a, b) => {
                            f(*a);
                            f(*b);
                        }
                        Prefix::In(a) => f(*a),
                        Prefix::Tick => {}
                    }
                    cont.visit_channels(prefix.extend(ctx), f);
                }
            }
            Process::Par(l, r) => {
                l.visit_channels(ctx, f);
                r.visit_channels(ctx, f);
            }
            Process::Nu(body) => body.visit_channels(ctx + 1, f),
            Process::Call(_, args) => args.iter().copied().for_each(f),
        }
    }

    /// Renames the channels of a process typed in `source` into `target`.
    /// Channels `<= source` go through `map`; binder levels above `source`
    /// are shifted so they stay above `target`.
    pub fn rename_with(&self, map: &dyn Fn(Chan) -> Chan, source: Context, target: Context) -> Process {
        let ch = |c: Chan| if c <= source { map(c) } else { c - source + target };
        match self {
            Process::Sum(branches) => Process::Sum(
                branches
                    .iter()
                    .map(|(prefix, cont)| {
                        let prefix = match prefix {
                            Prefix::Out(a, b) => Prefix::Out(ch(*a), ch(*b)),
                            Prefix::In(a) => Prefix::In(ch(*a)),
                            Prefix::Tick => Prefix::Tick,
                        };
                        (prefix, cont.rename_with(map, source, target))
                    })
                    .collect(),
            ),
            Process::Par(l, r) => Process::par(l.rename_with(map, source, target), r.rename_with(map, source, target)),
            Process::Nu(body) => Process::nu(body.rename_with(map, source, target)),
            Process::Call(name, args) => Process::Call(name.clone(), args.iter().map(|&c| ch(c)).collect()),
        }
    }

    /// Renames along a [`Renaming`].
    pub fn rename(&self, h: &Renaming) -> Process {
        self.rename_with(&|c| h.apply(c), h.source, h.target)
    }

    /// Weakens a process from `ctx` into `ctx + extra` (new channels unused).
    pub fn weaken(&self, ctx: Context, extra: usize) -> Process {
        self.rename_with(&|c| c, ctx, ctx + extra)
    }

    /// Substitutes the top channel `ctx + 1` by `b`, turning a process
    /// typed in `ctx + 1` into one typed in `ctx`.
    pub fn instantiate_top(&self, ctx: Context, b: Chan) -> Process {
        self.rename_with(&|c| if c == ctx + 1 { b } else { c }, ctx + 1, ctx)
    }
}

/// A total map between contexts. Not necessarily injective.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Renaming {
    pub source: Context,
    pub target: Context,
    /// `map[i - 1]` is the image of channel `i`.
    pub map: Vec<Chan>,
}

impl Renaming {
    pub fn new(source: Context, target: Context, map: Vec<Chan>) -> Result<Renaming> {
        if map.len() != source {
            return Err(Error::ArityMismatch { expected: source, found: map.len() });
        }
        if let Some(&bad) = map.iter().find(|&&c| c == 0 || c > target) {
            return Err(Error::IndexOutOfRange { index: bad, ctx: target });
        }
        Ok(Renaming { source, target, map })
    }

    pub fn identity(n: Context) -> Renaming {
        Renaming { source: n, target: n, map: (1..=n).collect() }
    }

    pub fn apply(&self, c: Chan) -> Chan {
        self.map[c - 1]
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Renaming) -> Result<Renaming> {
        if first.target != self.source {
            return Err(Error::ContextMismatch { expected: self.source, found: first.target });
        }
        Ok(Renaming { source: first.source, target: self.target, map: first.map.iter().map(|&c| self.apply(c)).collect() })
    }

    /// `h + id`: the renaming under one more binder.
    pub fn lift(&self) -> Renaming {
        let mut map = self.map.clone();
        map.push(self.target + 1);
        Renaming { source: self.source + 1, target: self.target + 1, map }
    }
}

impl fmt::Display for Renaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}↦{}", i + 1, c)?;
        }
        write!(f, "]:{}→{}", self.source, self.target)
    }
}

/// A named definition `X(p1, ..., pn) = body` with `body` typed in `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub arity: usize,
    pub body: Process,
}

/// Table of recursive definitions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Defs {
    table: BTreeMap<String, Definition>,
}

impl Defs {
    pub fn new() -> Defs {
        Defs::default()
    }

    pub fn insert(&mut self, def: Definition) -> Result<()> {
        if self.table.contains_key(&def.name) {
            return Err(Error::DuplicateDefinition(def.name));
        }
        self.table.insert(def.name.clone(), def);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&Definition> {
        self.table.get(name).ok_or_else(|| Error::UnknownDefinition(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Definition> {
        self.table.values()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Union of two tables; shared names must carry identical definitions.
    pub fn merge(&self, other: &Defs) -> Result<Defs> {
        let mut out = self.clone();
        for def in other.iter() {
            match out.table.get(&def.name) {
                Some(existing) if existing == def => {}
                Some(_) => return Err(Error::DuplicateDefinition(def.name.clone())),
                None => {
                    out.table.insert(def.name.clone(), def.clone());
                }
            }
        }
        Ok(out)
    }

    /// Checks every body against its arity and rejects recursion that can
    /// loop without passing through a prefix.
    pub fn validate(&self) -> Result<()> {
        for def in self.iter() {
            typecheck(&def.body, def.arity, self)?;
        }
        // Edges X -> Y when Y is called from X's body outside any prefix.
        let mut graph: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for def in self.iter() {
            let mut calls = BTreeSet::new();
            unguarded_calls(&def.body, &mut calls);
            graph.insert(def.name.as_str(), calls);
        }
        // Depth-first cycle detection.
        let mut state: BTreeMap<&str, u8> = BTreeMap::new();
        fn dfs<'a>(n: &'a str, g: &BTreeMap<&'a str, BTreeSet<&'a str>>, st: &mut BTreeMap<&'a str, u8>) -> Option<&'a str> {
            match st.get(n) {
                Some(1) => return Some(n),
                Some(2) => return None,
                _ => {}
            }
            st.insert(n, 1);
            if let Some(next) = g.get(n) {
                for m in next {
                    if let Some(bad) = dfs(m, g, st) {
                        return Some(bad);
                    }
                }
            }
            st.insert(n, 2);
            None
        }
        for name in graph.keys() {
            if let Some(bad) = dfs(name, &graph, &mut state) {
                return Err(Error::UnguardedRecursion(bad.to_string()));
            }
        }
        Ok(())
    }
}

fn unguarded_calls<'a>(p: &'a Process, out: &mut BTreeSet<&'a str>) {
    match p {
        Process::Sum(_) => {}
        Process::Par(l, r) => {
            unguarded_calls(l, out);
            unguarded_calls(r, out);
        }
        Process::Nu(body) => unguarded_calls(body, out),
        Process::Call(name, _) => {
            out.insert(name.as_str());
        }
    }
}

/// Checks `ctx ⊢ p` against the three typing rules, resolving calls in
/// `defs`.
pub fn typecheck(p: &Process, ctx: Context, defs: &Defs) -> Result<()> {
    let check = |c: Chan| {
        if c == 0 || c > ctx {
            Err(Error::IndexOutOfRange { index: c, ctx })
        } else {
            Ok(())
        }
    };
    match p {
        Process::Sum(branches) => {
            for (prefix, cont) in branches {
                match prefix {
                    Prefix::Out(a, b) => {
                        check(*a)?;
                        check(*b)?;
                    }
                    Prefix::In(a) => check(*a)?,
                    Prefix::Tick => {}
                }
                typecheck(cont, prefix.extend(ctx), defs)?;
            }
            Ok(())
        }
        Process::Par(l, r) => {
            typecheck(l, ctx, defs)?;
            typecheck(r, ctx, defs)
        }
        Process::Nu(body) => typecheck(body, ctx + 1, defs),
        Process::Call(name, args) => {
            let def = defs.get(name)?;
            if def.arity != args.len() {
                return Err(Error::ArityMismatch { expected: def.arity, found: args.len() });
            }
            args.iter().try_for_each(|&c| check(c))
        }
    }
}

/// Unfolds top-level calls until the head is not a call.
pub fn unfold(p: &Process, ctx: Context, defs: &Defs) -> Result<Process> {
    let mut current = p.clone();
    // Validated tables cannot loop here; the bound guards unvalidated input.
    for _ in 0..=defs.table.len() {
        match &current {
            Process::Call(name, args) => {
                let def = defs.get(name)?;
                if def.arity != args.len() {
                    return Err(Error::ArityMismatch { expected: def.arity, found: args.len() });
                }
                current = def.body.rename_with(&|c| args[c - 1], def.arity, ctx);
            }
            _ => return Ok(current),
        }
    }
    match &current {
        Process::Call(name, _) => Err(Error::UnguardedRecursion(name.clone())),
        _ => Ok(current),
    }
}

/// A process together with its context and definition table.
#[derive(Clone, Debug)]
pub struct TypedProcess {
    pub ctx: Context,
    pub process: Process,
    pub defs: Arc<Defs>,
}

impl PartialEq for TypedProcess {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.process == other.process && *self.defs == *other.defs
    }
}

impl Eq for TypedProcess {}

impl TypedProcess {
    /// Typechecks and wraps.
    pub fn new(ctx: Context, process: Process, defs: Arc<Defs>) -> Result<TypedProcess> {
        typecheck(&process, ctx, &defs)?;
        Ok(TypedProcess { ctx, process, defs })
    }

    pub fn closed_defs(ctx: Context, process: Process) -> Result<TypedProcess> {
        TypedProcess::new(ctx, process, Arc::new(Defs::new()))
    }

    pub fn rename(&self, h: &Renaming) -> Result<TypedProcess> {
        if h.source != self.ctx {
            return Err(Error::ContextMismatch { expected: self.ctx, found: h.source });
        }
        Ok(TypedProcess { ctx: h.target, process: self.process.rename(h), defs: self.defs.clone() })
    }

    pub fn unfold(&self) -> Result<TypedProcess> {
        Ok(TypedProcess { ctx: self.ctx, process: unfold(&self.process, self.ctx, &self.defs)?, defs: self.defs.clone() })
    }
}

impl fmt::Display for TypedProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn out(a: Chan, b: Chan, p: Process) -> Process {
        Process::prefixed(Prefix::Out(a, b), p)
    }

    #[test]
    fn typecheck_examples() {
        let defs = Defs::new();
        assert!(typecheck(&out(1, 2, Process::nil()), 2, &defs).is_ok());
        assert_eq!(
            typecheck(&out(2, 1, Process::nil()), 1, &defs),
            Err(Error::IndexOutOfRange { index: 2, ctx: 1 })
        );
        let nu = Process::nu(Process::prefixed(Prefix::In(1), Process::nil()));
        assert!(typecheck(&nu, 0, &defs).is_ok());
    }

    #[test]
    fn call_arity_is_checked() {
        let mut defs = Defs::new();
        defs.insert(Definition { name: "X".into(), arity: 1, body: Process::nil() }).unwrap();
        let p = Process::Call("X".into(), vec![]);
        assert_eq!(typecheck(&p, 1, &defs), Err(Error::ArityMismatch { expected: 1, found: 0 }));
    }

    #[test]
    fn rename_collapses() {
        let h = Renaming::new(2, 2, vec![1, 1]).unwrap();
        assert_eq!(out(1, 2, Process::nil()).rename(&h), out(1, 1, Process::nil()));
    }

    #[test]
    fn rename_under_binder_maps_fresh_to_top() {
        // a?(x).x!a in context 2 (a = 2), renamed into context 3 with 2 ↦ 3.
        let p = Process::prefixed(Prefix::In(2), out(3, 2, Process::nil()));
        let h = Renaming::new(2, 3, vec![1, 3]).unwrap();
        let q = Process::prefixed(Prefix::In(3), out(4, 3, Process::nil()));
        assert_eq!(p.rename(&h), q);
    }

    #[test]
    fn unfold_steps() {
        let mut defs = Defs::new();
        let tick_x = Process::prefixed(Prefix::Tick, Process::Call("X".into(), vec![]));
        defs.insert(Definition { name: "X".into(), arity: 0, body: tick_x.clone() }).unwrap();
        defs.validate().unwrap();
        assert_eq!(unfold(&Process::Call("X".into(), vec![]), 0, &defs).unwrap(), tick_x);
        let nil = Process::nil();
        assert_eq!(unfold(&nil, 0, &defs).unwrap(), nil);
    }

    #[test]
    fn mutual_recursion_unfolds_to_input() {
        let mut defs = Defs::new();
        defs.insert(Definition {
            name: "X".into(),
            arity: 1,
            body: Process::prefixed(Prefix::In(1), Process::Call("Y".into(), vec![1])),
        })
        .unwrap();
        defs.insert(Definition {
            name: "Y".into(),
            arity: 1,
            body: Process::prefixed(Prefix::In(1), Process::Call("X".into(), vec![1])),
        })
        .unwrap();
        defs.validate().unwrap();
        let u = unfold(&Process::Call("X".into(), vec![1]), 1, &defs).unwrap();
        assert!(matches!(&u, Process::Sum(b) if b.len() == 1 && b[0].0 == Prefix::In(1)));
        // One-step oracle: unfolding twice through the continuation reaches X again.
        let Process::Sum(b) = &u else { unreachable!() };
        let y = unfold(&b[0].1, 2, &defs).unwrap();
        assert_eq!(y, Process::prefixed(Prefix::In(1), Process::Call("X".into(), vec![1])));
    }

    #[test]
    fn unguarded_recursion_rejected() {
        let mut defs = Defs::new();
        defs.insert(Definition { name: "X".into(), arity: 0, body: Process::Call("Y".into(), vec![]) }).unwrap();
        defs.insert(Definition {
            name: "Y".into(),
            arity: 0,
            body: Process::par(Process::nil(), Process::Call("X".into(), vec![])),
        })
        .unwrap();
        assert!(matches!(defs.validate(), Err(Error::UnguardedRecursion(_))));
    }

    #[test]
    fn renaming_composition() {
        let h = Renaming::new(2, 3, vec![3, 1]).unwrap();
        let k = Renaming::new(3, 1, vec![1, 1, 1]).unwrap();
        assert_eq!(k.after(&h).unwrap().map, vec![1, 1]);
        assert_eq!(Renaming::identity(2).after(&Renaming::identity(2)).unwrap(), Renaming::identity(2));
    }
}
