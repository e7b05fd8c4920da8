//! Seeds, global moves and plays.
//!
//! A global move glues a seed into a larger position along the seed's
//! interface. Channels of the base position keep their ids in the result
//! and fresh channels are appended; spectators come first in the result,
//! followed by the avatars of the acting players.

mod dot;
mod normal;
mod restrict;
mod text;
mod views;

use std::fmt;

use crate::error::{Error, Result};
use crate::position::{glue, HorizMap, Position};

pub use dot::{play_to_dot, position_to_dot};
pub use normal::{lineages, normalize_play, Lineage};
pub use restrict::{restrict, Restricted};
pub use text::{parse_play, parse_seed, play_to_text};
pub use views::{views_of, View};

/// Seed shapes. Channel parameters are 1-based positions in the acting
/// players' attachments: `In(n, a)` receives on the `a`-th channel of an
/// `n`-ary player, `Out(n, a, b)` sends its `b`-th channel on its `a`-th,
/// and `Tau(n, a, m, c, d)` synchronises an `m`-ary sender doing
/// `Out(m, c, d)` with an `n`-ary receiver doing `In(n, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeedKind {
    Fork(usize),
    ForkL(usize),
    ForkR(usize),
    Tick(usize),
    In(usize, usize),
    Out(usize, usize, usize),
    Nu(usize),
    Tau(usize, usize, usize, usize, usize),
}

impl SeedKind {
    pub fn validate(&self) -> Result<()> {
        let within = |i: usize, n: usize| (1..=n).contains(&i);
        let ok = match *self {
            SeedKind::In(n, a) => within(a, n),
            SeedKind::Out(n, a, b) => within(a, n) && within(b, n),
            SeedKind::Tau(n, a, m, c, d) => within(a, n) && within(c, m) && within(d, m),
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSeed(format!("index out of range in {self}")))
        }
    }

    /// Basic seeds involve a single player.
    pub fn is_basic(&self) -> bool {
        !matches!(self, SeedKind::Fork(_) | SeedKind::Tau(..))
    }

    /// Moves that need no environment: synchronisations, restrictions,
    /// ticks and forks.
    pub fn is_closed_world(&self) -> bool {
        matches!(self, SeedKind::Fork(_) | SeedKind::Tau(..) | SeedKind::Nu(_) | SeedKind::Tick(_))
    }

    /// Arities of the acting players, in acting order.
    pub fn initial_arities(&self) -> Vec<usize> {
        match *self {
            SeedKind::Fork(n)
            | SeedKind::ForkL(n)
            | SeedKind::ForkR(n)
            | SeedKind::Tick(n)
            | SeedKind::In(n, _)
            | SeedKind::Out(n, _, _)
            | SeedKind::Nu(n) => vec![n],
            SeedKind::Tau(n, _, m, _, _) => vec![m, n],
        }
    }
}

impl fmt::Display for SeedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedKind::Fork(n) => write!(f, "fork({n})"),
            SeedKind::ForkL(n) => write!(f, "forkl({n})"),
            SeedKind::ForkR(n) => write!(f, "forkr({n})"),
            SeedKind::Tick(n) => write!(f, "tick({n})"),
            SeedKind::In(n, a) => write!(f, "in({n},{a})"),
            SeedKind::Out(n, a, b) => write!(f, "out({n},{a},{b})"),
            SeedKind::Nu(n) => write!(f, "nu({n})"),
            SeedKind::Tau(n, a, m, c, d) => write!(f, "tau({n},{a},{m},{c},{d})"),
        }
    }
}

/// The cospan of a seed. Channels of `initial` are the interface and
/// keep their ids in `final_pos`; `fresh` lists the channels only the
/// final position has. `avatar[j]` is the initial player continued by
/// final player `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub kind: SeedKind,
    pub initial: Position,
    pub final_pos: Position,
    pub avatar: Vec<usize>,
    pub fresh: Vec<usize>,
}

/// Builds the cospan of a seed.
pub fn seed(kind: SeedKind) -> Result<Seed> {
    kind.validate()?;
    let seq = |n: usize| (0..n).collect::<Vec<usize>>();
    let same = |n: usize| Seed {
        kind,
        initial: Position::single(n),
        final_pos: Position::single(n),
        avatar: vec![0],
        fresh: vec![],
    };
    let grow = |n: usize| {
        let mut attach = seq(n);
        attach.push(n);
        Seed {
            kind,
            initial: Position::single(n),
            final_pos: Position { channels: n + 1, players: vec![attach] },
            avatar: vec![0],
            fresh: vec![n],
        }
    };
    Ok(match kind {
        SeedKind::Fork(n) => Seed {
            kind,
            initial: Position::single(n),
            final_pos: Position { channels: n, players: vec![seq(n), seq(n)] },
            avatar: vec![0, 0],
            fresh: vec![],
        },
        SeedKind::ForkL(n) | SeedKind::ForkR(n) | SeedKind::Tick(n) | SeedKind::Out(n, _, _) => same(n),
        SeedKind::In(n, _) | SeedKind::Nu(n) => grow(n),
        SeedKind::Tau(n, a, m, c, d) => {
            // Sender on 0..m; the receiver's a-th channel is the sender's
            // c-th, its others are m, m+1, ...
            let mut receiver = Vec::with_capacity(n);
            let mut next = m;
            for i in 1..=n {
                if i == a {
                    receiver.push(c - 1);
                } else {
                    receiver.push(next);
                    next += 1;
                }
            }
            let initial = Position { channels: next, players: vec![seq(m), receiver.clone()] };
            receiver.push(d - 1);
            let final_pos = Position { channels: next, players: vec![seq(m), receiver] };
            Seed { kind, initial, final_pos, avatar: vec![0, 1], fresh: vec![] }
        }
    })
}

/// Where a player of a move's result comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Origin {
    /// The player of the base position it continues.
    pub base_player: usize,
    /// For avatars of acting players, the seed's final player it is.
    pub seed_player: Option<usize>,
}

/// A seed glued into `base`, with `acting[k]` playing the seed's `k`-th
/// initial player.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalMove {
    pub kind: SeedKind,
    pub base: Position,
    pub acting: Vec<usize>,
    pub result: Position,
    /// Base channel of each initial seed channel.
    pub seed_channels: Vec<usize>,
    /// Result channels created by the move.
    pub fresh: Vec<usize>,
    pub origin: Vec<Origin>,
}

impl GlobalMove {
    /// Result players continuing `base_player`, in seed order.
    pub fn avatars(&self, base_player: usize) -> Vec<usize> {
        self.origin.iter().enumerate().filter(|(_, o)| o.base_player == base_player).map(|(i, _)| i).collect()
    }

    /// Players of the result that are avatars of acting players.
    pub fn is_avatar(&self, result_player: usize) -> bool {
        self.origin[result_player].seed_player.is_some()
    }

    /// The horizontal map from the base without acting players into the
    /// result, which is the identity on channels.
    pub fn spectator_tracking(&self) -> HorizMap {
        let spectators: Vec<usize> = (0..self.base.players.len()).filter(|p| !self.acting.contains(p)).collect();
        let source = Position {
            channels: self.base.channels,
            players: spectators.iter().map(|&p| self.base.players[p].clone()).collect(),
        };
        HorizMap {
            source,
            target: self.result.clone(),
            chan_map: (0..self.base.channels).collect(),
            player_map: (0..spectators.len()).collect(),
        }
    }
}

/// Plays `kind` in `base` with the given acting players.
pub fn instantiate(kind: SeedKind, base: &Position, acting: &[usize]) -> Result<GlobalMove> {
    let seed = seed(kind)?;
    let arities = kind.initial_arities();
    if acting.len() != arities.len() {
        return Err(Error::InvalidMove(format!("{kind} needs {} acting players", arities.len())));
    }
    for (&p, &n) in acting.iter().zip(&arities) {
        if p >= base.players.len() {
            return Err(Error::InvalidMove(format!("no player {p}")));
        }
        if base.arity(p) != n {
            return Err(Error::ArityMismatch { expected: n, found: base.arity(p) });
        }
    }
    if acting.len() == 2 && acting[0] == acting[1] {
        return Err(Error::InvalidMove("a player cannot synchronise with itself".into()));
    }
    // The interface map: each seed channel goes where its player knows it.
    let mut seed_channels = vec![usize::MAX; seed.initial.channels];
    for (k, &p) in acting.iter().enumerate() {
        for (i, &c) in seed.initial.players[k].iter().enumerate() {
            let actual = base.players[p][i];
            if seed_channels[c] != usize::MAX && seed_channels[c] != actual {
                return Err(Error::CarrierMismatch { sender: seed_channels[c], receiver: actual });
            }
            seed_channels[c] = actual;
        }
    }
    let spectators: Vec<usize> = (0..base.players.len()).filter(|p| !acting.contains(p)).collect();
    let z = Position { channels: base.channels, players: spectators.iter().map(|&p| base.players[p].clone()).collect() };
    let f = HorizMap {
        source: Position::interface(seed.initial.channels),
        target: z,
        chan_map: seed_channels.clone(),
        player_map: vec![],
    };
    let glued = glue(&seed.final_pos, &f)?;
    let mut origin: Vec<Origin> = spectators.iter().map(|&p| Origin { base_player: p, seed_player: None }).collect();
    origin.extend(
        seed.avatar.iter().enumerate().map(|(j, &k)| Origin { base_player: acting[k], seed_player: Some(j) }),
    );
    let fresh = seed.fresh.iter().map(|&c| glued.from_seed.chan_map[c]).collect();
    Ok(GlobalMove { kind, base: base.clone(), acting: acting.to_vec(), result: glued.result, seed_channels, fresh, origin })
}

/// A sequence of composable moves from `initial`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Play {
    pub initial: Position,
    pub steps: Vec<GlobalMove>,
}

impl Play {
    pub fn identity(initial: Position) -> Play {
        Play { initial, steps: Vec::new() }
    }

    /// Builds a play by instantiating each `(kind, acting)` in turn.
    pub fn from_moves(initial: Position, moves: &[(SeedKind, Vec<usize>)]) -> Result<Play> {
        let mut play = Play::identity(initial);
        for (kind, acting) in moves {
            play.push(*kind, acting)?;
        }
        Ok(play)
    }

    pub fn push(&mut self, kind: SeedKind, acting: &[usize]) -> Result<&GlobalMove> {
        let m = instantiate(kind, self.final_position(), acting)?;
        self.steps.push(m);
        Ok(self.steps.last().unwrap())
    }

    pub fn final_position(&self) -> &Position {
        self.steps.last().map(|m| &m.result).unwrap_or(&self.initial)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The moves as `(kind, acting)` pairs.
    pub fn moves(&self) -> Vec<(SeedKind, Vec<usize>)> {
        self.steps.iter().map(|m| (m.kind, m.acting.clone())).collect()
    }

    /// Prefix of length `n`.
    pub fn prefix(&self, n: usize) -> Play {
        Play { initial: self.initial.clone(), steps: self.steps[..n].to_vec() }
    }

    /// Checks that each step is based where the previous one ended.
    pub fn check(&self) -> Result<()> {
        let mut at = &self.initial;
        for m in &self.steps {
            if m.base != *at {
                return Err(Error::BoundaryMismatch);
            }
            at = &m.result;
        }
        Ok(())
    }
}

/// `p` followed by `q`.
pub fn compose(p: &Play, q: &Play) -> Result<Play> {
    if q.initial != *p.final_position() {
        return Err(Error::BoundaryMismatch);
    }
    let mut steps = p.steps.clone();
    steps.extend(q.steps.iter().cloned());
    Ok(Play { initial: p.initial.clone(), steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_seed_shape() {
        let s = seed(SeedKind::Tau(1, 1, 3, 2, 3)).unwrap();
        assert_eq!(s.initial.players, vec![vec![0, 1, 2], vec![1]]);
        assert_eq!(s.final_pos.players, vec![vec![0, 1, 2], vec![1, 2]]);
        assert!(s.fresh.is_empty());
    }

    #[test]
    fn fork_and_input_seeds() {
        let f = seed(SeedKind::Fork(2)).unwrap();
        assert_eq!(f.final_pos.players, vec![vec![0, 1], vec![0, 1]]);
        let i = seed(SeedKind::In(1, 1)).unwrap();
        assert_eq!(i.final_pos.players, vec![vec![0, 1]]);
        assert_eq!(i.fresh, vec![1]);
        assert!(seed(SeedKind::In(1, 2)).is_err());
    }

    #[test]
    fn fork_move_keeps_spectator() {
        // x(a, b) and y(b, c).
        let base = Position::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let m = instantiate(SeedKind::Fork(2), &base, &[0]).unwrap();
        assert_eq!(m.result.players, vec![vec![1, 2], vec![0, 1], vec![0, 1]]);
        assert_eq!(m.avatars(0), vec![1, 2]);
        assert_eq!(m.avatars(1), vec![0]);
    }

    #[test]
    fn tau_move_identifies_received_channel() {
        // x(t, α, β) sends β on α to y(α).
        let base = Position::new(3, vec![vec![0, 1, 2], vec![1]]).unwrap();
        let m = instantiate(SeedKind::Tau(1, 1, 3, 2, 3), &base, &[0, 1]).unwrap();
        assert_eq!(m.result.players, vec![vec![0, 1, 2], vec![1, 2]]);
        assert_eq!(m.result.channels, 3);
        let wrong = instantiate(SeedKind::Tau(1, 1, 3, 3, 3), &base, &[0, 1]);
        assert!(matches!(wrong, Err(Error::CarrierMismatch { .. })));
    }

    #[test]
    fn tick_keeps_position() {
        let base = Position::single(2);
        let m = instantiate(SeedKind::Tick(2), &base, &[0]).unwrap();
        assert!(m.result.is_isomorphic(&base));
    }

    #[test]
    fn composition_checks_boundaries() {
        let p = Play::from_moves(Position::single(1), &[(SeedKind::In(1, 1), vec![0])]).unwrap();
        let q = Play::from_moves(Position::single(2), &[(SeedKind::Tick(2), vec![0])]).unwrap();
        assert_eq!(compose(&p, &q).unwrap().len(), 2);
        assert_eq!(compose(&Play::identity(Position::single(1)), &p).unwrap(), p);
        assert!(compose(&q, &p).is_err());
    }
}
