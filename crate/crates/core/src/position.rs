//! Positions of the game: players attached to channels, horizontal maps
//! between positions, interfaces and gluing along an interface.

use std::fmt;

use crate::canon::{canonicalize, Canonical};
use crate::error::{Error, Result};

/// Channels are `0..channels`; player `i` has arity `players[i].len()` and
/// knows channel `players[i][k]` as its `(k + 1)`-th channel.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub channels: usize,
    pub players: Vec<Vec<usize>>,
}

impl Position {
    pub fn new(channels: usize, players: Vec<Vec<usize>>) -> Result<Position> {
        let p = Position { channels, players };
        p.validate()?;
        Ok(p)
    }

    /// `[n]`: a single `n`-ary player on `n` distinct channels.
    pub fn single(n: usize) -> Position {
        Position { channels: n, players: vec![(0..n).collect()] }
    }

    /// Only channels, no players.
    pub fn interface(channels: usize) -> Position {
        Position { channels, players: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        for attach in &self.players {
            if let Some(&c) = attach.iter().find(|&&c| c >= self.channels) {
                return Err(Error::IndexOutOfRange { index: c, ctx: self.channels });
            }
        }
        Ok(())
    }

    pub fn arity(&self, player: usize) -> usize {
        self.players[player].len()
    }

    pub fn is_interface(&self) -> bool {
        self.players.is_empty()
    }

    /// Disjoint union; `other`'s channels and players come after ours.
    pub fn disjoint_union(&self, other: &Position) -> Position {
        let mut players = self.players.clone();
        players.extend(other.players.iter().map(|a| a.iter().map(|c| c + self.channels).collect()));
        Position { channels: self.channels + other.channels, players }
    }

    /// Isomorphism-invariant key. Channels used by no player only count.
    pub fn canonical(&self) -> (Canonical<usize>, usize) {
        let items: Vec<(usize, Vec<usize>)> = self.players.iter().map(|a| (a.len(), a.clone())).collect();
        (canonicalize(&items, self.channels, 0).0, self.channels)
    }

    pub fn is_isomorphic(&self, other: &Position) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "position {}:", self.channels)?;
        for attach in &self.players {
            let cs: Vec<String> = attach.iter().map(|c| c.to_string()).collect();
            write!(f, " ({})", cs.join(" "))?;
        }
        Ok(())
    }
}

/// A morphism of positions: injective and arity-preserving on players,
/// arbitrary on channels, commuting with attachments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HorizMap {
    pub source: Position,
    pub target: Position,
    pub chan_map: Vec<usize>,
    pub player_map: Vec<usize>,
}

impl HorizMap {
    pub fn new(source: Position, target: Position, chan_map: Vec<usize>, player_map: Vec<usize>) -> Result<HorizMap> {
        let h = HorizMap { source, target, chan_map, player_map };
        h.check()?;
        Ok(h)
    }

    pub fn identity(x: &Position) -> HorizMap {
        HorizMap {
            source: x.clone(),
            target: x.clone(),
            chan_map: (0..x.channels).collect(),
            player_map: (0..x.players.len()).collect(),
        }
    }

    /// Validates every condition on horizontal maps.
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidHorizMap(msg));
        self.source.validate()?;
        self.target.validate()?;
        if self.chan_map.len() != self.source.channels {
            return bad(format!("channel map has {} entries for {} channels", self.chan_map.len(), self.source.channels));
        }
        if let Some(c) = self.chan_map.iter().find(|&&c| c >= self.target.channels) {
            return bad(format!("channel image {c} outside target"));
        }
        if self.player_map.len() != self.source.players.len() {
            return bad("player map is not total".into());
        }
        let mut seen = vec![false; self.target.players.len()];
        for (x, &y) in self.player_map.iter().enumerate() {
            if y >= self.target.players.len() {
                return bad(format!("player image {y} outside target"));
            }
            if std::mem::replace(&mut seen[y], true) {
                return bad(format!("two players sent to player {y}"));
            }
            let src = &self.source.players[x];
            let tgt = &self.target.players[y];
            if src.len() != tgt.len() {
                return bad(format!("player {x} of arity {} sent to player {y} of arity {}", src.len(), tgt.len()));
            }
            if src.iter().zip(tgt).any(|(&c, &d)| self.chan_map[c] != d) {
                return bad(format!("attachment of player {x} not preserved"));
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &HorizMap) -> Result<HorizMap> {
        if first.target != self.source {
            return Err(Error::InvalidHorizMap("maps are not composable".into()));
        }
        Ok(HorizMap {
            source: first.source.clone(),
            target: self.target.clone(),
            chan_map: first.chan_map.iter().map(|&c| self.chan_map[c]).collect(),
            player_map: first.player_map.iter().map(|&p| self.player_map[p]).collect(),
        })
    }
}

/// The interface of `x` and its inclusion into `x`.
pub fn interface_of(x: &Position) -> (Position, HorizMap) {
    let iface = Position::interface(x.channels);
    let incl = HorizMap {
        source: iface.clone(),
        target: x.clone(),
        chan_map: (0..x.channels).collect(),
        player_map: Vec::new(),
    };
    (iface, incl)
}

/// A pushout square: the glued position and the two maps into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Glued {
    pub result: Position,
    pub from_seed: HorizMap,
    pub from_z: HorizMap,
}

/// Pushout of `y ← I → z`, where `I` consists of the first `f.source.channels`
/// channels of `y` (included identically) and `f : I → z`. The result has
/// `z`'s channels followed by the channels of `y` outside `I`, and `z`'s
/// players followed by `y`'s.
pub fn glue(y: &Position, f: &HorizMap) -> Result<Glued> {
    if !f.source.is_interface() || f.source.channels > y.channels {
        return Err(Error::InterfaceMismatch(format!(
            "{} interface channels do not embed in a position with {} channels",
            f.source.channels, y.channels
        )));
    }
    f.check()?;
    let z = &f.target;
    let iface = f.source.channels;
    let chan = |c: usize| if c < iface { f.chan_map[c] } else { z.channels + c - iface };
    let mut players = z.players.clone();
    players.extend(y.players.iter().map(|a| a.iter().map(|&c| chan(c)).collect()));
    let result = Position { channels: z.channels + y.channels - iface, players };
    let from_seed = HorizMap {
        source: y.clone(),
        target: result.clone(),
        chan_map: (0..y.channels).map(chan).collect(),
        player_map: (0..y.players.len()).map(|j| z.players.len() + j).collect(),
    };
    let from_z = HorizMap {
        source: z.clone(),
        target: result.clone(),
        chan_map: (0..z.channels).collect(),
        player_map: (0..z.players.len()).collect(),
    };
    Ok(Glued { result, from_seed, from_z })
}
