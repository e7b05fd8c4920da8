//! Restriction of plays along horizontal maps into their initial position.
//!
//! The restricted play follows the avatars of the source players. A move
//! survives when its acting players are followed and the channel
//! identifications it needs already hold; a synchronisation seen from
//! only one side, or whose carrier is not shared in the source, splits
//! into its output and input halves, the input receiving a fresh channel.

use super::{instantiate, GlobalMove, Play, SeedKind};
use crate::error::{Error, Result};
use crate::position::HorizMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restricted {
    pub play: Play,
    /// From the final position of `play` to the final position of the
    /// original play.
    pub embedding: HorizMap,
}

/// Tracks where the restricted position sits inside the original one.
struct Embedding {
    chan: Vec<usize>,
    player: Vec<usize>,
}

impl Embedding {
    fn preimage(&self, p: usize) -> Option<usize> {
        self.player.iter().position(|&q| q == p)
    }
}

/// Restricts `p` along `r : r.source → p.initial`.
pub fn restrict(p: &Play, r: &HorizMap) -> Result<Restricted> {
    r.check()?;
    if r.target != p.initial {
        return Err(Error::BoundaryMismatch);
    }
    let mut out = Play::identity(r.source.clone());
    let mut emb = Embedding { chan: r.chan_map.clone(), player: r.player_map.clone() };

    for m in &p.steps {
        let tracked: Vec<Option<usize>> = m.acting.iter().map(|&a| emb.preimage(a)).collect();
        // Restricted moves to play, each given by the original acting
        // players it stands for.
        let mut local: Vec<(SeedKind, Vec<usize>)> = Vec::new();
        match m.kind {
            SeedKind::Tau(n, a, mm, c, d) => {
                let (sender, receiver) = (m.acting[0], m.acting[1]);
                match (tracked[0], tracked[1]) {
                    (Some(s), Some(rcv)) => {
                        let at = out.final_position();
                        if at.players[s][c - 1] == at.players[rcv][a - 1] {
                            local.push((m.kind, m.acting.clone()));
                        } else {
                            local.push((SeedKind::Out(mm, c, d), vec![sender]));
                            local.push((SeedKind::In(n, a), vec![receiver]));
                        }
                    }
                    (Some(_), None) => local.push((SeedKind::Out(mm, c, d), vec![sender])),
                    (None, Some(_)) => local.push((SeedKind::In(n, a), vec![receiver])),
                    (None, None) => {}
                }
            }
            _ => {
                if tracked[0].is_some() {
                    local.push((m.kind, m.acting.clone()));
                }
            }
        }
        for (kind, original) in local {
            let acting: Vec<usize> = original.iter().map(|&o| emb.preimage(o).unwrap()).collect();
            let rm = instantiate(kind, out.final_position(), &acting)?;
            emb = advance(&emb, &rm, m, &original);
            out.steps.push(rm);
        }
        // Players not involved in any restricted move follow `m` as spectators.
        emb = follow_spectators(&emb, m);
    }

    let embedding = HorizMap {
        source: out.final_position().clone(),
        target: p.final_position().clone(),
        chan_map: emb.chan,
        player_map: emb.player,
    };
    Ok(Restricted { play: out, embedding })
}

/// Updates the embedding after the restricted move `rm` (standing for
/// the part of `m` played by `original`). Images of players are still
/// expressed in `m.base` except for the new avatars, which are marked by
/// an offset so that `follow_spectators` can tell them apart.
fn advance(emb: &Embedding, rm: &GlobalMove, m: &GlobalMove, original: &[usize]) -> Embedding {
    let mut chan = emb.chan.clone();
    for (k, &fresh) in rm.fresh.iter().enumerate() {
        debug_assert_eq!(fresh, chan.len());
        let image = match (rm.kind, m.kind) {
            // An input split from a synchronisation receives the sender's channel.
            (SeedKind::In(..), SeedKind::Tau(_, _, _, _, d)) => m.base.players[m.acting[0]][d - 1],
            _ => m.fresh[k],
        };
        chan.push(image);
    }
    let player = rm
        .origin
        .iter()
        .map(|o| match o.seed_player {
            None => emb.player[o.base_player],
            Some(j) => {
                let orig = original[rm.acting.iter().position(|&a| a == o.base_player).unwrap()];
                let avatar = m
                    .origin
                    .iter()
                    .enumerate()
                    .filter(|(_, mo)| mo.base_player == orig)
                    .map(|(i, _)| i)
                    .nth(fork_branch(rm, j))
                    .unwrap();
                AVATAR_MARK + avatar
            }
        })
        .collect();
    Embedding { chan, player }
}

const AVATAR_MARK: usize = usize::MAX / 2;

/// Which avatar of the acting player the seed's final player `j` is.
fn fork_branch(rm: &GlobalMove, j: usize) -> usize {
    match rm.kind {
        SeedKind::Fork(_) => j,
        _ => 0,
    }
}

/// Maps spectators of `m` into `m.result` and resolves marked avatars.
fn follow_spectators(emb: &Embedding, m: &GlobalMove) -> Embedding {
    let player = emb
        .player
        .iter()
        .map(|&q| {
            if q >= AVATAR_MARK {
                q - AVATAR_MARK
            } else {
                m.origin.iter().position(|o| o.base_player == q && o.seed_player.is_none()).unwrap()
            }
        })
        .collect();
    Embedding { chan: emb.chan.clone(), player }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::position::Position;

    #[test]
    fn along_identity() {
        let base = Position::new(3, vec![vec![0, 1, 2], vec![1]]).unwrap();
        let p = Play::from_moves(
            base.clone(),
            &[(SeedKind::Tau(1, 1, 3, 2, 3), vec![0, 1]), (SeedKind::Fork(2), vec![1]), (SeedKind::Tick(3), vec![0])],
        )
        .unwrap();
        let r = restrict(&p, &HorizMap::identity(&base)).unwrap();
        assert_eq!(r.play, p);
        assert_eq!(r.embedding, HorizMap::identity(p.final_position()));
    }

    #[test]
    fn receiver_alone_inputs() {
        // x(t, α, α) sends α on α to y(α); seen from y this is an input.
        let base = Position::new(2, vec![vec![0, 1, 1], vec![1]]).unwrap();
        let p = Play::from_moves(base.clone(), &[(SeedKind::Tau(1, 1, 3, 2, 3), vec![0, 1])]).unwrap();
        let r = HorizMap::new(Position::single(1), base, vec![1], vec![1]).unwrap();
        let res = restrict(&p, &r).unwrap();
        assert_eq!(res.play.moves(), vec![(SeedKind::In(1, 1), vec![0])]);
        assert_eq!(res.embedding.chan_map, vec![1, 1]);
        res.embedding.check().unwrap();
    }

    #[test]
    fn unshared_carrier_splits() {
        let base = Position::new(3, vec![vec![0, 1, 2], vec![1]]).unwrap();
        let p = Play::from_moves(base.clone(), &[(SeedKind::Tau(1, 1, 3, 2, 3), vec![0, 1])]).unwrap();
        let source = Position::new(4, vec![vec![0, 1, 2], vec![3]]).unwrap();
        let r = HorizMap::new(source, base, vec![0, 1, 2, 1], vec![0, 1]).unwrap();
        let res = restrict(&p, &r).unwrap();
        assert_eq!(res.play.moves(), vec![(SeedKind::Out(3, 2, 3), vec![0]), (SeedKind::In(1, 1), vec![0])]);
        res.embedding.check().unwrap();
    }
}
