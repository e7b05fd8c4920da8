//! Views: what a single player sees of a play.

use std::collections::BTreeSet;
use std::fmt;

use super::{Play, SeedKind};
use crate::error::{Error, Result};
use crate::position::Position;

/// A sequence of basic seeds played by one player and its avatars,
/// starting from arity `arity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct View {
    pub arity: usize,
    pub steps: Vec<SeedKind>,
}

impl View {
    pub fn empty(arity: usize) -> View {
        View { arity, steps: Vec::new() }
    }

    /// The view as a play on `[arity]`.
    pub fn to_play(&self) -> Result<Play> {
        let moves: Vec<(SeedKind, Vec<usize>)> = self.steps.iter().map(|&k| (k, vec![0])).collect();
        if let Some(k) = self.steps.iter().find(|k| !k.is_basic()) {
            return Err(Error::InvalidMove(format!("{k} is not a basic seed")));
        }
        Play::from_moves(Position::single(self.arity), &moves)
    }

    pub fn prefixes(&self) -> impl Iterator<Item = View> + '_ {
        (0..=self.steps.len()).map(|n| View { arity: self.arity, steps: self.steps[..n].to_vec() })
    }
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.arity)?;
        for s in &self.steps {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

/// All views of `p` from `player` of its initial position: follow the
/// player's avatars, choosing a branch at each fork. The set is closed
/// under prefixes.
pub fn views_of(p: &Play, player: usize) -> Result<BTreeSet<View>> {
    if player >= p.initial.players.len() {
        return Err(Error::InvalidMove(format!("no player {player}")));
    }
    let arity = p.initial.arity(player);
    let mut out = BTreeSet::new();
    walk(p, 0, player, View::empty(arity), &mut out);
    Ok(out)
}

fn walk(p: &Play, i: usize, player: usize, view: View, out: &mut BTreeSet<View>) {
    out.insert(view.clone());
    let Some(m) = p.steps.get(i) else { return };
    let avatars = m.avatars(player);
    let Some(role) = m.acting.iter().position(|&a| a == player) else {
        walk(p, i + 1, avatars[0], view, out);
        return;
    };
    let mut extend = |kind: SeedKind, next: usize| {
        let mut v = view.clone();
        v.steps.push(kind);
        walk(p, i + 1, next, v, out);
    };
    match m.kind {
        SeedKind::Fork(n) => {
            extend(SeedKind::ForkL(n), avatars[0]);
            extend(SeedKind::ForkR(n), avatars[1]);
        }
        SeedKind::Tau(n, a, mm, c, d) => {
            let kind = if role == 0 { SeedKind::Out(mm, c, d) } else { SeedKind::In(n, a) };
            extend(kind, avatars[0]);
        }
        kind => extend(kind, avatars[0]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fork_views() {
        let p = Play::from_moves(Position::single(2), &[(SeedKind::Fork(2), vec![0])]).unwrap();
        let views: Vec<View> = views_of(&p, 0).unwrap().into_iter().collect();
        assert_eq!(
            views,
            vec![
                View::empty(2),
                View { arity: 2, steps: vec![SeedKind::ForkL(2)] },
                View { arity: 2, steps: vec![SeedKind::ForkR(2)] },
            ]
        );
    }

    #[test]
    fn uninvolved_player_sees_nothing() {
        let base = Position::new(2, vec![vec![0], vec![1]]).unwrap();
        let p = Play::from_moves(base, &[(SeedKind::Tick(1), vec![0])]).unwrap();
        assert_eq!(views_of(&p, 1).unwrap().into_iter().collect::<Vec<_>>(), vec![View::empty(1)]);
    }

    #[test]
    fn views_are_prefix_closed() {
        let base = Position::new(3, vec![vec![0, 1], vec![1], vec![0, 2]]).unwrap();
        let p = Play::from_moves(
            base,
            &[(SeedKind::Tau(1, 1, 2, 2, 1), vec![0, 1]), (SeedKind::Tau(2, 2, 2, 1, 2), vec![0, 2])],
        )
        .unwrap();
        let vs = views_of(&p, 1).unwrap();
        for v in &vs {
            for w in v.prefixes() {
                assert!(vs.contains(&w));
            }
        }
        let longest = vs.iter().max_by_key(|v| v.steps.len()).unwrap();
        assert_eq!(longest.steps, vec![SeedKind::In(1, 1), SeedKind::In(2, 2)]);
    }
}
