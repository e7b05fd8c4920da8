//! Normal forms of plays up to permutation of independent moves.
//!
//! Every player descends from a player of the initial position through a
//! sequence of fork branches; that path is its lineage. Two moves depend
//! on each other when some acting lineage of one is an ancestor of (or
//! equal to) one of the other. Any linearisation of this dependency order
//! is the same play up to renaming of fresh channels; the normal form
//! picks the least one.

use std::collections::HashMap;

use super::{Play, SeedKind};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lineage {
    pub root: usize,
    /// Fork branches taken, `false` for left.
    pub path: Vec<bool>,
}

impl Lineage {
    fn related(&self, other: &Lineage) -> bool {
        self.root == other.root && (self.path.starts_with(&other.path) || other.path.starts_with(&self.path))
    }
}

/// Lineages of the players of every position of `p`, initial position first.
pub fn lineages(p: &Play) -> Vec<Vec<Lineage>> {
    let mut out = vec![(0..p.initial.players.len()).map(|root| Lineage { root, path: vec![] }).collect::<Vec<_>>()];
    for m in &p.steps {
        let prev = out.last().unwrap();
        let next = m
            .origin
            .iter()
            .map(|o| {
                let mut l = prev[o.base_player].clone();
                if let (SeedKind::Fork(_), Some(j)) = (m.kind, o.seed_player) {
                    l.path.push(j == 1);
                }
                l
            })
            .collect();
        out.push(next);
    }
    out
}

/// The least linearisation of `p`'s dependency order, with moves compared
/// by acting lineages, then by kind.
pub fn normalize_play(p: &Play) -> Result<Play> {
    let lin = lineages(p);
    let acting: Vec<Vec<Lineage>> =
        p.steps.iter().enumerate().map(|(i, m)| m.acting.iter().map(|&a| lin[i][a].clone()).collect()).collect();
    let n = p.steps.len();
    let deps: Vec<Vec<usize>> = (0..n)
        .map(|j| (0..j).filter(|&i| acting[i].iter().any(|a| acting[j].iter().any(|b| a.related(b)))).collect())
        .collect();

    let mut placed = vec![false; n];
    let mut out = Play::identity(p.initial.clone());
    let mut index: HashMap<Lineage, usize> = lin[0].iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
    for _ in 0..n {
        let next = (0..n)
            .filter(|&j| !placed[j] && deps[j].iter().all(|&i| placed[i]))
            .min_by(|&x, &y| (&acting[x], p.steps[x].kind).cmp(&(&acting[y], p.steps[y].kind)))
            .expect("dependency order is acyclic");
        placed[next] = true;
        let who: Vec<usize> = acting[next].iter().map(|l| index[l]).collect();
        let before: Vec<Lineage> = {
            let mut v = vec![None; out.final_position().players.len()];
            for (l, &i) in &index {
                v[i] = Some(l.clone());
            }
            v.into_iter().map(Option::unwrap).collect()
        };
        let m = out.push(p.steps[next].kind, &who)?;
        index = m
            .origin
            .iter()
            .enumerate()
            .map(|(r, o)| {
                let mut l = before[o.base_player].clone();
                if let (SeedKind::Fork(_), Some(j)) = (m.kind, o.seed_player) {
                    l.path.push(j == 1);
                }
                (l, r)
            })
            .collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::position::Position;

    #[test]
    fn independent_moves_commute() {
        let base = Position::new(4, vec![vec![0, 1, 2], vec![3]]).unwrap();
        let a = Play::from_moves(base.clone(), &[(SeedKind::Out(3, 2, 3), vec![0]), (SeedKind::In(1, 1), vec![0])])
            .unwrap();
        let b = Play::from_moves(base, &[(SeedKind::In(1, 1), vec![1]), (SeedKind::Out(3, 2, 3), vec![0])]).unwrap();
        assert_ne!(a, b);
        assert_eq!(normalize_play(&a).unwrap(), normalize_play(&b).unwrap());
    }

    #[test]
    fn dependent_moves_stay_ordered() {
        let p = Play::from_moves(
            Position::single(1),
            &[(SeedKind::In(1, 1), vec![0]), (SeedKind::Fork(2), vec![0]), (SeedKind::Tick(2), vec![1])],
        )
        .unwrap();
        assert_eq!(normalize_play(&p).unwrap(), p);
    }
}
