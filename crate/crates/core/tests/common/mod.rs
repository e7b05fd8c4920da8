//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

pub mod props;

use std::collections::BTreeSet;

use pigame::play::{lineages, Lineage, normalize_play, views_of, Play, SeedKind};
use pigame::position::{HorizMap, Position};
use pigame::process::{parse_file, Process, TypedProcess};
use pigame::reduction::processes_of_size;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn proc(text: &str) -> TypedProcess {
    parse_file(text).unwrap_or_else(|e| panic!("{text}: {e}")).process
}

/// Every move playable in `x`, with its acting players.
pub fn all_moves(x: &Position) -> Vec<(SeedKind, Vec<usize>)> {
    let mut out = Vec::new();
    for (p, attach) in x.players.iter().enumerate() {
        let n = attach.len();
        out.push((SeedKind::Fork(n), vec![p]));
        out.push((SeedKind::Tick(n), vec![p]));
        out.push((SeedKind::Nu(n), vec![p]));
        for a in 1..=n {
            out.push((SeedKind::In(n, a), vec![p]));
            for b in 1..=n {
                out.push((SeedKind::Out(n, a, b), vec![p]));
            }
        }
    }
    for (s, sa) in x.players.iter().enumerate() {
        for (r, ra) in x.players.iter().enumerate() {
            if s == r {
                continue;
            }
            for c in 1..=sa.len() {
                for d in 1..=sa.len() {
                    for a in (1..=ra.len()).filter(|&a| ra[a - 1] == sa[c - 1]) {
                        out.push((SeedKind::Tau(ra.len(), a, sa.len(), c, d), vec![s, r]));
                    }
                }
            }
        }
    }
    out
}

/// A random position with 1 to `max_players` players of arity 1 to 3
/// over at most 3 channels.
pub fn random_position(rng: &mut impl Rng, max_players: usize) -> Position {
    let channels = rng.gen_range(1..=3);
    let players = (0..rng.gen_range(1..=max_players))
        .map(|_| (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..channels)).collect())
        .collect();
    Position::new(channels, players).unwrap()
}

/// A random play of at most `len` moves, skipping forks so positions stay
/// small.
pub fn random_play(rng: &mut impl Rng, x: &Position, len: usize) -> Play {
    let mut p = Play::identity(x.clone());
    for _ in 0..len {
        let moves: Vec<_> = all_moves(p.final_position())
            .into_iter()
            .filter(|(k, _)| !matches!(k, SeedKind::Fork(_)) || p.final_position().players.len() < 4)
            .collect();
        let (kind, acting) = moves.choose(rng).unwrap().clone();
        p.push(kind, &acting).unwrap();
    }
    p
}

/// A random horizontal map into `x`: a subset of the players, each
/// occurrence of a channel either kept shared or split off.
pub fn random_restriction(rng: &mut impl Rng, x: &Position) -> HorizMap {
    let mut chosen: Vec<usize> = (0..x.players.len()).filter(|_| rng.gen_bool(0.6)).collect();
    if chosen.is_empty() {
        chosen.push(rng.gen_range(0..x.players.len()));
    }
    let mut keys: Vec<(usize, usize)> = Vec::new();
    let mut players = Vec::new();
    for &p in &chosen {
        let attach = x.players[p]
            .iter()
            .map(|&c| {
                let key = (c, rng.gen_range(0..2));
                match keys.iter().position(|&k| k == key) {
                    Some(i) => i,
                    None => {
                        keys.push(key);
                        keys.len() - 1
                    }
                }
            })
            .collect();
        players.push(attach);
    }
    let source = Position::new(keys.len(), players).unwrap();
    HorizMap::new(source, x.clone(), keys.iter().map(|k| k.0).collect(), chosen).unwrap()
}

/// A random process of size at most `max` in context `ctx`.
pub fn random_process(rng: &mut impl Rng, ctx: usize, max: usize) -> TypedProcess {
    let size = rng.gen_range(0..=max);
    let all = processes_of_size(ctx, size);
    let p: Process = all.choose(rng).cloned().unwrap_or_else(Process::nil);
    TypedProcess::closed_defs(ctx, p).unwrap()
}

/// Whether the final position of `cand` maps into that of `u` compatibly
/// with `r`: final players matched by lineage, channels by a consistent
/// function extending `r`.
fn maps_into(cand: &Play, u: &Play, r: &HorizMap) -> bool {
    let lc = lineages(cand).pop().unwrap();
    let lu = lineages(u).pop().unwrap();
    let yc = cand.final_position();
    let yu = u.final_position();
    let mut chan: Vec<Option<usize>> = vec![None; yc.channels];
    for (c, &d) in r.chan_map.iter().enumerate() {
        chan[c] = Some(d);
    }
    for (p, l) in lc.iter().enumerate() {
        let image = lu.iter().position(|m| m.root == r.player_map[l.root] && m.path == l.path);
        let Some(q) = image else { return false };
        if yc.players[p].len() != yu.players[q].len() {
            return false;
        }
        for (&c, &d) in yc.players[p].iter().zip(&yu.players[q]) {
            match chan[c] {
                Some(e) if e != d => return false,
                _ => chan[c] = Some(d),
            }
        }
    }
    true
}

/// The moves of `p` involving `l` or one of its ancestors, in order.
fn history(p: &Play, lin: &[Vec<Lineage>], l: &Lineage) -> Vec<usize> {
    (0..p.steps.len())
        .filter(|&i| {
            p.steps[i].acting.iter().any(|&a| {
                let m = &lin[i][a];
                m.root == l.root && l.path.starts_with(&m.path)
            })
        })
        .collect()
}

/// Every synchronisation of `cand` stands for one synchronisation of `u`
/// between the images of its two players.
fn syncs_match(cand: &Play, u: &Play, r: &HorizMap) -> bool {
    let lc = lineages(cand);
    let lu = lineages(u);
    let image = |l: &Lineage| Lineage { root: r.player_map[l.root], path: l.path.clone() };
    cand.steps.iter().enumerate().all(|(t, m)| {
        if !matches!(m.kind, SeedKind::Tau(..)) {
            return true;
        }
        let targets: Vec<Option<usize>> = m
            .acting
            .iter()
            .map(|&a| {
                let l = &lc[t][a];
                let k = history(cand, &lc, l).iter().filter(|&&i| i < t).count();
                history(u, &lu, &image(l)).get(k).copied()
            })
            .collect();
        targets[0].is_some() && targets[0] == targets[1] && matches!(u.steps[targets[0].unwrap()].kind, SeedKind::Tau(..))
    })
}

/// The restriction of `u` along `r`, computed by search: the shortest
/// plays on `r.source` in which every player sees what its image sees in
/// `u`, whose synchronisations come from synchronisations of `u` and
/// whose final position maps into `u`'s. Results are in normal
/// form and deduplicated.
pub fn restriction_oracle(u: &Play, r: &HorizMap) -> BTreeSet<Vec<(SeedKind, Vec<usize>)>> {
    let want: Vec<_> = r.player_map.iter().map(|&q| views_of(u, q).unwrap()).collect();
    // Each non-empty view ends with one basic step of some move.
    let longest: usize = want.iter().map(|vs| vs.len() - 1).sum();
    let allowed: BTreeSet<SeedKind> = want.iter().flatten().flat_map(|v| v.steps.iter().copied()).collect();
    let fits = |k: SeedKind| match k {
        SeedKind::Fork(n) => allowed.contains(&SeedKind::ForkL(n)),
        SeedKind::Tau(n, a, m, c, d) => allowed.contains(&SeedKind::In(n, a)) && allowed.contains(&SeedKind::Out(m, c, d)),
        k => allowed.contains(&k),
    };
    let seen_ok = |p: &Play| {
        (0..want.len()).all(|x| {
            let got = views_of(p, x).unwrap();
            got.is_subset(&want[x])
        })
    };
    let mut frontier = vec![Play::identity(r.source.clone())];
    for _ in 0..=longest {
        let found: BTreeSet<_> = frontier
            .iter()
            .filter(|p| (0..want.len()).all(|x| views_of(p, x).unwrap() == want[x]) && maps_into(p, u, r) && syncs_match(p, u, r))
            .map(|p| normalize_play(p).unwrap().moves())
            .collect();
        if !found.is_empty() {
            return found;
        }
        let mut next = Vec::new();
        let mut keys = BTreeSet::new();
        for p in &frontier {
            for (kind, acting) in all_moves(p.final_position()) {
                if !fits(kind) {
                    continue;
                }
                let mut q = p.clone();
                q.push(kind, &acting).unwrap();
                if seen_ok(&q) && keys.insert(normalize_play(&q).unwrap().moves()) {
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    BTreeSet::new()
}
