//! Canonical forms for labelled hypergraphs.
//!
//! Both process states and game positions are multisets of labelled
//! items, each attached to an ordered vector of channels. Some channels
//! are *fixed* (they are part of an interface and may not be renamed);
//! the rest may be permuted freely. Two such structures are isomorphic
//! iff their canonical forms coincide.
//!
//! The search is colour refinement followed by individualisation of the
//! smallest ambiguous cell. The number of explored leaves is capped; past
//! the cap the best leaf found so far is used, which keeps results
//! deterministic but may split very symmetric isomorphic states.

use std::collections::BTreeMap;

const LEAF_CAP: usize = 2000;

/// Result of canonicalisation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Canonical<L> {
    /// Items sorted, with channels renumbered: fixed channels keep their
    /// number, used permutable channels follow in canonical order.
    pub items: Vec<(L, Vec<usize>)>,
    /// Number of permutable channels that remain (unused ones are dropped).
    pub permutable: usize,
}

/// Canonicalises `items` over channels `0..channels`, where channels below
/// `fixed` keep their identity. Returns the canonical form together with
/// the renaming of the original channels (`None` for dropped ones).
pub fn canonicalize<L: Ord + Clone>(
    items: &[(L, Vec<usize>)],
    channels: usize,
    fixed: usize,
) -> (Canonical<L>, Vec<Option<usize>>) {
    let mut used = vec![false; channels];
    for (_, attach) in items {
        for &c in attach {
            used[c] = true;
        }
    }
    let perm: Vec<usize> = (fixed..channels).filter(|&c| used[c]).collect();

    let mut labels: Vec<&L> = items.iter().map(|(l, _)| l).collect();
    labels.sort();
    labels.dedup();
    let label_rank: Vec<usize> = items.iter().map(|(l, _)| labels.binary_search(&l).unwrap()).collect();

    let mut search = Search { items, label_rank, fixed, perm: &perm, best: None, leaves: 0, channels };
    let mut colour = vec![0usize; channels];
    for (c, col) in colour.iter_mut().enumerate().take(fixed) {
        *col = c + 1;
    }
    // Unused and fixed channels keep distinct colours outside the search.
    for &c in &perm {
        colour[c] = fixed + 1;
    }
    search.run(colour);
    let (canon, renaming) = search.best.expect("search visits at least one leaf");
    (canon, renaming)
}

struct Search<'a, L> {
    items: &'a [(L, Vec<usize>)],
    label_rank: Vec<usize>,
    fixed: usize,
    perm: &'a [usize],
    channels: usize,
    best: Option<(Canonical<L>, Vec<Option<usize>>)>,
    leaves: usize,
}

impl<L: Ord + Clone> Search<'_, L> {
    /// Refines colours of permutable channels until stable.
    fn refine(&self, mut colour: Vec<usize>) -> Vec<usize> {
        loop {
            let mut occurrences: BTreeMap<usize, Vec<(usize, Vec<usize>, usize)>> = BTreeMap::new();
            for (i, (_, attach)) in self.items.iter().enumerate() {
                let sig: Vec<usize> = attach.iter().map(|&c| colour[c]).collect();
                for (pos, &c) in attach.iter().enumerate() {
                    if c >= self.fixed {
                        occurrences.entry(c).or_default().push((self.label_rank[i], sig.clone(), pos));
                    }
                }
            }
            let mut sigs: Vec<(usize, Vec<(usize, Vec<usize>, usize)>)> = Vec::with_capacity(self.perm.len());
            for &c in self.perm {
                let mut occ = occurrences.remove(&c).unwrap_or_default();
                occ.sort();
                sigs.push((colour[c], occ));
            }
            let mut sorted: Vec<&(usize, Vec<(usize, Vec<usize>, usize)>)> = sigs.iter().collect();
            sorted.sort();
            sorted.dedup();
            let mut next = colour.clone();
            for (k, &c) in self.perm.iter().enumerate() {
                next[c] = self.fixed + 1 + sorted.binary_search(&&sigs[k]).unwrap();
            }
            let before = self.cells(&colour);
            let after = self.cells(&next);
            colour = next;
            if after == before {
                return colour;
            }
        }
    }

    fn cells(&self, colour: &[usize]) -> usize {
        let mut cs: Vec<usize> = self.perm.iter().map(|&c| colour[c]).collect();
        cs.sort_unstable();
        cs.dedup();
        cs.len()
    }

    fn run(&mut self, colour: Vec<usize>) {
        if self.leaves >= LEAF_CAP && self.best.is_some() {
            return;
        }
        let colour = self.refine(colour);
        let mut by_colour: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &c in self.perm {
            by_colour.entry(colour[c]).or_default().push(c);
        }
        let target = by_colour.values().filter(|cell| cell.len() > 1).min_by_key(|cell| cell.len()).cloned();
        match target {
            None => self.leaf(&colour),
            Some(cell) => {
                let cell_colour = colour[cell[0]];
                for &v in &cell {
                    // Spread colours so the chosen channel sorts first in its cell.
                    let mut next: Vec<usize> = colour.iter().map(|&k| 2 * k).collect();
                    for &w in &cell {
                        if w != v {
                            next[w] = 2 * cell_colour + 1;
                        }
                    }
                    for (c, col) in next.iter_mut().enumerate().take(self.fixed) {
                        *col = c + 1;
                    }
                    self.run(next);
                    if self.leaves >= LEAF_CAP {
                        return;
                    }
                }
            }
        }
    }

    fn leaf(&mut self, colour: &[usize]) {
        self.leaves += 1;
        let mut order: Vec<usize> = self.perm.to_vec();
        order.sort_by_key(|&c| colour[c]);
        let mut renaming: Vec<Option<usize>> = vec![None; self.channels];
        for (c, slot) in renaming.iter_mut().enumerate().take(self.fixed) {
            *slot = Some(c);
        }
        for (k, &c) in order.iter().enumerate() {
            renaming[c] = Some(self.fixed + k);
        }
        let mut items: Vec<(L, Vec<usize>)> = self
            .items
            .iter()
            .map(|(l, attach)| (l.clone(), attach.iter().map(|&c| renaming[c].unwrap()).collect()))
            .collect();
        items.sort();
        let candidate = Canonical { items, permutable: self.perm.len() };
        if self.best.as_ref().is_none_or(|(b, _)| candidate < *b) {
            self.best = Some((candidate, renaming));
        }
    }
}
