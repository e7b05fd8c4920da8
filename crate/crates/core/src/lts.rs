//! Generic exploration for the `⊥` predicate over reflexive graphs whose
//! edges are either silent or `♥`.
//!
//! A state is in `⊥` when every state reachable by silent steps can still
//! reach a `♥` edge by silent steps. Identity edges never change the
//! answer and are not passed to the explorer.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

/// Exploration bounds. Verdicts are exact whenever the silent-reachable
/// set is exhausted within them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: usize,
    pub max_depth: usize,
}

impl Budget {
    pub fn nodes(max_nodes: usize) -> Budget {
        Budget { max_nodes, max_depth: usize::MAX }
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::nodes(100_000)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    InBot,
    NotInBot,
    Unknown,
}

impl Verdict {
    pub fn is_exact(self) -> bool {
        self != Verdict::Unknown
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::InBot => "InBot",
            Verdict::NotInBot => "NotInBot",
            Verdict::Unknown => "Unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Silent,
    Heart,
}

#[derive(Clone, Debug)]
pub struct BotReport<S> {
    pub verdict: Verdict,
    /// Number of distinct states visited.
    pub explored: usize,
    /// For `NotInBot`: a silent path from the start to a state that cannot
    /// reach `♥` any more.
    pub witness: Vec<S>,
}

/// Decides membership of `start` in `⊥`. `succ` lists non-identity edges.
pub fn bot<S, F>(start: S, mut succ: F, budget: Budget) -> BotReport<S>
where
    S: Clone + Eq + Hash,
    F: FnMut(&S) -> Vec<(Step, S)>,
{
    let mut index: HashMap<S, usize> = HashMap::new();
    let mut states: Vec<S> = vec![start.clone()];
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut depth: Vec<usize> = vec![0];
    let mut silent: Vec<Vec<usize>> = Vec::new();
    let mut heart: Vec<bool> = Vec::new();
    index.insert(start, 0);

    let mut queue = VecDeque::from([0usize]);
    let mut saturated = true;
    while let Some(i) = queue.pop_front() {
        if depth[i] >= budget.max_depth {
            saturated = false;
            break;
        }
        let edges = succ(&states[i]);
        let mut out = Vec::new();
        let mut has_heart = false;
        let mut has_silent = false;
        for (step, target) in edges {
            match step {
                Step::Heart => has_heart = true,
                Step::Silent => {
                    has_silent = true;
                    let j = match index.get(&target) {
                        Some(&j) => j,
                        None => {
                            if states.len() >= budget.max_nodes {
                                saturated = false;
                                continue;
                            }
                            let j = states.len();
                            index.insert(target.clone(), j);
                            states.push(target);
                            parent.push(Some(i));
                            depth.push(depth[i] + 1);
                            queue.push_back(j);
                            j
                        }
                    };
                    out.push(j);
                }
            }
        }
        while silent.len() <= i {
            silent.push(Vec::new());
            heart.push(false);
        }
        // A deadlocked state settles the question whatever lies elsewhere.
        if !has_silent && !has_heart {
            return BotReport { verdict: Verdict::NotInBot, explored: states.len(), witness: path(&states, &parent, i) };
        }
        silent[i] = out;
        heart[i] = has_heart;
        if !saturated {
            break;
        }
    }
    if !saturated {
        return BotReport { verdict: Verdict::Unknown, explored: states.len(), witness: Vec::new() };
    }

    // Backward closure of the ♥-enabled states along silent edges.
    let n = states.len();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, outs) in silent.iter().enumerate() {
        for &j in outs {
            preds[j].push(i);
        }
    }
    let mut good = heart.clone();
    let mut stack: Vec<usize> = (0..n).filter(|&i| good[i]).collect();
    while let Some(j) = stack.pop() {
        for &i in &preds[j] {
            if !good[i] {
                good[i] = true;
                stack.push(i);
            }
        }
    }
    match (0..n).find(|&i| !good[i]) {
        None => BotReport { verdict: Verdict::InBot, explored: n, witness: Vec::new() },
        Some(bad) => BotReport { verdict: Verdict::NotInBot, explored: n, witness: path(&states, &parent, bad) },
    }
}

fn path<S: Clone>(states: &[S], parent: &[Option<usize>], mut i: usize) -> Vec<S> {
    let mut out = vec![states[i].clone()];
    while let Some(p) = parent[i] {
        out.push(states[p].clone());
        i = p;
    }
    out.reverse();
    out
}
