//! Graphviz rendering of positions and plays. Channels are circles and
//! players are points; time flows upwards.

use std::fmt::Write;

use super::{Play, SeedKind};
use crate::position::Position;

pub fn position_to_dot(x: &Position) -> String {
    let mut out = String::from("graph position {\n  node [fontsize=10];\n");
    for c in 0..x.channels {
        writeln!(out, "  c{c} [shape=circle, label=\"{c}\"];").unwrap();
    }
    for (p, attach) in x.players.iter().enumerate() {
        writeln!(out, "  p{p} [shape=point, width=0.12, xlabel=\"p{p}\"];").unwrap();
        for (k, c) in attach.iter().enumerate() {
            writeln!(out, "  p{p} -- c{c} [label=\"{}\"];", k + 1).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn play_to_dot(p: &Play) -> String {
    let mut out = String::from("digraph play {\n  rankdir=BT;\n  node [fontsize=10];\n");
    for c in 0..p.final_position().channels {
        writeln!(out, "  c{c} [shape=circle, label=\"{c}\"];").unwrap();
    }
    // Node name of the current occurrence of each player.
    let mut current: Vec<String> = Vec::new();
    let occurrence = |out: &mut String, name: String, attach: &[usize]| {
        writeln!(out, "  {name} [shape=point, width=0.12, xlabel=\"{name}\"];").unwrap();
        for (k, c) in attach.iter().enumerate() {
            writeln!(out, "  {name} -> c{c} [dir=none, style=dashed, label=\"{}\"];", k + 1).unwrap();
        }
        name
    };
    for (i, attach) in p.initial.players.iter().enumerate() {
        let name = occurrence(&mut out, format!("x0_{i}"), attach);
        current.push(name);
    }
    for (k, m) in p.steps.iter().enumerate() {
        let k = k + 1;
        let shape = if matches!(m.kind, SeedKind::Fork(_)) { "triangle" } else { "box" };
        writeln!(out, "  m{k} [shape={shape}, label=\"{}\"];", m.kind).unwrap();
        for &a in &m.acting {
            writeln!(out, "  {} -> m{k};", current[a]).unwrap();
        }
        if let SeedKind::Tau(_, _, _, c, d) = m.kind {
            writeln!(out, "  m{k} -> c{} [dir=none, penwidth=2];", m.seed_channels[c - 1]).unwrap();
            writeln!(out, "  m{k} -> c{} [style=dotted];", m.seed_channels[d - 1]).unwrap();
        }
        let mut next = Vec::with_capacity(m.result.players.len());
        for (r, o) in m.origin.iter().enumerate() {
            if o.seed_player.is_some() {
                let name = occurrence(&mut out, format!("x{k}_{r}"), &m.result.players[r]);
                writeln!(out, "  m{k} -> {name};").unwrap();
                next.push(name);
            } else {
                next.push(current[o.base_player].clone());
            }
        }
        current = next;
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_complete() {
        let p = Play::from_moves(Position::single(2), &[(SeedKind::Fork(2), vec![0])]).unwrap();
        let dot = play_to_dot(&p);
        assert_eq!(dot, play_to_dot(&p));
        assert!(dot.contains("m1 [shape=triangle, label=\"fork(2)\"]"));
        assert!(dot.contains("m1 -> x1_0;") && dot.contains("m1 -> x1_1;"));
        assert!(position_to_dot(&Position::single(1)).contains("p0 -- c0"));
    }
}
