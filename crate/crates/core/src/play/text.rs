//! The `.play` trace format.
//!
//! ```text
//! position 3: (0 1 2) (1)
//! move(tau(1,1,3,2,3), [0, 1], [0, 1, 2])
//! ```
//!
//! The first line gives the initial position: its number of channels and
//! the attachment of each player. Each move line names the seed, the
//! acting players of the position it is played in, and optionally the
//! channels it touches (where the seed's channels land, then the fresh
//! ones), which are checked when present. `#` starts a comment.

use super::{GlobalMove, Play, SeedKind};
use crate::error::{Error, Result};
use crate::position::Position;

fn list(xs: &[usize]) -> String {
    let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn touched(m: &GlobalMove) -> Vec<usize> {
    let mut cs = m.seed_channels.clone();
    cs.extend(&m.fresh);
    cs
}

pub fn play_to_text(p: &Play) -> String {
    let mut out = format!("{}\n", p.initial);
    for m in &p.steps {
        out.push_str(&format!("move({}, {}, {})\n", m.kind, list(&m.acting), list(&touched(m))));
    }
    out
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col: 1, msg: msg.into() }
}

fn numbers(s: &str, line: usize) -> Result<Vec<usize>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| syntax(line, format!("expected a number, found `{t}`"))))
        .collect()
}

fn parse_position(s: &str, line: usize) -> Result<Position> {
    let rest = s.strip_prefix("position").ok_or_else(|| syntax(line, "expected `position`"))?;
    let (count, players) = rest.split_once(':').ok_or_else(|| syntax(line, "expected `:`"))?;
    let channels = count.trim().parse::<usize>().map_err(|_| syntax(line, "expected a channel count"))?;
    let mut attach = Vec::new();
    let mut rest = players.trim();
    while !rest.is_empty() {
        let inner = rest.strip_prefix('(').ok_or_else(|| syntax(line, "expected `(`"))?;
        let (body, tail) = inner.split_once(')').ok_or_else(|| syntax(line, "expected `)`"))?;
        attach.push(numbers(body, line)?);
        rest = tail.trim();
    }
    Position::new(channels, attach)
}

pub fn parse_seed(s: &str) -> Result<SeedKind> {
    let bad = || Error::InvalidSeed(format!("cannot read `{s}`"));
    let (name, args) = s.trim().split_once('(').ok_or_else(bad)?;
    let args = numbers(args.strip_suffix(')').ok_or_else(bad)?, 0).map_err(|_| bad())?;
    let kind = match (name.trim(), args.as_slice()) {
        ("fork", &[n]) => SeedKind::Fork(n),
        ("forkl", &[n]) => SeedKind::ForkL(n),
        ("forkr", &[n]) => SeedKind::ForkR(n),
        ("tick", &[n]) => SeedKind::Tick(n),
        ("nu", &[n]) => SeedKind::Nu(n),
        ("in", &[n, a]) => SeedKind::In(n, a),
        ("out", &[n, a, b]) => SeedKind::Out(n, a, b),
        ("tau", &[n, a, m, c, d]) => SeedKind::Tau(n, a, m, c, d),
        _ => return Err(bad()),
    };
    kind.validate()?;
    Ok(kind)
}

fn parse_move(s: &str, line: usize) -> Result<(SeedKind, Vec<usize>, Option<Vec<usize>>)> {
    let inner = s
        .strip_prefix("move(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| syntax(line, "expected `move(...)`"))?;
    let close = inner.find(')').ok_or_else(|| syntax(line, "unterminated seed"))?;
    let kind = parse_seed(&inner[..=close])?;
    let mut lists = Vec::new();
    let mut rest = &inner[close + 1..];
    while let Some(open) = rest.find('[') {
        let end = rest[open..].find(']').ok_or_else(|| syntax(line, "expected `]`"))? + open;
        lists.push(numbers(&rest[open + 1..end], line)?);
        rest = &rest[end + 1..];
    }
    let mut lists = lists.into_iter();
    let acting = lists.next().ok_or_else(|| syntax(line, "missing acting players"))?;
    Ok((kind, acting, lists.next()))
}

pub fn parse_play(text: &str) -> Result<Play> {
    let mut play: Option<Play> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        match &mut play {
            None => play = Some(Play::identity(parse_position(line, i + 1)?)),
            Some(p) => {
                let (kind, acting, channels) = parse_move(line, i + 1)?;
                let m = p.push(kind, &acting)?;
                if let Some(cs) = channels {
                    if cs != touched(m) {
                        return Err(Error::InvalidMove(format!(
                            "line {}: channels {} do not match {}",
                            i + 1,
                            list(&cs),
                            list(&touched(m))
                        )));
                    }
                }
            }
        }
    }
    play.ok_or_else(|| syntax(1, "empty play"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let base = Position::new(3, vec![vec![0, 1, 2], vec![1]]).unwrap();
        let p = Play::from_moves(
            base,
            &[(SeedKind::Tau(1, 1, 3, 2, 3), vec![0, 1]), (SeedKind::Fork(2), vec![1]), (SeedKind::Nu(3), vec![0])],
        )
        .unwrap();
        let text = play_to_text(&p);
        assert_eq!(parse_play(&text).unwrap(), p);
    }

    #[test]
    fn channels_are_optional_but_checked() {
        let p = parse_play("position 1: (0)\nmove(in(1,1), [0])  # receive\n").unwrap();
        assert_eq!(p.final_position().players, vec![vec![0, 1]]);
        assert!(parse_play("position 1: (0)\nmove(in(1,1), [0], [0, 5])").is_err());
        assert!(parse_play("position 1: (0)\nmove(in(1,2), [0])").is_err());
    }
}
