//! The `.strat` format.
//!
//! ```text
//! (+ <1 in(1,1): (+ <2 tick(2): (+ <2>)> <2>) out(1,1,1): (+ <1 = X(1)>)>)
//! where X(a) = a?.X(a)
//! ```
//!
//! A sum is `(+ d1 d2 ...)`. A definite strategy is `<n seed: sum ...>`,
//! listing the non-empty entries of its table over `[n]`, or `<n = X(...)>`
//! for the translation of a call. Definitions use process syntax. `#`
//! starts a comment.

use std::sync::Arc;

use super::{Definite, Strategy};
use crate::error::{Error, Result};
use crate::play::parse_seed;
use crate::process::{parse_file, pretty, Defs, Process, TypedProcess};

/// A strategy together with the definitions its references use.
#[derive(Clone, Debug)]
pub struct StrategyFile {
    pub strategy: Strategy,
    pub defs: Arc<Defs>,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    defs: &'a Arc<Defs>,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> Error {
        let before = &self.text[..self.pos];
        let line = before.matches('\n').count() + 1;
        let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        Error::Syntax { line, col, msg: msg.into() }
    }

    fn skip(&mut self) {
        loop {
            let rest = &self.text[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> Result<&'a str> {
        self.skip();
        let rest = &self.text[self.pos..];
        let len = rest.find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '\'')).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a word"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn number(&mut self) -> Result<usize> {
        let w = self.word()?;
        w.parse().map_err(|_| self.error(format!("expected a number, found `{w}`")))
    }

    /// A parenthesised list of numbers, returned as written.
    fn args(&mut self) -> Result<(&'a str, Vec<usize>)> {
        let start = self.pos;
        self.eat('(')?;
        let mut out = Vec::new();
        if self.peek() != Some(')') {
            out.push(self.number()?);
            while self.peek() == Some(',') {
                self.eat(',')?;
                out.push(self.number()?);
            }
        }
        self.eat(')')?;
        Ok((&self.text[start..self.pos], out))
    }

    fn strategy(&mut self, arity: Option<usize>) -> Result<Strategy> {
        self.eat('(')?;
        self.eat('+')?;
        let mut summands = Vec::new();
        while self.peek() == Some('<') {
            summands.push(self.definite()?);
        }
        self.eat(')')?;
        let arity = match (arity, summands.first()) {
            (Some(n), _) => n,
            (None, Some(d)) => d.arity(),
            (None, None) => return Err(self.error("cannot tell the arity of an empty sum here")),
        };
        Strategy::sum(arity, summands)
    }

    fn definite(&mut self) -> Result<Definite> {
        self.eat('<')?;
        let arity = self.number()?;
        let d = if self.peek() == Some('=') {
            self.eat('=')?;
            let name = self.word()?;
            let (_, args) = self.args()?;
            Definite::reference(name, args, arity, self.defs.clone())?
        } else {
            let mut entries = Vec::new();
            while self.peek() != Some('>') {
                let at = self.pos;
                let name = self.word()?;
                let (args, _) = self.args()?;
                let seed = parse_seed(&format!("{name}{args}")).map_err(|e| {
                    self.pos = at;
                    self.error(e.to_string())
                })?;
                self.eat(':')?;
                entries.push((seed, self.strategy(Some(super::final_arity(seed)))?));
            }
            Definite::table(arity, entries)?
        };
        self.eat('>')?;
        Ok(d)
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }
}

/// Splits off a trailing `where` block.
fn split_where(text: &str) -> (&str, Option<&str>) {
    let mut from = 0;
    while let Some(i) = text[from..].find("where") {
        let i = from + i;
        let before = text[..i].chars().next_back();
        let after = text[i + 5..].chars().next();
        let boundary = |c: Option<char>| c.map_or(true, |c| !(c.is_alphanumeric() || c == '_'));
        let commented = text[..i].rsplit('\n').next().is_some_and(|line| line.contains('#'));
        if boundary(before) && boundary(after) && !commented {
            return (&text[..i], Some(&text[i + 5..]));
        }
        from = i + 5;
    }
    (text, None)
}

pub fn parse_strategy_file(text: &str) -> Result<StrategyFile> {
    let (body, defs) = split_where(text);
    let defs = match defs {
        Some(d) => parse_file(&format!("0 where {d}"))?.process.defs,
        None => Arc::new(Defs::new()),
    };
    let mut p = Parser { text: body, pos: 0, defs: &defs };
    let strategy = if p.peek() == Some('<') { Strategy::single(p.definite()?) } else { p.strategy(None)? };
    p.finish()?;
    Ok(StrategyFile { strategy, defs })
}

pub fn parse_strategy(text: &str, arity: usize, defs: &Arc<Defs>) -> Result<Strategy> {
    let mut p = Parser { text, pos: 0, defs };
    let s = p.strategy(Some(arity))?;
    p.finish()?;
    Ok(s)
}

pub fn parse_definite(text: &str, defs: &Arc<Defs>) -> Result<Definite> {
    let mut p = Parser { text, pos: 0, defs };
    let d = p.definite()?;
    p.finish()?;
    Ok(d)
}

/// Prints a strategy with the definitions it needs.
pub fn strategy_file(s: &Strategy) -> String {
    let mut out = format!("{s}\n");
    if let Some(defs) = s.summands.iter().find_map(Definite::defs) {
        if !defs.is_empty() {
            let printed = pretty(&TypedProcess { ctx: 0, process: Process::nil(), defs });
            if let Some(i) = printed.find("where") {
                out.push_str(&printed[i..]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::translate;

    #[test]
    fn round_trip_translations() {
        for text in [
            "free a b c; a?.0 + a?.tick + b!c.c?.0",
            "free a; (a!a | a?.0) | new x.x!a",
            "free a; X(a) where X(c) = c?.(tick | X(c))",
        ] {
            let d = translate(&parse_file(text).unwrap().process);
            let s = Strategy::single(d);
            let printed = strategy_file(&s);
            let back = parse_strategy_file(&printed).unwrap();
            assert_eq!(back.strategy, s, "{printed}");
        }
    }

    #[test]
    fn shape_of_output() {
        let d = translate(&parse_file("free a; a?.tick").unwrap().process);
        assert_eq!(d.to_string(), "<1 in(1,1): (+ <2 tick(2): (+ <2>)>)>");
    }

    #[test]
    fn errors() {
        assert!(parse_strategy_file("(+ <1 tick(2): (+)>)").is_err());
        assert!(parse_strategy_file("(+ <1 in(1,1): (+ <1>)>)").is_err());
        assert!(parse_strategy_file("(+ <1 = Y(1)>)").is_err());
        assert!(matches!(parse_strategy_file("(+ <1>"), Err(Error::Syntax { .. })));
        assert_eq!(parse_strategy_file("(+)").unwrap_err(), parse_strategy_file("(+)").unwrap_err());
        let empty = parse_strategy("(+)", 2, &Arc::new(Defs::new())).unwrap();
        assert!(empty.is_empty());
    }
}
