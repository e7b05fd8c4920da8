//! Concrete syntax for `.pi` files.
//!
//! ```text
//! file  ::= ("free" id* ";")? par ("where" def (";" def)* ";"?)?
//! def   ::= Name ("(" id ("," id)* ")")? "=" par
//! par   ::= sum ("|" sum)*
//! sum   ::= unit ("+" unit)*
//! unit  ::= "0" | "new" id "." unit | prefix ("." unit)? | Name args? | "(" par ")"
//! prefix::= id "!" id | id "?" ("(" id ")")? | "tick"
//! ```
//!
//! Channel names start with a lowercase letter, definition names with an
//! uppercase one. `#` starts a line comment. Without a `free` header the
//! free channels are numbered in order of first occurrence.

use std::sync::Arc;

use super::{Chan, Definition, Defs, Prefix, Process, TypedProcess};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Name(String),
    Zero,
    New,
    Tick,
    Where,
    Free,
    Bang,
    Query,
    Dot,
    Bar,
    Plus,
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Eof,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c == '#' {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                } else if c.is_whitespace() {
                    self.bump();
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.bump() else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                '!' => Tok::Bang,
                '?' => Tok::Query,
                '.' => Tok::Dot,
                '|' => Tok::Bar,
                '+' => Tok::Plus,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '=' => Tok::Eq,
                '0' => Tok::Zero,
                c if c.is_alphabetic() || c == '_' => {
                    let mut word = c.to_string();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_alphanumeric() || c == '_' || c == '\'' {
                            word.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    match word.as_str() {
                        "new" => Tok::New,
                        "tick" => Tok::Tick,
                        "where" => Tok::Where,
                        "free" => Tok::Free,
                        _ if word.starts_with(|c: char| c.is_uppercase()) => Tok::Name(word),
                        _ => Tok::Ident(word),
                    }
                }
                other => {
                    return Err(Error::Syntax { line, col, msg: format!("unexpected character `{other}`") });
                }
            };
            out.push((tok, line, col));
        }
    }
}

/// Process with named binders, before conversion to levels.
#[derive(Debug)]
enum Named {
    Sum(Vec<(NamedPrefix, Named)>),
    Par(Box<Named>, Box<Named>),
    Nu(String, Box<Named>),
    Call(String, Vec<String>),
}

#[derive(Debug)]
enum NamedPrefix {
    Out(String, String),
    In(String, Option<String>),
    Tick,
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let (_, line, col) = self.toks[self.pos];
        Error::Syntax { line, col, msg: msg.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {:?}", self.peek())))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            t => Err(self.error(format!("expected a channel name, found {t:?}"))),
        }
    }

    fn par(&mut self) -> Result<Named> {
        let mut left = self.sum()?;
        while *self.peek() == Tok::Bar {
            self.next();
            let right = self.sum()?;
            left = Named::Par(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn sum(&mut self) -> Result<Named> {
        let first = self.unit()?;
        if *self.peek() != Tok::Plus {
            return Ok(first);
        }
        let mut branches = Vec::new();
        let mut push = |unit: Named, p: &Parser| match unit {
            Named::Sum(bs) => {
                branches.extend(bs);
                Ok(())
            }
            _ => Err(p.error("only guarded sums may appear as branches of `+`")),
        };
        push(first, self)?;
        while *self.peek() == Tok::Plus {
            self.next();
            let unit = self.unit()?;
            push(unit, self)?;
        }
        Ok(Named::Sum(branches))
    }

    fn unit(&mut self) -> Result<Named> {
        match self.peek().clone() {
            Tok::Zero => {
                self.next();
                Ok(Named::Sum(Vec::new()))
            }
            Tok::New => {
                self.next();
                let name = self.ident()?;
                self.expect(Tok::Dot, "`.` after `new` binder")?;
                let body = self.unit()?;
                Ok(Named::Nu(name, Box::new(body)))
            }
            Tok::LParen => {
                self.next();
                let p = self.par()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            Tok::Name(name) => {
                self.next();
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.next();
                    if *self.peek() != Tok::RParen {
                        args.push(self.ident()?);
                        while *self.peek() == Tok::Comma {
                            self.next();
                            args.push(self.ident()?);
                        }
                    }
                    self.expect(Tok::RParen, "`)` after arguments")?;
                }
                Ok(Named::Call(name, args))
            }
            Tok::Tick => {
                self.next();
                self.continuation(NamedPrefix::Tick)
            }
            Tok::Ident(a) => {
                self.next();
                let prefix = match self.next() {
                    Tok::Bang => NamedPrefix::Out(a, self.ident()?),
                    Tok::Query => {
                        let binder = if *self.peek() == Tok::LParen {
                            self.next();
                            let b = self.ident()?;
                            self.expect(Tok::RParen, "`)` after input binder")?;
                            Some(b)
                        } else {
                            None
                        };
                        NamedPrefix::In(a, binder)
                    }
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("expected `!` or `?` after a channel"));
                    }
                };
                self.continuation(prefix)
            }
            t => Err(self.error(format!("expected a process, found {t:?}"))),
        }
    }

    fn continuation(&mut self, prefix: NamedPrefix) -> Result<Named> {
        let cont = if *self.peek() == Tok::Dot {
            self.next();
            self.unit()?
        } else {
            Named::Sum(Vec::new())
        };
        Ok(Named::Sum(vec![(prefix, cont)]))
    }

    fn definition(&mut self) -> Result<(String, Vec<String>, Named)> {
        let name = match self.next() {
            Tok::Name(n) => n,
            _ => {
                self.pos -= 1;
                return Err(self.error("expected a definition name"));
            }
        };
        let mut params = Vec::new();
        if *self.peek() == Tok::LParen {
            self.next();
            if *self.peek() != Tok::RParen {
                params.push(self.ident()?);
                while *self.peek() == Tok::Comma {
                    self.next();
                    params.push(self.ident()?);
                }
            }
            self.expect(Tok::RParen, "`)` after parameters")?;
        }
        self.expect(Tok::Eq, "`=`")?;
        let body = self.par()?;
        Ok((name, params, body))
    }
}

/// Collects unbound channel names in first-occurrence order.
fn collect_free(p: &Named, scope: &mut Vec<String>, out: &mut Vec<String>) {
    fn note(n: &String, scope: &[String], out: &mut Vec<String>) {
        if !scope.contains(n) && !out.contains(n) {
            out.push(n.clone());
        }
    }
    match p {
        Named::Sum(branches) => {
            for (prefix, cont) in branches {
                match prefix {
                    NamedPrefix::Out(a, b) => {
                        note(a, scope, out);
                        note(b, scope, out);
                        collect_free(cont, scope, out);
                    }
                    NamedPrefix::In(a, binder) => {
                        note(a, scope, out);
                        scope.push(binder.clone().unwrap_or_default());
                        collect_free(cont, scope, out);
                        scope.pop();
                    }
                    NamedPrefix::Tick => collect_free(cont, scope, out),
                }
            }
        }
        Named::Par(l, r) => {
            collect_free(l, scope, out);
            collect_free(r, scope, out);
        }
        Named::Nu(x, body) => {
            scope.push(x.clone());
            collect_free(body, scope, out);
            scope.pop();
        }
        Named::Call(_, args) => args.iter().for_each(|a| note(a, scope, out)),
    }
}

/// `scope[i]` names level `i + 1`; anonymous binders use the empty string.
fn resolve(p: &Named, scope: &mut Vec<String>, defs: &Defs) -> Result<Process> {
    let level = |n: &str, scope: &Vec<String>| -> Result<Chan> {
        scope.iter().rposition(|s| s == n).map(|i| i + 1).ok_or_else(|| Error::UnboundName(n.to_string()))
    };
    Ok(match p {
        Named::Sum(branches) => {
            let mut out = Vec::with_capacity(branches.len());
            for (prefix, cont) in branches {
                let branch = match prefix {
                    NamedPrefix::Out(a, b) => {
                        (Prefix::Out(level(a, scope)?, level(b, scope)?), resolve(cont, scope, defs)?)
                    }
                    NamedPrefix::In(a, binder) => {
                        let a = level(a, scope)?;
                        scope.push(binder.clone().unwrap_or_default());
                        let cont = resolve(cont, scope, defs);
                        scope.pop();
                        (Prefix::In(a), cont?)
                    }
                    NamedPrefix::Tick => (Prefix::Tick, resolve(cont, scope, defs)?),
                };
                out.push(branch);
            }
            Process::Sum(out)
        }
        Named::Par(l, r) => Process::par(resolve(l, scope, defs)?, resolve(r, scope, defs)?),
        Named::Nu(x, body) => {
            scope.push(x.clone());
            let body = resolve(body, scope, defs);
            scope.pop();
            Process::nu(body?)
        }
        Named::Call(name, args) => {
            let def = defs.get(name)?;
            if def.arity != args.len() {
                return Err(Error::ArityMismatch { expected: def.arity, found: args.len() });
            }
            Process::Call(name.clone(), args.iter().map(|a| level(a, scope)).collect::<Result<_>>()?)
        }
    })
}

/// A parsed `.pi` file: the main process and the names of its free channels.
#[derive(Clone, Debug)]
pub struct Program {
    pub free: Vec<String>,
    pub process: TypedProcess,
}

/// Parses a whole `.pi` file.
pub fn parse_file(text: &str) -> Result<Program> {
    parse_with(text, &Defs::new())
}

/// Parses a process, resolving calls against `defs` together with any
/// definitions the text itself introduces.
pub fn parse_process(text: &str, defs: &Defs) -> Result<TypedProcess> {
    Ok(parse_with(text, defs)?.process)
}

fn parse_with(text: &str, extra: &Defs) -> Result<Program> {
    let mut parser = Parser { toks: Lexer::new(text).tokens()?, pos: 0 };

    let header = if *parser.peek() == Tok::Free {
        parser.next();
        let mut names = Vec::new();
        while let Tok::Ident(_) = parser.peek() {
            names.push(parser.ident()?);
        }
        parser.expect(Tok::Semi, "`;` after free channel list")?;
        Some(names)
    } else {
        None
    };

    let main = parser.par()?;
    let mut raw_defs = Vec::new();
    if *parser.peek() == Tok::Where {
        parser.next();
        raw_defs.push(parser.definition()?);
        while *parser.peek() == Tok::Semi {
            parser.next();
            if let Tok::Name(_) = parser.peek() {
                raw_defs.push(parser.definition()?);
            }
        }
    }
    if *parser.peek() != Tok::Eof {
        return Err(parser.error(format!("unexpected {:?}", parser.peek())));
    }

    // Arities first so bodies can refer to each other.
    let mut shapes = extra.clone();
    let mut local = Defs::new();
    for (name, params, _) in &raw_defs {
        let stub = Definition { name: name.clone(), arity: params.len(), body: Process::nil() };
        local.insert(stub.clone())?;
        if shapes.get(name).is_ok() {
            return Err(Error::DuplicateDefinition(name.clone()));
        }
        shapes.insert(stub)?;
    }
    let mut defs = extra.clone();
    for (name, params, body) in &raw_defs {
        let mut scope = params.clone();
        let body = resolve(body, &mut scope, &shapes)?;
        defs.insert(Definition { name: name.clone(), arity: params.len(), body })?;
    }
    defs.validate()?;

    let free = match header {
        Some(names) => names,
        None => {
            let mut out = Vec::new();
            collect_free(&main, &mut Vec::new(), &mut out);
            out
        }
    };
    let mut scope = free.clone();
    let process = resolve(&main, &mut scope, &shapes)?;
    let process = TypedProcess::new(free.len(), process, Arc::new(defs))?;
    Ok(Program { free, process })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> TypedProcess {
        parse_file(text).unwrap().process
    }

    #[test]
    fn new_binds_level_one() {
        let p = parse("new a. a?.0");
        assert_eq!(p.ctx, 0);
        assert_eq!(p.process, Process::nu(Process::prefixed(Prefix::In(1), Process::nil())));
    }

    #[test]
    fn free_names_in_order() {
        let p = parse("a!b.0 | a?.0");
        assert_eq!(p.ctx, 2);
        assert_eq!(
            p.process,
            Process::par(
                Process::prefixed(Prefix::Out(1, 2), Process::nil()),
                Process::prefixed(Prefix::In(1), Process::nil())
            )
        );
    }

    #[test]
    fn recursive_definition() {
        let p = parse("X where X = tick.X");
        assert_eq!(p.process, Process::Call("X".into(), vec![]));
        let body = &p.defs.get("X").unwrap().body;
        assert_eq!(*body, Process::prefixed(Prefix::Tick, Process::Call("X".into(), vec![])));
    }

    #[test]
    fn input_binder_and_shadowing() {
        let p = parse("free a; a?(x).x!a.a?(a).a!x");
        let inner = Process::prefixed(Prefix::In(1), Process::prefixed(Prefix::Out(3, 2), Process::nil()));
        let expected = Process::prefixed(Prefix::In(1), Process::prefixed(Prefix::Out(2, 1), inner));
        assert_eq!(p.process, expected);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_file("a!"), Err(Error::Syntax { line: 1, col: 3, .. })));
        assert!(matches!(parse_file("free a; b!a"), Err(Error::UnboundName(n)) if n == "b"));
        assert!(matches!(parse_file("X where X = Y; Y = X | 0"), Err(Error::UnguardedRecursion(_))));
        assert!(matches!(parse_file("a?.0 + (b?.0 | c?.0)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn sums_flatten_and_keep_order() {
        let p = parse("a?.0 + (b?.0 + tick) + 0");
        let Process::Sum(branches) = &p.process else { panic!() };
        let prefixes: Vec<_> = branches.iter().map(|b| b.0.clone()).collect();
        assert_eq!(prefixes, vec![Prefix::In(1), Prefix::In(2), Prefix::Tick]);
    }
}
