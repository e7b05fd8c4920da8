//! Printing in the concrete `.pi` syntax. Channel at level `i` is printed
//! as `ci`, so printing and reparsing gives back the same term.

use super::{Context, Prefix, Process, TypedProcess};

fn name(c: usize) -> String {
    format!("c{c}")
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Par,
    Sum,
    Unit,
}

fn write(p: &Process, ctx: Context, prec: Prec, out: &mut String) {
    match p {
        Process::Sum(branches) if branches.is_empty() => out.push('0'),
        Process::Sum(branches) => {
            let wrap = branches.len() > 1 && prec == Prec::Unit;
            if wrap {
                out.push('(');
            }
            for (i, (prefix, cont)) in branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                match prefix {
                    Prefix::Out(a, b) => out.push_str(&format!("{}!{}", name(*a), name(*b))),
                    Prefix::In(a) => out.push_str(&format!("{}?({})", name(*a), name(ctx + 1))),
                    Prefix::Tick => out.push_str("tick"),
                }
                if !cont.is_nil() {
                    out.push('.');
                    write(cont, prefix.extend(ctx), Prec::Unit, out);
                }
            }
            if wrap {
                out.push(')');
            }
        }
        Process::Par(l, r) => {
            let wrap = prec > Prec::Par;
            if wrap {
                out.push('(');
            }
            write(l, ctx, Prec::Par, out);
            out.push_str(" | ");
            write(r, ctx, Prec::Sum, out);
            if wrap {
                out.push(')');
            }
        }
        Process::Nu(body) => {
            out.push_str(&format!("new {}.", name(ctx + 1)));
            write(body, ctx + 1, Prec::Unit, out);
        }
        Process::Call(def, args) => {
            out.push_str(def);
            if !args.is_empty() {
                let args: Vec<String> = args.iter().map(|&c| name(c)).collect();
                out.push_str(&format!("({})", args.join(", ")));
            }
        }
    }
}

/// Prints a bare process typed in `ctx`.
pub fn pretty_process(p: &Process, ctx: Context) -> String {
    let mut out = String::new();
    write(p, ctx, Prec::Par, &mut out);
    out
}

/// Prints a process with bare de Bruijn levels: `a!b`, `a?` and `ν`
/// bind nothing by name, and a channel is the number of binders (free
/// channels included) outside it.
pub fn debruijn(p: &Process) -> String {
    fn go(p: &Process, top: bool, out: &mut String) {
        match p {
            Process::Sum(branches) if branches.is_empty() => out.push('0'),
            Process::Sum(branches) => {
                let wrap = branches.len() > 1 && !top;
                if wrap {
                    out.push('(');
                }
                for (i, (prefix, cont)) in branches.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" + ");
                    }
                    match prefix {
                        Prefix::Out(a, b) => out.push_str(&format!("{a}!{b}")),
                        Prefix::In(a) => out.push_str(&format!("{a}?")),
                        Prefix::Tick => out.push_str("tick"),
                    }
                    if !cont.is_nil() {
                        out.push('.');
                        go(cont, false, out);
                    }
                }
                if wrap {
                    out.push(')');
                }
            }
            Process::Par(l, r) => {
                out.push('(');
                go(l, true, out);
                out.push_str(" | ");
                go(r, true, out);
                out.push(')');
            }
            Process::Nu(body) => {
                out.push_str("ν.");
                go(body, false, out);
            }
            Process::Call(def, args) => {
                let args: Vec<String> = args.iter().map(|c| c.to_string()).collect();
                out.push_str(&format!("{def}({})", args.join(",")));
            }
        }
    }
    let mut out = String::new();
    go(p, true, &mut out);
    out
}

/// Prints a full `.pi` file: free channel header, process, definitions.
pub fn pretty(p: &TypedProcess) -> String {
    let free: Vec<String> = (1..=p.ctx).map(name).collect();
    let mut out = format!("free {};\n{}", free.join(" "), pretty_process(&p.process, p.ctx));
    let defs: Vec<String> = p
        .defs
        .iter()
        .map(|d| {
            let params: Vec<String> = (1..=d.arity).map(name).collect();
            let head = if params.is_empty() { d.name.clone() } else { format!("{}({})", d.name, params.join(", ")) };
            format!("{head} = {}", pretty_process(&d.body, d.arity))
        })
        .collect();
    if !defs.is_empty() {
        out.push_str("\nwhere ");
        out.push_str(&defs.join(";\n  "));
    }
    out.push('\n');
    out
}
