//! One function per subcommand. Each builds its report in every format it
//! supports; `run` keeps the one asked for.

use std::fmt::{Display, Write};

use pigame::alphabet::{project_pi, project_sd, weak_bisim, ALts, AVertex, Bisim};
use pigame::crosscheck::{check_theorem1, summary};
use pigame::lts::Verdict;
use pigame::play::{play_to_dot, play_to_text};
use pigame::process::{debruijn, pretty};
use pigame::reduction::{bot_pi, explore_pi, fair_equiv_pi, normalize, Equivalence, PiLabel};
use pigame::sd::{bot_d, bot_general, explore, fair_equiv_d, succ, SDLabel, SDState};
use pigame::strategy::{strategy_file, translate, Strategy};
use serde_json::{json, Value};

use crate::input::{self, Input, InputError, Result};
use crate::{Bounds, Cli, Command, Format, Status};

pub struct Report {
    pub body: String,
    pub status: Status,
}

/// The same report in the formats a command offers.
struct Forms {
    text: String,
    json: Value,
    dot: Option<String>,
}

pub fn run(cli: &Cli) -> Result<Report> {
    let b = &cli.bounds;
    let (name, forms, status) = match &cli.command {
        Command::Parse { file } => ("parse", parse(file)?, Status::Ok),
        Command::Reduce { file } => {
            let (f, s) = reduce(file, b)?;
            ("reduce", f, s)
        }
        Command::Translate { file } => ("translate", translate_cmd(file)?, Status::Ok),
        Command::Step { file } => ("step", step(file)?, Status::Ok),
        Command::Explore { file } => {
            let (f, s) = explore_cmd(file, b)?;
            ("explore", f, s)
        }
        Command::CheckFairPi { p, q } => {
            let (f, s) = match q {
                None => bot_of_process(p, b)?,
                Some(q) => fair_pi(p, q, b)?,
            };
            ("check-fair-pi", f, s)
        }
        Command::CheckFairSd { p, q } => {
            let (f, s) = match q {
                None => bot_of_strategy(p, b)?,
                Some(q) => fair_sd(p, q, b)?,
            };
            ("check-fair-sd", f, s)
        }
        Command::CheckTheorem1 { p, q } => {
            let (f, s) = translation_check(p, q, b)?;
            ("check-theorem1", f, s)
        }
        Command::BisimA { p, q } => {
            let (f, s) = bisim(p, q.as_deref(), b)?;
            ("bisim-a", f, s)
        }
        Command::Render { file } => {
            let play = input::play(file)?;
            let dot = play_to_dot(&play);
            // Rendering is DOT whatever the format, except JSON.
            let forms = Forms { text: dot.clone(), json: Value::Null, dot: Some(dot) };
            if cli.format == Format::Json {
                return Err(InputError::Usage("render has no JSON form".into()));
            }
            ("render", forms, Status::Ok)
        }
    };
    let body = match cli.format {
        Format::Text => forms.text,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&forms.json).expect("reports are plain JSON");
            s.push('\n');
            s
        }
        Format::Dot => forms.dot.ok_or_else(|| InputError::Usage(format!("{name} has no DOT form")))?,
    };
    Ok(Report { body, status })
}

fn bound_json(b: &Bounds, with_k: bool) -> Value {
    let mut v = json!({ "nodes": b.budget, "depth": b.depth });
    if with_k {
        v["k"] = json!(b.k);
    }
    v
}

fn bound_text(b: &Bounds, with_k: bool) -> String {
    let depth = b.depth.map_or("unbounded".to_string(), |d| d.to_string());
    let mut s = format!("bound: {} nodes, depth {depth}", b.budget);
    if with_k {
        write!(s, ", k = {}", b.k).unwrap();
    }
    s
}

fn indent(text: &str, by: &str) -> String {
    text.lines().map(|l| format!("{by}{l}\n")).collect()
}

fn esc(s: &str) -> String {
    s.trim_end().replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\l")
}

/// A graph dump: states, then edges.
fn graph(name: &str, states: &[String], edges: &[(usize, &str, usize)], saturated: bool, b: &Bounds) -> (Forms, Status) {
    let mut text = format!("{}\n{} states, {}\n", bound_text(b, false), states.len(), if saturated { "saturated" } else { "truncated" });
    for (i, s) in states.iter().enumerate() {
        if s.contains('\n') {
            write!(text, "s{i}:\n{}", indent(s, "  ")).unwrap();
        } else {
            writeln!(text, "s{i}: {s}").unwrap();
        }
    }
    for (i, l, j) in edges {
        writeln!(text, "s{i} -{l}-> s{j}").unwrap();
    }
    let json = json!({
        "bound": bound_json(b, false),
        "saturated": saturated,
        "states": states,
        "edges": edges.iter().map(|(i, l, j)| json!({ "from": i, "label": l, "to": j })).collect::<Vec<_>>(),
    });
    let mut dot = format!("digraph {name} {{\n  node [shape=box, fontsize=10];\n");
    for (i, s) in states.iter().enumerate() {
        writeln!(dot, "  s{i} [label=\"{}\"];", esc(s)).unwrap();
    }
    for (i, l, j) in edges {
        writeln!(dot, "  s{i} -> s{j} [label=\"{l}\"];").unwrap();
    }
    dot.push_str("}\n");
    let status = if saturated { Status::Ok } else { Status::Unknown };
    (Forms { text, json, dot: Some(dot) }, status)
}

fn parse(file: &std::path::Path) -> Result<Forms> {
    Ok(match input::load(file)? {
        Input::Process(prog) => {
            let p = &prog.process;
            let defs: Vec<Value> = p
                .defs
                .iter()
                .map(|d| json!({ "name": d.name, "arity": d.arity, "debruijn": debruijn(&d.body) }))
                .collect();
            let mut text = pretty(p);
            writeln!(text, "de Bruijn, {} free: {}", p.ctx, debruijn(&p.process)).unwrap();
            for d in p.defs.iter() {
                writeln!(text, "  {}/{} = {}", d.name, d.arity, debruijn(&d.body)).unwrap();
            }
            let json = json!({
                "kind": "process",
                "free": prog.free,
                "ctx": p.ctx,
                "debruijn": debruijn(&p.process),
                "definitions": defs,
                "pretty": pretty(p),
            });
            Forms { text, json, dot: None }
        }
        Input::Strategy(s) => {
            let json = json!({
                "kind": "strategy",
                "arity": s.strategy.arity,
                "summands": s.strategy.summands.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            });
            Forms { text: strategy_file(&s.strategy), json, dot: None }
        }
        Input::Play(p) => {
            let moves: Vec<Value> =
                p.steps.iter().map(|m| json!({ "seed": m.kind.to_string(), "acting": m.acting })).collect();
            let json = json!({ "kind": "play", "initial": p.initial.to_string(), "moves": moves });
            Forms { text: play_to_text(&p), json, dot: None }
        }
    })
}

fn pi_label(l: PiLabel) -> &'static str {
    match l {
        PiLabel::Tau => "τ",
        PiLabel::Heart => "♥",
        PiLabel::Id => "id",
    }
}

fn sd_label(l: SDLabel) -> &'static str {
    match l {
        SDLabel::Silent => "τ",
        SDLabel::Heart => "♥",
        SDLabel::Open => "open",
        SDLabel::Id => "id",
    }
}

fn reduce(file: &std::path::Path, b: &Bounds) -> Result<(Forms, Status)> {
    let p = input::process(file)?;
    let g = explore_pi(&normalize(&p), b.budget());
    let states: Vec<String> = g.states.iter().map(|s| s.to_string()).collect();
    let edges: Vec<_> = g.edges.iter().map(|&(i, l, j)| (i, pi_label(l), j)).collect();
    Ok(graph("reduce", &states, &edges, g.saturated, b))
}

fn translate_cmd(file: &std::path::Path) -> Result<Forms> {
    let p = input::process(file)?;
    let d = translate(&p);
    let table = d.resolve()?;
    let mut text = strategy_file(&Strategy::single(d.clone()));
    writeln!(text, "table of arity {}:", table.arity).unwrap();
    let mut rows = Vec::new();
    for (seed, s) in &table.entries {
        writeln!(text, "  {seed} ↦ {s}").unwrap();
        let summands: Vec<String> = s.summands.iter().map(|d| d.to_string()).collect();
        rows.push(json!({ "seed": seed.to_string(), "summands": summands }));
    }
    let json = json!({ "arity": table.arity, "strategy": d.to_string(), "table": rows });
    Ok(Forms { text, json, dot: None })
}

fn step(file: &std::path::Path) -> Result<Forms> {
    let s = input::state(file)?;
    let mut text = format!("state:\n{}", indent(&s.to_string(), "  "));
    let mut rows = Vec::new();
    for e in succ(&s)? {
        let Some(mv) = &e.mv else { continue };
        writeln!(text, "{} by {:?}, summands {:?}, {}", mv.kind, mv.acting, e.choices, sd_label(e.label)).unwrap();
        text.push_str(&indent(&e.target.to_string(), "    "));
        rows.push(json!({
            "seed": mv.kind.to_string(),
            "acting": mv.acting,
            "choices": e.choices,
            "label": sd_label(e.label),
            "target": e.target.to_string(),
        }));
    }
    let json = json!({ "state": s.to_string(), "edges": rows });
    Ok(Forms { text, json, dot: None })
}

fn explore_cmd(file: &std::path::Path, b: &Bounds) -> Result<(Forms, Status)> {
    let s = input::state(file)?;
    let g = explore(&s, b.budget())?;
    let states: Vec<String> = g.states.iter().map(|s| s.to_string()).collect();
    let edges: Vec<_> = g.edges.iter().map(|&(i, l, j)| (i, sd_label(l), j)).collect();
    Ok(graph("explore", &states, &edges, g.saturated, b))
}

fn verdict_status(v: Verdict) -> Status {
    if v.is_exact() {
        Status::Ok
    } else {
        Status::Unknown
    }
}

/// A `⊥` verdict as a record: the state, the verdict, the bound it holds
/// under and, when the state is not in `⊥`, a silent path to a state that
/// cannot tick any more.
fn bot_record(state: String, verdict: Verdict, explored: Option<usize>, witness: Vec<String>, b: &Bounds) -> (Forms, Status) {
    let mut text = format!("state:\n{}verdict: {}\n{}\n", indent(&state, "  "), verdict.name(), bound_text(b, false));
    if let Some(n) = explored {
        writeln!(text, "explored: {n} states").unwrap();
    }
    if !witness.is_empty() {
        text.push_str("witness path:\n");
        for (i, w) in witness.iter().enumerate() {
            write!(text, "  {i}:\n{}", indent(w, "    ")).unwrap();
        }
    }
    let json = json!({
        "state": state,
        "verdict": verdict.name(),
        "bound": bound_json(b, false),
        "explored": explored,
        "witness-path": witness,
    });
    (Forms { text, json, dot: None }, verdict_status(verdict))
}

fn bot_of_process(file: &std::path::Path, b: &Bounds) -> Result<(Forms, Status)> {
    let p = input::process(file)?;
    let s = normalize(&p);
    let r = bot_pi(&s, b.budget());
    let witness = r.witness.iter().map(|w| w.to_string()).collect();
    Ok(bot_record(s.to_string(), r.verdict, Some(r.explored), witness, b))
}

fn bot_of_strategy(file: &std::path::Path, b: &Bounds) -> Result<(Forms, Status)> {
    let ps = input::position_strategy(file)?;
    if let [d] = ps.assign[0].summands.as_slice() {
        let s = SDState::new(ps.base.clone(), vec![d.clone()])?;
        let r = bot_d(&s, b.budget())?;
        let witness = r.witness.iter().map(|w| w.to_string()).collect();
        return Ok(bot_record(s.to_string(), r.verdict, Some(r.explored), witness, b));
    }
    // A sum is in `⊥` when every choice of summand is.
    let verdict = bot_general(&ps, b.budget())?;
    Ok(bot_record(ps.assign[0].to_string(), verdict, None, Vec::new(), b))
}

fn equivalence<T: Display>(left: String, right: String, e: &Equivalence<T>, b: &Bounds) -> (Forms, Status) {
    let (outcome, status) = match e {
        Equivalence::Distinguished { test, left, right } => (
            json!({ "outcome": "Distinguished", "test": test.to_string(), "verdicts": [left.name(), right.name()] }),
            Status::Distinguished,
        ),
        Equivalence::AgreeUpTo { k, tests } => (json!({ "outcome": "AgreeUpTo", "k": k, "tests": tests }), Status::Ok),
        Equivalence::Unknown { k, tests, undecided } => (
            json!({ "outcome": "Unknown", "k": k, "tests": tests, "undecided": undecided }),
            Status::Unknown,
        ),
    };
    let text = format!(
        "left:\n{}right:\n{}{}\n{}\n",
        indent(&left, "  "),
        indent(&right, "  "),
        bound_text(b, true),
        summary(e)
    );
    let json = json!({ "left": left, "right": right, "bound": bound_json(b, true), "result": outcome });
    (Forms { text, json, dot: None }, status)
}

fn fair_pi(p: &std::path::Path, q: &std::path::Path, b: &Bounds) -> Result<(Forms, Status)> {
    let (p, q) = (input::process(p)?, input::process(q)?);
    let e = fair_equiv_pi(&p, &q, b.k(), b.budget())?;
    Ok(equivalence(pretty(&p), pretty(&q), &e, b))
}

fn fair_sd(p: &std::path::Path, q: &std::path::Path, b: &Bounds) -> Result<(Forms, Status)> {
    let (sp, sq) = (input::position_strategy(p)?, input::position_strategy(q)?);
    let e = fair_equiv_d(&sp, &sq, b.k(), b.budget())?;
    Ok(equivalence(sp.assign[0].to_string(), sq.assign[0].to_string(), &e, b))
}

fn translation_check(p: &std::path::Path, q: &std::path::Path, b: &Bounds) -> Result<(Forms, Status)> {
    let (p, q) = (input::process(p)?, input::process(q)?);
    let r = check_theorem1(&p, &q, b.k(), b.budget())?;
    let undecided = r.rows.iter().filter(|row| !row.is_exact()).count();
    let mismatches: Vec<_> = r.mismatches().collect();
    let status = if !mismatches.is_empty() {
        Status::Distinguished
    } else if undecided > 0 {
        Status::Unknown
    } else {
        Status::Ok
    };
    let mut text = format!(
        "{}\n{} tests, {undecided} with an undecided verdict\nprocesses:  {}\nstrategies: {}\n",
        bound_text(b, true),
        r.rows.len(),
        summary(&r.pi),
        summary(&r.sd)
    );
    if mismatches.is_empty() {
        text.push_str("no test separates a process from its translation\n");
    }
    let mut rows = Vec::new();
    for m in &mismatches {
        writeln!(
            text,
            "mismatch on {}: P {} / {}, Q {} / {}",
            m.test,
            m.pi[0].name(),
            m.sd[0].name(),
            m.pi[1].name(),
            m.sd[1].name()
        )
        .unwrap();
        rows.push(json!({
            "test": m.test.to_string(),
            "p": [m.pi[0].name(), m.sd[0].name()],
            "q": [m.pi[1].name(), m.sd[1].name()],
        }));
    }
    let json = json!({
        "bound": bound_json(b, true),
        "tests": r.rows.len(),
        "undecided": undecided,
        "processes": summary(&r.pi),
        "strategies": summary(&r.sd),
        "mismatches": rows,
    });
    Ok((Forms { text, json, dot: None }, status))
}

fn side(path: &std::path::Path, b: &Bounds) -> Result<ALts> {
    Ok(match input::load(path)? {
        Input::Process(prog) => project_pi(&prog.process, &AVertex::full(prog.process.ctx), b.budget())?,
        Input::Strategy(_) => {
            let s = input::state(path)?;
            project_sd(&s, &AVertex::full(s.position.channels), b.budget())?
        }
        Input::Play(_) => return Err(InputError::Kind { path: path.into(), expected: "`.pi` or `.strat`" }),
    })
}

fn bisim(p: &std::path::Path, q: Option<&std::path::Path>, b: &Bounds) -> Result<(Forms, Status)> {
    let left = side(p, b)?;
    let right = match q {
        Some(q) => side(q, b)?,
        None => {
            let proc = input::process(p)?;
            project_sd(&SDState::translated(&proc), &AVertex::full(proc.ctx), b.budget())?
        }
    };
    let result = weak_bisim(&left, &right)?;
    let describe = |l: &ALts| format!("{} states, {}", l.len(), if l.saturated { "saturated" } else { "truncated" });
    let (outcome, witness, status) = match &result {
        Bisim::Bisimilar => ("Bisimilar", Vec::new(), Status::Ok),
        Bisim::NotBisimilar { witness } => {
            ("NotBisimilar", witness.iter().map(|l| l.to_string()).collect(), Status::Distinguished)
        }
        Bisim::Unknown => ("Unknown", Vec::new(), Status::Unknown),
    };
    let mut text = format!(
        "{}\nleft:  {}\nright: {}\n{outcome}\n",
        bound_text(b, false),
        describe(&left),
        describe(&right)
    );
    if !witness.is_empty() {
        writeln!(text, "witness: {}", witness.join(" ")).unwrap();
    }
    let json = json!({
        "bound": bound_json(b, false),
        "left": { "states": left.len(), "saturated": left.saturated },
        "right": { "states": right.len(), "saturated": right.saturated },
        "result": outcome,
        "witness": witness,
    });
    Ok((Forms { text, json, dot: None }, status))
}
