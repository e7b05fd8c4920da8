//! Loading `.pi`, `.strat` and `.play` files.

use std::fs;
use std::path::{Path, PathBuf};

use pigame::play::{parse_play, Play};
use pigame::position::Position;
use pigame::process::{parse_file, Program, TypedProcess};
use pigame::sd::SDState;
use pigame::strategy::{parse_strategy_file, translate, Definite, PositionStrategy, StrategyFile};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: pigame::error::Error },

    #[error("{}: expected one of {expected}", path.display())]
    Kind { path: PathBuf, expected: &'static str },

    #[error("{}: a state needs a definite strategy, the file holds a sum of {summands}", path.display())]
    NotDefinite { path: PathBuf, summands: usize },

    #[error(transparent)]
    Core(#[from] pigame::error::Error),

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, InputError>;

pub enum Input {
    Process(Program),
    Strategy(StrategyFile),
    Play(Play),
}

pub fn load(path: &Path) -> Result<Input> {
    let text = fs::read_to_string(path).map_err(|source| InputError::Io { path: path.into(), source })?;
    let parse_err = |source| InputError::Parse { path: path.into(), source };
    match path.extension().and_then(|e| e.to_str()) {
        Some("pi") => parse_file(&text).map(Input::Process).map_err(parse_err),
        Some("strat") => parse_strategy_file(&text).map(Input::Strategy).map_err(parse_err),
        Some("play") => parse_play(&text).map(Input::Play).map_err(parse_err),
        _ => Err(InputError::Kind { path: path.into(), expected: "`.pi`, `.strat` or `.play`" }),
    }
}

pub fn process(path: &Path) -> Result<TypedProcess> {
    match load(path)? {
        Input::Process(p) => Ok(p.process),
        _ => Err(InputError::Kind { path: path.into(), expected: "`.pi`" }),
    }
}

pub fn play(path: &Path) -> Result<Play> {
    match load(path)? {
        Input::Play(p) => Ok(p),
        _ => Err(InputError::Kind { path: path.into(), expected: "`.play`" }),
    }
}

/// A process is read as its translation.
pub fn position_strategy(path: &Path) -> Result<PositionStrategy> {
    match load(path)? {
        Input::Process(p) => Ok(PositionStrategy::single(translate(&p.process))),
        Input::Strategy(s) => Ok(PositionStrategy::new(Position::single(s.strategy.arity), vec![s.strategy])?),
        Input::Play(_) => Err(InputError::Kind { path: path.into(), expected: "`.pi` or `.strat`" }),
    }
}

pub fn definite(path: &Path) -> Result<Definite> {
    let ps = position_strategy(path)?;
    let s = &ps.assign[0];
    match s.summands.as_slice() {
        [d] => Ok(d.clone()),
        _ => Err(InputError::NotDefinite { path: path.into(), summands: s.summands.len() }),
    }
}

pub fn state(path: &Path) -> Result<SDState> {
    let d = definite(path)?;
    Ok(SDState::new(Position::single(d.arity()), vec![d])?)
}
