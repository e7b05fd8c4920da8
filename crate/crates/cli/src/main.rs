//! `pigame`: batch front end for the workbench.
//!
//! Exit status: 0 on success, 1 when a test distinguishes the inputs or
//! bisimulation fails, 2 when a verdict is undecided within the bounds or
//! an exploration was cut short, 3 on bad input.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pigame::lts::Budget;

#[derive(Debug, Parser)]
#[command(name = "pigame", version, about = "Game semantics workbench for the pi-calculus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub bounds: Bounds,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Bounds {
    /// Largest observer size in enumerated tests.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub k: u64,

    /// Largest number of states one exploration may visit.
    #[arg(long, env = "PIGAME_BUDGET", default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub budget: u64,

    /// Largest exploration depth; unbounded when absent.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub depth: Option<u64>,
}

impl Bounds {
    pub fn budget(&self) -> Budget {
        Budget { max_nodes: self.budget as usize, max_depth: self.depth.map_or(usize::MAX, |d| d as usize) }
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Echo a `.pi`, `.strat` or `.play` file; processes also in de Bruijn form.
    Parse { file: PathBuf },
    /// Reduction graph of a process.
    Reduce { file: PathBuf },
    /// The strategy of a process, with its table of basic seeds.
    Translate { file: PathBuf },
    /// Transitions out of a strategy state, lone inputs and outputs included.
    Step { file: PathBuf },
    /// Closed-world states reachable from a strategy state.
    Explore { file: PathBuf },
    /// `⊥` membership of one process, or fair testing of two.
    CheckFairPi { p: PathBuf, q: Option<PathBuf> },
    /// `⊥` membership of one strategy, or fair testing of two.
    CheckFairSd { p: PathBuf, q: Option<PathBuf> },
    /// Runs the same tests on two processes and on their translations.
    CheckTheorem1 { p: PathBuf, q: PathBuf },
    /// Weak bisimilarity over `A` of a process and its translation, or of
    /// the two given sides.
    BisimA { p: PathBuf, q: Option<PathBuf> },
    /// DOT drawing of a play.
    Render { file: PathBuf },
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Distinguished,
    Unknown,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Distinguished => 1,
            Status::Unknown => 2,
        }
    }
}

const INPUT_ERROR: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(report) => {
            print!("{}", report.body);
            ExitCode::from(report.status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
