//! A workbench for the game semantics of the pi-calculus.

pub mod alphabet;
pub mod canon;
pub mod crosscheck;
pub mod error;
pub mod lts;
pub mod play;
pub mod position;
pub mod process;
pub mod reduction;
pub mod sd;
pub mod strategy;

pub use error::{Error, Result};
