use thiserror::Error;

/// Errors raised by the workbench. Every fallible operation in the crate
/// returns this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("unbound name `{0}`")]
    UnboundName(String),

    #[error("unknown definition `{0}`")]
    UnknownDefinition(String),

    #[error("duplicate definition `{0}`")]
    DuplicateDefinition(String),

    #[error("unguarded recursion through `{0}`")]
    UnguardedRecursion(String),

    #[error("channel index {index} out of range for context of size {ctx}")]
    IndexOutOfRange { index: usize, ctx: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("context mismatch: expected {expected}, found {found}")]
    ContextMismatch { expected: usize, found: usize },

    #[error("invalid horizontal map: {0}")]
    InvalidHorizMap(String),

    #[error("invalid seed: {0}")]
    InvalidSeed(String),

    #[error("invalid move: {0}")]
    InvalidMove(String),

    #[error("synchronisation carrier mismatch: sender channel {sender} is not receiver channel {receiver}")]
    CarrierMismatch { sender: usize, receiver: usize },

    #[error("play boundary mismatch")]
    BoundaryMismatch,

    #[error("pick index {index} out of range for a sum of {len} summands")]
    PickOutOfRange { index: usize, len: usize },

    #[error("interface mismatch: {0}")]
    InterfaceMismatch(String),

    #[error("ill-typed label sequence: {0}")]
    Typing(String),
}

pub type Result<T> = std::result::Result<T, Error>;
