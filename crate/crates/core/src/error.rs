use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("system is degenerate: no essential symbols remain after trimming")]
    Degenerate,
    #[error("word is not allowed: transition at position {position} is forbidden")]
    ForbiddenTransition { position: usize },
    #[error("word must be nonempty")]
    EmptyWord,
    #[error("enumeration would produce {count} blocks, above the cap of {cap}")]
    EnumerationCap { count: String, cap: usize },
    #[error("potential depends on coordinates [{lo}, {hi}], not on x_0 x_1 only")]
    NotTwoCoordinate { lo: i64, hi: i64 },
    #[error("potential window radius {radius} exceeds the cap of {cap}")]
    WindowTooWide { radius: usize, cap: usize },
    #[error("potential table has no value for allowed window `{0}`")]
    MissingWindow(String),
    #[error("potential table has an entry for `{0}`, which is not an allowed window")]
    ExtraWindow(String),
    #[error("potential value for `{0}` is not finite")]
    NonFiniteValue(String),
    #[error("point has no preimage: fiber set at position {position} is empty")]
    NoPreimage { position: i64 },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("word is not a cycle of the image presentation")]
    NotACycle,
    #[error("cycle word has no periodic preimage orbit")]
    NoPeriodicLift,
    #[error("no connecting word from `{from}` to `{to}` in the image presentation")]
    NoConnector { from: String, to: String },
    #[error("invalid Markov data: {0}")]
    InvalidMarkov(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
