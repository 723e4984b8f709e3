use thiserror::Error;

/// Errors raised by the library. The CLI maps every variant to exit status 1.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("malformed bit word: unexpected character {0:?}")]
    MalformedBits(char),
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),
    #[error("depth {depth} lies below the gauge's start depth {start}")]
    BelowStartDepth { depth: u64, start: u64 },
    #[error("gauge fails the slope-in-[0,1] condition")]
    NotDoublingMonotone,
    #[error("no witness within budget: no depth in [{from}, {to}] beats the exponent")]
    WitnessBudgetExhausted { from: u64, to: u64 },
    #[error("invalid exponent sequence: {0}")]
    InvalidSequence(String),
    #[error("no admissible block end within budget for block {block} (scanned to depth {depth})")]
    ScheduleBudget { block: usize, depth: u64 },
    #[error("word of length {len} exceeds the constructed schedule (length {limit})")]
    ScheduleTooShort { len: u64, limit: u64 },
    #[error("branch violates the forced-zero zone at position {0}")]
    NotInTree(u64),
    #[error("minimum cover depth {min_depth} exceeds the trie depth {max_depth}")]
    DepthOutOfRange { min_depth: u64, max_depth: u64 },
    #[error("trie word `{0}` is longer than the declared maximum depth")]
    WordTooDeep(String),
    #[error("brute-force enumeration refused: {0}")]
    Intractable(String),
    #[error("degenerate parameter: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("need more digits to determine the next partial quotient")]
    NeedMoreDigits,
    #[error("depth {k} exceeds the revelation budget (2/s)·log2(q)")]
    RevealBudget { k: u64 },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
