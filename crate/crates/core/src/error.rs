use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u32),
    #[error("digit count must be at least 1, got {0}")]
    InvalidDigitCount(u32),
    #[error("base {base} with {n} digits gives more points than supported")]
    TooManyPoints { base: u32, n: u32 },
    #[error("sign pattern has length {found}, expected {expected}")]
    PatternLength { expected: usize, found: usize },
    #[error("cannot parse sign pattern {0:?}: expected a non-empty string over 'I' and 'R'")]
    PatternParse(String),
    #[error("position {index} out of range for a pattern of length {len}")]
    PatternIndex { index: usize, len: usize },
    #[error("level split ({j1}, {j2}) exceeds digit count {n}")]
    LevelOutOfRange { j1: u32, j2: u32, n: u32 },
    #[error("invalid Haar index: {0}")]
    InvalidIndex(String),
    #[error("cyclotomic values over different bases ({0} and {1})")]
    BaseMismatch(u32, u32),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse rational {0:?}")]
    RationalParse(String),
    #[error("evaluation point ({0}, {1}) lies outside the unit square")]
    PointOutsideSquare(String, String),
    #[error("unknown integrand {0:?}")]
    UnknownIntegrand(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
