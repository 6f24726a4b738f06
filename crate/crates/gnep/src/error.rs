use thiserror::Error;

#[derive(Debug, Error)]
pub enum GnepError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("player index {index} out of range for {players} players")]
    PlayerOutOfRange { index: usize, players: usize },
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("non-finite value from player {player} oracle")]
    NonFinite { player: usize },
    #[error("inner loop did not converge after {iterations} iterations (residual {residual:e}, eps {eps:e}) at outer iteration {outer}")]
    InnerNonconvergence {
        outer: usize,
        iterations: usize,
        residual: f64,
        eps: f64,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate sampling region for player {player}")]
    DegenerateSampling { player: usize },
    #[error("parse error at {path} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("inadmissible instance: player {player}{}: {message}", .constraint.map(|c| format!(" constraint {c}")).unwrap_or_default())]
    Admissibility {
        player: usize,
        constraint: Option<usize>,
        message: String,
    },
    #[error("unknown problem '{0}'")]
    UnknownProblem(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GnepError>;
