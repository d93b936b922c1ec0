use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("benefit argument {argument} of player {player} is outside the logarithm's domain")]
    Domain { player: usize, argument: f64 },
    #[error("size {n} exceeds the budget of {max}")]
    Size { n: usize, max: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no convergence after {iterations} iterations: {detail}")]
    NonConvergence { iterations: usize, detail: String },
    #[error("spectral radius bracket [{lower}, {upper}] is too close to the threshold to decide")]
    Indeterminate { lower: f64, upper: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
