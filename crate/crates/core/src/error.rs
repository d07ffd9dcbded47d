use thiserror::Error;

use crate::system::StateId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge {src}->{dst} has negative cost {cost}")]
    NegativeCost { src: usize, dst: usize, cost: f64 },
    #[error("edge {src}->{dst} has non-finite cost")]
    NonFiniteCost { src: usize, dst: usize },
    #[error("duplicate edge {src}->{dst}")]
    DuplicateEdge { src: usize, dst: usize },
    #[error("edge {src}->{dst} references a state outside 0..{n_states}")]
    EdgeOutOfRange {
        src: usize,
        dst: usize,
        n_states: usize,
    },
    #[error("state {state} out of range for a system with {n_states} states")]
    InvalidState { state: StateId, n_states: usize },
    #[error("enumeration exceeded the budget of {cap} node expansions")]
    BudgetExceeded { cap: u64 },
    #[error("value iteration did not converge within {sweeps} sweeps (last change {last_change})")]
    NoConvergence { sweeps: usize, last_change: f64 },
    #[error("start state {0} cannot reach the goal")]
    Stuck(StateId),
    #[error("cap {cap} must exceed every finite entry (max finite entry {max_finite})")]
    CapTooSmall { cap: f64, max_finite: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("loss became non-finite at step {step}")]
    NonFiniteLoss { step: usize },
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("door endpoints {a} and {b} are not adjacent cells")]
    NonAdjacentDoor { a: usize, b: usize },
    #[error("wind component {0} must lie strictly inside (-1, 1)")]
    WindOutOfRange(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: {
                let full = e.to_string();
                match full.rfind(" at line ") {
                    Some(i) => full[..i].to_string(),
                    None => full,
                }
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
