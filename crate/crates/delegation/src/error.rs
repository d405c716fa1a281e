//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A function argument left the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Root bracketing failed: no sign change on the given interval.
    #[error("bracketing error: f({lo}) = {flo:e} and f({hi}) = {fhi:e} have the same sign")]
    Bracketing { lo: f64, hi: f64, flo: f64, fhi: f64 },

    /// The starting point handed to the convex solver is not strictly feasible.
    #[error("infeasible start: constraint {index} has value {value:e} (need < 0)")]
    InfeasibleStart { index: usize, value: f64 },

    /// The test-size construction does not apply for the computed kappa.
    #[error("construction inapplicable: kappa = {kappa} is not below 1")]
    ConstructionInapplicable { kappa: f64 },

    /// The first-best benchmark is non-positive, so ratios are undefined.
    #[error("undefined benchmark: first-best utility {0:e} is not positive")]
    UndefinedBenchmark(f64),

    /// The agent opts out under the given contract.
    #[error("agent does not participate under contract slope c = {0}")]
    NoParticipation(f64),

    /// The multi-round protocol was driven out of order.
    #[error("protocol error: {0}")]
    Protocol(String),
}

pub type Result<T> = std::result::Result<T, Error>;
