use thiserror::Error;

/// Errors produced by model construction, solvers and serialization.
#[derive(Debug, Error)]
pub enum Error {
    /// An instance or solution document failed validation. Every violation
    /// found is listed, not just the first.
    #[error("invalid document: {}", .0.join("; "))]
    InvalidDocument(Vec<String>),

    /// A document could not be parsed at all.
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    /// A solution references a task id that does not exist in the instance.
    #[error("unknown task id `{0}`")]
    UnknownTask(String),

    /// A solution references an access-point id that does not exist.
    #[error("unknown access point id `{0}`")]
    UnknownAccessPoint(String),

    /// A solution references a server id that does not exist.
    #[error("unknown server id `{0}`")]
    UnknownServer(String),

    /// A resource grant must be strictly positive.
    #[error("non-positive {kind} grant {value} for task `{task}`")]
    NonPositiveGrant {
        task: String,
        kind: &'static str,
        value: f64,
    },

    /// Discretization units must be strictly positive.
    #[error("non-positive minimum unit: b_unit={b_unit}, c_unit={c_unit}")]
    NonPositiveUnit { b_unit: f64, c_unit: f64 },

    /// The exhaustive oracle was asked to enumerate more valuations than its cap.
    #[error("enumeration space {space:.3e} exceeds the oracle cap {cap:.3e}")]
    OracleCapExceeded { space: f64, cap: f64 },

    /// A variable valuation claims an assignment without the supporting
    /// unit-selection variables.
    #[error("inconsistent valuation: {0}")]
    InconsistentValuation(String),

    /// Utilization targets outside the sampler's feasible range.
    #[error("infeasible utilization target: {0}")]
    InfeasibleUtilization(String),

    /// Profit gain ratio is undefined when the taskset has zero total profit
    /// but the solution claims a positive one.
    #[error("degenerate instance: total profit is zero but solution profit is {0}")]
    DegenerateInstance(f64),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
