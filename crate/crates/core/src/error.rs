use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The caller supplied malformed or insufficient input.
    #[error("usage error: {0}")]
    Usage(String),

    /// A problem instance violates `0 < s < n < p` or `C >= 1`.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// `s = floor(rho * n)`, `p = floor(n / delta)` produced an invalid instance.
    #[error("degenerate discretization: rho={rho}, delta={delta}, n={n} gives s={s}, p={p}")]
    DegenerateDiscretization {
        rho: f64,
        delta: f64,
        n: u64,
        s: u64,
        p: u64,
    },

    /// The instance exceeds the combinatorial budget of the exact NSP checker.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// The LP solver hit its iteration cap.
    #[error("LP solver failure after {iterations} iterations")]
    SolverFailure { iterations: usize },
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
