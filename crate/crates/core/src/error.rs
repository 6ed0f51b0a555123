use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation requires a connected graph.
    #[error("graph is disconnected")]
    Disconnected,

    /// The operation requires at least one edge.
    #[error("graph has no edges")]
    Edgeless,

    /// Exhaustive enumeration was requested on a graph that is too large or too small.
    #[error("vertex count {n} outside the supported range [{min}, {max}]")]
    SizeOutOfRange { n: u32, min: u32, max: u32 },

    /// An iterative solver hit its iteration cap.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    /// A computation would exceed its runtime budget.
    #[error("runtime cap exceeded: {0}")]
    RuntimeCap(String),

    /// A bisection bracket failed to change sign.
    #[error("bracketing failure: {0}")]
    Bracketing(String),

    #[error("vertex {0} is not infected")]
    NotInfected(u32),

    #[error("vertex {0} is initially infected")]
    InitiallyInfected(u32),

    /// A Monte Carlo trial failed; the seed reproduces it.
    #[error("trial {trial} (seed {seed}) failed: {source}")]
    TrialFailed {
        trial: u64,
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
