use thiserror::Error;

/// Errors produced by enumeration, analytic evaluation and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    /// A size request exceeded the configured enumeration budget.
    #[error("size budget exceeded: requested {requested}, cap {cap}")]
    Budget { requested: u32, cap: u32 },

    /// A parameter outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Subcritical-only quantity requested at or above the phase transition.
    #[error("supercritical: expected edge ratio {x:.6} >= 1 at c = {c}; defined only below criticality")]
    Supercritical { c: f64, x: f64 },

    /// Input could not be classified as a unicyclic component.
    #[error("classification error: {0}")]
    Classification(String),

    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("cache format: {0}")]
    CacheFormat(String),

    /// Invalid flag combination or value on the command line.
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
