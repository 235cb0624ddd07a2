use thiserror::Error;

/// Errors surfaced by the routing engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Topology file could not be parsed.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// Random topology generation kept producing disconnected graphs.
    #[error("failed to generate a connected topology within {attempts} attempts")]
    Disconnected { attempts: u32 },

    /// Exhaustive enumeration was asked for a space above the safety guard.
    #[error("enumeration space of {size} round vectors exceeds the guard of {limit}")]
    EnumerationGuard { size: u128, limit: u128 },

    /// Invalid run configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
