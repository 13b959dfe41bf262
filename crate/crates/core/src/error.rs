use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: wrong dimensions, empty where non-empty is required,
    /// unparsable values.
    #[error("input error: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// A desk-scale cap was exceeded (selection count, vertex count, FM
    /// variable bound, ...).
    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: &'static str,
        needed: usize,
        limit: usize,
    },

    /// The operation is undefined for this argument (e.g. an incoherent
    /// cone where a coherent one is required).
    #[error("domain error: {0}")]
    Domain(String),

    /// A postcondition the engine asserts about its own output failed.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::Dimension { expected, found })
        }
    }
}
