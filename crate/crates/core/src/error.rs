use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The exact triangle-packing solver hit its branch-node budget on one
    /// conflict component. The caller gets no answer rather than a
    /// possibly non-maximum one.
    #[error("solver budget exceeded: {nodes} branch nodes explored (budget {budget})")]
    BudgetExceeded { nodes: u64, budget: u64 },

    /// The complement contains a K4, so colour classes are no longer
    /// restricted to triangles and edges and the packing formula is invalid.
    #[error("complement contains a K4; packing chromatic formula does not apply")]
    K4Present,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
