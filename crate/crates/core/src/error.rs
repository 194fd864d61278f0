use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("degree {degree} exceeds the context maximum {max}")]
    DegreeOverflow { degree: u32, max: u32 },

    #[error("inhomogeneous sum: degree {left} + degree {right}")]
    Inhomogeneous { left: u32, right: u32 },

    #[error("module tag {tag} does not match subalgebra {subalgebra}")]
    TagMismatch { tag: String, subalgebra: String },

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
