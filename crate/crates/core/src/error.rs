use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid simplicial map: {0}")]
    InvalidMap(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("cannot compose: {0}")]
    Mismatch(String),
    #[error("integer coefficient overflow")]
    Overflow,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("cells are not composable along dimension {0}")]
    NotComposable(usize),
    #[error("enumeration exceeded the ceiling of {0} cells")]
    Ceiling(usize),
    #[error("basis check failed: {0}")]
    Basis(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
