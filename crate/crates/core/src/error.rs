use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("product 0 * inf is undefined")]
    UndefinedProduct,
    #[error("syntax error at {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a unit at the place")]
    NotAUnit,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("not ultrametric: {0}")]
    NotUltrametric(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("extension is not Galois: {0}")]
    NotGalois(String),
    #[error("generators are rank deficient")]
    RankDeficient,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("pseudo-norms live over different absolute values")]
    PavMismatch,
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("no separating function found after {budget} candidates")]
    NotSeparated { budget: usize },
    #[error("not an extension of the base: {0}")]
    NotAnExtension(String),
    #[error("cannot classify: {0}")]
    Unclassifiable(String),
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("bad descriptor: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
