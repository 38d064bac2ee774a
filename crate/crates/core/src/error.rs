use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("modulus is reducible or not monic of degree {0}")]
    ReducibleModulus(u32),
    #[error("unsupported field order {0}")]
    UnsupportedOrder(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element code {0} out of range")]
    InvalidElement(u32),
    #[error("row width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parity of r = {r} does not match e = {e}")]
    ParityMismatch { r: usize, e: u8 },
    #[error("quadric dimension r = {r} too small for e = {e}")]
    DimensionTooSmall { r: usize, e: u8 },
    #[error("quadratic form is degenerate or lacks a declared type")]
    DegenerateForm,
    #[error("declared quadric type e = {declared} but form classifies as {actual}")]
    TypeMismatch { declared: u8, actual: String },
    #[error("invalid exact cover instance: {0}")]
    InvalidInstance(String),
    #[error("not a valid avsp: {0}")]
    InvalidAvsp(String),
    #[error("avsp has no quadric/generator context")]
    MissingContext,
    #[error("avsp is not hyperbolic, parabolic or elliptic: {0}")]
    NotClassified(String),
    #[error("extension failure: {0}")]
    ExtensionFailure(String),
    #[error("hyperplane section is degenerate")]
    DegenerateSection,
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
    #[error("certificate format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
