use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("constant polynomial")]
    ConstantPolynomial,

    #[error("near-border λ: spatial eigenvalue {nu} lies within {margin:e} of the imaginary axis")]
    NearBorder { nu: Complex64, margin: f64 },

    #[error("stiff/singular: step size underflow at z = {z}")]
    StepUnderflow { z: f64 },

    #[error("root/pole on contour at sample {index} (|f| = {modulus:e})")]
    ZeroOnContour { index: usize, modulus: f64 },

    #[error("insufficient sampling: phase jump {jump:.3} between samples {index} and {next}")]
    InsufficientSampling { index: usize, next: usize, jump: f64 },

    #[error("sample cap of {cap} reached while refining contour")]
    SampleCap { cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation requires a {expected} profile")]
    WrongProfileKind { expected: &'static str },

    #[error("inconsistent spectral case: {0}")]
    InconsistentCase(String),

    #[error("defective eigenvalue {nu}: {detail}")]
    Defective { nu: Complex64, detail: String },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("λ = {lambda} lies in the essential spectrum: {detail}")]
    EssentialSpectrum { lambda: Complex64, detail: String },

    #[error("pole of the Evans function at λ = {lambda}")]
    Pole { lambda: Complex64 },

    #[error("λ = {lambda} lies on the branch cut")]
    BranchCut { lambda: Complex64 },

    #[error("serialization: {0}")]
    Serialization(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
