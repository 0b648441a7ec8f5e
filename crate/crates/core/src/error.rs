use thiserror::Error;

/// Errors raised by the linear algebra kernel, the map constructors and the certifiers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: ‖A − A†‖_F = {deviation:e} exceeds {limit:e}")]
    NonHermitianInput { deviation: f64, limit: f64 },

    #[error("numerical routine did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("pairing has imaginary part {imag:e}, exceeding tolerance")]
    NonRealPairing { imag: f64 },

    #[error("parameter `{name}` must be nonnegative, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },

    #[error("parameters do not define a positive map")]
    NotPositiveMap,

    #[error("matrix is not antisymmetric: ‖U + Uᵗ‖_F = {0:e}")]
    NotAntisymmetric(f64),

    #[error("matrix is not unitary: ‖U†U − I‖_F = {0:e}")]
    NotUnitary(f64),

    #[error("dimension {0} is odd; an even dimension is required")]
    OddDimension(usize),

    #[error("matrix is not a density operator: {0}")]
    NotAState(String),

    #[error("found only {found} dual-face zeros out of {requested} requested")]
    InsufficientZeros { found: usize, requested: usize },

    #[error("null-space dimension unstable under resampling: {first} at {first_samples} samples, {second} at {second_samples}")]
    UnstableDimension {
        first: usize,
        first_samples: usize,
        second: usize,
        second_samples: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_mismatch(expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
