use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Operands have incompatible dimensions.
    #[error("shape mismatch in {context}: {detail}")]
    Shape {
        context: &'static str,
        detail: String,
    },

    /// An argument violates its documented precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter {
        name: &'static str,
        reason: String,
    },

    /// An iterative solver produced a non-finite iterate.
    #[error("iterate became non-finite at iteration {iteration}")]
    Divergence { iteration: usize },

    /// Exhaustive search over the latent grid would exceed the caller's budget.
    #[error("exhaustive search requires {required} decoder evaluations, budget is {budget}")]
    InfeasibleScale { required: u128, budget: u64 },

    /// The measured signal carries no energy, so the requested quantity is undefined.
    #[error("degenerate signal in {context}: measured energy is zero")]
    DegenerateSignal { context: &'static str },

    /// A block layout does not cover every pixel of the image.
    #[error("invalid block spec: {0}")]
    BlockSpec(String),

    /// A binary file does not start with the expected magic string.
    #[error("{format}: bad magic")]
    BadMagic { format: &'static str },

    /// A binary file declares a format version this build does not understand.
    #[error("{format}: unsupported version {version}")]
    UnsupportedVersion { format: &'static str, version: u32 },

    /// A file header is present but cannot be decoded.
    #[error("{format}: malformed header: {detail}")]
    MalformedHeader {
        format: &'static str,
        detail: String,
    },

    /// Header-declared dimensions are internally inconsistent or disagree with the payload.
    #[error("{format}: dimension mismatch: {detail}")]
    DimensionMismatch {
        format: &'static str,
        detail: String,
    },

    /// A file ends before its declared payload does.
    #[error("{format}: truncated: {detail}")]
    Truncated {
        format: &'static str,
        detail: String,
    },

    /// Declared dimensions overflow addressable memory.
    #[error("{format}: dimension overflow: {detail}")]
    DimOverflow {
        format: &'static str,
        detail: String,
    },

    /// An experiment configuration file is missing or invalid.
    #[error("config error: {0}")]
    Config(String),

    /// Input data is missing or unusable.
    #[error("data error: {0}")]
    Data(String),

    /// A sweep needs trained weights that are not on disk yet.
    #[error("weights not found at {path:?}; run `gencs train-ae` with the same config first")]
    MissingWeights { path: PathBuf },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 0 success, 2 config error, 3 data error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parameter { .. } => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
