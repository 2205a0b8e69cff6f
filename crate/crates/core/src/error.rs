use thiserror::Error;

/// Errors raised by the solver and the sweep machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("Boltzmann exponent {exponent:.3e} would overflow (energy shift below the ground level)")]
    OverflowRisk { exponent: f64 },

    #[error("chain length N = {0} is invalid (need N >= 2)")]
    InvalidN(usize),

    #[error("chain length N = {0} is too large for enumeration (max {max})", max = crate::oracle::MAX_ENUMERATION_N)]
    TooLarge(usize),

    #[error("transfer-matrix gap underflowed while w++ != w--")]
    DegenerateGap,

    #[error("not a valid two-qubit state: {0}")]
    NotAState(String),

    #[error("closed-form and Kraus teleportation outputs disagree by {0:.3e}")]
    FormulaMismatch(f64),

    #[error("non-finite value for `{quantity}` at {point}")]
    NonFinite { quantity: String, point: String },

    #[error("no extremum found: {0}")]
    NotFound(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("at {point}: {source}")]
    AtPoint { point: String, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line tool: 2 for configuration and I/O
    /// problems, 3 for numerical failures, 4 when a finder comes back empty.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_) | Error::InvalidN(_) | Error::TooLarge(_) | Error::Config(_) | Error::Io(_) => 2,
            Error::NotFound(_) => 4,
            Error::AtPoint { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
