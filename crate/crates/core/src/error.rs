use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("resolution {0} is not dyadic")]
    NotDyadic(String),
    #[error("index {index} beyond truncation bound {bound}")]
    BeyondTruncation { index: usize, bound: usize },
    #[error("degenerate separation: d(Z, Y \\ V) = 0")]
    DegenerateSeparation,
    #[error("extension failed at domain point {index}: {reason}")]
    ExtensionFailure { index: usize, reason: String },
    #[error("gluing mismatch: homotopy start differs from base map by {deviation}")]
    GluingMismatch { deviation: f64 },
    #[error("maps too far apart for the catalog homotopy: {0}")]
    EpsilonTooLarge(String),
    #[error("diameter {diameter} not below required bound {bound}")]
    DiameterTooLarge { diameter: f64, bound: f64 },
    #[error("loop too coarse: angular step {step} at position {position}")]
    LoopTooCoarse { position: usize, step: f64 },
    #[error("refused: {0}")]
    Refused(String),
}
