use thiserror::Error;

/// Every failure the library can report. The variant name doubles as the
/// machine-readable kind in CLI error records and FFI error codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input is indistinguishable from zero: {0}")]
    ZeroInput(String),
    #[error("not a p-adic unit: {0}")]
    NotAUnit(String),
    #[error("minimal polynomial has repeated roots modulo {p}")]
    NonSeparableReduction { p: u32 },
    #[error("divergent substitution: {0}")]
    DivergentSubstitution(String),
    #[error("series is indistinguishable from zero at working precision")]
    IndistinguishableFromZero,
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("precision exceeded: {0}")]
    PrecisionExceeded(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("unsupported curve family: {0}")]
    UnsupportedFamily(String),
    #[error("bad reduction: {0}")]
    BadReduction(String),
    #[error("differential has a pole on the disc: {0}")]
    PoleOnDisc(String),
    #[error("points lie in different residue discs: {0}")]
    DifferentDiscs(String),
    #[error("endpoint restriction: {0}")]
    EndpointRestriction(String),
    #[error("missing incidence data: {0}")]
    MissingIncidence(String),
    #[error("intersection number needs an override: {0}")]
    NeedsOverride(String),
    #[error("model is not D-transversal over {0}")]
    NotTransversal(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroInput(_) => "ZeroInput",
            Error::NotAUnit(_) => "NotAUnit",
            Error::NonSeparableReduction { .. } => "NonSeparableReduction",
            Error::DivergentSubstitution(_) => "DivergentSubstitution",
            Error::IndistinguishableFromZero => "IndistinguishableFromZero",
            Error::PrecisionLoss(_) => "PrecisionLoss",
            Error::PrecisionExceeded(_) => "PrecisionExceeded",
            Error::NotSymmetric => "NotSymmetric",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
            Error::BadReduction(_) => "BadReduction",
            Error::PoleOnDisc(_) => "PoleOnDisc",
            Error::DifferentDiscs(_) => "DifferentDiscs",
            Error::EndpointRestriction(_) => "EndpointRestriction",
            Error::MissingIncidence(_) => "MissingIncidence",
            Error::NeedsOverride(_) => "NeedsOverride",
            Error::NotTransversal(_) => "NotTransversal",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::Invalid(_) => "Invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
