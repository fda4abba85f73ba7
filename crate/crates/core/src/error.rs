use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring parameters: {0}")]
    InvalidRing(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("element is not a square in the residue field")]
    NotASquare,
    #[error("precision {requested} out of range 1..={max}")]
    PrecisionOutOfRange { requested: u32, max: u32 },
    #[error("element does not belong to this ring: {0}")]
    ForeignElement(String),
    #[error("h-polynomial index {0} out of range (must be >= 1)")]
    IndexOutOfRange(usize),
    #[error("matrix determinant is not 1")]
    DeterminantNotOne,
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("enumeration exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid residual pair: {0}")]
    InvalidResidual(String),
    #[error("presentation mismatch: {0}")]
    MismatchFound(String),
    #[error("distinguishedness violated: {0}")]
    DistinguishednessViolated(String),
    #[error("negative dimension in ledger row {0}")]
    NegativeDim(String),
    #[error("delta is {delta}, expected 0 (rows: {rows})")]
    DeltaNonZero { delta: i64, rows: String },
    #[error("residual representation not absolutely irreducible: {0}")]
    NotAbsolutelyIrreducible(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("no element found: {0}")]
    NotFound(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
