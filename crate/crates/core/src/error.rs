use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("element is not a unit: {0}")]
    NotAUnit(String),

    #[error("coefficients do not form a partition: {0}")]
    Partition(String),

    #[error("operation undefined on the empty space")]
    EmptySpace,

    #[error("spaces are pointed at different base points")]
    Pointing,

    #[error("subspace is not contained in the ambient space: {0}")]
    Containment(String),

    #[error("point is not a member of the domain: {0}")]
    NotMember(String),

    #[error("images are not extensible to a contractive map: {0}")]
    Extensibility(String),

    #[error("map is not contractive: {0}")]
    NotContractive(String),

    #[error("map table is not total: {0}")]
    Totality(String),

    #[error("no kernel map exists for the empty subspace")]
    NoKernel,

    #[error("enumeration limit exceeded: {size} > {limit}")]
    LimitExceeded { size: u128, limit: u128 },

    #[error("malformed input: {0}")]
    Format(String),

    #[error("oracle disagreement: {0}")]
    OracleFailure(String),

    #[error("operation cancelled")]
    Cancelled,
}

pub(crate) fn dim_err(what: &str, expected: impl std::fmt::Debug, found: impl std::fmt::Debug) -> Error {
    Error::Dimension(format!("{what}: expected {expected:?}, found {found:?}"))
}
