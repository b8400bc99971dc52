use thiserror::Error;

/// Errors raised by the exact p-adic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("zero vector has no sphere normalization")]
    ZeroVector,

    #[error("matrix is singular")]
    Singular,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("prime mismatch: expected {expected}, found {found}")]
    PrimeMismatch { expected: u64, found: u64 },

    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,

    #[error("vector is not on the unit sphere (norm exponent {0})")]
    OffSphere(String),

    #[error("translation vector gives ||T^-1 a|| = 1; the affine sphere map is undefined")]
    DegenerateTranslation,

    #[error("operation requires a homeomorphic affine map (||T^-1 a|| < 1)")]
    NotHomeomorphism,

    #[error("translation lies outside the safe ball: {0}")]
    OutsideSafeBall(String),

    #[error("invalid SD form: {0}")]
    InvalidSdForm(String),

    #[error("no non-distality witness: D is scalar, the sphere map is projectively distal")]
    NoWitness,

    #[error("precision {given} is insufficient, at least {required} digits are needed")]
    Precision { given: u32, required: u32 },

    #[error("orbit search exceeded the cap of {0} lattice classes")]
    CapExceeded(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
