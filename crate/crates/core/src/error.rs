use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dyadic point {numerator}/2^{level} lies outside [0, 1]")]
    OutOfUnitInterval { numerator: String, level: u32 },

    #[error("cannot parse dyadic point from {0:?}")]
    ParseDyadic(String),

    #[error("interval [{left}, {right}] is empty or its length is not a power of two")]
    NotDyadicInterval { left: String, right: String },

    #[error("refinement depth exceeded: level {level} is above the cap {cap}")]
    DepthExceeded { level: u32, cap: u32 },

    #[error("site {0} is already present in the skeleton")]
    DuplicateSite(String),

    #[error("invalid bridge segment (a={a}, b={b}, length={length})")]
    InvalidSegment { a: f64, b: f64, length: f64 },

    #[error("interior offset {offset} is not strictly inside (0, {length})")]
    OffsetOutsideSegment { offset: f64, length: f64 },

    #[error("uniform variate {0} is outside (0, 1]")]
    InvalidUniform(f64),

    #[error("site {0} cannot be evaluated before t = 1")]
    EvaluationOrder(String),

    #[error("oracle function must vanish at 0, got f(0) = {0}")]
    NonZeroAtOrigin(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "rho bound violated at n = {n}: max rho {rho_max} exceeds {bound} although the favorable-set hypothesis holds"
    )]
    LemmaBoundViolated { n: usize, rho_max: f64, bound: f64 },

    #[error("csv output failed: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
