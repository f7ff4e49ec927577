use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("relation {0} is not homogeneous")]
    Inhomogeneous(usize),
    #[error("relation {0} is zero")]
    ZeroRelation(usize),
    #[error("relation {index} has degree {degree}; relations must have degree at least 2")]
    LowDegreeRelation { index: usize, degree: u32 },
    #[error("relation {0} is a linear combination of earlier relations")]
    DependentRelations(usize),
    #[error("F_2 is not supported; use an odd prime")]
    EvenPrime,
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("generator weights must be positive and sorted non-decreasing")]
    BadWeights,
    #[error("degree {requested} exceeds the certified degree {certified} of the basis")]
    AboveCertification { requested: u32, certified: u32 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("tensor has rank {0}; operation requires {1}")]
    RankMismatch(usize, &'static str),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("window too narrow: need degrees up to {required}, window ends at {window}")]
    WindowTooNarrow { required: i32, window: i32 },
    #[error("automorphism does not preserve the relation ideal: {0}")]
    NotAnAutomorphism(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
