use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("parity-check matrix has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },

    #[error("enumeration guard: {what} = {value} exceeds limit {limit}")]
    Guard {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("value is not tabulated: {0}")]
    NotTabulated(String),

    #[error("no zero-sum subsequence of length {length} exists (certified absent)")]
    CertifiedAbsent { length: usize },

    #[error("construction failed validation: {0}")]
    Validation(String),

    #[error("inconsistent bounds for {quantity}: lower {lower} from [{lower_step}] exceeds upper {upper} from [{upper_step}]")]
    Inconsistent {
        quantity: String,
        lower: u64,
        lower_step: String,
        upper: u64,
        upper_step: String,
    },

    #[error("cache line {line}: {reason}")]
    Cache { line: usize, reason: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
