use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("k = {k} out of range: need 1 <= k <= T-1 with T = {t} samples")]
    InvalidK { k: usize, t: usize },

    #[error("input lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("lag {lag} too large: need T - lag >= k+1 (T = {t}, k = {k})")]
    LagTooLarge { lag: usize, t: usize, k: usize },

    #[error(
        "degenerate ties: duplicate sample rows (pairs {pairs:?}, 0-based) make the k-th \
         neighbor distance zero; jitter the data (--jitter) or deduplicate rows"
    )]
    DegenerateTies { pairs: Vec<(usize, usize)> },

    #[error("digamma requires x > 0, got {x}")]
    DigammaDomain { x: f64 },

    #[error("correlation must satisfy |rho| < 1, got {rho}")]
    InvalidRho { rho: f64 },

    #[error("need at least {need} samples, got {got}")]
    TooFewRows { got: usize, need: usize },

    #[error("invalid jitter policy: {reason}")]
    InvalidJitter { reason: &'static str },

    #[error("unknown column {name:?}")]
    ColumnNotFound { name: String },

    #[error("column index {index} out of range (columns are 1-based, table has {ncols})")]
    ColumnIndexOutOfRange { index: usize, ncols: usize },

    #[error("column {which:?} selected more than once")]
    DuplicateColumn { which: String },

    #[error("cannot parse {token:?} as a number at row {row}, column {col}")]
    ParseCell { row: usize, col: String, token: String },

    #[error("missing na_tokens: DropRows policy needs at least one missing-value token")]
    MissingNaTokens,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Data errors come from the input itself (bad file, bad cells, degenerate
    /// samples); everything else is a usage error in how a call was made.
    /// The CLI maps this split onto exit codes 3 and 2.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. }
                | Error::DegenerateTies { .. }
                | Error::ParseCell { .. }
                | Error::Io(_)
                | Error::Csv(_)
                | Error::Json(_)
        )
    }
}
