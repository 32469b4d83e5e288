use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate characteristic id `{0}`")]
    DuplicateCharacteristic(String),

    #[error("invalid value domain for `{id}`: {reason}")]
    InvalidDomain { id: String, reason: String },

    #[error("unknown characteristic `{0}`")]
    UnknownCharacteristic(String),

    #[error("invalid profile: {}", .0.join("; "))]
    InvalidProfile(Vec<String>),

    #[error("duplicate chunk id `{0}`")]
    DuplicateChunk(String),

    #[error("unknown chunk `{0}`")]
    UnknownChunk(String),

    #[error("chunk `{chunk}`: {value} is not a valid value of `{characteristic}`")]
    InvalidValuation {
        chunk: String,
        characteristic: String,
        value: String,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("repository failed validation: {}", .0.join("; "))]
    InvalidRepository(Vec<String>),

    #[error("criterion `{criterion}`: {reason}")]
    InvalidCriterion { criterion: String, reason: String },

    #[error("alternative `{alternative}` has no valuation for criterion `{criterion}`")]
    UndescribedCell { alternative: String, criterion: String },

    #[error("alternative `{alternative}`: {value} cannot be scored on criterion `{criterion}`")]
    InvalidCell {
        alternative: String,
        criterion: String,
        value: String,
    },

    #[error("missing cell ({alternative}, {criterion})")]
    MissingCell { alternative: String, criterion: String },

    #[error("scores are not homogeneous: {0}")]
    HeterogeneousScores(String),

    #[error("weights do not match the criteria: expected {expected:?}, found {found:?}")]
    WeightMismatch { expected: Vec<String>, found: Vec<String> },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("technique requires weights but none were supplied")]
    MissingWeights,

    #[error("`{criterion}`: score {value} is outside {range}")]
    ScoreOutOfRange {
        criterion: String,
        value: f64,
        range: &'static str,
    },

    #[error("at least one criterion is required")]
    EmptyCriteria,

    #[error("duplicate criterion `{0}`")]
    DuplicateCriterion(String),

    #[error("swing: {0}")]
    Swing(String),

    #[error("invalid trade-off judgment: {0}")]
    InvalidJudgment(String),

    #[error("trade-off judgments leave criteria unreachable from the reference: {}", .0.join(", "))]
    DisconnectedJudgments(Vec<String>),

    #[error("malformed answer: {0}")]
    MalformedAnswer(String),

    #[error("elicitation session is already complete")]
    SessionComplete,

    #[error("strategy `{0}` is not implemented")]
    NotImplemented(String),

    #[error("at least {required} alternatives are required, got {found}")]
    TooFewAlternatives { required: usize, found: usize },

    #[error("threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),

    #[error("invalid threshold schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code, used by the HTTP layer.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DuplicateCharacteristic(_) | Error::DuplicateChunk(_) => "duplicate_id",
            Error::InvalidDomain { .. } => "invalid_domain",
            Error::UnknownCharacteristic(_) | Error::UnknownChunk(_) => "unknown_id",
            Error::InvalidProfile(_) => "invalid_profile",
            Error::InvalidValuation { .. } => "invalid_valuation",
            Error::Parse { .. } => "parse_error",
            Error::InvalidRepository(_) => "invalid_repository",
            Error::InvalidCriterion { .. } | Error::DuplicateCriterion(_) => "invalid_criterion",
            Error::UndescribedCell { .. } => "undescribed_cell",
            Error::InvalidCell { .. } => "invalid_cell",
            Error::MissingCell { .. } => "missing_cell",
            Error::HeterogeneousScores(_) => "heterogeneous_scores",
            Error::WeightMismatch { .. } => "weight_mismatch",
            Error::InvalidWeights(_) => "invalid_weights",
            Error::MissingWeights => "missing_weights",
            Error::ScoreOutOfRange { .. } => "score_out_of_range",
            Error::EmptyCriteria => "empty_criteria",
            Error::Swing(_) => "invalid_swing",
            Error::InvalidJudgment(_) => "invalid_judgment",
            Error::DisconnectedJudgments(_) => "disconnected_judgments",
            Error::MalformedAnswer(_) => "malformed_answer",
            Error::SessionComplete => "session_complete",
            Error::NotImplemented(_) => "not_implemented",
            Error::TooFewAlternatives { .. } => "too_few_alternatives",
            Error::InvalidThreshold(_) => "invalid_threshold",
            Error::InvalidSchedule(_) => "invalid_schedule",
            Error::InvalidMatrix(_) => "invalid_matrix",
            Error::Csv(_) => "csv_error",
            Error::Io(_) => "io_error",
        }
    }

    pub(crate) fn from_json(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}
