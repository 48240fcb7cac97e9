use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate ordered judgment ({question_id}: {first} vs {second})")]
    DuplicateJudgment {
        question_id: String,
        first: String,
        second: String,
        line: Option<usize>,
    },

    #[error("judgment has identical first and second response ({question_id}: {id})")]
    SelfComparison {
        question_id: String,
        id: String,
        line: Option<usize>,
    },

    #[error("unknown vertex {id} in graph for {question_id}")]
    UnknownVertex { question_id: String, id: String },

    #[error("graph for {question_id} is incomplete; operation requires all pairs judged")]
    IncompleteGraph { question_id: String },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("no canonical relation covers pair ({a}, {b}) for {question_id}")]
    UncoveredPair {
        question_id: String,
        a: String,
        b: String,
    },

    #[error("cleaned data is not pure (rho={rho}, tau_avg={tau_avg}); offending questions: {questions:?}")]
    PurityViolation {
        rho: f64,
        tau_avg: f64,
        questions: Vec<String>,
    },

    #[error("line {line}: {message}")]
    ParseError { line: usize, message: String },

    #[error("line {line}: unknown verdict token {token:?}")]
    BadVerdict { line: usize, token: String },

    #[error("empty field {field} in prompt rendering")]
    EmptyField { field: &'static str },

    #[error("judge reply ends with unexpected character {}", match found { Some(c) => format!("{c:?}"), None => "<none>".to_string() })]
    UnparseableReply { found: Option<char> },

    #[error("judge reply indicates a tie but the template does not allow ties")]
    UnexpectedTie,

    #[error("win-rate denominator is zero")]
    NoComparisons,

    #[error("need at least {needed} records, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("no annotation item has a strict majority verdict")]
    NoMajorityItems,

    #[error("rankings have mismatched lengths ({a} vs {b})")]
    RankMismatch { a: usize, b: usize },

    #[error("text is empty after tokenization")]
    EmptyText,

    #[error("invalid synthesis spec: {reason}")]
    BadSpec { reason: String },

    #[error("oracle limited to n <= {limit}, got {got}")]
    OracleLimit { limit: usize, got: usize },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
