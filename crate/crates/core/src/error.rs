use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Numerical,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Config => "config",
            ErrorKind::Data => "data",
            ErrorKind::Numerical => "numerical",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("empty vocabulary: no stem survives pruning (min_df={min_df}, max_df_ratio={max_df_ratio}, documents={documents})")]
    EmptyVocabulary {
        min_df: usize,
        max_df_ratio: f64,
        documents: usize,
    },

    #[error("unidentifiable category `{category}`: no training documents and alpha = 0")]
    UnidentifiableCategory { category: String },

    #[error("collinear categories: columns {columns:?} are linearly dependent")]
    CollinearCategories { columns: Vec<String> },

    #[error("underdetermined: {patterns} patterns for {categories} categories")]
    Underdetermined { patterns: usize, categories: usize },

    #[error("unseen pattern {pattern}: zero posterior mass for every category")]
    UnseenPattern { pattern: usize },

    #[error("no signal: zero on-topic mass")]
    NoSignal,

    #[error("missing component `{0}`")]
    MissingComponent(String),

    #[error("duplicate entry: {0}")]
    Duplicate(String),

    #[error("bootstrap exhausted {attempts} attempts drawing a replicate that covers every category")]
    BootstrapExhausted { attempts: usize },

    #[error("brute-force oracle limited to small instances (got {categories} categories, max 4)")]
    OracleTooLarge { categories: usize },

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config(_) | Error::OracleTooLarge { .. } => ErrorKind::Config,
            Error::UnidentifiableCategory { .. }
            | Error::CollinearCategories { .. }
            | Error::Underdetermined { .. }
            | Error::UnseenPattern { .. }
            | Error::NoConvergence(_)
            | Error::BootstrapExhausted { .. } => ErrorKind::Numerical,
            _ => ErrorKind::Data,
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
