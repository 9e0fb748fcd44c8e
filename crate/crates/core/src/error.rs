use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty set has no Hausdorff distance")]
    EmptyHausdorff,

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("non-finite coordinate in point ({0}, {1})")]
    NonFinite(f64, f64),

    #[error("invalid resolution {0}: must be finite and > 0")]
    InvalidResolution(f64),

    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),

    #[error("unknown map identifier `{0}`")]
    UnknownMap(String),

    #[error("`{map}`: {reason}")]
    Domain { map: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "word budget exceeded: {maps}^{word_length} words is over the limit of {limit}; \
         use a smaller word length or fewer maps"
    )]
    WordBudget {
        maps: usize,
        word_length: usize,
        limit: u64,
    },

    #[error("cover maps are not contractive enough at m = {requested}: sampled Lipschitz {sup_ratio:.4} >= {limit}; smallest admissible m found by doubling is {suggested}")]
    CoverTooCoarse {
        requested: usize,
        sup_ratio: f64,
        limit: f64,
        suggested: usize,
    },

    #[error("L is not a free arc at this resolution: {0}")]
    NotFreeArc(String),

    #[error("dendrite arc L_{n}: {reason}")]
    DendriteInfeasible { n: u32, reason: String },

    #[error("malformed CSV at line {line}: {message}")]
    Csv { line: u64, message: String },

    #[error("ordinal syntax error: {0}")]
    OrdinalSyntax(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(map: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Domain {
            map: map.into(),
            reason: reason.into(),
        }
    }
}
