use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` refers to unknown vertex `{vertex}`")]
    DanglingEndpoint { arrow: String, vertex: String },
    #[error("quiver has no vertices")]
    EmptyQuiver,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("quiver is disconnected")]
    Disconnected,

    #[error("arrow `{arrow}` expects a {expected:?} matrix, got {found:?}")]
    ShapeMismatch {
        arrow: String,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix for arrow `{0}` has a non-finite entry")]
    NonFinite(String),
    #[error("dimension data does not match the quiver: {0}")]
    DimsMismatch(String),
    #[error("representations live on different quivers")]
    QuiverMismatch,
    #[error("map at vertex `{vertex}` is not invertible")]
    Singular { vertex: String },
    #[error("not an idempotent endomorphism (residual {residual:.3e})")]
    NotIdempotent { residual: f64 },
    #[error("idempotent is trivial (0 or identity)")]
    TrivialIdempotent,
    #[error("the zero representation has no such property")]
    ZeroRepresentation,

    #[error("vertex `{0}` is not a sink; the sink reflection needs a sink")]
    NotSink(String),
    #[error("vertex `{0}` is not a source; the source reflection needs a source")]
    NotSource(String),
    #[error("representations do not come from the same reflection data")]
    ReflectionMismatch,

    #[error("quiver is not an oriented cycle")]
    NotOrientedCycle,
    #[error("quiver is an oriented cycle; this construction needs a non-cyclic orientation")]
    OrientedCycle,
    #[error("cycle length {0} is too short for this operation")]
    CycleTooShort(usize),
    #[error("vertex `{vertex}` has dimension {dim}; this criterion needs all dimensions in {{0,1}}")]
    DimTooLarge { vertex: String, dim: usize },
    #[error("vertex `{0}` is not zero-dimensional")]
    NonzeroVertex(String),
    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),

    #[error("lambda has a repeated value at indices {0} and {1}")]
    RepeatedLambda(usize, usize),
    #[error("weight sequence w vanishes at index {0}")]
    ZeroWeight(i64),
    #[error("cannot decide the tail of an explicit list without a declared continuation")]
    UndecidableTail,
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("unknown fixture kind `{0}`")]
    UnknownFixture(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("subspace `{source_space}` is not contained in `{target}` (residual {residual:.3e})")]
    InclusionViolated {
        source_space: String,
        target: String,
        residual: f64,
    },
    #[error("numerical routine failed: {0}")]
    Numerical(String),
}

impl Error {
    /// Malformed input, as opposed to a well-formed input violating a hypothesis.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
