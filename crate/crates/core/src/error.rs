use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // field / linear algebra
    #[error("{0} is not a prime")]
    NonPrime(u32),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field of order {p}^{m} exceeds the supported maximum 2^16")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("division by zero")]
    DivideByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation requires an extension field, got a prime field")]
    PrimeFieldInput,
    #[error("malformed field string {0:?}")]
    BadFieldString(String),

    // network model
    #[error("network contains a directed cycle")]
    Cycle,
    #[error("source {0:?} has an incoming edge")]
    SourceHasInEdge(String),
    #[error("sink {0:?} has an outgoing edge")]
    SinkHasOutEdge(String),
    #[error("node {0:?} has no directed path to the sink")]
    UnreachableSink(String),
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("target function is constant (all coefficients are zero)")]
    AllZeroFunction,
    #[error("network invalid after removing zero-coefficient sources: {0}")]
    ValidationFailure(String),

    // cuts
    #[error("target node {0:?} is contained in the origin set")]
    TargetInU(String),
    #[error("target edge set is empty")]
    EmptyTarget,
    #[error("no feasible cut set exists")]
    NoFeasibleCut,

    // bounds
    #[error("exhaustive enumeration over {size} {what} exceeds the limit of {limit}")]
    TooLarge { what: &'static str, size: u64, limit: u64 },

    // construction
    #[error("rate {rate} exceeds the minimum cut capacity {c_min}")]
    RateExceedsMinCut { rate: usize, c_min: usize },
    #[error("no decodable multicast code found over GF({q}) after {attempts} attempts")]
    FieldTooSmallForMulticast { q: u32, attempts: usize },
    #[error("reversed code violates the stacked-identity decoding relation")]
    ReversalInconsistent,
    #[error("no admissible key-mixing vector exists over GF({q}) at column {column}")]
    FieldTooSmall { q: u32, column: usize },
    #[error("key-mixing matrix is singular")]
    SingularB,
    #[error("infeasible rate: {0}")]
    RateInfeasible(String),
    #[error("construction failed for every field up to order 2^16")]
    ConstructionFailed,

    // verification / code files
    #[error("code shape does not match the network: {0}")]
    ShapeMismatch(String),
    #[error("stored global vector for edge {0:?} disagrees with the recomputed one")]
    GlobalVectorMismatch(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonPrime(_) => "NON_PRIME",
            Error::DegreeZero => "DEGREE_ZERO",
            Error::FieldTooLarge { .. } => "FIELD_TOO_LARGE",
            Error::DivideByZero => "DIVIDE_BY_ZERO",
            Error::FieldMismatch => "FIELD_MISMATCH",
            Error::Singular => "SINGULAR",
            Error::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            Error::PrimeFieldInput => "PRIME_FIELD_INPUT",
            Error::BadFieldString(_) => "BAD_FIELD_STRING",
            Error::Cycle => "CYCLE",
            Error::SourceHasInEdge(_) => "SOURCE_HAS_IN_EDGE",
            Error::SinkHasOutEdge(_) => "SINK_HAS_OUT_EDGE",
            Error::UnreachableSink(_) => "UNREACHABLE_SINK",
            Error::MalformedInput(_) => "MALFORMED_INPUT",
            Error::UnknownEdge(_) => "UNKNOWN_EDGE",
            Error::UnknownNode(_) => "UNKNOWN_NODE",
            Error::AllZeroFunction => "ALL_ZERO_FUNCTION",
            Error::ValidationFailure(_) => "VALIDATION_FAILURE",
            Error::TargetInU(_) => "TARGET_IN_U",
            Error::EmptyTarget => "EMPTY_TARGET",
            Error::NoFeasibleCut => "NO_FEASIBLE_CUT",
            Error::TooLarge { .. } => "TOO_LARGE",
            Error::RateExceedsMinCut { .. } => "RATE_EXCEEDS_MIN_CUT",
            Error::FieldTooSmallForMulticast { .. } => "FIELD_TOO_SMALL_FOR_MULTICAST",
            Error::ReversalInconsistent => "REVERSAL_INCONSISTENT",
            Error::FieldTooSmall { .. } => "FIELD_TOO_SMALL",
            Error::SingularB => "SINGULAR_B",
            Error::RateInfeasible(_) => "RATE_INFEASIBLE",
            Error::ConstructionFailed => "CONSTRUCTION_FAILED",
            Error::ShapeMismatch(_) => "SHAPE_MISMATCH",
            Error::GlobalVectorMismatch(_) => "GLOBAL_VECTOR_MISMATCH",
            Error::Io(_) => "IO",
        }
    }
}
