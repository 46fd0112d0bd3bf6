use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("self-loop at {0:?} is not allowed")]
    SelfLoop(String),
    #[error("edge {0:?}-{1:?} has multiplicity zero")]
    ZeroMultiplicity(String, String),
    #[error("vertex set over {found} vertices used with a graph on {expected} vertices")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("vertex sets overlap at {0:?}")]
    Overlap(String),
    #[error("graphs are not on the same vertex set")]
    VertexSetMismatch,
    #[error("orientation does not orient the given graph")]
    OrientationMismatch,
    #[error("source and sink coincide at {0:?}")]
    SameEndpoints(String),
    #[error("vertex {0:?} has odd degree")]
    OddDegree(String),
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("{what} is {size}, above the limit {limit}; {hint}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
        hint: &'static str,
    },
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("the given set does not violate the cut condition")]
    NotAViolation,
    #[error("no eulerian extension exists; violating set {certificate:?}")]
    ExtensionInfeasible { certificate: Vec<String> },
    #[error("requirement violated: {0}")]
    RequirementViolated(String),
    #[error("existence guarantee failed: {0}")]
    GuaranteeFailed(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("malformed document: {0}")]
    Format(String),
    #[error("fixture {path}: {message}")]
    Fixture { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
