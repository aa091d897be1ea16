use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground-set size {0} is outside 1..={max}", max = crate::setcore::MAX_N)]
    NOutOfRange(usize),
    #[error("element {element} is outside the ground set 1..={n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("set {0} appears more than once")]
    DuplicateSet(String),
    #[error("set elements must be strictly increasing, got {0:?}")]
    NotStrictlyIncreasing(Vec<usize>),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("family is not uniform: found member sizes {0} and {1}")]
    NotUniform(usize, usize),
    #[error("no disjoint pairs between levels {i} and {j} of [{n}]")]
    NoEdges { n: usize, i: usize, j: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("bad extra sets: {0}")]
    BadExtras(String),
    #[error("search method {method} does not handle {regime}")]
    UnsupportedRegime { method: String, regime: String },
    #[error("search witness failed the regime predicate")]
    WitnessRejected,
    #[error("malformed family file: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
