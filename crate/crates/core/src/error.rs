use thiserror::Error;

use crate::subdivision::ValidationError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation word {word:?}: {reason}")]
    InvalidPermutation { word: Vec<usize>, reason: String },

    #[error("factorization entry {index} = {value} violates {bound}")]
    BadBounds { index: usize, value: usize, bound: String },

    #[error("index {index} out of range 1..={max} for {what}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("tournament contains the directed 3-cycle {0} -> {1} -> {2} -> {0}")]
    CyclicTournament(usize, usize, usize),

    #[error("system is not acyclic: colors ({i}, {j}) cycle through letters {cycle:?}")]
    NotAcyclic {
        i: usize,
        j: usize,
        cycle: (usize, usize, usize),
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("summand {summand} of a mixed cell is empty")]
    EmptySummand { summand: usize },

    #[error("letter {letter} outside 1..={d}")]
    LetterOutOfRange { letter: usize, d: usize },

    #[error("restriction to edge ({a}, {b}) is malformed: {reason}")]
    MalformedEdgeRestriction { a: usize, b: usize, reason: String },

    #[error("expected exactly one simplex cell for color {color}, found {found}")]
    SimplexCountMismatch { color: usize, found: usize },

    #[error("not a triangulation: {0}")]
    NotATriangulation(String),

    #[error("malformed routing: {0}")]
    MalformedRouting(String),

    #[error("malformed tiling: {0}")]
    MalformedTiling(String),

    #[error("no vertex-disjoint routing realizes the system")]
    NoRoutingFound,

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("(n, d) = ({n}, {d}) exceeds the configured enumeration limits")]
    InfeasibleScale { n: usize, d: usize },

    #[error("unsupported dimension d = {0}; only d = 3 is supported here")]
    UnsupportedDimension(usize),

    #[error("invalid subdivision: {0}")]
    Invalid(#[from] ValidationError),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable name of the variant, used in diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidPermutation { .. } => "InvalidPermutation",
            Error::BadBounds { .. } => "BadBounds",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::CyclicTournament(..) => "CyclicTournament",
            Error::NotAcyclic { .. } => "NotAcyclic",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::EmptySummand { .. } => "EmptySummand",
            Error::LetterOutOfRange { .. } => "LetterOutOfRange",
            Error::MalformedEdgeRestriction { .. } => "MalformedEdgeRestriction",
            Error::SimplexCountMismatch { .. } => "SimplexCountMismatch",
            Error::NotATriangulation(_) => "NotATriangulation",
            Error::MalformedRouting(_) => "MalformedRouting",
            Error::MalformedTiling(_) => "MalformedTiling",
            Error::NoRoutingFound => "NoRoutingFound",
            Error::InternalInvariantViolation(_) => "InternalInvariantViolation",
            Error::InfeasibleScale { .. } => "InfeasibleScale",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
            Error::Invalid(v) => v.kind(),
            Error::Parse(_) => "Parse",
        }
    }
}

pub(crate) fn check_index(what: &'static str, index: usize, max: usize) -> Result<()> {
    if index == 0 || index > max {
        Err(Error::IndexOutOfRange { what, index, max })
    } else {
        Ok(())
    }
}
