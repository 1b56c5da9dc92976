use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad classification of an [`Error`], used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input: a fan violating an axiom, an unparsable class, ...
    Invalid,
    /// Well-formed input that does not satisfy a mathematical precondition.
    Precondition,
    /// An internal consistency check failed.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // Linear algebra.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("basis vectors are linearly dependent")]
    Singular,

    // Fan axioms.
    #[error("lattice rank must be positive")]
    ZeroRank,
    #[error("ray {ray} has {len} coordinates, lattice rank is {rank}")]
    RayLength { ray: usize, len: usize, rank: usize },
    #[error("ray {ray} is the zero vector")]
    ZeroRay { ray: usize },
    #[error("rays {first} and {second} lie on the same ray")]
    DuplicateRay { first: usize, second: usize },
    #[error("cone {cone:?} is empty")]
    EmptyCone { cone: Vec<usize> },
    #[error("cone {cone:?} refers to unknown ray {ray}")]
    RayOutOfRange { cone: Vec<usize>, ray: usize },
    #[error("cone {cone:?} lists ray {ray} twice")]
    RepeatedRay { cone: Vec<usize>, ray: usize },
    #[error("ray {ray} does not belong to any cone")]
    UnusedRay { ray: usize },
    #[error("cone {cone:?} is not strongly convex")]
    NotPointed { cone: Vec<usize> },
    #[error("ray {ray} is not an extremal ray of cone {cone:?}")]
    NotExtremal { cone: Vec<usize>, ray: usize },
    #[error("cones {first:?} and {second:?} do not meet in a common face")]
    BadIntersection { first: Vec<usize>, second: Vec<usize> },

    // Preconditions.
    #[error("cone {cone:?} is not a cone of the fan")]
    ConeNotFound { cone: Vec<usize> },
    #[error("cone {cone:?} is a ray; star subdivision needs a cone of dimension at least 2")]
    ConeIsRay { cone: Vec<usize> },
    #[error("the fan is not complete")]
    NotComplete,
    #[error("the fan is not simplicial: cone {cone:?} has more rays than its dimension")]
    NotSimplicial { cone: Vec<usize> },
    #[error("class must be homogeneous of degree {expected}, found degree {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("operation needs lattice rank {expected}, fan has rank {found}")]
    WrongRank { expected: usize, found: usize },
    #[error("monomial {monomial} is not square-free")]
    NotSquareFree { monomial: String },
    #[error("class has {found} variables, the fan has {expected} rays")]
    VariableCount { expected: usize, found: usize },
    #[error("{ridge:?} is not a ridge shared by exactly two maximal cones ({count} found)")]
    NotARidge { ridge: Vec<usize>, count: usize },
    #[error("dual vector {dual:?} pairs to zero with the interior vector of cone {cone:?}")]
    DegenerateDual { cone: Vec<usize>, dual: Vec<String> },
    #[error("too many rays ({rays}) for exhaustive subset enumeration")]
    TooManyRays { rays: usize },
    #[error("{0} does not fit in a 64-bit integer")]
    Overflow(String),

    // Input formats.
    #[error("cannot parse class: {0}")]
    ClassParse(String),
    #[error("cannot parse fan file: {0}")]
    FanParse(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            ZeroRank
            | RayLength { .. }
            | ZeroRay { .. }
            | DuplicateRay { .. }
            | EmptyCone { .. }
            | RayOutOfRange { .. }
            | RepeatedRay { .. }
            | UnusedRay { .. }
            | NotPointed { .. }
            | NotExtremal { .. }
            | BadIntersection { .. }
            | ClassParse(_)
            | FanParse(_) => ErrorKind::Invalid,
            Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Precondition,
        }
    }
}
