use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero vector has no primitive generator")]
    ZeroVector,

    #[error("vector is not primitive")]
    NonPrimitiveVector,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("ray {0} is the zero vector")]
    ZeroRay(usize),

    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(usize),

    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),

    #[error("ray {0} belongs to no cone")]
    UnusedRay(usize),

    #[error("ray index {index} out of range ({count} rays)")]
    RayIndexOutOfRange { index: usize, count: usize },

    #[error("cone {0:?} contains a line")]
    NonStrictCone(Vec<usize>),

    #[error("cone {0:?} is not simplicial")]
    NonSimplicialCone(Vec<usize>),

    #[error("cones {0:?} and {1:?} do not meet along a common face")]
    BadIntersection(Vec<usize>, Vec<usize>),

    #[error("maximal cone {0:?} has dimension below the ambient dimension")]
    LowDimensionalCone(Vec<usize>),

    #[error("fan is not smooth")]
    NotSmooth,

    #[error("fan is not complete")]
    NotComplete,

    #[error("vector lies outside the support of the fan")]
    OutsideSupport,

    #[error("polytope is not full-dimensional")]
    NotFullDimensional,

    #[error("polytope is not absolutely simple")]
    NotAbsolutelySimple,

    #[error("divisor is not basepoint-free")]
    NotBasepointFree,

    #[error("support function of the polytope is not linear on cone {0:?}")]
    NotLinearOnCone(Vec<usize>),

    #[error("minkowski weight is not balanced")]
    Unbalanced,

    #[error("cannot intersect a weight of codimension {0} any further")]
    CodimensionExhausted(usize),

    #[error("duplicate ray {0} in product")]
    DuplicateRayInProduct(usize),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial is not univariate")]
    NotUnivariate,

    #[error("support of the section is not contained in the polytope of the divisor")]
    SupportOutsidePolytope,

    #[error("point has a zero coordinate")]
    ZeroCoordinate,

    #[error("point is not a common zero of the system")]
    NotARoot,

    #[error("grid size {0} is below the minimum of 8")]
    GridTooSmall(usize),

    #[error("non-finite integrand persists after jittering the grid")]
    NonFiniteIntegrand,

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("no admissible bound for L: neither the polytope of P_{0} nor the total polytope is absolutely simple")]
    NoLBound(usize),

    #[error("could not factor {0}")]
    Factorization(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
