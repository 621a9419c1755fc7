use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("sublattice is not contained in the lattice")]
    NotContained,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("lattice mismatch between torus elements")]
    LatticeMismatch,
    #[error("N must be odd and at least {min}, got {got}")]
    BadN { got: u64, min: u64 },
    #[error("index {0} is not a perfect square")]
    NonSquareIndex(u128),
    #[error("irrep dimension {0} exceeds cap {1}")]
    DimensionCap(u128, u128),
    #[error("character value has no {0}-th root in Q(zeta_{1})")]
    NoRoot(u64, u32),
    #[error("invalid normal curve: {0}")]
    InvalidCurve(String),
    #[error("state enumeration cap exceeded: {got} intersection points, cap {cap}")]
    CapExceeded { got: usize, cap: usize },
    #[error("({0},{1}) is not a primitive homology class")]
    NotPrimitive(i64, i64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid mapping class: {0}")]
    InvalidMappingClass(String),
    #[error("matrix is not in SL2: {0}")]
    NotSl2(String),
    #[error("group closure exceeded {0} elements")]
    ClosureBlowup(usize),
    #[error("orbit exceeded cap {0}")]
    OrbitCap(usize),
    #[error("moment map not constant along orbit")]
    MomentNotConstant,
    #[error("representation is not in the reduced cell")]
    NotReduced,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
