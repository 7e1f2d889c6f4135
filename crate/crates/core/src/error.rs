use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RingError {
    #[error("invalid torus variable name `{0}`")]
    BadVariable(String),
    #[error("declared unit `{0}` must be a non-monomial polynomial in the torus variables")]
    BadUnit(String),
    #[error("operands live in different rings")]
    Mismatch,
    #[error("element is not invertible: constant part `{0}` is not a unit of the coefficient ring")]
    NotInvertible(String),
    #[error("lattice monomial needs a t-shift: height {h} below {needed}")]
    NeedsTShift { h: i64, needed: i64 },
    #[error("exponent overflow")]
    Overflow,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError { pos, message: message.into() }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagramError {
    #[error("direction ({0}, {1}) is not primitive")]
    NotPrimitive(i64, i64),
    #[error("ray at ({0}, {1}): {2}")]
    BadFunction(i64, i64, String),
    #[error("two slabs share direction ({0}, {1})")]
    DuplicateSlab(i64, i64),
    #[error("wall at ({0}, {1}) lies on a slab")]
    WallOnSlab(i64, i64),
    #[error("reference direction ({0}, {1}) lies on a ray")]
    ReferenceOnRay(i64, i64),
    #[error("invalid grading: {0}")]
    Grading(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScatterError {
    #[error("pure t-power discrepancy at degree {degree}: normalization required")]
    NormalizationRequired { degree: u32 },
    #[error("discrepancy at degree {degree} in direction ({m0}, {m1}) is not a wall-crossing effect")]
    InternalInconsistency { degree: u32, m0: i64, m1: i64 },
    #[error("diagram is inconsistent at degree 0")]
    OrderZero,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

impl From<RingError> for ScatterError {
    fn from(e: RingError) -> Self {
        ScatterError::Diagram(DiagramError::Ring(e))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("chart error: {0}")]
    Chart(String),
    #[error("vertex `{vertex}` is not on edge `{edge}`")]
    NotOnEdge { vertex: String, edge: String },
    #[error("slab function on `{0}` has zero constant term")]
    DegenerateSlab(String),
    #[error("segment from `{0}` to `{1}` is not straight in any chart")]
    NotStraight(String, String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("substitution leaves a negative power of non-invertible `{0}`")]
    NegativeExponent(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("unsupported file version `{0}` (expected scatterforge-v1)")]
    Version(String),
    #[error("malformed file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in `{field}`: {source}")]
    Expr { field: String, source: ParseError },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalizeError {
    #[error("slab function must have constant term 1, found `{0}`")]
    ConstantTerm(String),
    #[error("coefficient of t^{0} has a unit denominator; its pure part is undefined")]
    Denominator(u32),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
