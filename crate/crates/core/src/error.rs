use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix dimension n = {0} (need n >= 2)")]
    InvalidDimension(usize),

    #[error("matrix is not in the space (max deviation {deviation:.3e})")]
    NotInSpace { deviation: f64 },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("direction undefined at the zero vector")]
    UndefinedDirection,

    #[error("norm is not smooth here (gap {gap:.3e} <= threshold {threshold:.3e})")]
    NonSmooth { gap: f64, threshold: f64 },

    #[error("norm {norm} is not admissible on {space}; trivial motions are not determined")]
    NotAdmissible { norm: String, space: String },

    #[error("norm {norm} is not supported on {space}")]
    UnsupportedNorm { norm: String, space: String },

    #[error("framework is not well-positioned at edges {0:?}")]
    NotWellPositioned(Vec<(usize, usize)>),

    #[error("edges {0:?} have more than one colour (on the cone)")]
    DegenerateEdges(Vec<(usize, usize)>),

    #[error("edge ({0}, {1}) joins coincident points")]
    CoincidentEndpoints(usize, usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("placement is empty")]
    EmptyPlacement,

    #[error("sparsity parameters out of range: k = {k}, l = {l} (need k >= 1 and 0 <= l < 3k)")]
    SparsityParams { k: usize, l: usize },

    #[error("size cap exceeded: {size} > {cap}")]
    SizeCapExceeded { size: usize, cap: usize },

    #[error("finite-difference step crosses a non-smooth point at edge ({0}, {1})")]
    OracleInvalid(usize, usize),

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },

    #[error("construction failed after {0} attempts")]
    RetryCapExceeded(usize),

    #[error("framework is not in a product-norm space")]
    NotProductSpace,

    #[error("construction check failed: {0}")]
    ConstructionCheck(String),
}
