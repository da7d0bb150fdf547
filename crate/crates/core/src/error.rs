//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by complex construction, spectral analysis, filtering and design.
#[derive(Debug, Error)]
pub enum ScError {
    /// A simplex was given with a repeated vertex id.
    #[error("simplex {0:?} contains a duplicate vertex")]
    DuplicateVertex(Vec<usize>),

    /// A simplex with no vertices was given.
    #[error("empty simplex")]
    EmptySimplex,

    /// No simplices were given to a constructor.
    #[error("empty input: a complex needs at least one simplex")]
    EmptyInput,

    /// An input simplex has more vertices than the declared order allows.
    #[error("simplex {simplex:?} has dimension {dim}, exceeding declared order {order}")]
    OrderExceeded {
        simplex: Vec<usize>,
        dim: usize,
        order: usize,
    },

    /// The declared top level came out empty.
    #[error("no {order}-simplex present: declared order {order} is not realized")]
    NoTopSimplex { order: usize },

    /// A vertex belongs to no edge in a complex of order >= 1.
    #[error("vertex {0} is isolated (not contained in any edge)")]
    IsolatedVertex(usize),

    /// An edge list contained a self-loop.
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    /// A declared complex order below the minimum an operation supports.
    #[error("order {got} invalid: must be at least {min}")]
    InvalidOrder { got: usize, min: usize },

    /// A level index outside 0..=K (or outside the range an operation allows).
    #[error("level {k} out of range for operation `{op}` on a complex of order {order}")]
    LevelOutOfRange {
        op: &'static str,
        k: usize,
        order: usize,
    },

    /// A signal or coefficient vector has the wrong length for its level.
    #[error("{what}: expected length {expected}, got {got}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        got: usize,
    },

    /// A signal, filter, or basis is bound to a different level than required.
    #[error("{what}: expected level {expected}, got {got}")]
    LevelMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// A per-level permutation is not a bijection on 0..N_k.
    #[error("malformed permutation at level {0}")]
    MalformedPermutation(usize),

    /// Vertex signals carry no orientation, so the level-0 sign vector must be all ones.
    #[error("orientation flip requested at level 0; vertex signals have no orientation")]
    VertexOrientationFlip,

    /// Filter coefficients whose shape is illegal at their level.
    #[error("invalid filter at level {level}: {reason}")]
    InvalidFilter { level: usize, reason: String },

    /// A matrix expected to be symmetric is not.
    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    /// The eigensolver did not converge within its iteration budget.
    #[error("eigendecomposition failed to converge")]
    ConvergenceFailure,

    /// An internal numerical consistency check failed.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A filter denominator is (near-)singular on the spectrum.
    #[error("singular filter: frequency response reaches {min_response:.3e} on the spectrum")]
    SingularFilter { min_response: f64 },

    /// A least-squares problem was given no samples.
    #[error("empty design target: at least one sample is required")]
    EmptyTarget,

    /// The reference signal of an NMSE computation is zero.
    #[error("nmse reference signal has zero norm")]
    ZeroReference,

    /// A file could not be parsed; carries the 1-based line number where it failed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Malformed JSON input.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, ScError>;
