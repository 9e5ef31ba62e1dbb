use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Arguments outside the construction's domain (bad system/index/degree).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two stored lines coincide, so the arrangement has no well-defined
    /// vertex set.
    #[error("degenerate arrangement: {0}")]
    DegenerateArrangement(String),

    /// An operation that requires a simple arrangement was handed one with a
    /// vertex of multiplicity > 2.
    #[error("arrangement is not simple: {0}")]
    NotSimple(String),

    /// Newton polishing failed to reach the gradient tolerance.
    #[error("no convergence after {iters} iterations at ({x:.6e}, {y:.6e}), |grad| = {grad_norm:.3e}")]
    NoConvergence {
        iters: usize,
        x: f64,
        y: f64,
        grad_norm: f64,
    },

    /// The Hessian at a polished point is numerically singular.
    #[error("degenerate critical point at ({x:.6e}, {y:.6e}): |det H| = {det:.3e} below {threshold:.3e}")]
    DegeneratePoint {
        x: f64,
        y: f64,
        det: f64,
        threshold: f64,
    },

    /// A polished critical value does not sit on any of the expected levels.
    #[error("critical spectrum violation: {0}")]
    SpectrumViolation(String),

    /// A combinatorial census disagreed with its closed form.
    #[error("count mismatch for {what}: expected {expected}, found {found}")]
    CountMismatch {
        what: String,
        expected: usize,
        found: usize,
    },

    /// A node failed gradient / Hessian / signature certification.
    #[error("node certification failure: {0}")]
    Certification(String),

    #[error("invalid render configuration: {0}")]
    RenderConfig(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
