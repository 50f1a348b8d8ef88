use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
///
/// Variants are grouped by how a caller should react: `Parse` means the
/// input text was malformed, `Domain`/`Infeasible` mean the request was
/// well-formed but mathematically invalid, and the remaining variants
/// report failures detected while computing.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed regularity-function expression or data file.
    #[error("parse error: {0}")]
    Parse(String),

    /// Argument outside the domain of the operation (t < 1, p <= 0, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters violate a feasibility constraint of the construction.
    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    /// Two grid-bound objects refer to different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Band index outside the range of a dyadic decomposition.
    #[error("band index {got} out of range (0..={max})")]
    BandIndex { got: usize, max: usize },

    /// A quantity that must be positive evaluated to zero, so a ratio
    /// against it is meaningless.
    #[error("degenerate norm: {0}")]
    DegenerateNorm(String),

    /// Index estimation could not produce a finite answer.
    #[error("index estimation failed: {0}")]
    Estimation(String),

    /// Interpolation-method parameter outside its admissible range.
    #[error("inadmissible parameter: {0}")]
    Inadmissible(String),

    /// Right-hand side not orthogonal to the cokernel of the operator.
    #[error("unsolvable: compatibility residual {residual:.3e} exceeds threshold {threshold:.3e}")]
    Unsolvable { residual: f64, threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
