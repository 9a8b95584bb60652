use thiserror::Error;

/// Errors raised across the crate. Variant names double as the stable
/// error codes that appear in reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value: {0}")]
    NonFiniteValue(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisRange { axis: usize, dim: usize },
    #[error("unsupported torus dimension {0} (must be 1..=3)")]
    BadDimension(usize),
    #[error("exp tail check failed: sup error {err:e} exceeds {tol:e}")]
    TailTolExceeded { err: f64, tol: f64 },
    #[error("unit vanishes (|u| = {0:e}) at a sample point")]
    UnitVanishes(f64),
    #[error("winding along axis {axis} is not an integer: {value}")]
    WindingAmbiguous { axis: usize, value: f64 },
    #[error("recorded winding {recorded:?} disagrees with recomputed {recomputed:?}")]
    WindingMismatch { recorded: Vec<i64>, recomputed: Vec<i64> },
    #[error("shift by {0} is not even")]
    OddShift(i64),
    #[error("form is not closed (residual {0:e})")]
    NotClosed(f64),
    #[error("family entry p={p} has a form of degree {degree} violating the {truncation} truncation")]
    TruncationViolated { p: i64, degree: usize, truncation: &'static str },
    #[error("evaluation needs dim X = d - 1 (dim {dim}, d = {d})")]
    DimensionMismatchForEvaluation { dim: usize, d: usize },
    #[error("expected a vanishing form, found nonzero components")]
    VanishingViolated,
    #[error("{0}")]
    Precondition(String),
    #[error("symbol degree {degree} exceeds guard band {guard}")]
    BandwidthExceedsGuard { degree: i64, guard: usize },
    #[error("operators live on different windows")]
    WindowMismatch,
    #[error("invalid window: N = {n}, guard = {guard}")]
    BadWindow { n: usize, guard: usize },
    #[error("Toeplitz symbol tail {tail:e} above the guard band {guard}")]
    ToeplitzBandwidth { tail: f64, guard: usize },
    #[error("matrix is singular to machine precision")]
    SingularDeterminant,
    #[error("Toeplitz section ill-conditioned (smallest singular value {0:e})")]
    ToeplitzIllConditioned(f64),
    #[error("symbol has nonzero winding {0}")]
    WindingNotZero(i64),
    #[error("rank decision ambiguous: singular value ratio {0:e} within a decade of the threshold")]
    RankAmbiguous(f64),
    #[error("Euler-Maclaurin remainder {0:e} above 1e-9")]
    OracleNotConverged(f64),
    #[error("unsupported dimension d = {0}")]
    UnsupportedDimension(usize),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("word of length {len} does not fit degree {n}")]
    BadWord { len: usize, n: usize },
    #[error("every comparison denominator vanishes")]
    DegenerateComparison,
    #[error("Cech cocycle residual {0:e} too large")]
    NotACocycle(f64),
    #[error("classes live on different covers")]
    CoverMismatch,
    #[error("invalid cover: {0}")]
    BadCover(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("bad scenario parameters: {0}")]
    BadParams(String),
    #[error("a sweep needs at least two windows")]
    NeedTwoWindows,
}

pub type Result<T> = std::result::Result<T, Error>;
