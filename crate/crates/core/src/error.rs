use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("multiplier symbol is not finite at lattice frequency {k:?}")]
    NonFiniteSymbol { k: Vec<i64> },

    #[error("{what} = {value} is outside the accepted range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("half-space support violated: leakage {leakage:.3e} beyond y1 = {radius}")]
    SupportViolation { leakage: f64, radius: f64 },

    #[error("support radius {radius} leaves less than the margin {margin} before y1 = pi")]
    SupportEscape { radius: f64, margin: f64 },

    #[error("exponents not admissible: {0}")]
    NotAdmissible(String),

    #[error("invalid commutator exponents: {0}")]
    InvalidExponents(String),

    #[error("covering gap: collar point {location:?} has partition denominator {denominator:.3e}")]
    CoveringGap {
        location: Vec<f64>,
        denominator: f64,
    },

    #[error("point {point:?} lies outside the chart of radius {radius}")]
    OutOfChart { point: Vec<f64>, radius: f64 },

    #[error("cutoff is not compactly supported inside the box (max boundary value {0:.3e})")]
    CutoffNotCompact(f64),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
