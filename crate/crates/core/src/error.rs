use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NumericOverflow(&'static str),

    #[error("internal inconsistency in {what}: {first} vs {second}")]
    InternalInconsistency {
        what: &'static str,
        first: f64,
        second: f64,
    },

    #[error("parameter {name} = {value} outside {domain}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{0}")]
    OutOfRange(String),

    #[error("mode index {index} exceeds truncation order {order}")]
    Index { index: i64, order: usize },

    #[error("h has a near-zero on the circle of radius {rho} (min |h| = {min_modulus:e})")]
    ZeroOnCircle { rho: f64, min_modulus: f64 },

    #[error("winding integral {value} is not within tolerance of an integer")]
    NonInteger { value: f64 },

    #[error("quadrature did not converge: last two refinements {coarse} and {fine}")]
    Nonconvergence { coarse: f64, fine: f64 },

    #[error("operator singular at rho = {rho}, lambda = {lambda} (rho^2 + lambda <= 0)")]
    SingularPoint { rho: f64, lambda: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("outside the admissible class: {0}")]
    OutOfClass(String),

    #[error("degenerate series: {0}")]
    Degenerate(String),

    #[error("invalid series document: {0}")]
    InvalidSeries(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
