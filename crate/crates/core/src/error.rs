use thiserror::Error;

/// Errors raised by the geometric kernels, the finite-space machinery and I/O.
///
/// Scalars are carried as `f64` regardless of the working precision so the
/// error type does not depend on the scalar parameter.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point is off its quadric (residual {residual:e})")]
    InvalidPoint { residual: f64 },

    #[error("parameter {value} outside the admissible range [{lo}, {hi}]")]
    Range { value: f64, lo: f64, hi: f64 },

    #[error("causality: {0}")]
    Causality(String),

    #[error("sides ({a}, {b}, {c}) violate the reverse triangle inequality c >= a + b")]
    InvalidTimelikeTriangle { a: f64, b: f64, c: f64 },

    #[error("time separation {value} reaches the timelike diameter {diameter}")]
    SizeBound { value: f64, diameter: f64 },

    #[error("comparison angle undefined: adjacent side at the vertex is zero")]
    DegenerateAngle,

    #[error("geodesic through two points is degenerate: {0}")]
    DegenerateGeodesic(String),

    #[error("distances ({d12}, {d13}, {d23}) violate the triangle inequality")]
    InvalidMetricTriangle { d12: f64, d13: f64, d23: f64 },

    #[error("comparison configuration cannot be realized: {0}")]
    Infeasible(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid base metric space: {0}")]
    InvalidBase(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
