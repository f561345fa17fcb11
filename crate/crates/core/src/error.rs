use thiserror::Error;

/// Errors raised by bundle, connection and integration routines.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("quaternion norm {norm} is too far from 1 to renormalize")]
    NotUnit { norm: f64 },

    #[error("cannot normalize a zero quaternion")]
    ZeroQuaternion,

    #[error("points are not on the same fiber (base distance {distance:e})")]
    NotSameFiber { distance: f64 },

    #[error("local section is undefined at the requested base point")]
    SectionUndefined,

    #[error("pair is outside the domain of the connection")]
    OutOfDomain,

    #[error("invalid C function: {0}")]
    InvalidC(String),

    #[error("probe failed: {0}")]
    ProbeFailed(String),

    #[error("base points are antipodal; no unique minimizing geodesic")]
    AntipodalPoints,

    #[error("horizontal velocity system is singular")]
    SolveFailed,

    #[error("value {value} is outside the admissible range ({lo}, {hi})")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("no sample landed in the intersection of both domains")]
    EmptyDomainIntersection,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector is not tangent to the sphere (inner product {inner:e})")]
    NotTangent { inner: f64 },

    #[error("unknown axiom id `{0}`")]
    UnknownAxiom(String),
}

pub type Result<T> = std::result::Result<T, Error>;
