//! Error type shared by all modules of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point is not on the unit sphere (|v| = {norm})")]
    NotOnSphere { norm: f64 },

    #[error("vector is not tangent at its base point (<base, v> = {dot:e})")]
    NotTangent { dot: f64 },

    #[error("tangent vector outside injectivity radius (|v| = {norm} >= pi)")]
    OutsideInjectivityRadius { norm: f64 },

    #[error("log map undefined at cut locus (antipodal points)")]
    CutLocus,

    #[error("direction undefined: points coincide")]
    DirectionUndefined,

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("geodesic ball radius {radius} outside (0, pi/2)")]
    InvalidRadius { radius: f64 },

    #[error("radius {radius} exceeds the admissible bound arccos(5/6) = {bound:.7}")]
    InadmissibleRadius { radius: f64, bound: f64 },

    #[error("non-unit vector where a unit vector is required (|v| = {norm})")]
    NotUnit { norm: f64 },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("not a minimal network: {0}")]
    NotMinimalNetwork(String),

    #[error("not a competitor: {0}")]
    NotCompetitor(String),

    #[error("quadrature failed to converge after {doublings} doublings (last delta {last_delta:e})")]
    QuadratureDiverged { doublings: usize, last_delta: f64 },

    #[error("nonsmooth point: {0}")]
    NonsmoothPoint(String),

    #[error("iterate left the geodesic ball")]
    LeftGeodesicBall,

    #[error("solver failed: {0}")]
    SolverFailure(String),

    #[error("mixed plane/sphere geometry: {0}")]
    SpaceMismatch(String),

    #[error("competitor generation failed: {0}")]
    GenerationFailed(String),

    #[error("schema error: {0}")]
    Schema(String),
}
