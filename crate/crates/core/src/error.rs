use thiserror::Error;

/// Failure modes of geometry construction, quadrature and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("arcs {first} and {second} are not disjoint")]
    Disjointness { first: usize, second: usize },

    #[error("degenerate endpoint polynomial: {0}")]
    DegenerateR(String),

    #[error("point {point} lies within {cutoff:e} of the curve; use the boundary-value routines")]
    NearBoundary { point: String, cutoff: f64 },

    #[error("square root of R vanishes at endpoint node {node}; use an endpoint-weighted rule")]
    EndpointSingularity { node: usize },

    #[error("sample count {got} does not match {expected} quadrature nodes")]
    Alignment { expected: usize, got: usize },

    #[error("pole {0} is not a quadrature node; interpolation required")]
    InterpolationRequired(String),

    #[error("boundary limit did not converge at node {node}: spread {spread:e}")]
    BoundaryLimit { node: usize, spread: f64 },

    #[error("range error: {0}")]
    Range(String),

    #[error("not implemented: {0}")]
    NotImplemented(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite sample at node {node}")]
    NonFinite { node: usize },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
