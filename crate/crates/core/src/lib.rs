//! Singular integral equations with Cauchy kernel on closed contours and arc systems,
//! and recovery of measures from their logarithmic potentials.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the `*F64` aliases
//! below fix the scalar to `f64`.

// `!(x > 0)` style guards are kept so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arc_solver;
pub mod cauchy;
pub mod chebyshev;
pub mod closed_solver;
pub mod density;
pub mod error;
mod fourier;
pub mod geometry;
pub mod io;
mod near;
pub mod poly;
pub mod potential;
pub mod quadrature;
pub mod scalar;

pub use error::{Error, Result};
pub use geometry::spec::{ArcSpec, CurveSpec, Discretization, GeometryDoc, GeometrySpec};
pub use geometry::{Arc, ArcKind, ArcSystem, ClosedContour, ClosedKind};
pub use poly::ComplexPolynomial;
pub use scalar::{Cx, Real};

pub type ComplexF64 = Cx<f64>;
pub type ClosedContourF64 = ClosedContour<f64>;
pub type ArcF64 = Arc<f64>;
pub type ArcSystemF64 = ArcSystem<f64>;
pub type PolynomialF64 = ComplexPolynomial<f64>;
pub type DensityF64<'h> = density::SampledDensity<'h, f64>;
pub type SolveReportF64<'h> = arc_solver::SolveReport<'h, f64>;
pub type PotentialGridF64 = potential::PotentialGrid<f64>;
pub type MeasureEstimateF64<'h> = potential::MeasureEstimate<'h, f64>;
