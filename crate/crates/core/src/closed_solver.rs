//! `Sf = g` on a closed contour: `S` is an involution, so `f = Sg`.

use crate::cauchy::singular_s;
use crate::density::{Host, SampledDensity};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default bound on `max |Sf - g|` above which a solve is flagged.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct ClosedSolution<'h, T> {
    pub solution: SampledDensity<'h, T>,
    /// `max |Sf - g|` over nodes.
    pub residual: T,
    /// Set when the residual exceeds the tolerance; the discretisation is too coarse
    /// for the data.
    pub warning: Option<String>,
}

fn require_closed<T: Real>(g: &SampledDensity<'_, T>) -> Result<()> {
    match g.host() {
        Host::Closed(_) => Ok(()),
        Host::Arcs(_) => Err(Error::Invalid("closed-contour solver needs a closed host".into())),
    }
}

pub fn solve_closed<'h, T: Real>(g: &SampledDensity<'h, T>) -> Result<ClosedSolution<'h, T>> {
    solve_closed_with(g, T::lit(RESIDUAL_TOL))
}

pub fn solve_closed_with<'h, T: Real>(g: &SampledDensity<'h, T>, tol: T) -> Result<ClosedSolution<'h, T>> {
    require_closed(g)?;
    let solution = singular_s(g)?;
    let residual = singular_s(&solution)?.max_diff(g);
    let warning = (residual > tol).then(|| {
        format!("residual {residual:e} exceeds {tol:e}; the discretisation looks ill-conditioned for this data")
    });
    Ok(ClosedSolution { solution, residual, warning })
}

/// `max |S(Sg) - g|` over nodes.
pub fn involution_residual<T: Real>(g: &SampledDensity<'_, T>) -> Result<T> {
    require_closed(g)?;
    Ok(singular_s(&singular_s(g)?)?.max_diff(g))
}
