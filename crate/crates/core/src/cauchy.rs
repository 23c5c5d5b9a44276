//! Cauchy transform, the singular operator `S`, one-sided boundary values and
//! Plemelj-Sokhotski residuals.

use rayon::prelude::*;

use crate::density::{Host, SampledDensity};
use crate::error::{Error, Result};
use crate::near::{CurveIntegrator, Measure};
use crate::quadrature::pv_all_nodes;
use crate::scalar::{ci, cone, Cx, Real};

/// Side of the curve: `Plus` is the left of the direction of travel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Default tolerance for boundary-value extrapolation.
pub const BOUNDARY_TOL: f64 = 1e-6;

/// Reusable evaluator of `Cf(z) = (1/2 pi i) int f(t) dt / (t - z)`.
///
/// Refined quadrature rules built for points near the curve are cached, so repeated
/// boundary-value queries on one density are cheap.
pub struct CauchyEvaluator<'a, 'h, T> {
    inner: CurveIntegrator<'a, 'h, T>,
}

impl<'a, 'h, T: Real> CauchyEvaluator<'a, 'h, T> {
    pub fn new(density: &'a SampledDensity<'h, T>) -> Self {
        Self { inner: CurveIntegrator::new(density) }
    }

    pub fn density(&self) -> &SampledDensity<'h, T> {
        self.inner.density()
    }

    /// `Cf(z)`; refused within the host's cutoff distance.
    pub fn eval(&self, z: Cx<T>) -> Result<Cx<T>> {
        let host = self.density().host();
        if host.distance(z) <= host.cutoff() {
            return Err(Error::NearBoundary { point: format!("{z}"), cutoff: host.cutoff().to_f64_lossy() });
        }
        Ok(self.eval_unchecked(z))
    }

    fn eval_unchecked(&self, z: Cx<T>) -> Cx<T> {
        let v = self.inner.integrate(z, Measure::Dt, &|d| cone::<T>() / d);
        v / (ci::<T>() * T::TAU())
    }

    /// Nontangential limit `Cf+` or `Cf-` at a node.
    ///
    /// `Cf` is sampled at `x +- h n+` for `h = h0, h0/2, h0/4` with `h0` a hundredth
    /// of the local panel length, then Richardson-extrapolated twice. Fails when the
    /// last two extrapolants differ by more than `10 * tol`.
    pub fn boundary_value(&self, side: Side, node: usize, tol: T) -> Result<Cx<T>> {
        let host = self.density().host();
        let x = host.nodes()[node];
        let n = match side {
            Side::Plus => host.normal_plus(node),
            Side::Minus => -host.normal_plus(node),
        };
        let h0 = T::lit(1e-2) * host.panel_length(node);
        let v = |h: T| self.eval_unchecked(x + n * h);
        let (v1, v2, v4) = (v(h0), v(h0 * T::lit(0.5)), v(h0 * T::lit(0.25)));
        let r1a = v2 * T::lit(2.0) - v1;
        let r1b = v4 * T::lit(2.0) - v2;
        let r2 = (r1b * T::lit(4.0) - r1a) / T::lit(3.0);
        let spread = (r2 - r1b).norm();
        if !(spread <= T::lit(10.0) * tol) {
            return Err(Error::BoundaryLimit { node, spread: spread.to_f64_lossy() });
        }
        Ok(r2)
    }
}

/// `(1/2 pi i) int f(t) dt / (t - z)` for `z` off the curve.
pub fn cauchy_transform<T: Real>(f: &SampledDensity<'_, T>, z: Cx<T>) -> Result<Cx<T>> {
    CauchyEvaluator::new(f).eval(z)
}

/// `Sf(x) = (1/pi i) PV int f(t) dt / (t - x)` at every node.
///
/// Arc endpoints are never nodes, so the output covers interior points only.
pub fn singular_s<'h, T: Real>(f: &SampledDensity<'h, T>) -> Result<SampledDensity<'h, T>> {
    let scale = cone::<T>() / (ci::<T>() * T::PI());
    let values = pv_all_nodes(f).into_iter().map(|v| v * scale).collect();
    SampledDensity::new(f.host(), values)
}

/// `Cf+` or `Cf-` at a node with the default tolerance.
pub fn boundary_value<T: Real>(f: &SampledDensity<'_, T>, side: Side, node: usize) -> Result<Cx<T>> {
    CauchyEvaluator::new(f).boundary_value(side, node, T::lit(BOUNDARY_TOL))
}

/// Residuals of the jump relations at the given nodes:
/// `(max |Cf+ - Cf- - f|, max |Cf+ + Cf- - Sf|)`.
pub fn plemelj_residuals_at<T: Real>(f: &SampledDensity<'_, T>, nodes: &[usize], tol: T) -> Result<(T, T)> {
    let eval = CauchyEvaluator::new(f);
    let s = singular_s(f)?;
    let per_node: Vec<Result<(T, T)>> = nodes
        .par_iter()
        .map(|&k| {
            let plus = eval.boundary_value(Side::Plus, k, tol)?;
            let minus = eval.boundary_value(Side::Minus, k, tol)?;
            Ok(((plus - minus - f.values()[k]).norm(), (plus + minus - s.values()[k]).norm()))
        })
        .collect();
    let mut out = (T::zero(), T::zero());
    for r in per_node {
        let (a, b) = r?;
        out = (out.0.max(a), out.1.max(b));
    }
    Ok(out)
}

/// Residuals of the jump relations over the host's checkable nodes: every node of a
/// closed contour; on arcs, nodes at least 5% of the arc length from either endpoint.
pub fn plemelj_residuals<T: Real>(f: &SampledDensity<'_, T>) -> Result<(T, T)> {
    let nodes: Vec<usize> = match f.host() {
        Host::Closed(c) => (0..c.len()).collect(),
        Host::Arcs(s) => (0..s.len())
            .filter(|&g| {
                let (j, k) = s.locate(g);
                let arc = &s.arcs()[j];
                let sk = arc.arclength()[k];
                let margin = T::lit(0.05) * arc.length();
                sk >= margin && arc.length() - sk >= margin
            })
            .collect(),
    };
    plemelj_residuals_at(f, &nodes, T::lit(BOUNDARY_TOL))
}
