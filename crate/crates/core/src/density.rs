//! Complex samples attached to the nodes of a contour or arc system.

use crate::chebyshev::clenshaw;
use crate::error::{Error, Result};
use crate::fourier::TrigInterpolant;
use crate::geometry::{ArcSystem, ClosedContour};
use crate::scalar::{czero, is_finite, Cx, Real};

/// Curve a density lives on.
#[derive(Debug, Clone, Copy)]
pub enum Host<'h, T> {
    Closed(&'h ClosedContour<T>),
    Arcs(&'h ArcSystem<T>),
}

impl<'h, T> From<&'h ClosedContour<T>> for Host<'h, T> {
    fn from(c: &'h ClosedContour<T>) -> Self {
        Host::Closed(c)
    }
}

impl<'h, T> From<&'h ArcSystem<T>> for Host<'h, T> {
    fn from(s: &'h ArcSystem<T>) -> Self {
        Host::Arcs(s)
    }
}

impl<'h, T: Real> Host<'h, T> {
    pub fn len(&self) -> usize {
        match self {
            Host::Closed(c) => c.len(),
            Host::Arcs(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes(&self) -> &'h [Cx<T>] {
        match self {
            Host::Closed(c) => c.nodes(),
            Host::Arcs(s) => s.nodes(),
        }
    }

    pub fn normal_plus(&self, node: usize) -> Cx<T> {
        match self {
            Host::Closed(c) => c.normal_plus(node),
            Host::Arcs(s) => s.normal_plus(node),
        }
    }

    pub fn tangent(&self, node: usize) -> Cx<T> {
        match self {
            Host::Closed(c) => c.tangents()[node],
            Host::Arcs(s) => {
                let (j, k) = s.locate(node);
                s.arcs()[j].tangents()[k]
            }
        }
    }

    /// Arclength coordinate of a node (per arc for arc systems).
    pub fn arclength(&self, node: usize) -> T {
        match self {
            Host::Closed(c) => c.arclength()[node],
            Host::Arcs(s) => s.arclength(node),
        }
    }

    pub fn panel_length(&self, node: usize) -> T {
        match self {
            Host::Closed(c) => c.panel_length(node),
            Host::Arcs(s) => s.panel_length(node),
        }
    }

    pub fn local_spacing(&self, node: usize) -> T {
        match self {
            Host::Closed(c) => c.speed()[node] * c.du(),
            Host::Arcs(s) => {
                let (j, k) = s.locate(node);
                s.arcs()[j].local_spacing(k)
            }
        }
    }

    pub fn diameter(&self) -> T {
        match self {
            Host::Closed(c) => c.diameter(),
            Host::Arcs(s) => s.diameter(),
        }
    }

    pub fn cutoff(&self) -> T {
        match self {
            Host::Closed(c) => c.cutoff(),
            Host::Arcs(s) => s.cutoff(),
        }
    }

    pub fn distance(&self, z: Cx<T>) -> T {
        match self {
            Host::Closed(c) => c.distance(z),
            Host::Arcs(s) => s.distance(z),
        }
    }

    /// Node index within `1e-12` diameters of `z`, if any.
    pub fn node_at(&self, z: Cx<T>) -> Option<usize> {
        let tol = T::lit(1e-12) * self.diameter();
        self.nodes().iter().position(|&t| (t - z).norm() <= tol)
    }

    /// Arclength quadrature weights: `int phi ds ~ sum w_k phi(t_k)` for `phi`
    /// smooth up to arc endpoints.
    pub fn arclength_weights(&self) -> Vec<T> {
        match self {
            Host::Closed(c) => c.arclength_weights(),
            Host::Arcs(s) => {
                s.arcs().iter().flat_map(|a| a.fejer_weights().iter().zip(a.dz()).map(|(&w, d)| w * d.norm())).collect()
            }
        }
    }

    fn same(&self, other: &Host<'_, T>) -> bool {
        match (self, other) {
            (Host::Closed(a), Host::Closed(b)) => std::ptr::eq(*a, *b),
            (Host::Arcs(a), Host::Arcs(b)) => std::ptr::eq(*a, *b),
            _ => false,
        }
    }
}

/// Quadrature rule used for a density on arcs.
///
/// `Regular` treats the samples as smooth up to the endpoints (Fejer weights).
/// `Chebyshev` treats `f * sqrt(1 - tau^2)` as smooth, i.e. `f` may grow or vanish
/// like an inverse or direct square root at the endpoints (Gauss-Chebyshev weights).
/// Closed contours always use the periodic trapezoidal rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    #[default]
    Regular,
    Chebyshev,
}

/// Complex function values at the nodes of a host curve.
#[derive(Debug, Clone)]
pub struct SampledDensity<'h, T> {
    host: Host<'h, T>,
    values: Vec<Cx<T>>,
    weighting: Weighting,
}

impl<'h, T: Real> SampledDensity<'h, T> {
    pub fn new(host: impl Into<Host<'h, T>>, values: Vec<Cx<T>>) -> Result<Self> {
        let host = host.into();
        if values.len() != host.len() {
            return Err(Error::Alignment { expected: host.len(), got: values.len() });
        }
        if let Some(node) = values.iter().position(|v| !is_finite(*v)) {
            return Err(Error::NonFinite { node });
        }
        Ok(Self { host, values, weighting: Weighting::Regular })
    }

    /// Samples `f` at every node.
    pub fn from_fn(host: impl Into<Host<'h, T>>, f: impl Fn(Cx<T>) -> Cx<T>) -> Result<Self> {
        let host = host.into();
        let values = host.nodes().iter().map(|&z| f(z)).collect();
        Self::new(host, values)
    }

    pub fn zeros(host: impl Into<Host<'h, T>>) -> Self {
        let host = host.into();
        Self { host, values: vec![czero(); host.len()], weighting: Weighting::Regular }
    }

    pub fn with_weighting(mut self, weighting: Weighting) -> Self {
        self.weighting = weighting;
        self
    }

    pub fn host(&self) -> Host<'h, T> {
        self.host
    }

    pub fn values(&self) -> &[Cx<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Cx<T>> {
        self.values
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same host and weighting, new values.
    pub fn with_values(&self, values: Vec<Cx<T>>) -> Result<Self> {
        Ok(SampledDensity::new(self.host, values)?.with_weighting(self.weighting))
    }

    pub fn map(&self, f: impl Fn(Cx<T>, Cx<T>) -> Cx<T>) -> Self {
        let values = self.host.nodes().iter().zip(&self.values).map(|(&z, &v)| f(z, v)).collect();
        Self { host: self.host, values, weighting: self.weighting }
    }

    pub fn scale(&self, c: Cx<T>) -> Self {
        self.map(|_, v| v * c)
    }

    /// `self + c * other`; the hosts must be the same object.
    pub fn axpy(&self, c: Cx<T>, other: &SampledDensity<'_, T>) -> Result<Self> {
        if !self.host.same(&other.host) {
            return Err(Error::Invalid("densities live on different hosts".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a + b * c).collect();
        Ok(Self { host: self.host, values, weighting: self.weighting })
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    /// Largest difference to `other` over nodes.
    pub fn max_diff(&self, other: &SampledDensity<'_, T>) -> T {
        self.values.iter().zip(&other.values).fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    /// `int f(t) dt` along the host.
    pub fn integral(&self) -> Cx<T> {
        self.dt_terms().into_iter().fold(czero(), |acc, v| acc + v)
    }

    /// `int f(t) |dt|` along the host.
    pub fn arclength_integral(&self) -> Cx<T> {
        self.ds_terms().into_iter().fold(czero(), |acc, v| acc + v)
    }

    /// Terms `c_k` with `int f(t) h(t) dt ~ sum c_k h(t_k)` for `h` smooth on the host.
    pub fn dt_terms(&self) -> Vec<Cx<T>> {
        self.terms(false)
    }

    pub fn ds_terms(&self) -> Vec<Cx<T>> {
        self.terms(true)
    }

    fn terms(&self, arclength: bool) -> Vec<Cx<T>> {
        let jac = |d: Cx<T>| if arclength { Cx::new(d.norm(), T::zero()) } else { d };
        match self.host {
            Host::Closed(c) => {
                let du = c.du();
                self.values.iter().zip(c.dz()).map(|(&v, &d)| v * jac(d) * du).collect()
            }
            Host::Arcs(s) => {
                let mut out = Vec::with_capacity(self.len());
                for (j, arc) in s.arcs().iter().enumerate() {
                    let (w, psi) = self.arc_rule(j);
                    for k in 0..arc.len() {
                        out.push(psi[k] * jac(arc.dz()[k]) * w[k]);
                    }
                }
                out
            }
        }
    }

    /// `(weights, psi)` on arc `j`: `int f(t) h(t) dt ~ sum w_k psi_k t'_k h(t_k)`.
    pub(crate) fn arc_rule(&self, j: usize) -> (Vec<T>, Vec<Cx<T>>) {
        let Host::Arcs(s) = self.host else { unreachable!("arc rule on a closed host") };
        let arc = &s.arcs()[j];
        let off = s.global_index(j, 0);
        let vals = &self.values[off..off + arc.len()];
        match self.weighting {
            Weighting::Regular => (arc.fejer_weights().to_vec(), vals.to_vec()),
            Weighting::Chebyshev => {
                let w = arc.chebyshev_weight();
                let psi = vals.iter().enumerate().map(|(k, &v)| v * arc.sin_theta(k)).collect();
                (vec![w; arc.len()], psi)
            }
        }
    }

    /// Interpolant of the samples along the host's parameter.
    pub(crate) fn interpolant(&self) -> Interpolant<T> {
        match self.host {
            Host::Closed(_) => Interpolant::Closed { f: TrigInterpolant::new(&self.values) },
            Host::Arcs(s) => {
                let coeffs = (0..s.arc_count())
                    .map(|j| {
                        let (_, psi) = self.arc_rule(j);
                        s.arcs()[j].grid().coefficients(&psi)
                    })
                    .collect();
                Interpolant::Arcs { weighting: self.weighting, coeffs }
            }
        }
    }
}

/// Continuous extension of a density used for near-curve and off-node evaluation.
pub(crate) enum Interpolant<T> {
    Closed {
        f: TrigInterpolant<T>,
    },
    /// Chebyshev coefficients of `psi` per arc (`f` or `f sqrt(1 - tau^2)`).
    Arcs {
        weighting: Weighting,
        coeffs: Vec<Vec<Cx<T>>>,
    },
}

impl<T: Real> Interpolant<T> {
    /// `f` at parameter `u` of a closed contour.
    pub fn closed_value(&self, u: T) -> Cx<T> {
        match self {
            Interpolant::Closed { f, .. } => f.eval(u),
            Interpolant::Arcs { .. } => unreachable!(),
        }
    }

    /// `psi` at `tau` on arc `j`.
    pub fn arc_psi(&self, j: usize, tau: T) -> Cx<T> {
        match self {
            Interpolant::Arcs { coeffs, .. } => clenshaw(&coeffs[j], tau),
            Interpolant::Closed { .. } => unreachable!(),
        }
    }
}
