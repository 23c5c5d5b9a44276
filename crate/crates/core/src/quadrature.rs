//! Regular and principal-value quadrature.
//!
//! Principal values use singularity subtraction: the pole's own contribution
//! `f(x) PV int dt/(t - x)` is integrated analytically and the remainder is smooth.

use rayon::prelude::*;

use crate::density::{Host, SampledDensity, Weighting};
use crate::error::{Error, Result};
use crate::fourier::TrigInterpolant;
use crate::geometry::Arc;
use crate::scalar::{ci, czero, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    /// Periodic trapezoidal rule (closed contours).
    UniformTrapezoid,
    GaussLegendre,
    /// Gauss rule for the weight `1/sqrt((t - a)(b - t))`.
    ChebyshevFirst,
    /// Gauss rule for the weight `sqrt((t - a)(b - t))`.
    ChebyshevSecond,
}

/// Parameter interval `[start, end]`; `curved` marks panels of a curved arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel<T> {
    pub start: T,
    pub end: T,
    pub curved: bool,
}

impl<T: Real> Panel<T> {
    pub fn new(start: T, end: T) -> Self {
        Self { start, end, curved: false }
    }

    pub fn reference() -> Self {
        Self::new(-T::one(), T::one())
    }
}

/// Nodes and weights mapped onto a panel.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub kind: RuleKind,
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the rule to a function of the panel coordinate.
    pub fn apply(&self, f: impl Fn(T) -> Cx<T>) -> Cx<T> {
        self.nodes.iter().zip(&self.weights).fold(czero(), |acc, (&x, &w)| acc + f(x) * w)
    }
}

pub fn build_rule<T: Real>(panel: Panel<T>, kind: RuleKind, order: usize) -> Result<QuadratureRule<T>> {
    if order < 2 {
        return Err(Error::Invalid(format!("quadrature order {order} is below 2")));
    }
    if panel.curved && matches!(kind, RuleKind::ChebyshevFirst | RuleKind::ChebyshevSecond) {
        return Err(Error::Geometry("Chebyshev rules apply to straight panels only".into()));
    }
    let half = (panel.end - panel.start) * T::lit(0.5);
    let mid = (panel.end + panel.start) * T::lit(0.5);
    let m = T::count(order);
    let (nodes, weights): (Vec<T>, Vec<T>) = match kind {
        RuleKind::UniformTrapezoid => {
            let h = (panel.end - panel.start) / m;
            (0..order).map(|k| (panel.start + h * T::count(k), h)).unzip()
        }
        RuleKind::GaussLegendre => {
            let (x, w) = gauss_legendre::<T>(order);
            x.iter().zip(&w).map(|(&x, &w)| (mid + half * x, w * half)).unzip()
        }
        RuleKind::ChebyshevFirst => (1..=order)
            .map(|k| {
                let x = (T::PI() * T::count(2 * k - 1) / (T::lit(2.0) * m)).cos();
                (mid + half * x, T::PI() / m)
            })
            .unzip(),
        RuleKind::ChebyshevSecond => (1..=order)
            .map(|k| {
                let phi = T::PI() * T::count(k) / (m + T::one());
                let s = phi.sin();
                (mid + half * phi.cos(), T::PI() / (m + T::one()) * s * s * half * half)
            })
            .unzip(),
    };
    Ok(QuadratureRule { kind, nodes, weights })
}

/// Weighted sum in ascending node order.
pub fn integrate<T: Real>(samples: &[Cx<T>], rule: &QuadratureRule<T>) -> Result<Cx<T>> {
    if samples.len() != rule.len() {
        return Err(Error::Alignment { expected: rule.len(), got: samples.len() });
    }
    Ok(samples.iter().zip(&rule.weights).fold(czero(), |acc, (&f, &w)| acc + f * w))
}

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(m: usize) -> (Vec<T>, Vec<T>) {
    let mut x = vec![T::zero(); m];
    let mut w = vec![T::zero(); m];
    let mf = T::count(m);
    for i in 0..m.div_ceil(2) {
        let mut z = (T::PI() * (T::count(i) + T::lit(0.75)) / (mf + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre(m, z);
            dp = d;
            let dz = p / d;
            z = z - dz;
            if dz.abs() <= T::epsilon() * T::lit(4.0) {
                let (_, d) = legendre(m, z);
                dp = d;
                break;
            }
        }
        let wi = T::lit(2.0) / ((T::one() - z * z) * dp * dp);
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

/// `(P_m(z), P_m'(z))`.
fn legendre<T: Real>(m: usize, z: T) -> (T, T) {
    let (mut p0, mut p1) = (T::one(), z);
    if m == 0 {
        return (T::one(), T::zero());
    }
    for k in 2..=m {
        let kf = T::count(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * z * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = T::count(m) * (z * p1 - p0) / (z * z - T::one());
    (p1, d)
}

/// Composite 16-point Gauss-Legendre over `pieces` equal sub-intervals of `[a, b]`,
/// bisecting any interval for which `split(lo, hi)` holds.
pub(crate) fn adaptive_gauss<T: Real>(
    a: T,
    b: T,
    pieces: usize,
    f: &dyn Fn(T) -> Cx<T>,
    split: &dyn Fn(T, T) -> bool,
) -> Cx<T> {
    const DEPTH: usize = 52;
    let (x, w) = gauss_legendre::<T>(16);
    let mut acc: Cx<T> = czero();
    let h = (b - a) / T::count(pieces);
    let mut stack: Vec<(T, T, usize)> = (0..pieces)
        .rev()
        .map(|p| (a + h * T::count(p), if p + 1 == pieces { b } else { a + h * T::count(p + 1) }, 0))
        .collect();
    while let Some((lo, hi, depth)) = stack.pop() {
        if depth < DEPTH && split(lo, hi) {
            let mid = (lo + hi) * T::lit(0.5);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
            continue;
        }
        let half = (hi - lo) * T::lit(0.5);
        let c = (hi + lo) * T::lit(0.5);
        for (&xi, &wi) in x.iter().zip(&w) {
            acc = acc + f(c + half * xi) * (wi * half);
        }
    }
    acc
}

/// Per-density data shared by every principal-value evaluation.
/// `(weights, psi, dpsi/dtau)` for one arc.
type ArcPv<T> = (Vec<T>, Vec<Cx<T>>, Vec<Cx<T>>);

pub(crate) struct PvData<'a, 'h, T> {
    density: &'a SampledDensity<'h, T>,
    /// Closed: `df/du` at the nodes. Arcs: per arc `(weights, psi, dpsi/dtau)`.
    closed_df: Vec<Cx<T>>,
    arcs: Vec<ArcPv<T>>,
}

impl<'a, 'h, T: Real> PvData<'a, 'h, T> {
    pub fn new(density: &'a SampledDensity<'h, T>) -> Self {
        match density.host() {
            Host::Closed(_) => {
                let closed_df = TrigInterpolant::new(density.values()).derivative_at_nodes();
                Self { density, closed_df, arcs: Vec::new() }
            }
            Host::Arcs(s) => {
                let arcs = (0..s.arc_count())
                    .map(|j| {
                        let (w, psi) = density.arc_rule(j);
                        let dpsi = s.arcs()[j].grid().differentiate(&psi);
                        (w, psi, dpsi)
                    })
                    .collect();
                Self { density, closed_df: Vec::new(), arcs }
            }
        }
    }

    /// `PV int f(t) dt / (t - x)` with `x` the given node.
    pub fn at_node(&self, node: usize) -> Cx<T> {
        let f = self.density.values();
        match self.density.host() {
            Host::Closed(c) => {
                let (z, dz, du) = (c.nodes(), c.dz(), c.du());
                let (x, fx) = (z[node], f[node]);
                let mut acc: Cx<T> = czero();
                for k in 0..z.len() {
                    if k == node {
                        acc = acc + self.closed_df[node] * du;
                    } else {
                        acc = acc + (f[k] - fx) * dz[k] / (z[k] - x) * du;
                    }
                }
                acc + ci::<T>() * T::PI() * fx
            }
            Host::Arcs(s) => {
                let (j0, k0) = s.locate(node);
                let x = s.nodes()[node];
                let mut acc: Cx<T> = czero();
                for (j, arc) in s.arcs().iter().enumerate() {
                    let (w, psi, dpsi) = &self.arcs[j];
                    if j == j0 {
                        acc = acc + own_arc_pv(arc, w, psi, k0, dpsi[k0], self.density.weighting());
                    } else {
                        acc = acc + plain_sum(arc, w, psi, x);
                    }
                }
                acc
            }
        }
    }
}

fn plain_sum<T: Real>(arc: &Arc<T>, w: &[T], psi: &[Cx<T>], x: Cx<T>) -> Cx<T> {
    let (t, dz) = (arc.nodes(), arc.dz());
    (0..t.len()).fold(czero(), |acc, k| acc + psi[k] * dz[k] / (t[k] - x) * w[k])
}

/// `int w(tau) / (tau - tau0) dtau` for the rule's weight function.
fn kernel_pv<T: Real>(tau0: T, weighting: Weighting) -> T {
    match weighting {
        Weighting::Regular => ((T::one() - tau0) / (T::one() + tau0)).ln(),
        Weighting::Chebyshev => T::zero(),
    }
}

fn own_arc_pv<T: Real>(arc: &Arc<T>, w: &[T], psi: &[Cx<T>], i: usize, dpsi_i: Cx<T>, weighting: Weighting) -> Cx<T> {
    let (t, dz, tau) = (arc.nodes(), arc.dz(), arc.tau());
    let (x, pi) = (t[i], psi[i]);
    let mut acc: Cx<T> = czero();
    for k in 0..t.len() {
        if k == i {
            let limit = dpsi_i + pi * arc.d2z()[i] / (dz[i] * T::lit(2.0));
            acc = acc + limit * w[i];
        } else {
            acc = acc + (psi[k] * dz[k] / (t[k] - x) - pi / (tau[k] - tau[i])) * w[k];
        }
    }
    acc + pi * kernel_pv(tau[i], weighting)
}

fn check_not_endpoint<T: Real>(f: &SampledDensity<'_, T>, x: Cx<T>) -> Result<()> {
    if let Host::Arcs(s) = f.host() {
        let tol = T::lit(1e-12) * s.diameter();
        for (j, arc) in s.arcs().iter().enumerate() {
            if (arc.start() - x).norm() <= tol {
                return Err(Error::EndpointSingularity { node: s.global_index(j, 0) });
            }
            if (arc.end() - x).norm() <= tol {
                return Err(Error::EndpointSingularity { node: s.global_index(j, arc.len() - 1) });
            }
        }
    }
    Ok(())
}

/// `PV int f(t) dt / (t - x)` for a pole `x` at a quadrature node.
pub fn pv_integrate<T: Real>(f: &SampledDensity<'_, T>, x: Cx<T>) -> Result<Cx<T>> {
    check_not_endpoint(f, x)?;
    let node = f.host().node_at(x).ok_or_else(|| Error::InterpolationRequired(format!("{x}")))?;
    Ok(PvData::new(f).at_node(node))
}

/// Principal value at every node, in parallel.
pub fn pv_all_nodes<T: Real>(f: &SampledDensity<'_, T>) -> Vec<Cx<T>> {
    let data = PvData::new(f);
    (0..f.len()).into_par_iter().map(|i| data.at_node(i)).collect()
}

/// `PV int f(t) dt / (t - x)` for any interior point `x` of the host, interpolating
/// the density at `x` when it is not a node.
pub fn pv_integrate_interpolated<T: Real>(f: &SampledDensity<'_, T>, x: Cx<T>) -> Result<Cx<T>> {
    check_not_endpoint(f, x)?;
    let host = f.host();
    if let Some(node) = host.node_at(x) {
        return Ok(PvData::new(f).at_node(node));
    }
    let tol = T::lit(1e-9) * host.diameter();
    let interp = f.interpolant();
    match host {
        Host::Closed(c) => {
            let u0 = closed_parameter(c, x, tol)?;
            let fx = interp.closed_value(u0);
            let (z, dz, du) = (c.nodes(), c.dz(), c.du());
            let acc = (0..z.len()).fold(czero::<T>(), |acc, k| acc + (f.values()[k] - fx) * dz[k] / (z[k] - x) * du);
            Ok(acc + ci::<T>() * T::PI() * fx)
        }
        Host::Arcs(s) => {
            let (j0, tau0) = arc_parameter(s.arcs(), x, tol)?;
            let psi0 = interp.arc_psi(j0, tau0);
            let mut acc = psi0 * kernel_pv(tau0, f.weighting());
            for (j, arc) in s.arcs().iter().enumerate() {
                let (w, psi) = f.arc_rule(j);
                if j == j0 {
                    let (t, dz, tau) = (arc.nodes(), arc.dz(), arc.tau());
                    for k in 0..t.len() {
                        acc = acc + (psi[k] * dz[k] / (t[k] - x) - psi0 / (tau[k] - tau0)) * w[k];
                    }
                } else {
                    acc = acc + plain_sum(arc, &w, &psi, x);
                }
            }
            Ok(acc)
        }
    }
}

/// Parameter `u` of a point on a closed contour.
fn closed_parameter<T: Real>(c: &crate::geometry::ClosedContour<T>, x: Cx<T>, tol: T) -> Result<T> {
    let k = c.nearest_node(x);
    let mut u = c.param(k);
    for _ in 0..60 {
        let (z, d) = c.eval(u);
        let step = ((z - x) * d.conj()).re / d.norm_sqr();
        u = u - step;
        if step.abs() < T::epsilon() * T::lit(8.0) {
            break;
        }
    }
    if (c.eval(u).0 - x).norm() > tol {
        return Err(Error::Domain(format!("point {x} is not on the contour")));
    }
    Ok(u)
}

/// `(arc, tau)` of a point lying on one of the arcs.
pub(crate) fn arc_parameter<T: Real>(arcs: &[Arc<T>], x: Cx<T>, tol: T) -> Result<(usize, T)> {
    let (j, _) = arcs.iter().enumerate().map(|(j, a)| (j, a.distance(x))).fold((0, T::infinity()), |best, c| {
        if c.1 < best.1 {
            c
        } else {
            best
        }
    });
    let arc = &arcs[j];
    let k = arc
        .nodes()
        .iter()
        .enumerate()
        .fold((0, T::infinity()), |best, (k, &t)| {
            let d = (t - x).norm();
            if d < best.1 {
                (k, d)
            } else {
                best
            }
        })
        .0;
    let mut tau = arc.tau()[k];
    for _ in 0..60 {
        let (z, d, _) = arc.eval(tau);
        let step = ((z - x) * d.conj()).re / d.norm_sqr();
        tau = (tau - step).max(-T::one()).min(T::one());
        if step.abs() < T::epsilon() * T::lit(8.0) {
            break;
        }
    }
    if (arc.eval(tau).0 - x).norm() > tol {
        return Err(Error::Domain(format!("point {x} is not on the arcs")));
    }
    Ok((j, tau))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_degree_2m_minus_1() {
        for m in [2usize, 5, 8, 16, 33] {
            let (x, w) = gauss_legendre::<f64>(m);
            for d in 0..2 * m {
                let q: f64 = x.iter().zip(&w).map(|(&x, &w)| w * x.powi(d as i32)).sum();
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "m={m} d={d} q={q}");
            }
        }
    }

    #[test]
    fn rules_on_reference_panel() {
        let gl = build_rule::<f64>(Panel::new(0.0, 2.0), RuleKind::GaussLegendre, 8).unwrap();
        assert!((gl.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let ch = build_rule::<f64>(Panel::reference(), RuleKind::ChebyshevFirst, 16).unwrap();
        for (k, &x) in ch.nodes.iter().enumerate() {
            let want = ((2 * k + 1) as f64 * std::f64::consts::PI / 32.0).cos();
            assert!((x - want).abs() < 1e-15);
            assert!((ch.weights[k] - std::f64::consts::PI / 16.0).abs() < 1e-15);
        }
        assert!(build_rule::<f64>(Panel::reference(), RuleKind::GaussLegendre, 1).is_err());
        let curved = Panel { curved: true, ..Panel::reference() };
        assert!(matches!(build_rule::<f64>(curved, RuleKind::ChebyshevFirst, 4), Err(Error::Geometry(_))));
    }

    #[test]
    fn adaptive_gauss_resolves_near_pole() {
        let z = Cx::new(0.3, 1e-6);
        let f = |t: f64| Cx::new(1.0, 0.0) / (Cx::new(t, 0.0) - z);
        let split = |a: f64, b: f64| {
            let d = [a, b, 0.5 * (a + b)].iter().fold(f64::INFINITY, |m, &t| m.min((Cx::new(t, 0.0) - z).norm()));
            d < 1.5 * (b - a)
        };
        let v = adaptive_gauss(-1.0, 1.0, 4, &f, &split);
        let exact = ((Cx::new(1.0, 0.0) - z) / (Cx::new(-1.0, 0.0) - z)).ln();
        assert!((v - exact).norm() < 1e-11, "{v} vs {exact}");
    }
}
