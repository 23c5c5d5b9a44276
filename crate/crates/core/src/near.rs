//! Integrals `int f(t) k(t - z) dt` (or `|dt|`) for `z` anywhere, including close to
//! or on the curve.
//!
//! Far from the curve the host's own rule is used. Closer in, the density is
//! interpolated onto a grid refined by a power of two chosen from the distance to the
//! curve; when even that would be too coarse, adaptive Gauss-Legendre in the curve
//! parameter takes over.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::chebyshev::{clenshaw, fejer_weights};
use crate::density::{Host, Interpolant, SampledDensity, Weighting};
use crate::quadrature::adaptive_gauss;
use crate::scalar::{czero, Cx, Real};

/// Node-sum distance threshold, in local node spacings.
const FAR: f64 = 8.0;
/// Largest refinement factor before falling back to adaptive quadrature.
const MAX_REFINE: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Measure {
    /// Complex line element `dt`.
    Dt,
    /// Arclength `|dt|`.
    Ds,
}

/// `(t_j, c_j)` with `int f h dt ~ sum c_j h(t_j)`, for both measures.
struct FineRule<T> {
    t: Vec<Cx<T>>,
    dt: Vec<Cx<T>>,
    ds: Vec<Cx<T>>,
}

/// Per-piece `(nodes, weights)` for the plain node sum.
type NodeRule<T> = (Vec<Cx<T>>, Vec<Cx<T>>);
type FineCache<T> = std::sync::Arc<FineRule<T>>;
type Spacing<'a, T> = Box<dyn Fn(usize) -> T + 'a>;

pub(crate) struct CurveIntegrator<'a, 'h, T> {
    density: &'a SampledDensity<'h, T>,
    interp: Interpolant<T>,
    coarse: Vec<NodeRule<T>>,
    /// Keyed by `(piece, refinement)`.
    fine: Mutex<HashMap<(usize, usize), FineCache<T>>>,
}

impl<'a, 'h, T: Real> CurveIntegrator<'a, 'h, T> {
    pub fn new(density: &'a SampledDensity<'h, T>) -> Self {
        let dt = density.dt_terms();
        let ds = density.ds_terms();
        let coarse = match density.host() {
            Host::Closed(_) => vec![(dt, ds)],
            Host::Arcs(s) => {
                s.offsets().windows(2).map(|w| (dt[w[0]..w[1]].to_vec(), ds[w[0]..w[1]].to_vec())).collect()
            }
        };
        Self { density, interp: density.interpolant(), coarse, fine: Mutex::new(HashMap::new()) }
    }

    pub fn density(&self) -> &SampledDensity<'h, T> {
        self.density
    }

    /// `int f(t) kernel(t - z) dmeasure`.
    pub fn integrate(&self, z: Cx<T>, measure: Measure, kernel: &dyn Fn(Cx<T>) -> Cx<T>) -> Cx<T> {
        let host = self.density.host();
        let pieces = match host {
            Host::Closed(_) => 1,
            Host::Arcs(s) => s.arc_count(),
        };
        (0..pieces).fold(czero(), |acc, p| acc + self.piece(p, z, measure, kernel))
    }

    fn piece(&self, p: usize, z: Cx<T>, measure: Measure, kernel: &dyn Fn(Cx<T>) -> Cx<T>) -> Cx<T> {
        let host = self.density.host();
        let (nodes, spacing, dist): (&[Cx<T>], Spacing<'_, T>, T) = match host {
            Host::Closed(c) => (c.nodes(), Box::new(move |k| c.speed()[k] * c.du()), c.distance(z)),
            Host::Arcs(s) => {
                let arc = &s.arcs()[p];
                (arc.nodes(), Box::new(move |k| arc.local_spacing(k)), arc.distance(z))
            }
        };
        let (mut ratio, mut nearest) = (T::infinity(), 0);
        for (k, &t) in nodes.iter().enumerate() {
            let r = (t - z).norm() / spacing(k);
            if r < ratio {
                ratio = r;
                nearest = k;
            }
        }
        let sum = |t: &[Cx<T>], c: &[Cx<T>]| t.iter().zip(c).fold(czero(), |acc, (&t, &c)| acc + c * kernel(t - z));
        if ratio >= T::lit(FAR) {
            let (dt, ds) = &self.coarse[p];
            return sum(nodes, if measure == Measure::Dt { dt } else { ds });
        }
        let need = (T::lit(6.0) * spacing(nearest) / dist).ceil();
        if need <= T::count(MAX_REFINE) {
            let factor = need.to_usize().unwrap_or(1).max(2).next_power_of_two();
            let rule = self.fine_rule(p, factor);
            return sum(&rule.t, if measure == Measure::Dt { &rule.dt } else { &rule.ds });
        }
        self.adaptive(p, z, measure, kernel)
    }

    fn fine_rule(&self, p: usize, factor: usize) -> std::sync::Arc<FineRule<T>> {
        if let Some(r) = self.fine.lock().unwrap().get(&(p, factor)) {
            return r.clone();
        }
        let rule = std::sync::Arc::new(self.build_fine(p, factor));
        self.fine.lock().unwrap().insert((p, factor), rule.clone());
        rule
    }

    fn build_fine(&self, p: usize, factor: usize) -> FineRule<T> {
        match (self.density.host(), &self.interp) {
            (Host::Closed(c), Interpolant::Closed { f, .. }) => {
                let vals = f.upsample(factor);
                let big = vals.len();
                let du = T::TAU() / T::count(big);
                let mut rule =
                    FineRule { t: Vec::with_capacity(big), dt: Vec::with_capacity(big), ds: Vec::with_capacity(big) };
                for (j, &v) in vals.iter().enumerate() {
                    let (t, d) = c.eval(du * T::count(j));
                    rule.t.push(t);
                    rule.dt.push(v * d * du);
                    rule.ds.push(v * (d.norm() * du));
                }
                rule
            }
            (Host::Arcs(s), Interpolant::Arcs { weighting, coeffs, .. }) => {
                let arc = &s.arcs()[p];
                let big = arc.len() * factor;
                let weights = if *weighting == Weighting::Regular {
                    fejer_weights::<T>(big)
                } else {
                    vec![T::PI() / T::count(big); big]
                };
                let two_m = T::count(2 * big);
                let mut rule =
                    FineRule { t: Vec::with_capacity(big), dt: Vec::with_capacity(big), ds: Vec::with_capacity(big) };
                for (k, &w) in weights.iter().enumerate() {
                    let tau = (T::PI() * T::count(2 * (big - k) - 1) / two_m).cos();
                    let psi = clenshaw(&coeffs[p], tau);
                    let (t, d, _) = arc.eval(tau);
                    rule.t.push(t);
                    rule.dt.push(psi * d * w);
                    rule.ds.push(psi * (d.norm() * w));
                }
                rule
            }
            _ => unreachable!("interpolant matches host"),
        }
    }

    fn adaptive(&self, p: usize, z: Cx<T>, measure: Measure, kernel: &dyn Fn(Cx<T>) -> Cx<T>) -> Cx<T> {
        let jac = |d: Cx<T>| if measure == Measure::Dt { d } else { Cx::new(d.norm(), T::zero()) };
        let near = |a: Cx<T>, b: Cx<T>, c: Cx<T>| {
            let d = (a - z).norm().min((b - z).norm()).min((c - z).norm());
            d < T::lit(1.5) * ((b - a).norm() + (c - b).norm())
        };
        match self.density.host() {
            Host::Closed(c) => {
                let f = |u: T| {
                    let (t, d) = c.eval(u);
                    self.interp.closed_value(u) * jac(d) * kernel(t - z)
                };
                let split = |lo: T, hi: T| near(c.eval(lo).0, c.eval((lo + hi) * T::lit(0.5)).0, c.eval(hi).0);
                adaptive_gauss(T::zero(), T::TAU(), (c.len() / 4).max(8), &f, &split)
            }
            Host::Arcs(s) => {
                let arc = &s.arcs()[p];
                let cheb = self.density.weighting() == Weighting::Chebyshev;
                let f = |theta: T| {
                    let tau = theta.cos();
                    let (t, d, _) = arc.eval(tau);
                    let psi = self.interp.arc_psi(p, tau);
                    let v = psi * jac(d) * kernel(t - z);
                    if cheb {
                        v
                    } else {
                        v * theta.sin()
                    }
                };
                let at = |theta: T| arc.eval(theta.cos()).0;
                let split = |lo: T, hi: T| near(at(lo), at((lo + hi) * T::lit(0.5)), at(hi));
                adaptive_gauss(T::zero(), T::PI(), (arc.len() / 4).max(8), &f, &split)
            }
        }
    }
}
