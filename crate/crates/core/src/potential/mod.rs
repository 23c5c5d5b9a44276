//! Logarithmic potentials `u(z) = int log|z - t| dmu(t)` and recovery of `mu` from `u`.
//!
//! A measure here is a sum of a curve density (per arclength on a contour or arc
//! system), an area density on a lattice and finitely many point masses.

mod grid;

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

pub use grid::{
    detect_point_masses, recover_area_density, recover_area_density_with, AreaDensity, GridHeader, PointMass,
    PotentialGrid, MAX_SPACING,
};

use crate::density::{Host, SampledDensity, Weighting};
use crate::error::{Error, Result};
use crate::geometry::ClosedKind;
use crate::near::{CurveIntegrator, Measure};
use crate::scalar::{cx, Cx, Real};

/// Real density per unit arclength on the nodes of a host.
#[derive(Debug, Clone)]
pub struct CurveDensity<'h, T> {
    /// Density values (imaginary parts zero). Arc systems use Chebyshev weighting so
    /// inverse square-root growth at the endpoints integrates accurately.
    pub density: SampledDensity<'h, T>,
    /// `int rho phi ds ~ sum weights[k] rho_k phi(t_k)`.
    pub weights: Vec<T>,
    /// Nodes where a one-sided normal derivative failed to converge.
    pub flagged: Vec<usize>,
}

impl<'h, T: Real> CurveDensity<'h, T> {
    pub fn new(host: impl Into<Host<'h, T>>, values: Vec<T>) -> Result<Self> {
        let host = host.into();
        let weighting = match host {
            Host::Closed(_) => Weighting::Regular,
            Host::Arcs(_) => Weighting::Chebyshev,
        };
        let ones = SampledDensity::from_fn(host, |_| cx(T::one(), T::zero()))?.with_weighting(weighting);
        let weights = ones.ds_terms().into_iter().map(|w| w.re).collect();
        let density = SampledDensity::new(host, values.into_iter().map(|v| cx(v, T::zero())).collect())?
            .with_weighting(weighting);
        Ok(Self { density, weights, flagged: Vec::new() })
    }

    pub fn host(&self) -> Host<'h, T> {
        self.density.host()
    }

    pub fn value(&self, node: usize) -> T {
        self.density.values()[node].re
    }

    pub fn values(&self) -> Vec<T> {
        self.density.values().iter().map(|v| v.re).collect()
    }

    pub fn mass(&self) -> T {
        self.density.values().iter().zip(&self.weights).fold(T::zero(), |a, (v, &w)| a + v.re * w)
    }

    pub fn min(&self) -> T {
        self.density.values().iter().fold(T::infinity(), |m, v| m.min(v.re))
    }
}

#[derive(Debug, Clone)]
pub struct MeasureEstimate<'h, T> {
    pub curve: Option<CurveDensity<'h, T>>,
    pub area: Option<AreaDensity<T>>,
    pub point_masses: Vec<PointMass<T>>,
    pub total_mass: T,
}

/// JSON form of a [`MeasureEstimate`].
#[derive(Debug, Clone, Serialize)]
pub struct MeasureSummary {
    pub total_mass: f64,
    pub curve_mass: Option<f64>,
    pub area_mass: Option<f64>,
    pub point_masses: Vec<PointMassSummary>,
    pub flagged_nodes: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointMassSummary {
    pub location: [f64; 2],
    pub mass: f64,
    pub ambiguous: bool,
}

impl<'h, T: Real> MeasureEstimate<'h, T> {
    pub fn new(
        curve: Option<CurveDensity<'h, T>>,
        area: Option<AreaDensity<T>>,
        point_masses: Vec<PointMass<T>>,
    ) -> Self {
        let total_mass = curve.as_ref().map_or(T::zero(), CurveDensity::mass)
            + area.as_ref().map_or(T::zero(), AreaDensity::mass)
            + point_masses.iter().fold(T::zero(), |a, p| a + p.mass);
        Self { curve, area, point_masses, total_mass }
    }

    pub fn from_curve(curve: CurveDensity<'h, T>) -> Self {
        Self::new(Some(curve), None, Vec::new())
    }

    pub fn from_area(area: AreaDensity<T>) -> Self {
        Self::new(None, Some(area), Vec::new())
    }

    pub fn from_point_masses(masses: Vec<PointMass<T>>) -> Self {
        Self::new(None, None, masses)
    }

    pub fn summary(&self) -> MeasureSummary {
        MeasureSummary {
            total_mass: self.total_mass.to_f64_lossy(),
            curve_mass: self.curve.as_ref().map(|c| c.mass().to_f64_lossy()),
            area_mass: self.area.as_ref().map(|a| a.mass().to_f64_lossy()),
            point_masses: self
                .point_masses
                .iter()
                .map(|p| PointMassSummary {
                    location: [p.location.re.to_f64_lossy(), p.location.im.to_f64_lossy()],
                    mass: p.mass.to_f64_lossy(),
                    ambiguous: p.ambiguous,
                })
                .collect(),
            flagged_nodes: self.curve.as_ref().map(|c| c.flagged.clone()).unwrap_or_default(),
        }
    }

    /// `index,s,re_z,im_z,density,weight` per curve node.
    pub fn write_curve_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "index,s,re_z,im_z,density,weight")?;
        let Some(c) = &self.curve else { return Ok(()) };
        let host = c.host();
        for (k, z) in host.nodes().iter().enumerate() {
            writeln!(
                w,
                "{k},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                host.arclength(k).to_f64_lossy(),
                z.re.to_f64_lossy(),
                z.im.to_f64_lossy(),
                c.value(k).to_f64_lossy(),
                c.weights[k].to_f64_lossy()
            )?;
        }
        Ok(())
    }

    /// `x,y,density` per interior cell.
    pub fn write_area_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "x,y,density")?;
        let Some(a) = &self.area else { return Ok(()) };
        for j in 0..a.ny {
            for i in 0..a.nx {
                let p = a.point(i, j);
                writeln!(
                    w,
                    "{:.16e},{:.16e},{:.16e}",
                    p.re.to_f64_lossy(),
                    p.im.to_f64_lossy(),
                    a.at(i, j).to_f64_lossy()
                )?;
            }
        }
        Ok(())
    }
}

/// Reusable evaluator of `u(z) = int log|z - t| dmu(t)`.
pub struct LogPotential<'a, 'h, T> {
    measure: &'a MeasureEstimate<'h, T>,
    curve: Option<CurveIntegrator<'a, 'h, T>>,
}

impl<'a, 'h, T: Real> LogPotential<'a, 'h, T> {
    pub fn new(measure: &'a MeasureEstimate<'h, T>) -> Self {
        Self { measure, curve: measure.curve.as_ref().map(|c| CurveIntegrator::new(&c.density)) }
    }

    /// Points on the curve are allowed (the logarithm is integrable); a point mass
    /// sitting exactly at `z` is a domain error.
    pub fn eval(&self, z: Cx<T>) -> Result<T> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain("potential evaluated at a non-finite point".into()));
        }
        let mut u = T::zero();
        for p in &self.measure.point_masses {
            let d = (z - p.location).norm();
            if d == T::zero() {
                return Err(Error::Domain(format!("z = {z} is a point mass; the potential is -inf")));
            }
            u = u + p.mass * d.ln();
        }
        if let Some(integ) = &self.curve {
            // a quadrature node landing exactly on z carries no mass
            let kernel = |d: Cx<T>| {
                let r = d.norm();
                cx(if r > T::zero() { r.ln() } else { T::zero() }, T::zero())
            };
            u = u + integ.integrate(z, Measure::Ds, &kernel).re;
        }
        if let Some(a) = &self.measure.area {
            u = u + area_potential(a, z);
        }
        Ok(u)
    }
}

/// Midpoint rule over cells; the cell containing `z` is integrated exactly as a
/// square about its centre.
fn area_potential<T: Real>(a: &AreaDensity<T>, z: Cx<T>) -> T {
    let h = a.h;
    let half = h * T::lit(0.5);
    // mean of log r over a square of half side s: log s + (log 2 - 3 + pi/2) / 2
    let self_mean = half.ln() + (T::LN_2() - T::lit(3.0) + T::FRAC_PI_2()) * T::lit(0.5);
    let mut u = T::zero();
    for j in 0..a.ny {
        for i in 0..a.nx {
            let v = a.at(i, j);
            if v == T::zero() {
                continue;
            }
            let d = z - a.point(i, j);
            let l = if d.re.abs() < half && d.im.abs() < half { self_mean } else { d.norm().ln() };
            u = u + v * l;
        }
    }
    u * h * h
}

pub fn log_potential<T: Real>(measure: &MeasureEstimate<'_, T>, z: Cx<T>) -> Result<T> {
    LogPotential::new(measure).eval(z)
}

/// Offsets and acceptance threshold for one-sided normal derivatives.
#[derive(Debug, Clone, Copy)]
pub struct CurveRecoveryOptions<T> {
    /// First offset as a fraction of the local feature scale.
    pub offset_factor: T,
    /// Largest accepted `|R2 - R1|` between the last two Richardson levels, relative
    /// to `max(1, |R2|)`.
    pub tol: T,
}

impl<T: Real> Default for CurveRecoveryOptions<T> {
    fn default() -> Self {
        Self { offset_factor: T::lit(1e-3), tol: T::lit(1e-6) }
    }
}

/// `rho = (du/dn_+ + du/dn_-) / (2 pi)` at each node, each derivative taken along
/// the normal pointing into its side.
///
/// Arcs are treated as two-sided. Nodes whose one-sided limits do not settle are
/// listed in `flagged` and keep their extrapolated value.
pub fn recover_curve_density<'h, T: Real>(
    u: impl Fn(Cx<T>) -> T + Sync,
    host: impl Into<Host<'h, T>>,
) -> Result<MeasureEstimate<'h, T>> {
    recover_curve_density_with(u, host, CurveRecoveryOptions::default())
}

pub fn recover_curve_density_with<'h, T: Real>(
    u: impl Fn(Cx<T>) -> T + Sync,
    host: impl Into<Host<'h, T>>,
    opts: CurveRecoveryOptions<T>,
) -> Result<MeasureEstimate<'h, T>> {
    let host = host.into();
    let per_node: Vec<(T, bool)> = (0..host.len())
        .into_par_iter()
        .map(|k| {
            let x = host.nodes()[k];
            let n = host.normal_plus(k);
            let h0 = opts.offset_factor * feature_scale(host, k);
            let u0 = u(x);
            let (plus, ok_p) = one_sided(|h| u(x + n * h), u0, h0, opts.tol);
            let (minus, ok_m) = one_sided(|h| u(x - n * h), u0, h0, opts.tol);
            ((plus + minus) / T::TAU(), ok_p && ok_m)
        })
        .collect();
    let values: Vec<T> = per_node.iter().map(|p| p.0).collect();
    if let Some(node) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { node });
    }
    let mut curve = CurveDensity::new(host, values)?;
    curve.flagged = per_node.iter().enumerate().filter(|(_, p)| !p.1).map(|(k, _)| k).collect();
    Ok(MeasureEstimate::from_curve(curve))
}

/// Richardson-extrapolated `(u(h) - u(0)) / h` from `h0, h0/2, h0/4`.
fn one_sided<T: Real>(u: impl Fn(T) -> T, u0: T, h0: T, tol: T) -> (T, bool) {
    let two = T::lit(2.0);
    let d = |h: T| (u(h) - u0) / h;
    let (d1, d2, d4) = (d(h0), d(h0 / two), d(h0 / T::lit(4.0)));
    let r1a = two * d2 - d1;
    let r1b = two * d4 - d2;
    let r2 = (T::lit(4.0) * r1b - r1a) / T::lit(3.0);
    let ok = r2.is_finite() && (r2 - r1b).abs() <= tol * r2.abs().max(T::one());
    (r2, ok)
}

/// Smallest of panel length, curvature radius and, on arcs, the distance to the
/// nearest endpoint of any arc.
fn feature_scale<T: Real>(host: Host<'_, T>, k: usize) -> T {
    let panel = host.panel_length(k);
    match host {
        Host::Closed(c) => panel.min(c.curvature_radius(k)),
        Host::Arcs(s) => {
            let x = s.nodes()[k];
            let (j, _) = s.locate(k);
            let other = s
                .arcs()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .fold(T::infinity(), |m, (_, a)| m.min(a.distance(x)));
            s.endpoints().iter().fold(panel.min(other), |m, &e| m.min((x - e).norm()))
        }
    }
}

/// Sets whose equilibrium measure is known in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EquilibriumShape<T> {
    Disk { center: Cx<T>, radius: T },
    Segment { a: Cx<T>, b: Cx<T> },
}

impl<T: Real> EquilibriumShape<T> {
    /// Circle contours give the disk, a single straight arc gives the segment.
    pub fn of_host(host: Host<'_, T>) -> Result<Self> {
        match host {
            Host::Closed(c) => match c.kind() {
                ClosedKind::Circle { center, radius } => Ok(Self::Disk { center: *center, radius: *radius }),
                _ => Err(Error::NotImplemented("equilibrium measure of a non-circular contour".into())),
            },
            Host::Arcs(s) if s.arc_count() == 1 && s.arcs()[0].is_segment() => {
                let arc = &s.arcs()[0];
                Ok(Self::Segment { a: arc.start(), b: arc.end() })
            }
            Host::Arcs(_) => Err(Error::NotImplemented("equilibrium measure of a general arc system".into())),
        }
    }

    /// Density per unit arclength at a point of the set.
    pub fn density_at(&self, t: Cx<T>) -> T {
        match *self {
            Self::Disk { radius, .. } => T::one() / (T::TAU() * radius),
            Self::Segment { a, b } => T::one() / (T::PI() * ((t - a).norm() * (b - t).norm()).sqrt()),
        }
    }
}

/// Closed-form equilibrium density sampled on the host's nodes.
pub fn equilibrium_density<'h, T: Real>(host: impl Into<Host<'h, T>>) -> Result<MeasureEstimate<'h, T>> {
    let host = host.into();
    let shape = EquilibriumShape::of_host(host)?;
    let values = host.nodes().iter().map(|&t| shape.density_at(t)).collect();
    Ok(MeasureEstimate::from_curve(CurveDensity::new(host, values)?))
}
