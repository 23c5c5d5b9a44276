//! `S_L f = g` on a system of disjoint arcs `L`.
//!
//! The kernel of `S_L` is spanned by `z^k / sqrt(R)`, `k < N`. The candidate
//! `f0 = sqrt(R)/(pi i) int g dt / (sqrt(R)(t - z))` solves `S_L f0 = g + P` with a
//! polynomial `P` of degree below `N` built from the moments
//! `m_k = int t^k g dt / sqrt(R)`; `f0` is a bounded solution exactly when every
//! moment vanishes.
//!
//! Densities carrying a `1/sqrt(R)` or `sqrt(R)` factor use Chebyshev weighting.
//! The integrability and Holder hypotheses on `g` are not checked.

use serde::Serialize;

use crate::cauchy::singular_s;
use crate::density::{Host, SampledDensity, Weighting};
use crate::error::{Error, Result};
use crate::geometry::ArcSystem;
use crate::poly::ComplexPolynomial;
use crate::quadrature::pv_all_nodes;
use crate::scalar::{ci, czero, Cx, Real};

fn system<'h, T: Real>(g: &SampledDensity<'h, T>) -> Result<&'h ArcSystem<T>> {
    match g.host() {
        Host::Arcs(s) => Ok(s),
        Host::Closed(_) => Err(Error::Invalid("arc solver needs an arc-system host".into())),
    }
}

fn pi_i<T: Real>() -> Cx<T> {
    ci::<T>() * T::PI()
}

/// `z^k / (sqrt R)_+` for `k = 0..N`.
pub fn homogeneous_basis<T: Real>(system: &ArcSystem<T>) -> Vec<SampledDensity<'_, T>> {
    let plus = system.sqrt_r_plus_nodes();
    (0..system.arc_count())
        .map(|k| {
            let values = system.nodes().iter().zip(&plus).map(|(&z, &r)| z.powu(k as u32) / r).collect();
            SampledDensity::new(system, values).expect("aligned").with_weighting(Weighting::Chebyshev)
        })
        .collect()
}

/// `g / (sqrt R)_+` with Chebyshev weighting.
fn over_sqrt_r<'h, T: Real>(g: &SampledDensity<'h, T>, s: &'h ArcSystem<T>) -> Result<SampledDensity<'h, T>> {
    let plus = s.sqrt_r_plus_nodes();
    let values = g.values().iter().zip(&plus).map(|(&v, &r)| v / r).collect();
    Ok(SampledDensity::new(s, values)?.with_weighting(Weighting::Chebyshev))
}

/// `m_k = int_L t^k g(t) dt / (sqrt R)_+(t)`, `k = 0..N`.
pub fn solvability_moments<T: Real>(g: &SampledDensity<'_, T>) -> Result<Vec<Cx<T>>> {
    let s = system(g)?;
    let h = over_sqrt_r(g, s)?;
    let terms = h.dt_terms();
    Ok((0..s.arc_count())
        .map(|k| s.nodes().iter().zip(&terms).fold(czero(), |acc, (&t, &c)| acc + c * t.powu(k as u32)))
        .collect())
}

/// `f(x) = (1/((sqrt R)_+(x) pi i)) PV int g (sqrt R)_+ dt / (t - x) + P(x) / (sqrt R)_+(x)`.
pub fn general_solution<'h, T: Real>(
    g: &SampledDensity<'h, T>,
    p: &ComplexPolynomial<T>,
) -> Result<SampledDensity<'h, T>> {
    let s = system(g)?;
    let n = s.arc_count();
    if p.degree().is_some_and(|d| d >= n) {
        return Err(Error::Invalid(format!("P must have degree below {n}")));
    }
    let plus = s.sqrt_r_plus_nodes();
    let times = SampledDensity::new(s, g.values().iter().zip(&plus).map(|(&v, &r)| v * r).collect())?
        .with_weighting(Weighting::Chebyshev);
    let pv = pv_all_nodes(&times);
    let values = pv.iter().zip(&plus).zip(s.nodes()).map(|((&v, &r), &x)| (v / pi_i() + p.eval(x)) / r).collect();
    Ok(SampledDensity::new(s, values)?.with_weighting(Weighting::Chebyshev))
}

/// `f0(x) = ((sqrt R)_+(x) / pi i) PV int g dt / ((sqrt R)_+(t) (t - x))`.
pub fn candidate_f0<'h, T: Real>(g: &SampledDensity<'h, T>) -> Result<SampledDensity<'h, T>> {
    let s = system(g)?;
    let h = over_sqrt_r(g, s)?;
    let pv = pv_all_nodes(&h);
    let plus = s.sqrt_r_plus_nodes();
    let values = pv.iter().zip(&plus).map(|(&v, &r)| v * r / pi_i()).collect();
    Ok(SampledDensity::new(s, values)?.with_weighting(Weighting::Chebyshev))
}

/// `P(z) = (1/pi i) int g(w) Q(z, w) dw / (sqrt R)_+(w)`, with `Q` the polynomial part
/// of `sqrt R` at infinity and `Q(z, w)` its divided difference.
pub fn defect_polynomial<T: Real>(g: &SampledDensity<'_, T>) -> Result<ComplexPolynomial<T>> {
    let s = system(g)?;
    let m = solvability_moments(g)?;
    Ok(defect_from_moments(s, &m))
}

fn defect_from_moments<T: Real>(s: &ArcSystem<T>, m: &[Cx<T>]) -> ComplexPolynomial<T> {
    let d = s.sqrt_r_polynomial_part().divided_difference();
    let n = s.arc_count();
    let coeffs = (0..n)
        .map(|i| {
            let row = d.get(i);
            let acc = (0..n)
                .fold(czero::<T>(), |acc, j| acc + row.and_then(|r| r.get(j)).copied().unwrap_or_else(czero) * m[j]);
            acc / pi_i()
        })
        .collect();
    ComplexPolynomial::new(coeffs)
}

/// `max |S_L f0 - (g + P)|` over nodes.
pub fn modified_residual<T: Real>(g: &SampledDensity<'_, T>) -> Result<T> {
    let f0 = candidate_f0(g)?;
    let p = defect_polynomial(g)?;
    let target = g.map(|x, v| v + p.eval(x));
    Ok(singular_s(&f0)?.max_diff(&target))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BoundedOptions<T> {
    /// Largest `|m_k|` treated as zero; defaults to
    /// `1e-8 * max|g| * diameter^(N - 1/2)`.
    pub moment_tol: Option<T>,
    /// Holder exponent the caller expects of `g`; informational only.
    pub holder_hint: Option<T>,
}

/// Outcome of [`bounded_solution`].
#[derive(Debug, Clone)]
pub struct SolveReport<'h, T> {
    /// The candidate `f0` at the nodes.
    pub solution: SampledDensity<'h, T>,
    pub moments: Vec<Cx<T>>,
    pub defect_poly: ComplexPolynomial<T>,
    /// `max |S_L f0 - g|`.
    pub residual: T,
    /// `max |S_L f0 - (g + P)|`.
    pub modified_residual: T,
    pub bounded: bool,
    /// Per endpoint `a_1, b_1, a_2, ...`: `Some(0)` for a bounded solution, `None`
    /// where the solution is singular.
    pub endpoint_values: Vec<Option<Cx<T>>>,
    pub moment_tol: T,
}

/// JSON form of a report.
#[derive(Debug, Clone, Serialize)]
pub struct SolveSummary {
    pub bounded: bool,
    pub moments: Vec<[f64; 2]>,
    pub defect_poly: Vec<[f64; 2]>,
    pub residual: f64,
    pub modified_residual: f64,
    pub moment_tol: f64,
    pub endpoint_values: Vec<Option<[f64; 2]>>,
    /// Where the node values were written, when they were.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution_csv: Option<String>,
}

impl<T: Real> SolveReport<'_, T> {
    pub fn summary(&self) -> SolveSummary {
        let pair = |z: &Cx<T>| [z.re.to_f64_lossy(), z.im.to_f64_lossy()];
        SolveSummary {
            bounded: self.bounded,
            moments: self.moments.iter().map(pair).collect(),
            defect_poly: self.defect_poly.coeffs().iter().map(pair).collect(),
            residual: self.residual.to_f64_lossy(),
            modified_residual: self.modified_residual.to_f64_lossy(),
            moment_tol: self.moment_tol.to_f64_lossy(),
            endpoint_values: self.endpoint_values.iter().map(|v| v.as_ref().map(pair)).collect(),
            solution_csv: None,
        }
    }
}

pub fn default_moment_tol<T: Real>(g: &SampledDensity<'_, T>) -> Result<T> {
    let s = system(g)?;
    let n = T::count(s.arc_count());
    Ok(T::lit(1e-8) * g.max_abs().max(T::min_positive_value()) * s.diameter().powf(n - T::lit(0.5)))
}

/// Bounded solution of `S_L f = g` when one exists.
///
/// Non-existence is a result: `bounded` is false and the moments and defect
/// polynomial say by how much the data misses the solvability conditions.
pub fn bounded_solution<'h, T: Real>(g: &SampledDensity<'h, T>, opts: BoundedOptions<T>) -> Result<SolveReport<'h, T>> {
    let s = system(g)?;
    let moments = solvability_moments(g)?;
    let moment_tol = match opts.moment_tol {
        Some(t) => t,
        None => default_moment_tol(g)?,
    };
    let bounded = moments.iter().all(|m| m.norm() <= moment_tol);
    let defect_poly = defect_from_moments(s, &moments);
    let solution = candidate_f0(g)?;
    let sf = singular_s(&solution)?;
    let residual = sf.max_diff(g);
    let modified_residual = sf.max_diff(&g.map(|x, v| v + defect_poly.eval(x)));
    let endpoint_values = vec![if bounded { Some(czero()) } else { None }; 2 * s.arc_count()];
    Ok(SolveReport {
        solution,
        moments,
        defect_poly,
        residual,
        modified_residual,
        bounded,
        endpoint_values,
        moment_tol,
    })
}

/// Largest `|f(x) - f(y)| / |x - y|^alpha` over node pairs at least `margin` away from
/// every arc endpoint.
pub fn holder_diagnostic<T: Real>(f: &SampledDensity<'_, T>, margin: T, alpha: T) -> Result<T> {
    if !(margin > T::zero()) {
        return Err(Error::Invalid("margin must be positive".into()));
    }
    let host = f.host();
    let ends = match host {
        Host::Arcs(s) => s.endpoints(),
        Host::Closed(_) => Vec::new(),
    };
    let keep: Vec<usize> =
        (0..f.len()).filter(|&k| ends.iter().all(|&e| (host.nodes()[k] - e).norm() >= margin)).collect();
    if keep.len() < 2 {
        return Err(Error::Range(format!("only {} node(s) lie outside the margin", keep.len())));
    }
    let (x, v) = (host.nodes(), f.values());
    let mut best = T::zero();
    for (i, &a) in keep.iter().enumerate() {
        for &b in &keep[i + 1..] {
            let q = (v[a] - v[b]).norm() / (x[a] - x[b]).norm().powf(alpha);
            best = best.max(q);
        }
    }
    Ok(best)
}

/// Polynomial part at infinity of `P(t) sqrt(R(t))`.
pub fn polynomial_part_with_sqrt_r<T: Real>(p: &ComplexPolynomial<T>, system: &ArcSystem<T>) -> ComplexPolynomial<T> {
    let n = system.arc_count();
    let Some(deg) = p.degree() else { return ComplexPolynomial::zero() };
    // P(t) sqrt(R) = sum_i p_i t^i * t^N sum_k beta_k t^-k
    let beta = system.sqrt_r_series(deg + n + 1);
    let top = deg + n;
    let mut c = vec![czero::<T>(); top + 1];
    for i in 0..=deg {
        for (k, &b) in beta.iter().enumerate() {
            if i + n >= k {
                c[i + n - k] = c[i + n - k] + p.coeff(i) * b;
            }
        }
    }
    ComplexPolynomial::new(c)
}
