use crate::chebyshev::{clenshaw, integral_coefficients, ChebGrid};
use crate::error::{Error, Result};
use crate::geometry::spec::{ArcSpec, Point};
use crate::geometry::{fornberg_weights, inside_polygon, segment_distance, segments_intersect};
use crate::poly::{sqrt_series, ComplexPolynomial};
use crate::scalar::{ci, cis, cx, czero, Cx, Real};

/// Shape of a single arc, parametrised by `tau` in `[-1, 1]` from `a` to `b`.
#[derive(Debug, Clone)]
pub enum ArcKind<T> {
    Segment,
    /// Arc of a circle; the angle is `phi_mid + half_sweep * tau`.
    Circular {
        center: Cx<T>,
        radius: T,
        phi_mid: T,
        half_sweep: T,
    },
    /// Polyline samples with chord-length parameters in `[-1, 1]`.
    NodeChain {
        points: Vec<Cx<T>>,
        params: Vec<T>,
    },
}

/// `sqrt((z - a)(z - b))` with its cut on the arc, normalised to behave like `z` at infinity.
#[derive(Debug, Clone)]
enum Branch<T> {
    /// `w = (z - b)/(z - a)` maps the arc onto the ray `arg w = beta`; the square root
    /// of `w` is cut along that ray.
    Ray { a: Cx<T>, b: Cx<T>, rot: Cx<T>, pre: Cx<T>, sigma: T, plus_side: T },
    /// Chord branch corrected by the parity of the loop arc + chord around `z`.
    Winding { chord: Box<Branch<T>>, polygon: Vec<Cx<T>>, length: T },
}

impl<T: Real> Branch<T> {
    fn ray(a: Cx<T>, b: Cx<T>, mid: Cx<T>, normal_mid: Cx<T>, length: T) -> Self {
        let w = |z: Cx<T>| (z - b) / (z - a);
        let beta = w(mid).arg();
        let rot = cis(-(beta + T::PI()));
        let pre = cis((beta + T::PI()) * T::lit(0.5));
        let kappa = pre * rot.sqrt();
        let sigma = kappa.re.signum();
        let probe = mid + normal_mid * (T::lit(1e-3) * length);
        let plus_side = (w(probe) * rot).im.signum();
        Branch::Ray { a, b, rot, pre, sigma, plus_side }
    }

    fn eval(&self, z: Cx<T>) -> Cx<T> {
        match self {
            Branch::Ray { a, b, rot, pre, sigma, .. } => {
                let w = (z - *b) / (z - *a);
                *pre * (z - *a) * (w * *rot).sqrt() * *sigma
            }
            Branch::Winding { chord, polygon, .. } => {
                let v = chord.eval(z);
                if inside_polygon(polygon, z) {
                    -v
                } else {
                    v
                }
            }
        }
    }

    /// Limit from the left of the direction of travel at a point `x` of the arc.
    fn plus(&self, x: Cx<T>, normal: Cx<T>) -> Cx<T> {
        match self {
            Branch::Ray { a, b, pre, sigma, plus_side, .. } => {
                let r = ((x - *b).norm() / (x - *a).norm()).sqrt();
                *pre * (x - *a) * ci::<T>() * (*plus_side * r * *sigma)
            }
            Branch::Winding { chord, polygon, length } => {
                let delta = T::lit(1e-6) * *length;
                let probe = x + normal * delta;
                let (a, b) = match chord.as_ref() {
                    Branch::Ray { a, b, .. } => (*a, *b),
                    Branch::Winding { .. } => unreachable!("chord branch is a ray"),
                };
                let base = if segment_distance(x, a, b) > T::lit(10.0) * delta {
                    chord.eval(x)
                } else {
                    let side = ((probe - a) / (b - a)).im.signum();
                    let chord_normal = ci::<T>() * (b - a).unscale((b - a).norm());
                    chord.plus(x, chord_normal) * side
                };
                if inside_polygon(polygon, probe) {
                    -base
                } else {
                    base
                }
            }
        }
    }
}

/// One oriented arc `a -> b` discretised at first-kind Chebyshev points in `tau`.
///
/// The `tau = cos(theta)` substitution grades the nodes toward both endpoints;
/// "panels" are equal slices of `theta` holding `nodes_per_panel` nodes each.
/// Endpoints are never nodes.
#[derive(Debug, Clone)]
pub struct Arc<T> {
    a: Cx<T>,
    b: Cx<T>,
    kind: ArcKind<T>,
    grid: ChebGrid<T>,
    panels: usize,
    nodes_per_panel: usize,
    nodes: Vec<Cx<T>>,
    dz: Vec<Cx<T>>,
    d2z: Vec<Cx<T>>,
    tangents: Vec<Cx<T>>,
    s: Vec<T>,
    length: T,
    panel_lengths: Vec<T>,
    fejer: Vec<T>,
    branch: Branch<T>,
}

impl<T: Real> Arc<T> {
    pub fn from_spec(spec: &ArcSpec) -> Result<Self> {
        let pt = |p: &Point| cx(T::lit(p[0]), T::lit(p[1]));
        let (panels, per) = spec.discretization().resolve(8)?;
        match spec {
            ArcSpec::Segment { a, b, .. } => Self::segment(pt(a), pt(b), panels, per),
            ArcSpec::Circular { center, a, b, ccw, .. } => Self::circular(pt(center), pt(a), pt(b), *ccw, panels, per),
            ArcSpec::NodeChain { points, .. } => {
                let p: Vec<Cx<T>> = points.iter().map(pt).collect();
                Self::node_chain(&p, panels, per)
            }
        }
    }

    pub fn segment(a: Cx<T>, b: Cx<T>, panels: usize, nodes_per_panel: usize) -> Result<Self> {
        Self::build(a, b, ArcKind::Segment, panels, nodes_per_panel)
    }

    /// Arc about `center` from `a` to `b`, counter-clockwise when `ccw`.
    pub fn circular(
        center: Cx<T>,
        a: Cx<T>,
        b: Cx<T>,
        ccw: bool,
        panels: usize,
        nodes_per_panel: usize,
    ) -> Result<Self> {
        let radius = (a - center).norm();
        if !(radius > T::zero()) || ((b - center).norm() - radius).abs() > T::lit(1e-9) * radius {
            return Err(Error::Geometry("circular arc endpoints must lie on one circle about the center".into()));
        }
        let phi_a = (a - center).arg();
        let mut sweep = ((b - center).arg() - phi_a).modulo(T::TAU());
        if !ccw {
            sweep = sweep - T::TAU();
        }
        let half_sweep = sweep * T::lit(0.5);
        let kind = ArcKind::Circular { center, radius, phi_mid: phi_a + half_sweep, half_sweep };
        Self::build(a, b, kind, panels, nodes_per_panel)
    }

    /// Arc through polyline samples, from `points[0]` to the last point.
    pub fn node_chain(points: &[Cx<T>], panels: usize, nodes_per_panel: usize) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Geometry("node chain needs at least two points".into()));
        }
        let mut cum = vec![T::zero()];
        for w in points.windows(2) {
            let d = (w[1] - w[0]).norm();
            if d == T::zero() {
                return Err(Error::Geometry("repeated point in node chain".into()));
            }
            let last = *cum.last().unwrap();
            cum.push(last + d);
        }
        if let Some((i, j)) = crate::geometry::polyline_self_intersection(points, false) {
            return Err(Error::Geometry(format!("node chain self-intersects between edges {i} and {j}")));
        }
        let total = *cum.last().unwrap();
        let params = cum.iter().map(|&c| T::lit(2.0) * c / total - T::one()).collect();
        let kind = ArcKind::NodeChain { points: points.to_vec(), params };
        Self::build(points[0], *points.last().unwrap(), kind, panels, nodes_per_panel)
    }

    fn build(a: Cx<T>, b: Cx<T>, kind: ArcKind<T>, panels: usize, nodes_per_panel: usize) -> Result<Self> {
        if a == b {
            return Err(Error::Geometry("arc endpoints coincide".into()));
        }
        let m = panels * nodes_per_panel;
        if m < 2 {
            return Err(Error::Resolution("an arc needs at least two nodes".into()));
        }
        let grid = ChebGrid::new(m);
        let mut nodes = Vec::with_capacity(m);
        let mut dz = Vec::with_capacity(m);
        let mut d2z = Vec::with_capacity(m);
        for &tau in grid.tau() {
            let (t, d1, d2) = eval_kind(a, b, &kind, tau);
            nodes.push(t);
            dz.push(d1);
            d2z.push(d2);
        }
        if dz.iter().any(|d| !(d.norm() > T::zero())) {
            return Err(Error::Geometry("degenerate arc tangent".into()));
        }
        let tangents: Vec<Cx<T>> = dz.iter().map(|d| d.unscale(d.norm())).collect();
        let speed: Vec<Cx<T>> = dz.iter().map(|d| cx(d.norm(), T::zero())).collect();
        let s_coeffs = integral_coefficients(&grid.coefficients(&speed));
        let s: Vec<T> = grid.tau().iter().map(|&t| clenshaw(&s_coeffs, t).re).collect();
        let length = clenshaw(&s_coeffs, T::one()).re;
        let panel_lengths = (0..panels)
            .map(|p| {
                let lo = -(T::PI() * T::count(p) / T::count(panels)).cos();
                let hi = -(T::PI() * T::count(p + 1) / T::count(panels)).cos();
                (clenshaw(&s_coeffs, hi) - clenshaw(&s_coeffs, lo)).re.abs()
            })
            .collect();
        let (mid, dmid, _) = eval_kind(a, b, &kind, T::zero());
        let normal_mid = ci::<T>() * dmid.unscale(dmid.norm());
        let branch = match &kind {
            ArcKind::Segment | ArcKind::Circular { .. } => Branch::ray(a, b, mid, normal_mid, length),
            ArcKind::NodeChain { points, .. } => {
                let chord_mid = (a + b) * T::lit(0.5);
                let chord_normal = ci::<T>() * (b - a).unscale((b - a).norm());
                let chord = Branch::ray(a, b, chord_mid, chord_normal, (b - a).norm());
                Branch::Winding { chord: Box::new(chord), polygon: points.clone(), length }
            }
        };
        let fejer = grid.fejer_weights();
        Ok(Self {
            a,
            b,
            kind,
            grid,
            panels,
            nodes_per_panel,
            nodes,
            dz,
            d2z,
            tangents,
            s,
            length,
            panel_lengths,
            fejer,
            branch,
        })
    }

    pub fn start(&self) -> Cx<T> {
        self.a
    }

    pub fn end(&self) -> Cx<T> {
        self.b
    }

    pub fn kind(&self) -> &ArcKind<T> {
        &self.kind
    }

    pub fn is_segment(&self) -> bool {
        matches!(self.kind, ArcKind::Segment)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Cx<T>] {
        &self.nodes
    }

    /// Node parameters `tau_k`, ascending.
    pub fn tau(&self) -> &[T] {
        self.grid.tau()
    }

    pub fn theta(&self) -> &[T] {
        self.grid.theta()
    }

    pub(crate) fn grid(&self) -> &ChebGrid<T> {
        &self.grid
    }

    /// `dt/dtau` at the nodes.
    pub fn dz(&self) -> &[Cx<T>] {
        &self.dz
    }

    pub fn d2z(&self) -> &[Cx<T>] {
        &self.d2z
    }

    pub fn tangents(&self) -> &[Cx<T>] {
        &self.tangents
    }

    /// Left normal `n+ = i z'(s)`.
    pub fn normal_plus(&self, k: usize) -> Cx<T> {
        ci::<T>() * self.tangents[k]
    }

    /// Arclength from `a`.
    pub fn arclength(&self) -> &[T] {
        &self.s
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn panel_of(&self, k: usize) -> usize {
        k / self.nodes_per_panel
    }

    pub fn panel_length(&self, k: usize) -> T {
        self.panel_lengths[self.panel_of(k)]
    }

    /// Fejer weights in `tau` (unweighted integrands).
    pub fn fejer_weights(&self) -> &[T] {
        &self.fejer
    }

    /// Weight `pi/m` of the first-kind Chebyshev rule.
    pub fn chebyshev_weight(&self) -> T {
        T::PI() / T::count(self.len())
    }

    /// `sqrt(1 - tau_k^2) = sin(theta_k)`.
    pub fn sin_theta(&self, k: usize) -> T {
        self.grid.theta()[k].sin()
    }

    /// `(t, dt/dtau, d2t/dtau2)` at an arbitrary parameter.
    pub fn eval(&self, tau: T) -> (Cx<T>, Cx<T>, Cx<T>) {
        eval_kind(self.a, self.b, &self.kind, tau)
    }

    /// Distance from `z` to the arc.
    pub fn distance(&self, z: Cx<T>) -> T {
        match &self.kind {
            ArcKind::Segment => segment_distance(z, self.a, self.b),
            ArcKind::Circular { center, radius, phi_mid, half_sweep } => {
                let rel = z - *center;
                let off = (rel.arg() - *phi_mid + T::PI()).modulo(T::TAU()) - T::PI();
                if off.abs() <= half_sweep.abs() {
                    (rel.norm() - *radius).abs()
                } else {
                    (z - self.a).norm().min((z - self.b).norm())
                }
            }
            ArcKind::NodeChain { points, .. } => {
                points.windows(2).fold(T::infinity(), |m, w| m.min(segment_distance(z, w[0], w[1])))
            }
        }
    }

    /// Polyline through `a`, the nodes and `b`.
    pub(crate) fn polyline(&self) -> Vec<Cx<T>> {
        let mut p = Vec::with_capacity(self.len() + 2);
        p.push(self.a);
        p.extend_from_slice(&self.nodes);
        p.push(self.b);
        p
    }

    /// Distance between neighbouring nodes around node `k`.
    pub fn local_spacing(&self, k: usize) -> T {
        let m = self.len();
        let prev = if k == 0 { self.a } else { self.nodes[k - 1] };
        let next = if k + 1 == m { self.b } else { self.nodes[k + 1] };
        (next - prev).norm() * T::lit(0.5)
    }

    /// This arc's factor `sqrt((z - a)(z - b))`, cut along the arc.
    pub fn sqrt_factor(&self, z: Cx<T>) -> Cx<T> {
        self.branch.eval(z)
    }

    /// Left boundary value of [`Arc::sqrt_factor`] at the point with parameter `tau`.
    pub fn sqrt_factor_plus(&self, tau: T) -> Cx<T> {
        let (x, d1, _) = self.eval(tau);
        self.branch.plus(x, ci::<T>() * d1.unscale(d1.norm()))
    }

    pub(crate) fn sqrt_factor_plus_node(&self, k: usize) -> Cx<T> {
        self.branch.plus(self.nodes[k], self.normal_plus(k))
    }
}

fn eval_kind<T: Real>(a: Cx<T>, b: Cx<T>, kind: &ArcKind<T>, tau: T) -> (Cx<T>, Cx<T>, Cx<T>) {
    match kind {
        ArcKind::Segment => {
            let half = (b - a) * T::lit(0.5);
            ((a + b) * T::lit(0.5) + half * tau, half, czero())
        }
        ArcKind::Circular { center, radius, phi_mid, half_sweep } => {
            let e = cis(*phi_mid + *half_sweep * tau);
            let w = *half_sweep;
            (*center + e * *radius, ci::<T>() * e * (*radius * w), -e * (*radius * w * w))
        }
        ArcKind::NodeChain { points, params } => {
            let n = params.len();
            let width = n.min(5);
            let idx = params.partition_point(|&p| p <= tau).saturating_sub(1);
            let lo = idx.saturating_sub(1).min(n - width);
            let xs = &params[lo..lo + width];
            let w = fornberg_weights(tau, xs);
            let mut out = [czero::<T>(); 3];
            for (d, o) in out.iter_mut().enumerate() {
                for j in 0..width {
                    *o = *o + points[lo + j] * w[d][j];
                }
            }
            (out[0], out[1], out[2])
        }
    }
}

/// Union of disjoint oriented arcs with the endpoint polynomial
/// `R(z) = prod (z - a_j)(z - b_j)` and the branch of `sqrt(R)` that is analytic off
/// the arcs and behaves like `z^N` at infinity.
///
/// Applicability assumes Ahlfors-regular arcs (length inside any disk of radius `r`
/// bounded by a multiple of `r`); this is documented, not verified.
#[derive(Debug, Clone)]
pub struct ArcSystem<T> {
    arcs: Vec<Arc<T>>,
    offsets: Vec<usize>,
    nodes: Vec<Cx<T>>,
    r_poly: ComplexPolynomial<T>,
    q_poly: ComplexPolynomial<T>,
    diameter: T,
}

impl<T: Real> ArcSystem<T> {
    pub fn from_specs(specs: &[ArcSpec]) -> Result<Self> {
        let arcs = specs.iter().map(Arc::from_spec).collect::<Result<Vec<_>>>()?;
        Self::new(arcs)
    }

    pub fn new(arcs: Vec<Arc<T>>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::Geometry("an arc system needs at least one arc".into()));
        }
        let endpoints: Vec<Cx<T>> = arcs.iter().flat_map(|a| [a.a, a.b]).collect();
        let mut diameter = T::zero();
        for arc in &arcs {
            for &p in arc.nodes.iter().chain(endpoints.iter()) {
                for &q in &endpoints {
                    diameter = diameter.max((p - q).norm());
                }
            }
        }
        let tol = T::lit(1e-12) * diameter;
        for i in 0..endpoints.len() {
            for j in (i + 1)..endpoints.len() {
                if i / 2 != j / 2 && (endpoints[i] - endpoints[j]).norm() <= tol {
                    return Err(Error::DegenerateR(format!(
                        "arcs {} and {} share an endpoint; R would have a double root",
                        i / 2,
                        j / 2
                    )));
                }
            }
        }
        let lines: Vec<Vec<Cx<T>>> = arcs.iter().map(|a| a.polyline()).collect();
        for i in 0..arcs.len() {
            for j in (i + 1)..arcs.len() {
                let hit = lines[i]
                    .windows(2)
                    .any(|p| lines[j].windows(2).any(|q| segments_intersect(p[0], p[1], q[0], q[1])));
                if hit {
                    return Err(Error::Disjointness { first: i, second: j });
                }
            }
        }
        let mut offsets = Vec::with_capacity(arcs.len() + 1);
        let mut nodes = Vec::new();
        offsets.push(0);
        for arc in &arcs {
            nodes.extend_from_slice(&arc.nodes);
            offsets.push(nodes.len());
        }
        let r_poly = ComplexPolynomial::from_roots(&endpoints);
        let n = arcs.len();
        let q_poly = {
            let beta = sqrt_series(&reverse_padded(&r_poly, 2 * n), n + 1);
            ComplexPolynomial::new((0..=n).map(|k| beta[n - k]).collect())
        };
        Ok(Self { arcs, offsets, nodes, r_poly, q_poly, diameter })
    }

    pub fn arcs(&self) -> &[Arc<T>] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Total node count over all arcs.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// All nodes, arc by arc.
    pub fn nodes(&self) -> &[Cx<T>] {
        &self.nodes
    }

    /// `(arc, local index)` of a global node index.
    pub fn locate(&self, node: usize) -> (usize, usize) {
        let j = self.offsets.partition_point(|&o| o <= node) - 1;
        (j, node - self.offsets[j])
    }

    pub fn global_index(&self, arc: usize, local: usize) -> usize {
        self.offsets[arc] + local
    }

    pub(crate) fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn normal_plus(&self, node: usize) -> Cx<T> {
        let (j, k) = self.locate(node);
        self.arcs[j].normal_plus(k)
    }

    /// Tangent parameter, arclength and panel length of a node.
    pub fn arclength(&self, node: usize) -> T {
        let (j, k) = self.locate(node);
        self.arcs[j].s[k]
    }

    pub fn panel_length(&self, node: usize) -> T {
        let (j, k) = self.locate(node);
        self.arcs[j].panel_length(k)
    }

    /// Endpoints `a_1, b_1, ..., a_N, b_N`.
    pub fn endpoints(&self) -> Vec<Cx<T>> {
        self.arcs.iter().flat_map(|a| [a.a, a.b]).collect()
    }

    /// `R(z) = prod (z - a_j)(z - b_j)`.
    pub fn r_poly(&self) -> &ComplexPolynomial<T> {
        &self.r_poly
    }

    /// Polynomial part of `sqrt(R)` at infinity (degree `N`).
    pub fn sqrt_r_polynomial_part(&self) -> &ComplexPolynomial<T> {
        &self.q_poly
    }

    /// Coefficients `beta_n` of `sqrt(R(t)) / t^N = sum beta_n t^{-n}`.
    pub fn sqrt_r_series(&self, terms: usize) -> Vec<Cx<T>> {
        sqrt_series(&reverse_padded(&self.r_poly, 2 * self.arcs.len()), terms)
    }

    pub fn diameter(&self) -> T {
        self.diameter
    }

    /// Near-boundary cutoff, `1e-8` times the system diameter.
    pub fn cutoff(&self) -> T {
        T::lit(1e-8) * self.diameter
    }

    pub fn distance(&self, z: Cx<T>) -> T {
        self.arcs.iter().fold(T::infinity(), |m, a| m.min(a.distance(z)))
    }

    /// `sqrt(R(z))` off the arcs.
    pub fn eval_sqrt_r(&self, z: Cx<T>) -> Result<Cx<T>> {
        if self.distance(z) <= self.cutoff() {
            return Err(Error::NearBoundary { point: format!("{z}"), cutoff: self.cutoff().to_f64_lossy() });
        }
        Ok(self.sqrt_r_unchecked(z))
    }

    pub(crate) fn sqrt_r_unchecked(&self, z: Cx<T>) -> Cx<T> {
        self.arcs.iter().fold(Cx::new(T::one(), T::zero()), |acc, a| acc * a.sqrt_factor(z))
    }

    /// `(sqrt R)_+` at a node: the limit from the left of the arc's direction.
    /// The right limit is its negative.
    pub fn sqrt_r_boundary_plus(&self, node: usize) -> Cx<T> {
        let (j, k) = self.locate(node);
        let x = self.arcs[j].nodes[k];
        self.arcs.iter().enumerate().fold(Cx::new(T::one(), T::zero()), |acc, (i, arc)| {
            if i == j {
                acc * arc.sqrt_factor_plus_node(k)
            } else {
                acc * arc.sqrt_factor(x)
            }
        })
    }

    pub fn sqrt_r_boundary_minus(&self, node: usize) -> Cx<T> {
        -self.sqrt_r_boundary_plus(node)
    }

    /// `(sqrt R)_+` at parameter `tau` of arc `arc`; endpoints are singular.
    pub fn sqrt_r_boundary_plus_at(&self, arc: usize, tau: T) -> Result<Cx<T>> {
        if tau.abs() >= T::one() {
            return Err(Error::EndpointSingularity {
                node: self.global_index(arc, if tau < T::zero() { 0 } else { self.arcs[arc].len() - 1 }),
            });
        }
        let (x, _, _) = self.arcs[arc].eval(tau);
        Ok(self.arcs.iter().enumerate().fold(Cx::new(T::one(), T::zero()), |acc, (i, a)| {
            if i == arc {
                acc * a.sqrt_factor_plus(tau)
            } else {
                acc * a.sqrt_factor(x)
            }
        }))
    }

    /// `(sqrt R)_+` at every node.
    pub fn sqrt_r_plus_nodes(&self) -> Vec<Cx<T>> {
        (0..self.len()).map(|g| self.sqrt_r_boundary_plus(g)).collect()
    }
}

/// Coefficients of `u^deg R(1/u)`, i.e. `R` read from the top.
fn reverse_padded<T: Real>(p: &ComplexPolynomial<T>, deg: usize) -> Vec<Cx<T>> {
    (0..=deg).map(|k| p.coeff(deg - k)).collect()
}
