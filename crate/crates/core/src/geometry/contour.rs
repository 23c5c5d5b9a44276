use crate::error::{Error, Result};
use crate::fourier::TrigInterpolant;
use crate::geometry::spec::{CurveSpec, Point};
use crate::geometry::{fornberg_weights, polyline_self_intersection, segment_distance, signed_area};
use crate::scalar::{ci, cis, cx, Cx, Real};

const MIN_NODES: usize = 16;

/// Analytic description kept for off-node evaluation of the parametrisation.
#[derive(Debug, Clone)]
pub enum ClosedKind<T> {
    Circle { center: Cx<T>, radius: T },
    Ellipse { center: Cx<T>, semi_axes: (T, T), rotation: T },
    RoundedPolygon(RoundedPolygon<T>),
    NodeChain { points: Vec<Cx<T>> },
}

#[derive(Debug, Clone)]
enum Piece<T> {
    Line { start: Cx<T>, dir: Cx<T> },
    Fillet { center: Cx<T>, radius: T, phi0: T, turn: T },
}

/// Polygon with circular fillets, parametrised by arclength.
#[derive(Debug, Clone)]
pub struct RoundedPolygon<T> {
    /// `(arclength at piece start, piece length, piece)`.
    pieces: Vec<(T, T, Piece<T>)>,
    length: T,
}

impl<T: Real> RoundedPolygon<T> {
    fn new(vertices: &[Cx<T>], radius: T) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Geometry("rounded polygon needs at least three vertices".into()));
        }
        if radius < T::zero() {
            return Err(Error::Geometry("corner radius must be nonnegative".into()));
        }
        let mut v = vertices.to_vec();
        if signed_area(&v) < T::zero() {
            v.reverse();
        }
        if polyline_self_intersection(&v, true).is_some() {
            return Err(Error::Geometry("polygon vertices self-intersect".into()));
        }
        // Fillet at every vertex: (start, end, center, phi0, signed turn, tangent length).
        let mut fillets = Vec::with_capacity(n);
        for i in 0..n {
            let prev = v[(i + n - 1) % n];
            let next = v[(i + 1) % n];
            let d_in = (v[i] - prev).unscale((v[i] - prev).norm());
            let d_out = (next - v[i]).unscale((next - v[i]).norm());
            if !(d_in.re.is_finite() && d_out.re.is_finite()) {
                return Err(Error::Geometry(format!("repeated vertex {i}")));
            }
            let turn = (d_out / d_in).arg();
            let tlen = radius * (turn.abs() * T::lit(0.5)).tan();
            let start = v[i] - d_in * tlen;
            let end = v[i] + d_out * tlen;
            let center = start + ci::<T>() * d_in * (radius * turn.signum());
            let phi0 = (start - center).arg();
            fillets.push((start, end, center, phi0, turn, tlen));
        }
        let mut pieces = Vec::new();
        let mut s = T::zero();
        for i in 0..n {
            let j = (i + 1) % n;
            let (_, end_i, ..) = fillets[i];
            let (start_j, _, center_j, phi0_j, turn_j, tlen_j) = fillets[j];
            let edge = (v[j] - v[i]).norm();
            let straight = edge - fillets[i].5 - tlen_j;
            if straight < T::zero() {
                return Err(Error::Geometry(format!("corner radius too large for edge {i}")));
            }
            if straight > T::zero() {
                let dir = (start_j - end_i).unscale((start_j - end_i).norm());
                pieces.push((s, straight, Piece::Line { start: end_i, dir }));
                s = s + straight;
            }
            let arc_len = radius * turn_j.abs();
            if arc_len > T::zero() {
                pieces.push((s, arc_len, Piece::Fillet { center: center_j, radius, phi0: phi0_j, turn: turn_j }));
                s = s + arc_len;
            }
        }
        Ok(Self { pieces, length: s })
    }

    /// `(z, dz/ds, d2z/ds2)` at arclength `s`.
    fn eval(&self, s: T) -> (Cx<T>, Cx<T>, Cx<T>) {
        let s = s.modulo(self.length);
        let idx = self.pieces.iter().rposition(|(s0, _, _)| *s0 <= s).unwrap_or(0);
        let (s0, _, piece) = &self.pieces[idx];
        let ds = s - *s0;
        match piece {
            Piece::Line { start, dir } => (*start + *dir * ds, *dir, cx(T::zero(), T::zero())),
            Piece::Fillet { center, radius, phi0, turn } => {
                let sign = turn.signum();
                let e = cis(*phi0 + sign * ds / *radius);
                (*center + e * *radius, ci::<T>() * e * sign, -e / *radius)
            }
        }
    }
}

/// Positively oriented closed Jordan curve sampled on a uniform periodic grid.
///
/// The parameter `u` runs over `[0, 2 pi)`; node `k` sits at `u_k = 2 pi k / n`.
/// `D+` (the bounded component) lies to the left of the direction of travel,
/// so `n+ = i z'(s)` points into it.
#[derive(Debug, Clone)]
pub struct ClosedContour<T> {
    kind: ClosedKind<T>,
    nodes: Vec<Cx<T>>,
    dz: Vec<Cx<T>>,
    d2z: Vec<Cx<T>>,
    tangents: Vec<Cx<T>>,
    speed: Vec<T>,
    s: Vec<T>,
    panels: usize,
    panel_size: usize,
    panel_lengths: Vec<T>,
    total_length: T,
    diameter: T,
}

impl<T: Real> ClosedContour<T> {
    pub fn from_spec(spec: &CurveSpec) -> Result<Self> {
        let pt = |p: &Point| cx(T::lit(p[0]), T::lit(p[1]));
        match spec {
            CurveSpec::Circle { center, radius, discretization } => {
                let (panels, per) = discretization.resolve(16)?;
                Self::circle(pt(center), T::lit(*radius), panels, per)
            }
            CurveSpec::Ellipse { center, semi_axes, rotation, discretization } => {
                let (panels, per) = discretization.resolve(16)?;
                Self::ellipse(pt(center), T::lit(semi_axes[0]), T::lit(semi_axes[1]), T::lit(*rotation), panels, per)
            }
            CurveSpec::RoundedPolygon { vertices, corner_radius, discretization } => {
                let (panels, per) = discretization.resolve(16)?;
                let v: Vec<Cx<T>> = vertices.iter().map(pt).collect();
                Self::rounded_polygon(&v, T::lit(*corner_radius), panels, per)
            }
            CurveSpec::NodeChain { points, panels } => {
                let v: Vec<Cx<T>> = points.iter().map(pt).collect();
                Self::node_chain(&v, panels.unwrap_or(1))
            }
        }
    }

    pub fn circle(center: Cx<T>, radius: T, panels: usize, nodes_per_panel: usize) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::Geometry("circle radius must be positive".into()));
        }
        Self::build(ClosedKind::Circle { center, radius }, panels, nodes_per_panel)
    }

    pub fn ellipse(center: Cx<T>, a: T, b: T, rotation: T, panels: usize, nodes_per_panel: usize) -> Result<Self> {
        if !(a > T::zero() && b > T::zero()) {
            return Err(Error::Geometry("ellipse semi-axes must be positive".into()));
        }
        Self::build(ClosedKind::Ellipse { center, semi_axes: (a, b), rotation }, panels, nodes_per_panel)
    }

    pub fn rounded_polygon(
        vertices: &[Cx<T>],
        corner_radius: T,
        panels: usize,
        nodes_per_panel: usize,
    ) -> Result<Self> {
        let poly = RoundedPolygon::new(vertices, corner_radius)?;
        Self::build(ClosedKind::RoundedPolygon(poly), panels, nodes_per_panel)
    }

    /// Closed polyline samples; a repeated closing point is dropped and clockwise input is reversed.
    pub fn node_chain(points: &[Cx<T>], panels: usize) -> Result<Self> {
        let mut p = points.to_vec();
        if p.len() > 1 && p.first() == p.last() {
            p.pop();
        }
        if p.len() < MIN_NODES {
            return Err(Error::Resolution(format!("{} nodes given, at least {MIN_NODES} required", p.len())));
        }
        if signed_area(&p) < T::zero() {
            p.reverse();
        }
        if panels == 0 || !p.len().is_multiple_of(panels) {
            return Err(Error::Invalid(format!("{} nodes do not split into {panels} panels", p.len())));
        }
        let per = p.len() / panels;
        Self::build(ClosedKind::NodeChain { points: p }, panels, per)
    }

    fn build(kind: ClosedKind<T>, panels: usize, panel_size: usize) -> Result<Self> {
        let n = panels * panel_size;
        if n < MIN_NODES {
            return Err(Error::Resolution(format!("{n} nodes requested, at least {MIN_NODES} required")));
        }
        let du = T::TAU() / T::count(n);
        let (nodes, dz, d2z) = match &kind {
            ClosedKind::NodeChain { points } => {
                let (dz, d2z) = periodic_differences(points, du);
                (points.clone(), dz, d2z)
            }
            _ => {
                let mut nodes = Vec::with_capacity(n);
                let mut dz = Vec::with_capacity(n);
                let mut d2z = Vec::with_capacity(n);
                for k in 0..n {
                    let (z, d1, d2) = eval_kind(&kind, du * T::count(k));
                    nodes.push(z);
                    dz.push(d1);
                    d2z.push(d2);
                }
                (nodes, dz, d2z)
            }
        };
        for (k, w) in nodes.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::Geometry(format!("nodes {k} and {} coincide", k + 1)));
            }
        }
        if matches!(kind, ClosedKind::NodeChain { .. } | ClosedKind::RoundedPolygon(_)) {
            if let Some((i, j)) = polyline_self_intersection(&nodes, true) {
                return Err(Error::Geometry(format!("curve self-intersects between edges {i} and {j}")));
            }
        }
        if !(signed_area(&nodes) > T::zero()) {
            return Err(Error::Geometry("curve is not positively oriented".into()));
        }
        let speed: Vec<T> = dz.iter().map(|d| d.norm()).collect();
        if speed.iter().any(|&v| !(v > T::zero())) {
            return Err(Error::Geometry("degenerate tangent".into()));
        }
        let tangents: Vec<Cx<T>> = dz.iter().zip(&speed).map(|(d, &v)| d.unscale(v)).collect();
        let speed_c: Vec<Cx<T>> = speed.iter().map(|&v| cx(v, T::zero())).collect();
        let s: Vec<T> =
            TrigInterpolant::new(&speed_c).cumulative_integral_at_nodes().into_iter().map(|c| c.re).collect();
        let total_length = speed.iter().fold(T::zero(), |a, &v| a + v) * du;
        let panel_lengths = (0..panels)
            .map(|p| speed[p * panel_size..(p + 1) * panel_size].iter().fold(T::zero(), |a, &v| a + v) * du)
            .collect();
        let mut diameter = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                diameter = diameter.max((nodes[i] - nodes[j]).norm());
            }
        }
        Ok(Self { kind, nodes, dz, d2z, tangents, speed, s, panels, panel_size, panel_lengths, total_length, diameter })
    }

    pub fn kind(&self) -> &ClosedKind<T> {
        &self.kind
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

    /// `dz/du` at the nodes.
    pub fn dz(&self) -> &[Cx<T>] {
        &self.dz
    }

    pub fn d2z(&self) -> &[Cx<T>] {
        &self.d2z
    }

    /// Unit tangents `z'(s)`.
    pub fn tangents(&self) -> &[Cx<T>] {
        &self.tangents
    }

    /// `n+ = i z'(s)`, pointing into the bounded component.
    pub fn normal_plus(&self, k: usize) -> Cx<T> {
        ci::<T>() * self.tangents[k]
    }

    pub fn normal_minus(&self, k: usize) -> Cx<T> {
        -self.normal_plus(k)
    }

    /// Arclength parameter of every node, measured from node 0.
    pub fn arclength(&self) -> &[T] {
        &self.s
    }

    pub fn speed(&self) -> &[T] {
        &self.speed
    }

    /// Uniform trapezoid step in `u`.
    pub fn du(&self) -> T {
        T::TAU() / T::count(self.nodes.len())
    }

    pub fn param(&self, k: usize) -> T {
        self.du() * T::count(k)
    }

    pub fn total_length(&self) -> T {
        self.total_length
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn panel_size(&self) -> usize {
        self.panel_size
    }

    pub fn panel_of(&self, k: usize) -> usize {
        k / self.panel_size
    }

    pub fn panel_length(&self, k: usize) -> T {
        self.panel_lengths[self.panel_of(k)]
    }

    /// Arclength quadrature weights `du |dz/du|`.
    pub fn arclength_weights(&self) -> Vec<T> {
        let du = self.du();
        self.speed.iter().map(|&v| v * du).collect()
    }

    pub fn signed_area(&self) -> T {
        signed_area(&self.nodes)
    }

    pub fn diameter(&self) -> T {
        self.diameter
    }

    /// Near-boundary cutoff, `1e-8` times the diameter.
    pub fn cutoff(&self) -> T {
        T::lit(1e-8) * self.diameter
    }

    /// Radius of curvature at node `k` (infinite on straight pieces).
    pub fn curvature_radius(&self, k: usize) -> T {
        let d1 = self.dz[k];
        let d2 = self.d2z[k];
        let cross = (d1.conj() * d2).im.abs();
        if cross == T::zero() {
            T::infinity()
        } else {
            d1.norm().powi(3) / cross
        }
    }

    /// Distance from `z` to the polyline through the nodes.
    pub fn distance(&self, z: Cx<T>) -> T {
        let n = self.nodes.len();
        (0..n).fold(T::infinity(), |m, k| m.min(segment_distance(z, self.nodes[k], self.nodes[(k + 1) % n])))
    }

    /// Index of the node nearest to `z`.
    pub fn nearest_node(&self, z: Cx<T>) -> usize {
        let mut best = (0, T::infinity());
        for (k, &p) in self.nodes.iter().enumerate() {
            let d = (p - z).norm();
            if d < best.1 {
                best = (k, d);
            }
        }
        best.0
    }

    /// `(z(u), dz/du(u))` at an arbitrary parameter.
    pub fn eval(&self, u: T) -> (Cx<T>, Cx<T>) {
        match &self.kind {
            ClosedKind::NodeChain { points } => {
                let n = points.len();
                let du = self.du();
                let x = u.modulo(T::TAU()) / du;
                let base = x.floor().to_usize().unwrap_or(0) % n;
                let offsets: [i64; 5] = [-2, -1, 0, 1, 2];
                let xs: Vec<T> = offsets.iter().map(|&o| T::lit(o as f64)).collect();
                let w = fornberg_weights(x - T::count(base), &xs);
                let mut z = cx(T::zero(), T::zero());
                let mut d = cx(T::zero(), T::zero());
                for (j, &o) in offsets.iter().enumerate() {
                    let idx = (base as i64 + o).rem_euclid(n as i64) as usize;
                    z = z + points[idx] * w[0][j];
                    d = d + points[idx] * w[1][j];
                }
                (z, d / du)
            }
            kind => {
                let (z, d1, _) = eval_kind(kind, u);
                (z, d1)
            }
        }
    }
}

fn eval_kind<T: Real>(kind: &ClosedKind<T>, u: T) -> (Cx<T>, Cx<T>, Cx<T>) {
    match kind {
        ClosedKind::Circle { center, radius } => {
            let e = cis(u);
            (*center + e * *radius, ci::<T>() * e * *radius, -e * *radius)
        }
        ClosedKind::Ellipse { center, semi_axes: (a, b), rotation } => {
            let rot = cis(*rotation);
            let (s, c) = u.sin_cos();
            (*center + rot * cx(*a * c, *b * s), rot * cx(-*a * s, *b * c), rot * cx(-*a * c, -*b * s))
        }
        ClosedKind::RoundedPolygon(poly) => {
            let scale = poly.length / T::TAU();
            let (z, d1, d2) = poly.eval(u * scale);
            (z, d1 * scale, d2 * (scale * scale))
        }
        ClosedKind::NodeChain { .. } => unreachable!("node chains are evaluated by interpolation"),
    }
}

/// Fourth-order centered differences on a periodic uniform grid.
fn periodic_differences<T: Real>(z: &[Cx<T>], du: T) -> (Vec<Cx<T>>, Vec<Cx<T>>) {
    let n = z.len();
    let at = |k: i64| z[k.rem_euclid(n as i64) as usize];
    let twelve = T::lit(12.0);
    let d1 = (0..n as i64)
        .map(|k| (-at(k + 2) + at(k + 1) * T::lit(8.0) - at(k - 1) * T::lit(8.0) + at(k - 2)) / (twelve * du))
        .collect();
    let d2 = (0..n as i64)
        .map(|k| {
            (-at(k + 2) + at(k + 1) * T::lit(16.0) - at(k) * T::lit(30.0) + at(k - 1) * T::lit(16.0) - at(k - 2))
                / (twelve * du * du)
        })
        .collect();
    (d1, d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;
    use std::f64::consts::PI;

    #[test]
    fn unit_circle_length_and_frame() {
        let c = ClosedContour::circle(C64::new(0.0, 0.0), 1.0, 8, 16).unwrap();
        assert_eq!(c.len(), 128);
        assert!((c.total_length() - 2.0 * PI).abs() < 1e-10);
        for k in 0..c.len() {
            assert!((c.tangents()[k].norm() - 1.0).abs() < 1e-12);
            assert!((c.normal_plus(k) * c.tangents()[k].conj()).re.abs() < 1e-12);
            // inward normal on a ccw circle
            assert!((c.normal_plus(k) + c.nodes()[k]).norm() < 1e-12);
        }
        assert!((c.arclength()[64] - PI).abs() < 1e-12);
    }

    #[test]
    fn rounded_square_is_positively_oriented() {
        let v = [C64::new(0.0, 0.0), C64::new(0.0, 1.0), C64::new(1.0, 1.0), C64::new(1.0, 0.0)];
        let c = ClosedContour::rounded_polygon(&v, 0.1, 16, 16).unwrap();
        assert!(c.signed_area() > 0.0);
        let exact = 4.0 - 8.0 * 0.1 + 2.0 * PI * 0.1;
        assert!((c.total_length() - exact).abs() < 1e-2, "{}", c.total_length());
        let exact_area = 1.0 - (4.0 - PI) * 0.01;
        assert!((c.signed_area() - exact_area).abs() < 1e-3);
    }

    #[test]
    fn too_few_nodes_is_a_resolution_error() {
        let err = ClosedContour::circle(C64::new(0.0, 0.0), 1.0, 1, 8).unwrap_err();
        assert!(matches!(err, Error::Resolution(_)));
    }

    #[test]
    fn self_intersecting_chain_is_rejected() {
        // figure-eight polyline
        let pts: Vec<C64> = (0..64)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 64.0;
                C64::new(t.sin(), (2.0 * t).sin() * 0.5)
            })
            .collect();
        let err = ClosedContour::node_chain(&pts, 1).unwrap_err();
        assert!(matches!(err, Error::Geometry(_)));
    }

    #[test]
    fn clockwise_chain_is_reoriented() {
        let pts: Vec<C64> = (0..32).map(|k| C64::from_polar(1.0, -2.0 * PI * k as f64 / 32.0)).collect();
        let c = ClosedContour::node_chain(&pts, 2).unwrap();
        assert!(c.signed_area() > 0.0);
        let (z, _) = c.eval(c.param(3));
        assert!((z - c.nodes()[3]).norm() < 1e-14);
    }
}
