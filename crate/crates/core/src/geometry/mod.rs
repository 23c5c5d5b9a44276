//! Closed contours, arc systems and the branch of `sqrt(R)`.

mod arcs;
mod contour;
pub mod spec;

pub use arcs::{Arc, ArcKind, ArcSystem};
pub use contour::{ClosedContour, ClosedKind};

use crate::scalar::{Cx, Real};

/// Shoelace signed area of a closed polygon; positive for counter-clockwise order.
pub fn signed_area<T: Real>(points: &[Cx<T>]) -> T {
    let n = points.len();
    let mut acc = T::zero();
    for k in 0..n {
        let (p, q) = (points[k], points[(k + 1) % n]);
        acc = acc + (p.re * q.im - q.re * p.im);
    }
    acc * T::lit(0.5)
}

/// Distance from `z` to the segment `[p, q]`.
pub(crate) fn segment_distance<T: Real>(z: Cx<T>, p: Cx<T>, q: Cx<T>) -> T {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == T::zero() {
        return (z - p).norm();
    }
    let s = ((z - p) * d.conj()).re / len2;
    let s = s.max(T::zero()).min(T::one());
    (z - (p + d * s)).norm()
}

fn orient<T: Real>(a: Cx<T>, b: Cx<T>, c: Cx<T>) -> T {
    ((b - a) * (c - a).conj()).im
}

/// True when the closed segments `[p1, p2]` and `[q1, q2]` share a point.
pub(crate) fn segments_intersect<T: Real>(p1: Cx<T>, p2: Cx<T>, q1: Cx<T>, q2: Cx<T>) -> bool {
    let (pmin_x, pmax_x) = (p1.re.min(p2.re), p1.re.max(p2.re));
    let (pmin_y, pmax_y) = (p1.im.min(p2.im), p1.im.max(p2.im));
    if q1.re.max(q2.re) < pmin_x || q1.re.min(q2.re) > pmax_x || q1.im.max(q2.im) < pmin_y || q1.im.min(q2.im) > pmax_y
    {
        return false;
    }
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    let zero = T::zero();
    if ((d1 > zero && d2 < zero) || (d1 < zero && d2 > zero)) && ((d3 > zero && d4 < zero) || (d3 < zero && d4 > zero))
    {
        return true;
    }
    let on = |a: Cx<T>, b: Cx<T>, c: Cx<T>, d: T| {
        d == zero
            && c.re >= a.re.min(b.re)
            && c.re <= a.re.max(b.re)
            && c.im >= a.im.min(b.im)
            && c.im <= a.im.max(b.im)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

/// Index pair of the first two non-adjacent intersecting edges of a polyline.
pub(crate) fn polyline_self_intersection<T: Real>(points: &[Cx<T>], closed: bool) -> Option<(usize, usize)> {
    let n = points.len();
    let edges = if closed { n } else { n.saturating_sub(1) };
    for i in 0..edges {
        let (p1, p2) = (points[i], points[(i + 1) % n]);
        for j in (i + 2)..edges {
            if closed && i == 0 && j == edges - 1 {
                continue;
            }
            let (q1, q2) = (points[j], points[(j + 1) % n]);
            if segments_intersect(p1, p2, q1, q2) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Even-odd point-in-polygon test.
pub(crate) fn inside_polygon<T: Real>(points: &[Cx<T>], z: Cx<T>) -> bool {
    let n = points.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (pi, pj) = (points[i], points[j]);
        if (pi.im > z.im) != (pj.im > z.im) {
            let x = pj.re + (z.im - pj.im) * (pi.re - pj.re) / (pi.im - pj.im);
            if z.re < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Finite-difference weights for derivatives `0..=2` at `x0` from the stencil `xs` (Fornberg).
pub(crate) fn fornberg_weights<T: Real>(x0: T, xs: &[T]) -> [Vec<T>; 3] {
    let n = xs.len();
    let mut c = vec![[T::zero(); 3]; n];
    let mut c1 = T::one();
    let mut c4 = xs[0] - x0;
    c[0][0] = T::one();
    for i in 1..n {
        let mm = i.min(2);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 = c2 * c3;
            if j == i - 1 {
                for k in (1..=mm).rev() {
                    c[i][k] = c1 * (T::count(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mm).rev() {
                c[j][k] = (c4 * c[j][k] - T::count(k) * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    [c.iter().map(|r| r[0]).collect(), c.iter().map(|r| r[1]).collect(), c.iter().map(|r| r[2]).collect()]
}
