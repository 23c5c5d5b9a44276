use approx::assert_abs_diff_eq;
use num_complex::Complex64 as C64;
use sie::density::{SampledDensity, Weighting};
use sie::quadrature::{build_rule, integrate, pv_integrate, pv_integrate_interpolated, Panel, RuleKind};
use sie::{Arc, ArcSystem, ClosedContour, Error};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn segment(panels: usize) -> ArcSystem<f64> {
    ArcSystem::new(vec![Arc::segment(c(-1.0, 0.0), c(1.0, 0.0), panels, 8).unwrap()]).unwrap()
}

#[test]
fn contour_integral_of_entire_function_vanishes() {
    let circle = ClosedContour::circle(c(0.0, 0.0), 1.0, 4, 16).unwrap();
    let f = SampledDensity::from_fn(&circle, |t| t).unwrap();
    assert!(f.integral().norm() < 1e-12);
    let g = SampledDensity::from_fn(&circle, |t| 1.0 / t).unwrap();
    assert!((g.integral() - c(0.0, 2.0 * PI)).norm() < 1e-12);
}

#[test]
fn arcsine_integral_by_chebyshev_rule() {
    let rule = build_rule(Panel::reference(), RuleKind::ChebyshevFirst, 16).unwrap();
    let ones = vec![c(1.0, 0.0); 16];
    assert_abs_diff_eq!(integrate(&ones, &rule).unwrap().re, PI, epsilon = 1e-12);
    let gl = build_rule(Panel::reference(), RuleKind::GaussLegendre, 8).unwrap();
    let sq: Vec<C64> = gl.nodes.iter().map(|&x| c(x * x, 0.0)).collect();
    assert_abs_diff_eq!(integrate(&sq, &gl).unwrap().re, 2.0 / 3.0, epsilon = 1e-14);
    assert!(matches!(integrate(&sq[..3], &gl), Err(Error::Alignment { expected: 8, got: 3 })));
}

#[test]
fn second_kind_chebyshev_weights_match_moments() {
    let rule = build_rule::<f64>(Panel::reference(), RuleKind::ChebyshevSecond, 4).unwrap();
    for (k, w) in rule.weights.iter().enumerate() {
        let s = ((k + 1) as f64 * PI / 5.0).sin();
        assert_abs_diff_eq!(*w, PI / 5.0 * s * s, epsilon = 1e-15);
    }
    // moments of sqrt(1 - t^2): pi/2, 0, pi/8, 0, pi/16
    let moments = [PI / 2.0, 0.0, PI / 8.0, 0.0, PI / 16.0];
    for (m, want) in moments.iter().enumerate() {
        let got: f64 = rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| w * x.powi(m as i32)).sum();
        assert_abs_diff_eq!(got, *want, epsilon = 1e-14);
    }
}

#[test]
fn pv_of_constant_on_segment_is_log_ratio_at_every_node() {
    let sys = segment(8);
    let one = SampledDensity::from_fn(&sys, |_| c(1.0, 0.0)).unwrap();
    for &x in sys.nodes() {
        let v = pv_integrate(&one, x).unwrap();
        let want = ((1.0 - x.re) / (1.0 + x.re)).ln();
        assert!((v - c(want, 0.0)).norm() < 1e-10, "x = {x}: {v}");
    }
    let off = pv_integrate_interpolated(&one, c(0.3, 0.0)).unwrap();
    assert!((off - c((0.7f64 / 1.3).ln(), 0.0)).norm() < 1e-12);
    assert!(matches!(pv_integrate(&one, c(0.3, 0.0)), Err(Error::InterpolationRequired(_))));
    assert!(matches!(pv_integrate(&one, c(1.0, 0.0)), Err(Error::EndpointSingularity { .. })));
}

#[test]
fn pv_half_residue_on_circle() {
    let circle = ClosedContour::circle(c(0.0, 0.0), 1.0, 8, 16).unwrap();
    let one = SampledDensity::from_fn(&circle, |_| c(1.0, 0.0)).unwrap();
    for &x in circle.nodes().iter().step_by(7) {
        assert!((pv_integrate(&one, x).unwrap() - c(0.0, PI)).norm() < 1e-10);
    }
}

/// Dense brute force of `PV int g(t) / (sqrt(1 - t^2) (t - x)) dt`: the pole is removed by
/// subtracting its local value, the rest is summed by the midpoint rule in
/// `theta = acos t` with `n` points, and the subtracted term is added back in closed form.
fn brute_force_pv_chebyshev(g: impl Fn(f64) -> f64, x: f64, n: usize) -> f64 {
    let c0 = g(x) / (1.0 - x * x).sqrt();
    let h = PI / n as f64;
    let smooth: f64 =
        (0..n).map(|k| (k as f64 + 0.5) * h).map(|th| h * (g(th.cos()) - c0 * th.sin()) / (th.cos() - x)).sum();
    smooth + c0 * ((1.0 - x) / (1.0 + x)).ln()
}

#[test]
fn pv_with_inverse_sqrt_weight_vanishes_for_constants() {
    let sys = segment(8);
    let w = SampledDensity::from_fn(&sys, |t| c(1.0 / (1.0 - t.re * t.re).sqrt(), 0.0))
        .unwrap()
        .with_weighting(Weighting::Chebyshev);
    let v = pv_integrate_interpolated(&w, c(0.4, 0.0)).unwrap();
    let oracle = brute_force_pv_chebyshev(|_| 1.0, 0.4, 100_000);
    assert!(v.norm() < 1e-10);
    assert!(oracle.abs() < 1e-8, "{oracle}");
    let node = sys.nodes()[37];
    assert!(pv_integrate(&w, node).unwrap().norm() < 1e-10);
}

#[test]
fn pv_converges_at_least_quadratically_under_refinement() {
    // PV int e^t dt / (t - x) on [-1, 1] at x = 0.3
    let exact = {
        let sys = segment(32);
        let f = SampledDensity::from_fn(&sys, |t| t.exp()).unwrap();
        pv_integrate_interpolated(&f, c(0.3, 0.0)).unwrap()
    };
    let err = |panels| {
        let sys = segment(panels);
        let f = SampledDensity::from_fn(&sys, |t| t.exp()).unwrap();
        (pv_integrate_interpolated(&f, c(0.3, 0.0)).unwrap() - exact).norm()
    };
    let (e1, e2) = (err(1), err(2));
    assert!(e2 <= e1 / 4.0 || e2 < 1e-13, "{e1} {e2}");
}
