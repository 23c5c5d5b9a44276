use num_complex::Complex64 as C64;
use sie::arc_solver::{
    bounded_solution, candidate_f0, defect_polynomial, general_solution, holder_diagnostic, homogeneous_basis,
    modified_residual, polynomial_part_with_sqrt_r, solvability_moments, BoundedOptions,
};
use sie::cauchy::singular_s;
use sie::chebyshev::chebyshev_t_complex;
use sie::closed_solver::{involution_residual, solve_closed};
use sie::density::{SampledDensity, Weighting};
use sie::{Arc, ArcSystem, ClosedContour, ComplexPolynomial, Error};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn segment(panels: usize) -> ArcSystem<f64> {
    ArcSystem::new(vec![Arc::segment(c(-1.0, 0.0), c(1.0, 0.0), panels, 8).unwrap()]).unwrap()
}

fn two_intervals() -> ArcSystem<f64> {
    ArcSystem::new(vec![
        Arc::segment(c(-1.0, 0.0), c(-0.3, 0.0), 16, 8).unwrap(),
        Arc::segment(c(0.2, 0.0), c(1.0, 0.0), 16, 8).unwrap(),
    ])
    .unwrap()
}

/// `U_{n-1}(x)` by its trigonometric definition.
fn cheb_u(n_minus_1: i32, x: f64) -> f64 {
    let th = x.acos();
    ((n_minus_1 + 1) as f64 * th).sin() / th.sin()
}

#[test]
fn closed_examples() {
    let circ = ClosedContour::circle(c(0.0, 0.0), 1.0, 16, 32).unwrap();
    let g = SampledDensity::from_fn(&circ, |t| t + 1.0 / t).unwrap();
    let sol = solve_closed(&g).unwrap();
    let want = SampledDensity::from_fn(&circ, |t| t - 1.0 / t).unwrap();
    assert!(sol.solution.max_diff(&want) < 1e-9);
    assert!(sol.warning.is_none());
    let zero = SampledDensity::zeros(&circ);
    assert_eq!(solve_closed(&zero).unwrap().solution.max_abs(), 0.0);
    let one = SampledDensity::from_fn(&circ, |_| c(1.0, 0.0)).unwrap();
    assert!(involution_residual(&one).unwrap() <= 1e-12);
    let seg = segment(4);
    let on_arc = SampledDensity::zeros(&seg);
    assert!(matches!(solve_closed(&on_arc), Err(Error::Invalid(_))));
}

#[test]
fn involution_on_ellipse() {
    let ell = ClosedContour::ellipse(c(0.0, 0.0), 2.0, 1.0, 0.0, 64, 16).unwrap();
    assert!((ell.total_length() - 9.688448220547675).abs() < 1e-10);
    let g = SampledDensity::from_fn(&ell, |t| t * t).unwrap();
    assert!(involution_residual(&g).unwrap() <= 1e-7);
}

#[test]
fn closed_solver_is_deterministic() {
    let circ = ClosedContour::circle(c(0.2, -0.1), 1.5, 8, 16).unwrap();
    let g = SampledDensity::from_fn(&circ, |t| (t * 0.7).exp()).unwrap();
    let a = solve_closed(&g).unwrap().solution.into_values();
    let b = solve_closed(&g).unwrap().solution.into_values();
    assert!(a.iter().zip(&b).all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
}

#[test]
fn homogeneous_kernel() {
    let seg = segment(16);
    let basis = homogeneous_basis(&seg);
    assert_eq!(basis.len(), 1);
    assert!(singular_s(&basis[0]).unwrap().max_abs() <= 1e-8);
    let two = two_intervals();
    let basis = homogeneous_basis(&two);
    assert_eq!(basis.len(), 2);
    for h in &basis {
        assert!(singular_s(h).unwrap().max_abs() <= 1e-6);
    }
    // scaling
    let scaled = basis[1].scale(c(3.0, -4.0));
    let r1 = singular_s(&basis[1]).unwrap().max_abs();
    let r5 = singular_s(&scaled).unwrap().max_abs();
    assert!(r5 <= 5.0 * r1 * (1.0 + 1e-9) + 1e-15);
}

#[test]
fn moments_on_segment() {
    let seg = segment(16);
    let t = SampledDensity::from_fn(&seg, |t| t).unwrap();
    assert!(solvability_moments(&t).unwrap()[0].norm() <= 1e-12);
    let one = SampledDensity::from_fn(&seg, |_| c(1.0, 0.0)).unwrap();
    assert!((solvability_moments(&one).unwrap()[0] - c(0.0, -PI)).norm() <= 1e-10);
    for n in 1..=6 {
        let g = SampledDensity::from_fn(&seg, |t| chebyshev_t_complex(n, t)).unwrap();
        assert!(solvability_moments(&g).unwrap()[0].norm() <= 1e-10);
    }
}

#[test]
fn general_solution_examples() {
    let seg = segment(16);
    let one = SampledDensity::from_fn(&seg, |_| c(1.0, 0.0)).unwrap();
    let f = general_solution(&one, &ComplexPolynomial::zero()).unwrap();
    for (x, v) in seg.nodes().iter().zip(f.values()) {
        if x.re.abs() <= 0.9 {
            let want = c(0.0, x.re / (1.0 - x.re * x.re).sqrt());
            assert!((v - want).norm() <= 1e-7, "{x}: {v} vs {want}");
        }
    }
    assert!(singular_s(&f).unwrap().max_diff(&one) <= 1e-6);
    let zero = SampledDensity::zeros(&seg);
    let cst = c(0.5, 2.0);
    let h = general_solution(&zero, &ComplexPolynomial::constant(cst)).unwrap();
    for (x, v) in seg.nodes().iter().zip(h.values()) {
        let want = cst / (c(0.0, 1.0) * (1.0 - x.re * x.re).sqrt());
        assert!((v - want).norm() <= 1e-12 * want.norm());
    }
    let too_high = ComplexPolynomial::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
    assert!(general_solution(&one, &too_high).is_err());
}

#[test]
fn candidate_f0_examples() {
    let seg = segment(16);
    for n in 1..=2usize {
        let g = SampledDensity::from_fn(&seg, |t| chebyshev_t_complex(n, t)).unwrap();
        let f0 = candidate_f0(&g).unwrap();
        for (x, v) in seg.nodes().iter().zip(f0.values()) {
            let want = c(0.0, -(1.0 - x.re * x.re).sqrt() * cheb_u(n as i32 - 1, x.re));
            assert!((v - want).norm() <= 1e-8, "n={n} x={x}");
        }
    }
    let one = SampledDensity::from_fn(&seg, |_| c(1.0, 0.0)).unwrap();
    assert!(candidate_f0(&one).unwrap().max_abs() <= 1e-9);
}

#[test]
fn defect_polynomial_examples() {
    let seg = segment(16);
    let q = seg.sqrt_r_polynomial_part();
    let d = q.divided_difference();
    assert!((d[0][0] - c(1.0, 0.0)).norm() < 1e-15);
    let one = SampledDensity::from_fn(&seg, |_| c(1.0, 0.0)).unwrap();
    let p = defect_polynomial(&one).unwrap();
    assert!((p.coeff(0) - c(-1.0, 0.0)).norm() <= 1e-10);
    let t1 = SampledDensity::from_fn(&seg, |t| t).unwrap();
    assert!(defect_polynomial(&t1).unwrap().coeff(0).norm() <= 1e-10);
    // an off-centre segment: Q(z, t) is still identically one
    let other = ArcSystem::new(vec![Arc::segment(c(0.3, 1.0), c(2.0, -0.5), 4, 8).unwrap()]).unwrap();
    let dd = other.sqrt_r_polynomial_part().divided_difference();
    assert!((dd[0][0] - c(1.0, 0.0)).norm() < 1e-14);
}

#[test]
fn modified_residual_examples() {
    let seg = segment(16);
    let one = SampledDensity::from_fn(&seg, |_| c(1.0, 0.0)).unwrap();
    assert!(modified_residual(&one).unwrap() <= 1e-8);
    let t3 = SampledDensity::from_fn(&seg, |t| chebyshev_t_complex(3, t)).unwrap();
    assert!(modified_residual(&t3).unwrap() <= 1e-7);
    let two = two_intervals();
    let t = SampledDensity::from_fn(&two, |t| t).unwrap();
    assert!(modified_residual(&t).unwrap() <= 1e-5);
}

#[test]
fn bounded_solution_examples() {
    let seg = segment(16);
    let t2 = SampledDensity::from_fn(&seg, |t| chebyshev_t_complex(2, t)).unwrap();
    let rep = bounded_solution(&t2, BoundedOptions::default()).unwrap();
    assert!(rep.bounded);
    assert!(rep.residual <= 1e-6);
    assert!(rep.endpoint_values.iter().all(|v| *v == Some(c(0.0, 0.0))));
    let one = SampledDensity::from_fn(&seg, |_| c(1.0, 0.0)).unwrap();
    let rep = bounded_solution(&one, BoundedOptions::default()).unwrap();
    assert!(!rep.bounded);
    assert!((rep.moments[0] - c(0.0, -PI)).norm() < 1e-10);
    assert!((rep.defect_poly.coeff(0) + 1.0).norm() < 1e-10);
    assert!(rep.endpoint_values.iter().all(Option::is_none));
    let zero = SampledDensity::zeros(&seg);
    let rep = bounded_solution(&zero, BoundedOptions::default()).unwrap();
    assert!(rep.bounded && rep.solution.max_abs() == 0.0);
}

#[test]
fn f0_and_general_solution_differ_by_kernel_element() {
    let two = two_intervals();
    let t = SampledDensity::from_fn(&two, |t| t * t).unwrap();
    let m = solvability_moments(&t).unwrap();
    let one = SampledDensity::from_fn(&two, |_| c(1.0, 0.0)).unwrap();
    let lin = SampledDensity::from_fn(&two, |t| t).unwrap();
    let (m1, ml) = (solvability_moments(&one).unwrap(), solvability_moments(&lin).unwrap());
    // t^2 + a + b t with both moments zero
    let det = m1[0] * ml[1] - m1[1] * ml[0];
    let a = (-m[0] * ml[1] + m[1] * ml[0]) / det;
    let b = (-m1[0] * m[1] + m1[1] * m[0]) / det;
    let g = SampledDensity::from_fn(&two, |t| t * t + a + b * t).unwrap();
    let f0 = candidate_f0(&g).unwrap();
    let gen = general_solution(&g, &ComplexPolynomial::zero()).unwrap();
    let diff = f0.axpy(c(-1.0, 0.0), &gen).unwrap().with_weighting(Weighting::Chebyshev);
    // project onto the kernel by least squares on sqrt(R)_+ * diff, which is linear
    let plus = two.sqrt_r_plus_nodes();
    let w: Vec<C64> = diff.values().iter().zip(&plus).map(|(d, r)| d * r).collect();
    let xs = two.nodes();
    let (mut s00, mut s01, mut s11, mut r0, mut r1) = (0.0, 0.0, 0.0, c(0.0, 0.0), c(0.0, 0.0));
    for (x, v) in xs.iter().zip(&w) {
        s00 += 1.0;
        s01 += x.re;
        s11 += x.re * x.re;
        r0 += v;
        r1 += v * x.re;
    }
    let dd = s00 * s11 - s01 * s01;
    let c0 = (r0 * s11 - r1 * s01) / dd;
    let c1 = (r1 * s00 - r0 * s01) / dd;
    let fit = xs.iter().zip(&w).fold(0.0f64, |m, (x, v)| m.max((v - (c0 + c1 * x.re)).norm()));
    assert!(fit <= 1e-6, "{fit}");
    let basis = homogeneous_basis(&two);
    let shifted = f0.axpy(c(0.7, 0.1), &basis[1]).unwrap();
    let r0 = singular_s(&f0).unwrap().max_diff(&g);
    let r1 = singular_s(&shifted).unwrap().max_diff(&g);
    assert!(r1 <= 2.0 * r0.max(1e-6));
}

#[test]
fn holder_quotients() {
    let quotient = |panels| {
        let seg = segment(panels);
        let g = SampledDensity::from_fn(&seg, |t| t).unwrap();
        holder_diagnostic(&candidate_f0(&g).unwrap(), 0.1, 0.99).unwrap()
    };
    let (q1, q2) = (quotient(16), quotient(32));
    assert!(q1.is_finite() && ((q2 - q1) / q1).abs() <= 0.1, "{q1} {q2}");
    let seg = segment(16);
    let h = &homogeneous_basis(&seg)[0];
    let wide = holder_diagnostic(h, 0.1, 1.0).unwrap();
    let narrow = holder_diagnostic(h, 1e-3, 1.0).unwrap();
    assert!(wide.is_finite() && narrow >= 10.0 * wide);
    assert!(matches!(holder_diagnostic(h, 5.0, 1.0), Err(Error::Range(_))));
}

#[test]
fn sqrt_r_product_polynomial_part() {
    // P = 1 on [-1, 1]: sqrt(z^2 - 1) = z - 1/(2z) + ..., so T = z
    let seg = segment(4);
    let t = polynomial_part_with_sqrt_r(&ComplexPolynomial::constant(c(1.0, 0.0)), &seg);
    assert!((t.coeff(1) - 1.0).norm() < 1e-15 && t.coeff(0).norm() < 1e-15);
    // P = z: z sqrt(z^2 - 1) = z^2 - 1/2 + ...
    let t = polynomial_part_with_sqrt_r(&ComplexPolynomial::new(vec![c(0.0, 0.0), c(1.0, 0.0)]), &seg);
    assert!((t.coeff(2) - 1.0).norm() < 1e-15 && (t.coeff(0) + 0.5).norm() < 1e-15);
    assert!(t.degree().unwrap() <= 2 * seg.arc_count() - 1 + 1);
}
