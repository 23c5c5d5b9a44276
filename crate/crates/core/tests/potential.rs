use num_complex::Complex64 as C64;
use sie::potential::{
    detect_point_masses, equilibrium_density, log_potential, recover_area_density, recover_curve_density, CurveDensity,
    LogPotential, MeasureEstimate, PointMass, PotentialGrid,
};
use sie::{Arc, ArcSystem, ClosedContour, Error};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn circle() -> ClosedContour<f64> {
    ClosedContour::circle(c(0.0, 0.0), 1.0, 16, 16).unwrap()
}

fn segment() -> ArcSystem<f64> {
    ArcSystem::new(vec![Arc::segment(c(-1.0, 0.0), c(1.0, 0.0), 16, 8).unwrap()]).unwrap()
}

/// Green function of the segment plus its Robin constant, branch `~ z` at infinity.
fn segment_potential(z: C64) -> f64 {
    let w = z + (z - 1.0).sqrt() * (z + 1.0).sqrt();
    w.norm().ln() - 2f64.ln()
}

fn circle_potential(z: C64) -> f64 {
    z.norm().ln().max(0.0)
}

#[test]
fn potential_of_uniform_circle_measure() {
    let circ = circle();
    let m = equilibrium_density(&circ).unwrap();
    assert!((m.total_mass - 1.0).abs() < 1e-12);
    assert!((log_potential(&m, c(2.0, 0.0)).unwrap() - 2f64.ln()).abs() < 1e-10);
    assert!(log_potential(&m, c(0.3, 0.0)).unwrap().abs() < 1e-10);
    // on the circle itself and just off it
    assert!(log_potential(&m, c(0.0, 1.0)).unwrap().abs() < 1e-8);
    assert!((log_potential(&m, c(1.0001, 0.0)).unwrap() - 1.0001f64.ln()).abs() < 1e-8);
}

#[test]
fn potential_of_arcsine_measure_is_constant_on_segment() {
    let seg = segment();
    let m = equilibrium_density(&seg).unwrap();
    assert!((m.total_mass - 1.0).abs() < 1e-10);
    let eval = LogPotential::new(&m);
    for x in [0.5, -0.2, 0.93] {
        let v = eval.eval(c(x, 0.0)).unwrap();
        assert!((v + 2f64.ln()).abs() < 1e-6, "x = {x}: {v}");
    }
    let far = c(30.0, 40.0);
    assert!((eval.eval(far).unwrap() - segment_potential(far) - 0.0).abs() < 1e-9);
}

#[test]
fn equilibrium_reference_values() {
    let seg = ArcSystem::new(vec![Arc::segment(c(0.0, 0.0), c(4.0, 0.0), 16, 8).unwrap()]).unwrap();
    let m = equilibrium_density(&seg).unwrap();
    assert!((m.total_mass - 1.0).abs() < 1e-10);
    let shape = sie::potential::EquilibriumShape::of_host((&seg).into()).unwrap();
    assert!((shape.density_at(c(2.0, 0.0)) - 1.0 / (2.0 * PI)).abs() < 1e-15);
    let ell = ClosedContour::ellipse(c(0.0, 0.0), 2.0, 1.0, 0.0, 8, 8).unwrap();
    assert!(matches!(equilibrium_density(&ell), Err(Error::NotImplemented(_))));
}

#[test]
fn recover_uniform_circle_density() {
    let circ = circle();
    let m = recover_curve_density(circle_potential, &circ).unwrap();
    let curve = m.curve.as_ref().unwrap();
    assert!(curve.flagged.is_empty());
    for v in curve.values() {
        assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-6);
    }
    assert!((m.total_mass - 1.0).abs() < 1e-6);
}

#[test]
fn harmonic_addend_changes_nothing() {
    let circ = circle();
    let half = |z: C64| 0.5 * circle_potential(z);
    let base = recover_curve_density(half, &circ).unwrap();
    let plus = recover_curve_density(|z: C64| half(z) + (z - 5.0).norm().ln(), &circ).unwrap();
    let (a, b) = (base.curve.unwrap().values(), plus.curve.unwrap().values());
    let diff = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    assert!(diff <= 1e-6, "{diff}");
    assert!((a[3] - 0.25 / PI).abs() < 1e-6);
}

#[test]
fn recover_arcsine_density() {
    let seg = segment();
    let m = recover_curve_density(segment_potential, &seg).unwrap();
    let curve = m.curve.as_ref().unwrap();
    for (k, x) in seg.nodes().iter().enumerate() {
        if x.re.abs() <= 0.9 {
            let want = 1.0 / (PI * (1.0 - x.re * x.re).sqrt());
            assert!(((curve.value(k) - want) / want).abs() < 1e-4, "x = {x}");
            assert!(!curve.flagged.contains(&k));
        }
    }
    assert!(curve.min() >= -1e-8);
    assert!((m.total_mass - 1.0).abs() < 1e-4, "{}", m.total_mass);
    let eval = LogPotential::new(&m);
    for x in [0.0, 0.4, -0.75] {
        assert!((eval.eval(c(x, 0.0)).unwrap() + 2f64.ln()).abs() < 1e-3);
    }
    for z in [c(0.0, 0.5), c(1.5, -0.3)] {
        assert!((eval.eval(z).unwrap() - segment_potential(z)).abs() < 1e-3);
    }
}

#[test]
fn area_density_of_disk_potential() {
    let h = 0.01;
    let n = 181;
    let u = PotentialGrid::from_fn(n, n, -0.9, -0.9, h, |z: C64| (z.norm_sqr() - 1.0) / 2.0).unwrap();
    let a = recover_area_density(&u).unwrap();
    assert_eq!((a.nx, a.ny), (n - 2, n - 2));
    for j in 0..a.ny {
        for i in 0..a.nx {
            if a.point(i, j).norm() <= 0.8 {
                assert!((a.at(i, j) - 1.0 / PI).abs() < 1e-3);
            }
        }
    }
    let harm = PotentialGrid::from_fn(n, n, -0.9, -0.9, h, |z: C64| (z * z).re).unwrap();
    assert!(recover_area_density(&harm).unwrap().values.iter().all(|v| v.abs() <= 1e-8));
    // only the O(h^2 / r^4) truncation of the stencil remains off the origin
    let log = PotentialGrid::from_fn(41, 41, 0.5, 0.5, 0.05, |z: C64| z.norm().ln()).unwrap();
    let dens = recover_area_density(&log).unwrap();
    for j in 0..dens.ny {
        for i in 0..dens.nx {
            let r = dens.point(i, j).norm();
            assert!(dens.at(i, j).abs() <= 0.05f64.powi(2) / (2.0 * PI * r.powi(4)));
        }
    }
    let coarse = PotentialGrid::from_fn(5, 5, 0.0, 0.0, 0.5, |z: C64| z.re).unwrap();
    assert!(matches!(recover_area_density(&coarse), Err(Error::Resolution(_))));
}

/// Cell-centred lattice on `[-2, 2]^2` avoiding exact hits on charges at lattice points.
fn charge_grid(u: impl Fn(C64) -> f64 + Sync) -> PotentialGrid<f64> {
    PotentialGrid::from_fn(202, 202, -2.01, -2.01, 0.02, u).unwrap()
}

/// Green's identity oracle: `(1 / 2 pi) \oint du/dn ds` on a circle by dense trapezoid.
fn flux_mass(u: impl Fn(C64) -> f64, centre: C64, r: f64) -> f64 {
    let n = 4000;
    let dr = 1e-5;
    (0..n)
        .map(|k| {
            let e = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            (u(centre + e * (r + dr)) - u(centre + e * (r - dr))) / (2.0 * dr) * r * 2.0 * PI / n as f64
        })
        .sum::<f64>()
        / (2.0 * PI)
}

#[test]
fn point_masses_of_two_charges() {
    let u = |z: C64| (z * z - 1.0).norm().ln();
    let masses = detect_point_masses(&charge_grid(u), 0.5).unwrap();
    assert_eq!(masses.len(), 2);
    for p in &masses {
        let target = if p.location.re > 0.0 { c(1.0, 0.0) } else { c(-1.0, 0.0) };
        assert!((p.location - target).norm() <= 0.04);
        assert!((p.mass - flux_mass(u, target, 0.5)).abs() < 1e-2);
        assert!((p.mass - 1.0).abs() < 1e-2, "{}", p.mass);
        assert!(!p.ambiguous);
    }
}

#[test]
fn single_and_scaled_charges() {
    let one = detect_point_masses(&charge_grid(|z| z.norm().ln()), 0.5).unwrap();
    assert_eq!(one.len(), 1);
    assert!(one[0].location.norm() < 0.04 && (one[0].mass - 1.0).abs() < 1e-2);
    let two = detect_point_masses(&charge_grid(|z| 2.0 * (z - c(0.0, 1.0)).norm().ln()), 0.5).unwrap();
    assert_eq!(two.len(), 1);
    assert!((two[0].location - c(0.0, 1.0)).norm() < 0.04 && (two[0].mass - 2.0).abs() < 2e-2);
    let close = detect_point_masses(&charge_grid(|z| ((z - 0.3) * (z + 0.3)).norm().ln()), 0.5).unwrap();
    assert!(close.iter().all(|p| p.ambiguous) || close.len() == 1);
}

#[test]
fn log_potential_of_point_masses() {
    let m = MeasureEstimate::from_point_masses(vec![
        PointMass { location: c(1.0, 0.0), mass: 1.0, ambiguous: false },
        PointMass { location: c(-1.0, 0.0), mass: 1.0, ambiguous: false },
    ]);
    assert_eq!(m.total_mass, 2.0);
    let z = c(0.3, 0.7);
    assert!((log_potential(&m, z).unwrap() - (z * z - 1.0).norm().ln()).abs() < 1e-14);
    assert!(matches!(log_potential(&m, c(1.0, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn area_measure_potential_matches_disk() {
    let h = 0.01;
    let u = |z: C64| if z.norm() < 1.0 { (z.norm_sqr() - 1.0) / 2.0 } else { z.norm().ln() };
    let grid = PotentialGrid::from_fn(221, 221, -1.1, -1.1, h, |z: C64| (z.norm_sqr() - 1.0) / 2.0).unwrap();
    let mut a = recover_area_density(&grid).unwrap();
    // keep the unit disk only
    for j in 0..a.ny {
        for i in 0..a.nx {
            if a.point(i, j).norm() > 1.0 {
                a.values[j * a.nx + i] = 0.0;
            }
        }
    }
    let m = MeasureEstimate::from_area(a);
    assert!((m.total_mass - 1.0).abs() < 1e-2);
    for z in [c(2.0, 0.0), c(0.0, 0.0), c(0.5, 0.2)] {
        assert!((log_potential(&m, z).unwrap() - u(z)).abs() < 1e-2);
    }
}

#[test]
fn curve_density_csv_has_a_row_per_node() {
    let circ = ClosedContour::circle(c(0.0, 0.0), 1.0, 4, 4).unwrap();
    let m = MeasureEstimate::from_curve(CurveDensity::new(&circ, vec![0.5; 16]).unwrap());
    let mut out = Vec::new();
    m.write_curve_csv(&mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap().lines().count(), 17);
    assert!((m.total_mass - PI).abs() < 1e-12);
}
