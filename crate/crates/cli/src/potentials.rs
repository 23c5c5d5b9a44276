//! Built-in potentials named in a config.

use num_complex::Complex64;

use crate::config::{PotentialTerm, RunConfig};
use crate::CliError;

fn c([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

fn term(t: &PotentialTerm, z: Complex64) -> f64 {
    match *t {
        PotentialTerm::DiskEquilibrium { center, radius, weight } => weight * (z - c(center)).norm().max(radius).ln(),
        PotentialTerm::SegmentEquilibrium { a, b, weight } => {
            let (a, b) = (c(a), c(b));
            let rho = (b - a) / 2.0;
            let w = (z - (a + b) / 2.0) / rho;
            let joukowski = w + (w - 1.0).sqrt() * (w + 1.0).sqrt();
            weight * (joukowski.norm().ln() - 2f64.ln() + rho.norm().ln())
        }
        PotentialTerm::DiskArea { center, radius, weight } => {
            let d = (z - c(center)).norm();
            let u = if d < radius { (d * d / (radius * radius) - 1.0) / 2.0 + radius.ln() } else { d.ln() };
            weight * u
        }
        PotentialTerm::LogAbs { point, weight } => weight * (z - c(point)).norm().ln(),
    }
}

/// Sum of the configured terms.
pub fn evaluator(cfg: &RunConfig) -> Result<impl Fn(Complex64) -> f64 + Sync + '_, CliError> {
    if cfg.potential.is_empty() {
        return Err(cfg.schema_error("potential", "missing `potential` terms"));
    }
    for t in &cfg.potential {
        let bad = match *t {
            PotentialTerm::DiskEquilibrium { radius, .. } | PotentialTerm::DiskArea { radius, .. } => {
                radius.is_nan() || radius <= 0.0
            }
            PotentialTerm::SegmentEquilibrium { a, b, .. } => a == b,
            PotentialTerm::LogAbs { .. } => false,
        };
        if bad {
            return Err(cfg.schema_error("potential", "degenerate potential term"));
        }
    }
    Ok(move |z: Complex64| cfg.potential.iter().map(|t| term(t, z)).sum())
}
