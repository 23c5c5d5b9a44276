//! Potentials sampled on a uniform lattice: area densities from the five-point
//! Laplacian and point masses from clusters of large Laplacian.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

/// Largest grid spacing accepted by the recovery routines.
pub const MAX_SPACING: f64 = 0.1;

/// Lattice header: `nx * ny` samples at `(x0 + i h, y0 + j h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
}

/// Row-major samples, `values[j * nx + i] = u(x0 + i h, y0 + j h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialGrid<T> {
    pub nx: usize,
    pub ny: usize,
    pub x0: T,
    pub y0: T,
    pub h: T,
    pub values: Vec<T>,
}

impl<T: Real> PotentialGrid<T> {
    pub fn new(nx: usize, ny: usize, x0: T, y0: T, h: T, values: Vec<T>) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::Invalid(format!("grid {nx}x{ny} is too small for a five-point stencil")));
        }
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::Invalid("grid spacing must be positive".into()));
        }
        if values.len() != nx * ny {
            return Err(Error::Alignment { expected: nx * ny, got: values.len() });
        }
        if let Some(node) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { node });
        }
        Ok(Self { nx, ny, x0, y0, h, values })
    }

    pub fn from_fn(nx: usize, ny: usize, x0: T, y0: T, h: T, u: impl Fn(Cx<T>) -> T + Sync) -> Result<Self> {
        let values =
            (0..nx * ny).into_par_iter().map(|k| u(cx(x0 + h * T::count(k % nx), y0 + h * T::count(k / nx)))).collect();
        Self::new(nx, ny, x0, y0, h, values)
    }

    pub fn header(&self) -> GridHeader {
        GridHeader {
            nx: self.nx,
            ny: self.ny,
            x0: self.x0.to_f64_lossy(),
            y0: self.y0.to_f64_lossy(),
            h: self.h.to_f64_lossy(),
        }
    }

    pub fn point(&self, i: usize, j: usize) -> Cx<T> {
        cx(self.x0 + self.h * T::count(i), self.y0 + self.h * T::count(j))
    }

    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[j * self.nx + i]
    }

    /// Five-point Laplacian on the interior, `(nx - 2) x (ny - 2)` row-major.
    pub fn laplacian(&self) -> Vec<T> {
        let (nx, ny) = (self.nx, self.ny);
        let h2 = self.h * self.h;
        (0..(nx - 2) * (ny - 2))
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k % (nx - 2) + 1, k / (nx - 2) + 1);
                let c = self.at(i, j);
                (self.at(i - 1, j) + self.at(i + 1, j) + self.at(i, j - 1) + self.at(i, j + 1) - T::lit(4.0) * c) / h2
            })
            .collect()
    }

    /// `10 / h^2 * eps * max|u|`: second differences below this are rounding.
    pub fn noise_threshold(&self) -> T {
        let umax = self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        T::lit(10.0) / (self.h * self.h) * T::epsilon() * umax
    }

    /// Reads `x,y,u` rows (header line optional) covering a full uniform lattice.
    pub fn from_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
        let mut rows: Vec<(f64, f64, f64)> = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Invalid(format!("line {}: {e}", line + 1)))?;
            let parsed: Vec<Option<f64>> = rec.iter().map(|s| s.parse().ok()).collect();
            match parsed.as_slice() {
                [Some(x), Some(y), Some(u)] => rows.push((*x, *y, *u)),
                _ if line == 0 => continue,
                _ => return Err(Error::Invalid(format!("line {}: expected x,y,u", line + 1))),
            }
        }
        let axis = |pick: fn(&(f64, f64, f64)) -> f64| {
            let mut v: Vec<f64> = rows.iter().map(pick).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        };
        let (xs, ys) = (axis(|r| r.0), axis(|r| r.1));
        if xs.len() < 2 || ys.len() < 2 {
            return Err(Error::Invalid("grid needs at least two distinct x and y values".into()));
        }
        let h = xs[1] - xs[0];
        let uniform = |v: &[f64]| v.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1.0));
        if !uniform(&xs) || !uniform(&ys) {
            return Err(Error::Invalid("grid points are not on a uniform lattice".into()));
        }
        let (nx, ny) = (xs.len(), ys.len());
        let mut values = vec![f64::NAN; nx * ny];
        for &(x, y, u) in &rows {
            let i = ((x - xs[0]) / h).round() as usize;
            let j = ((y - ys[0]) / h).round() as usize;
            values[j * nx + i] = u;
        }
        if let Some(k) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::Invalid(format!("grid point ({}, {}) missing", xs[k % nx], ys[k / nx])));
        }
        Self::new(nx, ny, T::lit(xs[0]), T::lit(ys[0]), T::lit(h), values.into_iter().map(T::lit).collect())
    }

    /// One JSON header line, then `nx * ny` little-endian `f64` values.
    pub fn read_binary(mut reader: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        reader.read_to_end(&mut bytes).map_err(|e| Error::Invalid(e.to_string()))?;
        let split =
            bytes.iter().position(|&b| b == b'\n').ok_or_else(|| Error::Invalid("missing header line".into()))?;
        let hdr: GridHeader =
            serde_json::from_slice(&bytes[..split]).map_err(|e| Error::Invalid(format!("header: {e}")))?;
        let body = &bytes[split + 1..];
        if body.len() != 8 * hdr.nx * hdr.ny {
            return Err(Error::Alignment { expected: hdr.nx * hdr.ny, got: body.len() / 8 });
        }
        let values = body.chunks_exact(8).map(|c| T::lit(f64::from_le_bytes(c.try_into().expect("8 bytes")))).collect();
        Self::new(hdr.nx, hdr.ny, T::lit(hdr.x0), T::lit(hdr.y0), T::lit(hdr.h), values)
    }

    pub fn write_binary(&self, mut w: impl Write) -> std::io::Result<()> {
        serde_json::to_writer(&mut w, &self.header())?;
        w.write_all(b"\n")?;
        for v in &self.values {
            w.write_all(&v.to_f64_lossy().to_le_bytes())?;
        }
        Ok(())
    }

    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "x,y,u")?;
        for j in 0..self.ny {
            for i in 0..self.nx {
                let p = self.point(i, j);
                writeln!(
                    w,
                    "{:.16e},{:.16e},{:.16e}",
                    p.re.to_f64_lossy(),
                    p.im.to_f64_lossy(),
                    self.at(i, j).to_f64_lossy()
                )?;
            }
        }
        Ok(())
    }
}

/// Density per unit area on the interior cells of a [`PotentialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct AreaDensity<T> {
    pub nx: usize,
    pub ny: usize,
    pub x0: T,
    pub y0: T,
    pub h: T,
    pub values: Vec<T>,
}

impl<T: Real> AreaDensity<T> {
    pub fn point(&self, i: usize, j: usize) -> Cx<T> {
        cx(self.x0 + self.h * T::count(i), self.y0 + self.h * T::count(j))
    }

    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[j * self.nx + i]
    }

    pub fn mass(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &v| a + v) * self.h * self.h
    }
}

/// `mu = Delta u / (2 pi)` cell by cell, with sub-noise cells zeroed.
pub fn recover_area_density<T: Real>(u: &PotentialGrid<T>) -> Result<AreaDensity<T>> {
    recover_area_density_with(u, T::lit(MAX_SPACING))
}

pub fn recover_area_density_with<T: Real>(u: &PotentialGrid<T>, max_h: T) -> Result<AreaDensity<T>> {
    if u.h > max_h {
        return Err(Error::Resolution(format!("grid spacing {:e} exceeds {:e}", u.h, max_h)));
    }
    let noise = u.noise_threshold();
    let values = u.laplacian().into_iter().map(|l| if l.abs() <= noise { T::zero() } else { l / T::TAU() }).collect();
    Ok(AreaDensity { nx: u.nx - 2, ny: u.ny - 2, x0: u.x0 + u.h, y0: u.y0 + u.h, h: u.h, values })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMass<T> {
    pub location: Cx<T>,
    pub mass: T,
    /// Another cluster lies close enough that the two integration disks overlap.
    pub ambiguous: bool,
}

/// Point masses as 8-connected clusters of cells with large Laplacian.
///
/// A cell is hot when `|Delta_h u|` exceeds both the noise threshold and `1e-2` of
/// the largest value. Each cluster yields one mass at its Laplacian-weighted
/// centroid, integrated over every cell within `cluster_radius` of that centroid.
pub fn detect_point_masses<T: Real>(u: &PotentialGrid<T>, cluster_radius: T) -> Result<Vec<PointMass<T>>> {
    if !(cluster_radius > T::zero()) {
        return Err(Error::Invalid("cluster radius must be positive".into()));
    }
    if cluster_radius < T::lit(4.0) * u.h {
        return Err(Error::Resolution(format!(
            "cluster radius {:e} spans fewer than 4 cells of size {:e}",
            cluster_radius, u.h
        )));
    }
    let lap = u.laplacian();
    let (nx, ny) = (u.nx - 2, u.ny - 2);
    let peak = lap.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let cut = u.noise_threshold().max(T::lit(1e-2) * peak);
    let hot: Vec<bool> = lap.iter().map(|v| v.abs() > cut && peak > T::zero()).collect();
    let centre = |k: usize| u.point(k % nx + 1, k / nx + 1);

    let mut label = vec![usize::MAX; lap.len()];
    let mut centroids = Vec::new();
    for seed in 0..lap.len() {
        if !hot[seed] || label[seed] != usize::MAX {
            continue;
        }
        let id = centroids.len();
        label[seed] = id;
        let mut stack = vec![seed];
        let (mut w, mut acc) = (T::zero(), cx(T::zero(), T::zero()));
        while let Some(k) = stack.pop() {
            w = w + lap[k];
            acc = acc + centre(k) * lap[k];
            let (i, j) = ((k % nx) as isize, (k / nx) as isize);
            for dj in -1..=1isize {
                for di in -1..=1isize {
                    let (a, b) = (i + di, j + dj);
                    if a < 0 || b < 0 || a >= nx as isize || b >= ny as isize {
                        continue;
                    }
                    let q = b as usize * nx + a as usize;
                    if hot[q] && label[q] == usize::MAX {
                        label[q] = id;
                        stack.push(q);
                    }
                }
            }
        }
        centroids.push(acc / w);
    }

    let h2 = u.h * u.h;
    let mut out: Vec<PointMass<T>> = centroids
        .iter()
        .map(|&c| {
            let mass =
                (0..lap.len()).filter(|&k| (centre(k) - c).norm() <= cluster_radius).fold(T::zero(), |a, k| a + lap[k])
                    * h2
                    / T::TAU();
            PointMass { location: c, mass, ambiguous: false }
        })
        .collect();
    for a in 0..out.len() {
        for b in 0..out.len() {
            if a != b && (out[a].location - out[b].location).norm() < T::lit(2.0) * cluster_radius {
                out[a].ambiguous = true;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip() {
        let g = PotentialGrid::from_fn(4, 3, -1.0, 0.5, 0.25, |z| z.re * z.im).unwrap();
        let mut buf = Vec::new();
        g.write_binary(&mut buf).unwrap();
        assert_eq!(PotentialGrid::<f64>::read_binary(&buf[..]).unwrap(), g);
        let mut text = Vec::new();
        g.write_csv(&mut text).unwrap();
        let back = PotentialGrid::<f64>::from_csv(&text[..]).unwrap();
        assert_eq!((back.nx, back.ny), (4, 3));
        assert!(back.values.iter().zip(&g.values).all(|(a, b)| (a - b).abs() < 1e-15));
    }

    #[test]
    fn csv_with_missing_point_is_rejected() {
        let text = "0,0,1\n1,0,1\n0,1,1\n";
        assert!(PotentialGrid::<f64>::from_csv(text.as_bytes()).is_err());
    }
}
