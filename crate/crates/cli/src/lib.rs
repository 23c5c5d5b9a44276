//! Command-line front end: reads a JSON config, runs one solver or recovery command
//! and writes `solution.csv` plus `summary.json` to the output directory.

pub mod config;
mod potentials;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sie::arc_solver::{bounded_solution, default_moment_tol, general_solution, solvability_moments, BoundedOptions};
use sie::cauchy::singular_s;
use sie::chebyshev::chebyshev_t_complex;
use sie::closed_solver::{solve_closed_with, RESIDUAL_TOL};
use sie::density::{Host, SampledDensity, Weighting};
use sie::potential::{
    detect_point_masses, equilibrium_density, recover_area_density_with, recover_curve_density_with,
    CurveRecoveryOptions, MeasureEstimate, PotentialGrid, MAX_SPACING,
};
use sie::{ArcSystem, ClosedContour, ComplexPolynomial, GeometrySpec};
use thiserror::Error;

pub use config::RunConfig;
use config::{GridSource, RhsSpec};

/// Exit status for a configuration that does not match the schema.
pub const EXIT_SCHEMA: i32 = 64;
/// Exit status for a numerical limit that failed to converge.
pub const EXIT_NONCONVERGENCE: i32 = 65;
pub const EXIT_SOFTWARE: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}: {message}")]
    Schema { line: usize, message: String },

    #[error("no convergence at node {node}: {detail}")]
    NonConvergence { node: usize, detail: String },

    #[error("{0}")]
    Io(String),

    #[error(transparent)]
    Solver(#[from] sie::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } => EXIT_SCHEMA,
            CliError::NonConvergence { .. } => EXIT_NONCONVERGENCE,
            CliError::Io(_) => EXIT_IO,
            CliError::Solver(_) => EXIT_SOFTWARE,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    SolveClosed,
    SolveArcs,
    Bounded,
    Moments,
    RecoverCurve,
    RecoverArea,
    PointMasses,
    Equilibrium,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::SolveClosed => "solve-closed",
            Command::SolveArcs => "solve-arcs",
            Command::Bounded => "bounded",
            Command::Moments => "moments",
            Command::RecoverCurve => "recover-curve",
            Command::RecoverArea => "recover-area",
            Command::PointMasses => "point-masses",
            Command::Equilibrium => "equilibrium",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: PathBuf,
    /// Run on a single thread.
    pub serial: bool,
    /// Overrides the command's primary tolerance.
    pub tol: Option<f64>,
}

/// Runs a command, writing its artifacts. Returns the JSON summary.
pub fn run(command: Command, cfg: &RunConfig, opts: &RunOptions) -> Result<Value, CliError> {
    if let Some(t) = opts.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Schema { line: 0, message: "--tol must be positive".into() });
        }
    }
    std::fs::create_dir_all(&opts.out)?;
    if opts.serial {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| CliError::Io(e.to_string()))?;
        pool.install(|| dispatch(command, cfg, opts))
    } else {
        dispatch(command, cfg, opts)
    }
}

enum Geometry {
    Closed(ClosedContour<f64>),
    Arcs(ArcSystem<f64>),
}

impl Geometry {
    fn host(&self) -> Host<'_, f64> {
        match self {
            Geometry::Closed(c) => c.into(),
            Geometry::Arcs(s) => s.into(),
        }
    }
}

fn geometry(cfg: &RunConfig) -> Result<Geometry, CliError> {
    let key = if cfg.geometry.arcs.is_some() { "arcs" } else { "curve" };
    let wrap = |e: sie::Error| cfg.schema_error(key, e.to_string());
    match cfg.geometry.resolve().map_err(wrap)? {
        GeometrySpec::Closed(c) => Ok(Geometry::Closed(ClosedContour::from_spec(&c).map_err(wrap)?)),
        GeometrySpec::Arcs(a) => Ok(Geometry::Arcs(ArcSystem::from_specs(&a).map_err(wrap)?)),
    }
}

fn rhs<'h>(cfg: &RunConfig, host: Host<'h, f64>) -> Result<SampledDensity<'h, f64>, CliError> {
    let spec = cfg.rhs.as_ref().ok_or_else(|| cfg.schema_error("rhs", "missing `rhs`"))?;
    let g = match spec {
        RhsSpec::Monomial(n) => SampledDensity::from_fn(host, |t| t.powi(*n))?,
        RhsSpec::ChebyshevT(n) => SampledDensity::from_fn(host, |t| chebyshev_t_complex(*n, t))?,
        RhsSpec::Constant(c) => {
            let [re, im] = c.value();
            SampledDensity::from_fn(host, |_| Complex64::new(re, im))?
        }
        RhsSpec::Csv(path) => {
            let path = cfg.resolve(path);
            let file = File::open(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let values = sie::io::read_density_values(file, host.len())
                .map_err(|e| cfg.schema_error("csv", format!("{}: {e}", path.display())))?;
            SampledDensity::new(host, values)?
        }
    };
    let weighted = cfg.rhs_chebyshev_weighted && matches!(host, Host::Arcs(_));
    Ok(if weighted { g.with_weighting(Weighting::Chebyshev) } else { g })
}

fn create(out: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    let path = out.join(name);
    File::create(&path).map(BufWriter::new).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_summary(out: &Path, summary: &Value) -> Result<(), CliError> {
    let mut w = create(out, "summary.json")?;
    serde_json::to_writer_pretty(&mut w, summary).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn write_solution(out: &Path, f: &SampledDensity<'_, f64>) -> Result<(), CliError> {
    let mut w = create(out, "solution.csv")?;
    sie::io::write_solution(f, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Same columns as [`write_solution`] for lattice-based results; `s` is zero.
fn write_points(out: &Path, rows: &[(Complex64, f64)]) -> Result<(), CliError> {
    let mut w = create(out, "solution.csv")?;
    writeln!(w, "index,s,re_z,im_z,re_f,im_f")?;
    for (k, (z, v)) in rows.iter().enumerate() {
        writeln!(w, "{k},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", 0.0, z.re, z.im, v, 0.0)?;
    }
    w.flush()?;
    Ok(())
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("summary serialises")
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn dispatch(command: Command, cfg: &RunConfig, opts: &RunOptions) -> Result<Value, CliError> {
    let out = opts.out.as_path();
    let mut summary = match command {
        Command::SolveClosed => {
            let geo = geometry(cfg)?;
            let Geometry::Closed(c) = &geo else {
                return Err(cfg.schema_error("arcs", "solve-closed needs a closed `curve`"));
            };
            let g = rhs(cfg, c.into())?;
            let tol = opts.tol.or(cfg.tolerances.residual).unwrap_or(RESIDUAL_TOL);
            let sol = solve_closed_with(&g, tol)?;
            write_solution(out, &sol.solution)?;
            json!({"nodes": c.len(), "residual": sol.residual, "residual_tol": tol, "warning": sol.warning})
        }
        Command::SolveArcs => {
            let geo = geometry(cfg)?;
            let s = arcs_only(&geo, cfg, command)?;
            let g = rhs(cfg, s.into())?;
            let p = ComplexPolynomial::new(cfg.p.iter().map(|&[re, im]| Complex64::new(re, im)).collect());
            let f = general_solution(&g, &p).map_err(|e| cfg.schema_error("p", e.to_string()))?;
            let residual = singular_s(&f)?.max_diff(&g);
            write_solution(out, &f)?;
            json!({"nodes": s.len(), "p": cfg.p, "residual": residual})
        }
        Command::Bounded => {
            let geo = geometry(cfg)?;
            let s = arcs_only(&geo, cfg, command)?;
            let g = rhs(cfg, s.into())?;
            let moment_tol = opts.tol.or(cfg.tolerances.moment);
            let report = bounded_solution(&g, BoundedOptions { moment_tol, holder_hint: None })?;
            write_solution(out, &report.solution)?;
            let mut summary = report.summary();
            summary.solution_csv = Some("solution.csv".into());
            to_value(summary)
        }
        Command::Moments => {
            let geo = geometry(cfg)?;
            let s = arcs_only(&geo, cfg, command)?;
            let g = rhs(cfg, s.into())?;
            let moments = solvability_moments(&g)?;
            let tol = match opts.tol.or(cfg.tolerances.moment) {
                Some(t) => t,
                None => default_moment_tol(&g)?,
            };
            write_solution(out, &g)?;
            json!({
                "moments": moments.iter().copied().map(pair).collect::<Vec<_>>(),
                "moment_tol": tol,
                "solvable": moments.iter().all(|m| m.norm() <= tol),
            })
        }
        Command::RecoverCurve => {
            let geo = geometry(cfg)?;
            let u = potentials::evaluator(cfg)?;
            let mut ro = CurveRecoveryOptions::default();
            if let Some(t) = opts.tol.or(cfg.tolerances.boundary) {
                ro.tol = t;
            }
            let m = recover_curve_density_with(&u, geo.host(), ro)?;
            let summary = measure_summary(&m, out)?;
            let curve = m.curve.as_ref().expect("curve recovery yields a curve density");
            if let Some(&node) = curve.flagged.first() {
                write_summary(out, &with_command(summary, command))?;
                return Err(CliError::NonConvergence {
                    node,
                    detail: format!("{} node(s) with unsettled one-sided normal derivatives", curve.flagged.len()),
                });
            }
            summary
        }
        Command::RecoverArea => {
            let grid = load_grid(cfg)?;
            let max_h = cfg.tolerances.max_spacing.unwrap_or(MAX_SPACING);
            let area = recover_area_density_with(&grid, max_h).map_err(|e| cfg.schema_error("grid", e.to_string()))?;
            let rows: Vec<_> = (0..area.ny)
                .flat_map(|j| (0..area.nx).map(move |i| (i, j)))
                .map(|(i, j)| (area.point(i, j), area.at(i, j)))
                .collect();
            write_points(out, &rows)?;
            let (nx, ny, h) = (area.nx, area.ny, area.h);
            let mut v = to_value(MeasureEstimate::from_area(area).summary());
            v["cells"] = json!([nx, ny]);
            v["h"] = json!(h);
            v
        }
        Command::PointMasses => {
            let grid = load_grid(cfg)?;
            let radius =
                cfg.cluster_radius.ok_or_else(|| cfg.schema_error("grid", "point-masses needs `cluster_radius`"))?;
            let masses =
                detect_point_masses(&grid, radius).map_err(|e| cfg.schema_error("cluster_radius", e.to_string()))?;
            let rows: Vec<_> = masses.iter().map(|p| (p.location, p.mass)).collect();
            write_points(out, &rows)?;
            let mut v = to_value(MeasureEstimate::from_point_masses(masses).summary());
            v["cluster_radius"] = json!(radius);
            v
        }
        Command::Equilibrium => {
            let geo = geometry(cfg)?;
            let key = if cfg.geometry.arcs.is_some() { "arcs" } else { "curve" };
            let m = equilibrium_density(geo.host()).map_err(|e| match e {
                sie::Error::NotImplemented(msg) => cfg.schema_error(key, format!("not implemented: {msg}")),
                other => other.into(),
            })?;
            measure_summary(&m, out)?
        }
    };
    summary = with_command(summary, command);
    write_summary(out, &summary)?;
    Ok(summary)
}

fn with_command(mut summary: Value, command: Command) -> Value {
    summary["command"] = json!(command.name());
    summary
}

fn arcs_only<'g>(geo: &'g Geometry, cfg: &RunConfig, command: Command) -> Result<&'g ArcSystem<f64>, CliError> {
    match geo {
        Geometry::Arcs(s) => Ok(s),
        Geometry::Closed(_) => Err(cfg.schema_error("curve", format!("{} needs `arcs`", command.name()))),
    }
}

/// Writes the curve density as `solution.csv` and returns the JSON summary.
fn measure_summary(m: &MeasureEstimate<'_, f64>, out: &Path) -> Result<Value, CliError> {
    let curve = m.curve.as_ref().expect("curve density");
    write_solution(out, &curve.density)?;
    let mut v = to_value(m.summary());
    v["min_density"] = json!(curve.min());
    Ok(v)
}

fn load_grid(cfg: &RunConfig) -> Result<PotentialGrid<f64>, CliError> {
    let src = cfg.grid.as_ref().ok_or_else(|| cfg.schema_error("grid", "missing `grid`"))?;
    let bad = |e: sie::Error| cfg.schema_error("grid", e.to_string());
    let open = |p: &Path| {
        let path = cfg.resolve(p);
        File::open(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    };
    match src {
        GridSource::Csv(p) => PotentialGrid::from_csv(open(p)?).map_err(bad),
        GridSource::Binary(p) => PotentialGrid::read_binary(open(p)?).map_err(bad),
        GridSource::Sample(l) => {
            let u = potentials::evaluator(cfg)?;
            PotentialGrid::from_fn(l.nx, l.ny, l.x0, l.y0, l.h, u).map_err(bad)
        }
    }
}
