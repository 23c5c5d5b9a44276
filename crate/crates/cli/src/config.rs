//! JSON run configuration.
//!
//! ```json
//! {
//!   "arcs": [{"type": "segment", "a": [-1, 0], "b": [1, 0], "panels": 16}],
//!   "rhs": {"chebyshev_t": 2},
//!   "tolerances": {"moment": 1e-8}
//! }
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sie::GeometryDoc;

use crate::CliError;

/// Right-hand side families.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RhsSpec {
    /// `t^n`; negative powers are allowed on closed contours.
    Monomial(i32),
    ChebyshevT(usize),
    /// A real number or `[re, im]`.
    Constant(Constant),
    /// Table with `index`, `re_f`, `im_f` columns, relative to the config file.
    Csv(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Constant {
    Real(f64),
    Complex([f64; 2]),
}

impl Constant {
    pub fn value(self) -> [f64; 2] {
        match self {
            Constant::Real(x) => [x, 0.0],
            Constant::Complex(z) => z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Closed solver residual bound.
    pub residual: Option<f64>,
    /// Largest moment treated as zero.
    pub moment: Option<f64>,
    /// Richardson acceptance for one-sided limits.
    pub boundary: Option<f64>,
    /// Largest grid spacing for area recovery.
    pub max_spacing: Option<f64>,
}

/// One summand of a built-in potential, scaled by `weight`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialTerm {
    /// `log max(|z - c|, r)`: the unit equilibrium measure of the disk.
    DiskEquilibrium {
        center: [f64; 2],
        radius: f64,
        #[serde(default = "one")]
        weight: f64,
    },
    /// Potential of the arcsine measure on `[a, b]`.
    SegmentEquilibrium {
        a: [f64; 2],
        b: [f64; 2],
        #[serde(default = "one")]
        weight: f64,
    },
    /// Potential of the uniform unit area measure on a disk.
    DiskArea {
        center: [f64; 2],
        radius: f64,
        #[serde(default = "one")]
        weight: f64,
    },
    /// `log |z - p|`.
    LogAbs {
        point: [f64; 2],
        #[serde(default = "one")]
        weight: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// Lattice to sample a built-in potential on.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lattice {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
}

/// Potential samples for the grid commands.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSource {
    /// `x,y,u` rows.
    Csv(PathBuf),
    /// JSON header line followed by little-endian `f64` values.
    Binary(PathBuf),
    /// The configured `potential` sampled on this lattice.
    Sample(Lattice),
}

const KEYS: &[&str] =
    &["curve", "arcs", "rhs", "rhs_chebyshev_weighted", "p", "tolerances", "potential", "grid", "cluster_radius"];

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub geometry: GeometryDoc,
    pub rhs: Option<RhsSpec>,
    /// Treat the right-hand side as carrying a `1/sqrt(R)` factor (arcs only).
    #[serde(default)]
    pub rhs_chebyshev_weighted: bool,
    /// Coefficients of `P` for `solve-arcs`, lowest degree first.
    #[serde(default)]
    pub p: Vec<[f64; 2]>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub potential: Vec<PotentialTerm>,
    pub grid: Option<GridSource>,
    pub cluster_radius: Option<f64>,
    /// Directory the config was read from; relative paths resolve against it.
    #[serde(skip)]
    pub base_dir: PathBuf,
    /// Source text, kept to point error messages at a line.
    #[serde(skip)]
    pub text: String,
}

impl RunConfig {
    /// Parses a document, reporting schema violations with their line.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let schema = |e: serde_json::Error, fallback: &str| {
            let line = if e.line() > 0 { e.line() } else { line_of(text, fallback) };
            CliError::Schema { line, message: e.to_string() }
        };
        let raw: serde_json::Value = serde_json::from_str(text).map_err(|e| schema(e, ""))?;
        let Some(obj) = raw.as_object() else {
            return Err(CliError::Schema { line: 1, message: "config must be a JSON object".into() });
        };
        if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::Schema { line: line_of(text, k), message: format!("unknown key `{k}`") });
        }
        let geometry_key = if obj.contains_key("arcs") { "arcs" } else { "curve" };
        let mut cfg: RunConfig = serde_json::from_str(text).map_err(|e| schema(e, geometry_key))?;
        cfg.validate(text)?;
        cfg.text = text.to_string();
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Schema error pointing at `key`.
    pub fn schema_error(&self, key: &str, message: impl Into<String>) -> CliError {
        CliError::Schema { line: line_of(&self.text, key), message: message.into() }
    }

    fn validate(&self, text: &str) -> Result<(), CliError> {
        let bad = |key: &str, message: String| CliError::Schema { line: line_of(text, key), message };
        let t = &self.tolerances;
        for (name, v) in
            [("residual", t.residual), ("moment", t.moment), ("boundary", t.boundary), ("max_spacing", t.max_spacing)]
        {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(bad(name, format!("tolerance `{name}` must be positive")));
                }
            }
        }
        if let Some(r) = self.cluster_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(bad("cluster_radius", "`cluster_radius` must be positive".into()));
            }
        }
        if self.geometry.curve.is_some() && self.geometry.arcs.is_some() {
            return Err(bad("arcs", "give either `curve` or `arcs`, not both".into()));
        }
        Ok(())
    }
}

/// Line of the first occurrence of `"key"`, or 1.
pub(crate) fn line_of(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map_or(1, |i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let cfg = RunConfig::parse(
            r#"{"arcs":[{"type":"segment","a":[-1,0],"b":[1,0],"panels":16}],
                "rhs":{"constant":[1,0]},"tolerances":{"moment":1e-9}}"#,
        )
        .unwrap();
        assert_eq!(cfg.rhs, Some(RhsSpec::Constant(Constant::Complex([1.0, 0.0]))));
        assert_eq!(cfg.tolerances.moment, Some(1e-9));
    }

    #[test]
    fn schema_errors_carry_a_line() {
        let text =
            "{\n  \"curve\": {\"type\": \"circle\", \"center\": [0, 0], \"radius\": 1},\n  \"rhs\": {\"cubic\": 3}\n}";
        match RunConfig::parse(text) {
            Err(CliError::Schema { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let text = "{\n\"tolerances\": {\n\"moment\": -1}}";
        match RunConfig::parse(text) {
            Err(CliError::Schema { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
