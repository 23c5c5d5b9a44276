//! JSON descriptions of contours and arc systems.
//!
//! ```json
//! {"curve": {"type": "circle", "center": [0, 0], "radius": 1, "panels": 8, "nodes_per_panel": 16}}
//! {"arcs": [{"type": "segment", "a": [-1, 0], "b": [1, 0], "panels": 32}]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Point as `[re, im]`.
pub type Point = [f64; 2];

/// How many nodes a curve gets: either `nodes` directly, or `panels * nodes_per_panel`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Discretization {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panels: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_per_panel: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
}

impl Discretization {
    pub fn panels(panels: usize, nodes_per_panel: usize) -> Self {
        Self { panels: Some(panels), nodes_per_panel: Some(nodes_per_panel), nodes: None }
    }

    pub fn nodes(nodes: usize) -> Self {
        Self { panels: None, nodes_per_panel: None, nodes: Some(nodes) }
    }

    /// Resolves to `(panels, nodes_per_panel)`.
    pub(crate) fn resolve(&self, default_per_panel: usize) -> Result<(usize, usize)> {
        match (self.nodes, self.panels, self.nodes_per_panel) {
            (Some(n), Some(p), _) => {
                if p == 0 || n % p != 0 {
                    return Err(Error::Invalid(format!("{n} nodes do not split into {p} panels")));
                }
                Ok((p, n / p))
            }
            (Some(n), None, _) => {
                let per = if n % default_per_panel == 0 { default_per_panel } else { n };
                Ok((n / per, per))
            }
            (None, p, q) => {
                let p = p.unwrap_or(16);
                let q = q.unwrap_or(default_per_panel);
                if p == 0 || q == 0 {
                    return Err(Error::Invalid("panel counts must be positive".into()));
                }
                Ok((p, q))
            }
        }
    }
}

/// Closed curve description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CurveSpec {
    Circle {
        center: Point,
        radius: f64,
        #[serde(flatten)]
        discretization: Discretization,
    },
    Ellipse {
        center: Point,
        semi_axes: [f64; 2],
        #[serde(default)]
        rotation: f64,
        #[serde(flatten)]
        discretization: Discretization,
    },
    RoundedPolygon {
        vertices: Vec<Point>,
        corner_radius: f64,
        #[serde(flatten)]
        discretization: Discretization,
    },
    /// Nodes used as given; orientation is normalised to counter-clockwise.
    NodeChain {
        points: Vec<Point>,
        #[serde(default)]
        panels: Option<usize>,
    },
}

/// Open arc description; every arc is oriented from `a` to `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ArcSpec {
    Segment {
        a: Point,
        b: Point,
        #[serde(flatten)]
        discretization: Discretization,
    },
    /// Arc of the circle through `a` and `b` about `center`.
    Circular {
        center: Point,
        a: Point,
        b: Point,
        #[serde(default = "default_true")]
        ccw: bool,
        #[serde(flatten)]
        discretization: Discretization,
    },
    /// Polyline samples of the arc, from `a = points[0]` to `b = points[last]`.
    NodeChain {
        points: Vec<Point>,
        #[serde(flatten)]
        discretization: Discretization,
    },
}

fn default_true() -> bool {
    true
}

impl ArcSpec {
    pub fn segment(a: Point, b: Point, panels: usize, nodes_per_panel: usize) -> Self {
        ArcSpec::Segment { a, b, discretization: Discretization::panels(panels, nodes_per_panel) }
    }

    pub fn discretization(&self) -> Discretization {
        match self {
            ArcSpec::Segment { discretization, .. }
            | ArcSpec::Circular { discretization, .. }
            | ArcSpec::NodeChain { discretization, .. } => *discretization,
        }
    }
}

/// Geometry section of a configuration document: exactly one of `curve` or `arcs`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GeometryDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arcs: Option<Vec<ArcSpec>>,
}

/// Resolved geometry choice.
#[derive(Debug, Clone, PartialEq)]
pub enum GeometrySpec {
    Closed(CurveSpec),
    Arcs(Vec<ArcSpec>),
}

impl GeometryDoc {
    pub fn resolve(&self) -> Result<GeometrySpec> {
        match (&self.curve, &self.arcs) {
            (Some(c), None) => Ok(GeometrySpec::Closed(c.clone())),
            (None, Some(a)) => Ok(GeometrySpec::Arcs(a.clone())),
            (Some(_), Some(_)) => Err(Error::Invalid("give either `curve` or `arcs`, not both".into())),
            (None, None) => Err(Error::Invalid("missing `curve` or `arcs`".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_forms() {
        let doc: GeometryDoc = serde_json::from_str(
            r#"{"curve":{"type":"circle","center":[0,0],"radius":1,"panels":8,"nodes_per_panel":16}}"#,
        )
        .unwrap();
        match doc.resolve().unwrap() {
            GeometrySpec::Closed(CurveSpec::Circle { radius, discretization, .. }) => {
                assert_eq!(radius, 1.0);
                assert_eq!(discretization.resolve(16).unwrap(), (8, 16));
            }
            other => panic!("unexpected {other:?}"),
        }
        let doc: GeometryDoc =
            serde_json::from_str(r#"{"arcs":[{"type":"segment","a":[-1,0],"b":[1,0],"panels":32}]}"#).unwrap();
        match doc.resolve().unwrap() {
            GeometrySpec::Arcs(arcs) => {
                assert_eq!(arcs.len(), 1);
                assert_eq!(arcs[0].discretization().resolve(8).unwrap(), (32, 8));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn both_or_neither_is_rejected() {
        assert!(GeometryDoc::default().resolve().is_err());
    }
}
