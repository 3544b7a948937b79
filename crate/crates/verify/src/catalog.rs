//! Named test bodies, read from JSON.
//!
//! A catalog maps names to body descriptions:
//!
//! ```json
//! {
//!   "square":  { "type": "vertices",   "data": [[-1,-1],[1,-1],[1,1],[-1,1]] },
//!   "wedge":   { "type": "halfspaces", "data": [[-1,0,0],[0,-1,0],[1,1,1]] },
//!   "ball":    { "type": "ball", "radius": 1.0 },
//!   "hexagon": { "type": "builtin", "name": "regular-polygon", "k": 6 }
//! }
//! ```
//!
//! Halfspace rows are `[a₁, …, aₙ, b]` for `⟨a, x⟩ ≤ b`. Balls and builtins
//! without an explicit `n` take the dimension of the suite being run.

use hpl_core::kernel::{shapes, Halfspace, Polytope};
use hpl_core::{ConvexBody, Vector};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::config::ConfigError;

const DEFAULT: &str = include_str!("../catalog/default.json");

/// Environment variable naming a catalog file to use instead of the built-in one.
pub const CATALOG_ENV: &str = "HPL_CATALOG";

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BodySpec {
    Vertices {
        data: Vec<Vec<f64>>,
    },
    Halfspaces {
        data: Vec<Vec<f64>>,
    },
    Ball {
        #[serde(default = "one")]
        radius: f64,
        #[serde(default)]
        n: Option<usize>,
    },
    Builtin {
        name: String,
        #[serde(default)]
        n: Option<usize>,
        /// Vertex count of a regular polygon.
        #[serde(default)]
        k: Option<usize>,
        /// Circumradius of a regular polygon.
        #[serde(default)]
        r: Option<f64>,
        /// `k` and `r` may also be grouped here.
        #[serde(default)]
        params: Option<Params>,
    },
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub r: Option<f64>,
}

fn is_polygon(name: &str) -> bool {
    matches!(name, "regular-polygon" | "kgon")
}

fn one() -> f64 {
    1.0
}

impl BodySpec {
    /// Dimension fixed by the description, `None` if it adapts to the suite.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            BodySpec::Vertices { data } => data.first().map(Vec::len),
            BodySpec::Halfspaces { data } => data.first().map(|r| r.len().saturating_sub(1)),
            BodySpec::Ball { n, .. } => *n,
            BodySpec::Builtin { name, n, .. } => {
                if is_polygon(name) {
                    Some(2)
                } else {
                    *n
                }
            }
        }
    }

    pub fn fits(&self, n: usize) -> bool {
        self.fixed_dim().is_none_or(|d| d == n)
    }

    pub fn is_polytope(&self) -> bool {
        !matches!(self, BodySpec::Ball { .. })
    }

    /// Builds the body in dimension `n`; geometric failures are reported as text
    /// so that a suite can turn them into FAIL records.
    pub fn build(&self, n: usize) -> Result<ConvexBody, String> {
        let err = |e: hpl_core::Error| e.to_string();
        let rows = |data: &[Vec<f64>], width: usize| -> Result<(), String> {
            match data.iter().find(|r| r.len() != width) {
                Some(r) => Err(format!("row of length {} where {width} was expected", r.len())),
                None => Ok(()),
            }
        };
        match self {
            BodySpec::Vertices { data } => {
                rows(data, n)?;
                let pts: Vec<Vector> = data.iter().map(|r| Vector::from_column_slice(r)).collect();
                Polytope::convex_hull(&pts).map(ConvexBody::Polytope).map_err(err)
            }
            BodySpec::Halfspaces { data } => {
                rows(data, n + 1)?;
                let hs = data
                    .iter()
                    .map(|r| Halfspace::new(Vector::from_column_slice(&r[..n]), r[n]))
                    .collect::<hpl_core::Result<Vec<_>>>()
                    .map_err(err)?;
                Polytope::halfspace_intersection(&hs, None)
                    .map(ConvexBody::Polytope)
                    .map_err(err)
            }
            BodySpec::Ball { radius, .. } => ConvexBody::ball(n, *radius).map_err(err),
            BodySpec::Builtin { name, k, r, params, .. } => {
                let params = params.clone().unwrap_or_default();
                let (k, r) = (k.or(params.k), r.or(params.r));
                let p = match name.as_str() {
                    "cube" => shapes::symmetric_cube(n),
                    "unit-cube" => shapes::unit_cube(n),
                    "simplex" => shapes::simplex(n),
                    "cross-polytope" | "cross" => shapes::cross_polytope(n),
                    _ if is_polygon(name) => shapes::regular_polygon(k.unwrap_or(6), r.unwrap_or(1.0)),
                    other => return Err(format!("unknown builtin body `{other}`")),
                };
                p.map(ConvexBody::Polytope).map_err(err)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Catalog {
    pub source: String,
    entries: BTreeMap<String, BodySpec>,
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::parse(DEFAULT, "builtin").expect("embedded catalog is valid")
    }

    pub fn parse(text: &str, source: &str) -> Result<Self, ConfigError> {
        let entries = serde_json::from_str(text).map_err(|e| ConfigError::Catalog {
            path: source.to_string(),
            reason: e.to_string(),
        })?;
        Ok(Catalog {
            source: source.to_string(),
            entries,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Catalog {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// `--catalog` if given, else `$HPL_CATALOG`, else the built-in catalog.
    pub fn resolve(flag: Option<&Path>) -> Result<Self, ConfigError> {
        let env = std::env::var_os(CATALOG_ENV).map(PathBuf::from);
        match flag.map(Path::to_path_buf).or(env) {
            Some(p) => Self::from_file(&p),
            None => Ok(Self::builtin()),
        }
    }

    pub fn get(&self, name: &str) -> Option<&BodySpec> {
        self.entries.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Entries usable in dimension `n`, in name order.
    pub fn names_for(&self, n: usize, polytopes_only: bool) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(_, s)| s.fits(n) && (s.is_polytope() || !polytopes_only))
            .map(|(k, _)| k.clone())
            .collect()
    }
}
