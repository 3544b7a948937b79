use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::catalog::Catalog;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown suite `{0}` (try --list-suites)")]
    UnknownSuite(String),
    #[error("body `{0}` is not in the catalog")]
    UnknownBody(String),
    #[error("body `{name}` is {found}-dimensional but the suite runs in ℝ^{expected}")]
    BodyDimension {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("n = {0} is unsupported; polytope arithmetic needs n ∈ {{2, 3}}")]
    Dimension(usize),
    #[error("need m ≥ 1 and nm ≤ 9, got n = {n}, m = {m}")]
    Order { n: usize, m: usize },
    #[error("need at least 1000 samples, got {0}")]
    TooFewSamples(u64),
    #[error("z-multiplier must be positive and finite, got {0}")]
    BadZ(f64),
    #[error("no bodies selected")]
    NoBodies,
    #[error("cannot read catalog {path}: {reason}")]
    Catalog { path: String, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    PettyZhang,
    AffineInvariance,
    PettyIsoperimetric,
    Stability,
    Variational,
    Mixed,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::PettyZhang,
        Suite::AffineInvariance,
        Suite::PettyIsoperimetric,
        Suite::Stability,
        Suite::Variational,
        Suite::Mixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::PettyZhang => "petty-zhang",
            Suite::AffineInvariance => "affine-invariance",
            Suite::PettyIsoperimetric => "petty-isoperimetric",
            Suite::Stability => "stability",
            Suite::Variational => "variational",
            Suite::Mixed => "mixed",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::PettyZhang => "Zhang lower and Petty upper bounds for Vol(K)^{nm-m} Vol(Π°ᵐK)",
            Suite::AffineInvariance => "invariance of the projection functional under random affine maps",
            Suite::PettyIsoperimetric => "Petty's isoperimetric inequality and its saturation on polygons",
            Suite::Stability => "volume-ratio and minimal-isoperimetric stability bounds",
            Suite::Variational => "radial derivative of the covariogram against the gauge",
            Suite::Mixed => "Aleksandrov–Fenchel-type gauge and volume inequalities for mixed bodies",
        }
    }

    /// Suites whose every check needs a polytope.
    pub fn polytopes_only(self) -> bool {
        matches!(self, Suite::Variational | Suite::Mixed)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

/// Slack allowed in comparisons: `z·σ` for Monte Carlo terms plus `eps`
/// (relative to the compared magnitudes) for deterministic ones.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub z: f64,
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { z: 3.0, eps: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n: usize,
    pub m: usize,
    pub bodies: Vec<String>,
    pub samples: u64,
    pub seed: u64,
    pub tol: Tolerance,
}

impl SuiteConfig {
    /// Defaults: every fitting catalog body, the standard sample count, seed 1.
    pub fn new(suite: Suite, n: usize, m: usize) -> Self {
        SuiteConfig {
            suite,
            n,
            m,
            bodies: Vec::new(),
            samples: hpl_core::stochastic::default_samples(n, m),
            seed: 1,
            tol: Tolerance::default(),
        }
    }

    pub fn with_bodies(mut self, bodies: &[&str]) -> Self {
        self.bodies = bodies.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_samples(mut self, samples: u64) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Checks the invariants and fills in the default body list.
    pub fn validate(&mut self, catalog: &Catalog) -> Result<(), ConfigError> {
        if !(2..=3).contains(&self.n) {
            return Err(ConfigError::Dimension(self.n));
        }
        if self.m == 0 || self.n * self.m > 9 {
            return Err(ConfigError::Order { n: self.n, m: self.m });
        }
        if self.samples < 1000 {
            return Err(ConfigError::TooFewSamples(self.samples));
        }
        if !(self.tol.z > 0.0 && self.tol.z.is_finite()) {
            return Err(ConfigError::BadZ(self.tol.z));
        }
        if self.bodies.is_empty() {
            self.bodies = catalog.names_for(self.n, self.suite.polytopes_only());
        }
        if self.bodies.is_empty() {
            return Err(ConfigError::NoBodies);
        }
        for b in &self.bodies {
            let spec = catalog.get(b).ok_or_else(|| ConfigError::UnknownBody(b.clone()))?;
            if let Some(d) = spec.fixed_dim().filter(|&d| d != self.n) {
                return Err(ConfigError::BodyDimension {
                    name: b.clone(),
                    expected: self.n,
                    found: d,
                });
            }
        }
        Ok(())
    }
}
