//! The inequality suites. Each suite turns a validated configuration into an
//! ordered list of check records; module errors become FAIL records.

mod affine;
mod isoperimetric;
mod mixed;
mod petty_zhang;
mod stability;
mod variational;

use hpl_core::gauge::Gauge;
use hpl_core::stochastic::{star_volume, unit_ball_volume, SphereSampler};
use hpl_core::{ConvexBody, EstimateCI};
use rayon::prelude::*;
use std::time::Instant;

use crate::catalog::Catalog;
use crate::config::{ConfigError, Suite, SuiteConfig, Tolerance};
use crate::report::{Check, Meta, Relation, RunInfo, SuiteReport};

/// Relative slack for quantities computed with the fixed sphere quadratures.
pub const QUAD_REL: f64 = 1e-4;

pub mod anchors {
    pub const ZHANG: &str = "Zhang projection inequality, mth order (equality for simplices)";
    pub const PETTY: &str = "Petty projection inequality, mth order (equality for ellipsoids)";
    pub const EXACT_POLAR: &str = "polar projection body of a polytope via its zonotope";
    pub const AFFINE: &str = "affine invariance of the mth-order projection functional";
    pub const ISOPERIMETRIC: &str = "Petty isoperimetric inequality, mth order (equality for balls)";
    pub const SATURATION: &str = "saturation of the isoperimetric bound along regular polygons";
    pub const STABILITY_VR: &str = "stability of the Petty bound via the volume ratio";
    pub const STABILITY_ISO: &str = "stability of the Petty bound via the minimal isoperimetric ratio";
    pub const ISO_VS_VR: &str = "minimal isoperimetric ratio bounded by the volume ratio";
    pub const BALL_BOUND: &str = "Ball's surface bound in John position";
    pub const VR_RANGE: &str = "volume ratio lies in [1, n]";
    pub const REVERSE_PETTY: &str = "classical stability bound for the polar projection body (m = 1)";
    pub const MEAN_WIDTH_M1: &str = "mean width of a segment and the classical Petty constant (m = 1)";
    pub const VARIATIONAL: &str = "variational formula for the mth-order covariogram";
    pub const AF_GAUGE: &str = "Aleksandrov–Fenchel consequence for mixed mth-order gauges";
    pub const AF_GAUGE_SQUARE: &str = "Aleksandrov–Fenchel inequality for mixed mth-order gauges";
    pub const MIXED_ROUTES: &str = "mixed gauge by subset-sum polarization vs facet polarization";
    pub const MIXED_VOLUME: &str = "volume inequality for mth-order mixed polar projection bodies";
    pub const LOG_CONVEX: &str = "log-convexity of the mixed projection-body volume sequence";
    pub const HOMOTHETY: &str = "equality for homothetic bodies in the mixed volume inequality";
    pub const MIXED_PETTY: &str = "mixed Petty projection inequality, mth order";
    pub const TWO_SEED: &str = "two-seed agreement of a Monte Carlo volume";
}

/// A catalog body resolved in the suite dimension.
pub struct Entry {
    pub name: String,
    pub body: Result<ConvexBody, String>,
}

pub struct Context {
    pub cfg: SuiteConfig,
    pub entries: Vec<Entry>,
}

impl Context {
    pub fn tol(&self) -> &Tolerance {
        &self.cfg.tol
    }

    /// Seed for one named estimate, a pure function of the run seed and the labels.
    pub fn seed(&self, labels: &[&str]) -> u64 {
        derive_seed(self.cfg.seed, self.cfg.suite.name(), labels)
    }

    /// Runs `f` on every body in parallel, keeping catalog order; a body that
    /// failed to build yields one FAIL record.
    fn per_body<F>(&self, relation: Relation, anchor: &str, f: F) -> Vec<Check>
    where
        F: Fn(&Entry, &ConvexBody) -> Vec<Check> + Sync,
    {
        self.entries
            .par_iter()
            .map(|e| match &e.body {
                Ok(b) => f(e, b),
                Err(reason) => vec![Check::failed("body construction", anchor, relation, reason.clone()).body(&e.name)],
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }
}

/// SplitMix64 over an FNV-1a hash of the labels.
pub fn derive_seed(seed: u64, suite: &str, labels: &[&str]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in std::iter::once(suite).chain(labels.iter().copied()) {
        for b in part.bytes().chain(std::iter::once(0xff)) {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    let mut z = seed ^ h;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn is_simplex(body: &ConvexBody) -> bool {
    body.as_polytope().is_some_and(|p| p.vertices().len() == p.dim() + 1)
}

pub fn is_ellipsoidal(body: &ConvexBody) -> bool {
    !matches!(body, ConvexBody::Polytope(_))
}

/// Euclidean balls, including ellipsoids whose shape matrix is a multiple of I.
pub fn is_round(body: &ConvexBody) -> bool {
    match body {
        ConvexBody::Polytope(_) => false,
        ConvexBody::Ball { .. } => true,
        ConvexBody::Ellipsoid(e) => {
            let b = e.shape();
            let r = b.trace() / b.nrows() as f64;
            (b - hpl_core::Matrix::identity(b.nrows(), b.ncols()) * r).amax() <= 1e-12 * r.abs()
        }
    }
}

/// `Vol(K)^{nm−m}·Vol(Π°ᵐK)` with its standard error.
pub fn projection_functional(body: &ConvexBody, m: usize, samples: u64, seed: u64) -> Result<EstimateCI, String> {
    let g = body.m_order_gauge(m).map_err(|e| e.to_string())?;
    let v = star_volume(&g, samples, seed).map_err(|e| e.to_string())?;
    let n = body.dim();
    Ok(v.scaled(body.volume().powi((n * m - m) as i32)))
}

/// Means of several estimators over one stream of sphere samples, with the
/// covariance of those means; the common random numbers make the errors of
/// compared quantities cancel.
pub struct Joint {
    pub mean: Vec<f64>,
    /// Row-major covariance of the sample means.
    pub cov: Vec<f64>,
}

impl Joint {
    /// Delta-method standard error of `Σ grad_i · mean_i`.
    pub fn sigma(&self, grad: &[f64]) -> f64 {
        let k = self.mean.len();
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                s += grad[i] * self.cov[i * k + j] * grad[j];
            }
        }
        s.max(0.0).sqrt()
    }
}

#[derive(Clone)]
struct CoMoments {
    count: f64,
    mean: Vec<f64>,
    /// Σ (xᵢ − x̄ᵢ)(xⱼ − x̄ⱼ), row-major.
    c: Vec<f64>,
}

impl CoMoments {
    fn new(k: usize) -> Self {
        CoMoments {
            count: 0.0,
            mean: vec![0.0; k],
            c: vec![0.0; k * k],
        }
    }

    fn push(&mut self, x: &[f64]) {
        let k = x.len();
        self.count += 1.0;
        let before: Vec<f64> = x.iter().zip(&self.mean).map(|(a, b)| a - b).collect();
        for i in 0..k {
            self.mean[i] += before[i] / self.count;
        }
        for i in 0..k {
            for j in 0..k {
                self.c[i * k + j] += before[i] * (x[j] - self.mean[j]);
            }
        }
    }

    fn merge(self, o: CoMoments) -> CoMoments {
        if self.count == 0.0 {
            return o;
        }
        if o.count == 0.0 {
            return self;
        }
        let k = self.mean.len();
        let count = self.count + o.count;
        let delta: Vec<f64> = o.mean.iter().zip(&self.mean).map(|(a, b)| a - b).collect();
        let mean = (0..k).map(|i| self.mean[i] + delta[i] * o.count / count).collect();
        let w = self.count * o.count / count;
        let c = (0..k * k)
            .map(|ij| self.c[ij] + o.c[ij] + delta[ij / k] * delta[ij % k] * w)
            .collect();
        CoMoments { count, mean, c }
    }
}

const CHUNK: u64 = 4096;

/// `ω_d E[gᵢ(Θ)^{−d}]` for every gauge, on the stream of `(seed, samples)`.
pub fn joint_star_volumes(gauges: &[&dyn Gauge], samples: u64, seed: u64) -> Result<Joint, String> {
    let d = gauges.first().map_or(0, |g| g.dim());
    if gauges.iter().any(|g| g.dim() != d) {
        return Err("gauges live in different dimensions".into());
    }
    let k = gauges.len();
    let chunks = samples.div_ceil(CHUNK);
    let parts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut sampler = SphereSampler::new(d, seed);
            let mut x = vec![0.0; d];
            let mut vals = vec![0.0; k];
            let mut mo = CoMoments::new(k);
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                sampler.sample_at(i, &mut x);
                for (v, g) in vals.iter_mut().zip(gauges) {
                    let t = g.eval(&x);
                    if !(t > 0.0 && t.is_finite()) {
                        return Err(format!("gauge value {t} is not positive"));
                    }
                    *v = t.powi(-(d as i32));
                }
                mo.push(&vals);
            }
            Ok(mo)
        })
        .collect::<Result<Vec<_>, String>>()?;
    let total = parts.into_iter().fold(CoMoments::new(k), CoMoments::merge);
    let w = unit_ball_volume(d);
    let n = total.count;
    Ok(Joint {
        mean: total.mean.iter().map(|m| w * m).collect(),
        cov: total.c.iter().map(|c| w * w * c / (n - 1.0) / n).collect(),
    })
}

fn build_entries(cfg: &SuiteConfig, catalog: &Catalog) -> Vec<Entry> {
    cfg.bodies
        .iter()
        .map(|name| {
            let spec = catalog.get(name).expect("validated body names");
            let body = spec.build(cfg.n).and_then(|b| {
                if cfg.suite.polytopes_only() && b.as_polytope().is_none() {
                    Err(format!("suite `{}` requires a polytope", cfg.suite))
                } else {
                    Ok(b)
                }
            });
            Entry {
                name: name.clone(),
                body,
            }
        })
        .collect()
}

/// Validates `cfg` against `catalog` and runs the suite.
pub fn run_suite(mut cfg: SuiteConfig, catalog: &Catalog, with_meta: bool) -> Result<SuiteReport, ConfigError> {
    cfg.validate(catalog)?;
    let started = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let ctx = Context {
        entries: build_entries(&cfg, catalog),
        cfg,
    };
    let checks = match ctx.cfg.suite {
        Suite::PettyZhang => petty_zhang::run(&ctx),
        Suite::AffineInvariance => affine::run(&ctx),
        Suite::PettyIsoperimetric => isoperimetric::run(&ctx),
        Suite::Stability => stability::run(&ctx),
        Suite::Variational => variational::run(&ctx),
        Suite::Mixed => mixed::run(&ctx),
    };
    let cfg = ctx.cfg;
    let meta = Meta {
        suite: cfg.suite,
        seed: cfg.seed,
        n: cfg.n,
        m: cfg.m,
        samples: cfg.samples,
        z: cfg.tol.z,
        eps: cfg.tol.eps,
        bodies: cfg.bodies.clone(),
        catalog: catalog.source.clone(),
        run: with_meta.then(|| RunInfo {
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: started,
            duration_ms: clock.elapsed().as_millis() as u64,
            threads: rayon::current_num_threads(),
        }),
    };
    Ok(SuiteReport::new(meta, checks))
}
