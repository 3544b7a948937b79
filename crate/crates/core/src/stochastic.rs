//! Seeded Monte Carlo on spheres: star-body volumes and the mean-width
//! constant `E[W_n(C_Θ̄)^{−nm}]`.
//!
//! Samples come from a counter-addressed ChaCha stream, so sample `i` of a
//! given seed is the same whichever thread draws it; chunk statistics are
//! merged in index order, which makes every estimate bit-reproducible.

use crate::gauge::Gauge;
use crate::quadrature::SphereQuadrature;
use crate::{Error, Result};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

const CHUNK: usize = 4096;
const Z95: f64 = 1.96;

/// Volume `ω_d` of the Euclidean unit ball in `ℝ^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / d as f64 * unit_ball_volume(d - 2),
    }
}

/// Monte Carlo estimate with its standard error and 95% interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateCI {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub ci95: (f64, f64),
}

impl EstimateCI {
    pub fn new(mean: f64, std_error: f64, samples: u64, seed: u64) -> Self {
        EstimateCI {
            mean,
            std_error,
            samples,
            seed,
            ci95: (mean - Z95 * std_error, mean + Z95 * std_error),
        }
    }

    /// The estimate of `c·X`.
    pub fn scaled(&self, c: f64) -> Self {
        Self::new(c * self.mean, c.abs() * self.std_error, self.samples, self.seed)
    }
}

/// Uniform points on `S^{d−1}` from Gaussian normalization.
#[derive(Clone, Debug)]
pub struct SphereSampler {
    dim: usize,
    seed: u64,
    rng: ChaCha8Rng,
}

impl SphereSampler {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim >= 1, "sphere sampler needs d ≥ 1");
        SphereSampler {
            dim,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// 32-bit stream words consumed per sample: two u64 per Box–Muller pair.
    fn words(&self) -> u128 {
        4 * self.dim.div_ceil(2) as u128
    }

    /// Writes sample number `index` into `out`.
    pub fn sample_at(&mut self, index: u64, out: &mut [f64]) {
        self.rng.set_word_pos(index as u128 * self.words());
        let d = self.dim;
        let mut k = 0;
        while k < d {
            // (0, 1] and [0, 1): the logarithm stays finite
            let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
            let u2 = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            let r = (-2.0 * u1.ln()).sqrt();
            let (s, c) = (2.0 * PI * u2).sin_cos();
            out[k] = r * c;
            if k + 1 < d {
                out[k + 1] = r * s;
            }
            k += 2;
        }
        let norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            out.fill(0.0);
            out[0] = 1.0;
        } else {
            out.iter_mut().for_each(|x| *x /= norm);
        }
    }

    pub fn sample(&mut self, index: u64) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        self.sample_at(index, &mut v);
        v
    }
}

#[derive(Clone, Copy, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.count == 0.0 {
            return o;
        }
        let count = self.count + o.count;
        let delta = o.mean - self.mean;
        Moments {
            count,
            mean: self.mean + delta * o.count / count,
            m2: self.m2 + o.m2 + delta * delta * self.count * o.count / count,
        }
    }
}

/// `E[f(Θ)]` for `Θ` uniform on `S^{d−1}`.
pub fn sphere_mean<F>(d: usize, samples: u64, seed: u64, f: F) -> Result<EstimateCI>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if samples < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 samples, got {samples}")));
    }
    let chunks = samples.div_ceil(CHUNK as u64);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut sampler = SphereSampler::new(d, seed);
            let mut x = vec![0.0; d];
            let mut mo = Moments::default();
            let hi = ((c + 1) * CHUNK as u64).min(samples);
            for i in c * CHUNK as u64..hi {
                sampler.sample_at(i, &mut x);
                mo.push(f(&x)?);
            }
            Ok(mo)
        })
        .collect::<Result<_>>()?;
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let var = total.m2 / (total.count - 1.0);
    Ok(EstimateCI::new(total.mean, (var / total.count).sqrt(), samples, seed))
}

/// `Vol(M) = ω_d E[‖Θ‖_M^{−d}]` for the star body `M` with gauge `g`.
pub fn star_volume(g: &dyn Gauge, samples: u64, seed: u64) -> Result<EstimateCI> {
    let d = g.dim();
    let est = sphere_mean(d, samples, seed, |x| {
        let v = g.eval(x);
        if v > 0.0 && v.is_finite() {
            Ok(v.powi(-(d as i32)))
        } else {
            Err(Error::GaugeNonPositive { value: v })
        }
    })?;
    Ok(est.scaled(unit_ball_volume(d)))
}

/// `E[W_n(C_Θ̄)^{−nm}]` with `W_n` from the standard quadrature.
pub fn mean_width_constant(n: usize, m: usize, samples: u64, seed: u64) -> Result<EstimateCI> {
    mean_width_constant_with(n, m, samples, seed, SphereQuadrature::standard(n)?)
}

/// As [`mean_width_constant`] with an explicit inner quadrature rule.
pub fn mean_width_constant_with(
    n: usize,
    m: usize,
    samples: u64,
    seed: u64,
    quad: &SphereQuadrature,
) -> Result<EstimateCI> {
    check_nm(n, m)?;
    if quad.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: quad.dim(),
        });
    }
    let norm = n as f64 * unit_ball_volume(n);
    let power = -((n * m) as i32);
    sphere_mean(n * m, samples, seed, |x| {
        let w = quad.hull_support_integral(x) / norm;
        Ok(w.powi(power))
    })
}

fn check_nm(n: usize, m: usize) -> Result<()> {
    if !(2..=3).contains(&n) {
        return Err(Error::TooHighDimension(n));
    }
    if m == 0 || n * m > 9 {
        return Err(Error::InvalidInput(format!("need 1 ≤ m and nm ≤ 9, got n={n}, m={m}")));
    }
    Ok(())
}

/// `ω_{nm} / (n^{nm} ωₙ^m)`, the prefactor turning `E[W^{−nm}]` into the
/// upper constant.
pub fn petty_prefactor(n: usize, m: usize) -> f64 {
    let nm = n * m;
    unit_ball_volume(nm) / ((n as f64).powi(nm as i32) * unit_ball_volume(n).powi(m as i32))
}

/// Upper constant `ω_{nm}/(n^{nm}ωₙ^m) · E[W_n(C_Θ̄)^{−nm}]`, attained by ellipsoids.
pub fn petty_upper_constant(n: usize, m: usize, samples: u64, seed: u64) -> Result<EstimateCI> {
    Ok(mean_width_constant(n, m, samples, seed)?.scaled(petty_prefactor(n, m)))
}

/// Lower constant `C(nm+n, n) / n^{nm}`, attained by simplices.
pub fn zhang_lower_constant(n: usize, m: usize) -> f64 {
    let nm = n * m;
    let mut binom = 1.0;
    for k in 0..n {
        binom = binom * (nm + n - k) as f64 / (k + 1) as f64;
    }
    binom / (n as f64).powi(nm as i32)
}

/// Default Monte Carlo sample count for `(n, m)`.
pub fn default_samples(n: usize, m: usize) -> u64 {
    if n * m >= 8 {
        400_000
    } else {
        100_000
    }
}
