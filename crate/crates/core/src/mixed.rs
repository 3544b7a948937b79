//! Mixed volumes by polarization over Minkowski-sum volumes, and the mixed
//! mth-order gauges `n·V(K₁,…,K_{n−1}, C_{−θ̄})`.

use crate::gauge::{ConvexBody, DirectionTuple, Gauge, MOrderGauge};
use crate::kernel::vec3::P3;
use crate::kernel::{minkowski_points, points_volume, reduce_points, to_p3, Polytope, Summand};
use crate::{Error, Result};

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn check_tuple(bodies: &[Summand], len: usize, n: usize) -> Result<()> {
    if !(2..=3).contains(&n) {
        return Err(Error::TooHighDimension(n));
    }
    if bodies.len() != len {
        return Err(Error::InvalidInput(format!(
            "expected {len} bodies in ℝ^{n}, got {}",
            bodies.len()
        )));
    }
    for b in bodies {
        if b.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.dim(),
            });
        }
    }
    Ok(())
}

/// Vertices of `Σ_{i∈S} Kᵢ` for every subset `S` (bit mask), `{o}` for `S = ∅`.
fn subset_sums(n: usize, parts: &[Vec<P3>]) -> Vec<Vec<P3>> {
    let mut sums: Vec<Vec<P3>> = vec![vec![[0.0; 3]]];
    for mask in 1usize..1 << parts.len() {
        let low = mask.trailing_zeros() as usize;
        let rest = &sums[mask & (mask - 1)];
        let pts = minkowski_points(rest, &parts[low]);
        sums.push(reduce_points(n, pts));
    }
    sums
}

/// `V_n(K₁,…,Kₙ) = (1/n!) Σ_{∅≠S} (−1)^{n−|S|} Vol(Σ_{i∈S} Kᵢ)`.
pub fn mixed_volume(bodies: &[Summand]) -> Result<f64> {
    let n = bodies.first().map_or(0, |b| b.dim());
    if bodies.len() > 3 {
        return Err(Error::TooHighDimension(bodies.len()));
    }
    check_tuple(bodies, n, n)?;
    let parts: Vec<Vec<P3>> = bodies.iter().map(|b| b.points().iter().map(to_p3).collect()).collect();
    let sums = subset_sums(n, &parts);
    let mut total = 0.0;
    for (mask, pts) in sums.iter().enumerate().skip(1) {
        let sign = if (n - mask.count_ones() as usize).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        total += sign * points_volume(n, pts);
    }
    Ok(total / factorial(n))
}

/// `V_n(K[n−1], L) = (1/n) Σⱼ aⱼ h_L(uⱼ)` over the facets of `K`.
pub fn mixed_volume_via_perturbation(k: &Polytope, l: &Summand) -> Result<f64> {
    if l.dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: l.dim(),
        });
    }
    let sum: f64 = k.facets().iter().map(|f| f.area * l.support(f.normal.as_slice())).sum();
    Ok(sum / k.dim() as f64)
}

/// `(Vol(K + εL) − Vol(K)) / (nε)`, the O(ε)-biased difference quotient.
pub fn mixed_volume_finite_difference(k: &Polytope, l: &Summand, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput(format!("ε = {eps} must be positive")));
    }
    let grown = minkowski_points(
        &k.points_p3(),
        &l.scaled(eps).points().iter().map(to_p3).collect::<Vec<_>>(),
    );
    let n = k.dim();
    Ok((points_volume(n, &grown) - k.volume()) / (n as f64 * eps))
}

/// Evaluates `θ̄ ↦ n·V_n(K₁,…,K_{n−1}, C_{−θ̄})` by polarization.
///
/// The `2^{n−1}` partial sums of the `Kᵢ` and their volumes do not depend on
/// `θ̄` and are computed once.
#[derive(Clone, Debug)]
pub struct MixedGaugeEvaluator {
    n: usize,
    m: usize,
    /// Vertices of `Σ_{i∈S} Kᵢ` indexed by bit mask.
    sums: Vec<Vec<P3>>,
    /// Signed, factorial-scaled sum of the volumes of the nonempty `Σ_S Kᵢ`.
    fixed: f64,
}

impl MixedGaugeEvaluator {
    pub fn new(bodies: &[Polytope], m: usize) -> Result<Self> {
        let n = bodies.first().map_or(0, |b| b.dim());
        let wrapped: Vec<Summand> = bodies.iter().cloned().map(Summand::Polytope).collect();
        check_tuple(&wrapped, n.saturating_sub(1), n)?;
        if m == 0 {
            return Err(Error::InvalidInput("m must be positive".into()));
        }
        let parts: Vec<Vec<P3>> = bodies.iter().map(|b| b.points_p3()).collect();
        let sums = subset_sums(n, &parts);
        // subsets of {K₁,…,K_{n−1}, C} without C
        let mut fixed = 0.0;
        for (mask, pts) in sums.iter().enumerate().skip(1) {
            let sign = if (n - mask.count_ones() as usize).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            fixed += sign * points_volume(n, pts);
        }
        Ok(MixedGaugeEvaluator { n, m, sums, fixed })
    }

    fn eval_checked(&self, theta: &[f64]) -> f64 {
        let n = self.n;
        let mut c = vec![[0.0; 3]];
        for b in theta.chunks_exact(n) {
            let mut p = [0.0; 3];
            for k in 0..n {
                p[k] = -b[k];
            }
            c.push(p);
        }
        let mut total = self.fixed;
        for (mask, pts) in self.sums.iter().enumerate() {
            // |S| counts C as well
            let size = mask.count_ones() as usize + 1;
            let sign = if (n - size).is_multiple_of(2) { 1.0 } else { -1.0 };
            total += sign * points_volume(n, &minkowski_points(pts, &c));
        }
        n as f64 * total / factorial(n)
    }

    pub fn eval_tuple(&self, theta: &DirectionTuple) -> Result<f64> {
        if theta.n() != self.n || theta.m() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.n * self.m,
                found: theta.n() * theta.m(),
            });
        }
        if theta.is_zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(self.eval_checked(theta.as_slice()))
    }
}

impl Gauge for MixedGaugeEvaluator {
    fn dim(&self) -> usize {
        self.n * self.m
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.eval_checked(x)
    }
}

/// `3V(K₁,K₂,C_{−θ̄}) = ½(‖θ̄‖_{Π°ᵐ(K₁+K₂)} − ‖θ̄‖_{Π°ᵐK₁} − ‖θ̄‖_{Π°ᵐK₂})` in ℝ³,
/// polarizing the first two slots of `V(·,·,C)` through facet sums; in the
/// plane the mixed gauge of a single body is its own gauge.
#[derive(Clone, Debug)]
pub struct PolarizedMixedGauge {
    n: usize,
    m: usize,
    sum: MOrderGauge,
    parts: Vec<MOrderGauge>,
}

impl PolarizedMixedGauge {
    pub fn new(bodies: &[Polytope], m: usize) -> Result<Self> {
        let n = bodies.first().map_or(0, |b| b.dim());
        let wrapped: Vec<Summand> = bodies.iter().cloned().map(Summand::Polytope).collect();
        check_tuple(&wrapped, n.saturating_sub(1), n)?;
        let gauge = |p: &Polytope| ConvexBody::Polytope(p.clone()).m_order_gauge(m);
        match bodies {
            [k] => Ok(PolarizedMixedGauge {
                n,
                m,
                sum: gauge(k)?,
                parts: Vec::new(),
            }),
            [k1, k2] => Ok(PolarizedMixedGauge {
                n,
                m,
                sum: gauge(&k1.minkowski_sum(&Summand::Polytope(k2.clone()))?)?,
                parts: vec![gauge(k1)?, gauge(k2)?],
            }),
            _ => unreachable!("check_tuple admits n ∈ {{2, 3}}"),
        }
    }
}

impl Gauge for PolarizedMixedGauge {
    fn dim(&self) -> usize {
        self.n * self.m
    }

    fn eval(&self, x: &[f64]) -> f64 {
        if self.parts.is_empty() {
            return self.sum.eval(x);
        }
        0.5 * (self.sum.eval(x) - self.parts.iter().map(|g| g.eval(x)).sum::<f64>())
    }
}

/// `‖θ̄‖ = n·V_n(K₁,…,K_{n−1}, C_{−θ̄})`.
pub fn mixed_gauge(bodies: &[Polytope], theta: &DirectionTuple) -> Result<f64> {
    MixedGaugeEvaluator::new(bodies, theta.m())?.eval_tuple(theta)
}

/// `(V_n(K[n−1], M)ⁿ, Vol(K)^{n−1} Vol(M))`; the first is never smaller.
pub fn minkowski_first_check(k: &Polytope, m: &Polytope) -> Result<(f64, f64)> {
    let n = k.dim();
    let mut tuple: Vec<Summand> = vec![Summand::Polytope(k.clone()); n - 1];
    tuple.push(Summand::Polytope(m.clone()));
    let v = mixed_volume(&tuple)?;
    Ok((v.powi(n as i32), k.volume().powi(n as i32 - 1) * m.volume()))
}

/// Hull of `{o, −θ₁, …, −θ_m}` as a summand.
pub fn negative_hull(theta: &DirectionTuple) -> Summand {
    Summand::Hull(theta.negative_hull_points())
}

/// Repeats `body` `count` times, the `K[j]` notation.
pub fn repeated(body: &Summand, count: usize) -> Vec<Summand> {
    vec![body.clone(); count]
}
