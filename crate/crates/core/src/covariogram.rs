//! The mth-order covariogram `g_{K,m}(x̄) = Vol(K ∩ ⋂ᵢ (xᵢ + K))` and its
//! one-sided radial derivative at the origin.

use crate::gauge::DirectionTuple;
use crate::kernel::{Halfspace, Polytope};
use crate::{Error, Result, Vector};

/// Step sizes used by [`radial_derivative`] unless told otherwise.
pub const DEFAULT_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// `Vol(K ∩ ⋂ᵢ (xᵢ + K))`, zero when the intersection is empty.
pub fn covariogram(k: &Polytope, x: &DirectionTuple) -> Result<f64> {
    if x.n() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: x.n(),
        });
    }
    let base = k.halfspaces();
    let mut cuts: Vec<Halfspace> = Vec::with_capacity(base.len() * x.m());
    for i in 0..x.m() {
        let t = Vector::from_column_slice(x.block(i));
        if t.iter().all(|c| *c == 0.0) {
            continue;
        }
        cuts.extend(base.iter().map(|h| h.translated(&t)));
    }
    Ok(k.clipped_volume(&cuts))
}

/// Extrapolated `d/dr g_{K,m}(rθ̄)` at `r = 0⁺`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialDerivative {
    pub value: f64,
    /// Difference of the last two extrapolants.
    pub error_estimate: f64,
}

/// One-sided differences at the steps `r₀ > r₁ > …`, combined by
/// first-order Richardson extrapolation.
pub fn radial_derivative(k: &Polytope, theta: &DirectionTuple, steps: &[f64]) -> Result<RadialDerivative> {
    if steps.len() < 2 {
        return Err(Error::InvalidInput("need at least two steps".into()));
    }
    if steps.iter().any(|r| !(*r > 0.0)) || steps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput(
            "steps must be positive and strictly decreasing".into(),
        ));
    }
    if theta.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let g0 = k.volume();
    let mut diffs = Vec::with_capacity(steps.len());
    for (i, &r) in steps.iter().enumerate() {
        let g = covariogram(k, &theta.scaled(r))?;
        if i == 0 && g == 0.0 {
            return Err(Error::StepTooLarge);
        }
        diffs.push((g - g0) / r);
    }
    let extrapolated: Vec<f64> = steps
        .windows(2)
        .zip(diffs.windows(2))
        .map(|(r, d)| (r[0] * d[1] - r[1] * d[0]) / (r[0] - r[1]))
        .collect();
    let last = extrapolated.len() - 1;
    let error_estimate = if last == 0 {
        (diffs[1] - diffs[0]).abs()
    } else {
        (extrapolated[last] - extrapolated[last - 1]).abs()
    };
    Ok(RadialDerivative {
        value: extrapolated[last],
        error_estimate,
    })
}
