//! Support functions of `C_θ̄`, and gauges of classical and mth-order polar
//! projection bodies.
//!
//! The mth-order gauge of `K` at `θ̄ = (θ₁,…,θ_m)` is
//! `∫ maxᵢ ⟨θᵢ,u⟩₋ dσ_K(u)`, with `a₋ = max(0, −a)`. For polytopes this is a
//! finite atom sum; for balls and ellipsoids it is evaluated by the fixed
//! sphere quadrature.

use crate::kernel::vec3::{self, P3};
use crate::kernel::{minkowski_points, reduce_points, to_p3, Halfspace, Polytope};
use crate::positions::Ellipsoid;
use crate::quadrature::SphereQuadrature;
use crate::stochastic::unit_ball_volume;
use crate::{Error, Matrix, Result, Vector};

/// `θ̄ = (θ₁,…,θ_m) ∈ (ℝⁿ)^m`, stored as one contiguous `nm`-vector.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionTuple {
    n: usize,
    m: usize,
    data: Vec<f64>,
}

impl DirectionTuple {
    pub fn new(n: usize, m: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidInput(format!("direction tuple with n={n}, m={m}")));
        }
        if data.len() != n * m {
            return Err(Error::DimensionMismatch {
                expected: n * m,
                found: data.len(),
            });
        }
        Ok(DirectionTuple { n, m, data })
    }

    pub fn from_blocks(blocks: &[Vector]) -> Result<Self> {
        let n = blocks.first().map_or(0, |b| b.len());
        let mut data = Vec::with_capacity(n * blocks.len());
        for b in blocks {
            if b.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: b.len(),
                });
            }
            data.extend(b.iter());
        }
        Self::new(n, blocks.len(), data)
    }

    /// `u` placed in block `i`, zeros elsewhere.
    pub fn embedded(m: usize, i: usize, u: &Vector) -> Result<Self> {
        if i >= m {
            return Err(Error::InvalidInput(format!("block {i} out of range for m={m}")));
        }
        let n = u.len();
        let mut data = vec![0.0; n * m];
        data[i * n..(i + 1) * n].copy_from_slice(u.as_slice());
        Self::new(n, m, data)
    }

    /// `(u,…,u)/√m`.
    pub fn diagonal(m: usize, u: &Vector) -> Result<Self> {
        let s = 1.0 / (m as f64).sqrt();
        let data = (0..m).flat_map(|_| u.iter().map(move |x| x * s)).collect();
        Self::new(u.len(), m, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn block(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn blocks(&self) -> Vec<Vector> {
        (0..self.m).map(|i| Vector::from_column_slice(self.block(i))).collect()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == 0.0)
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        DirectionTuple {
            data: self.data.iter().map(|x| x * lambda).collect(),
            ..self.clone()
        }
    }

    /// `(Aθ₁, …, Aθ_m)`.
    pub fn mapped(&self, a: &Matrix) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for b in self.data.chunks(self.n) {
            data.extend((a * Vector::from_column_slice(b)).iter());
        }
        DirectionTuple { data, ..self.clone() }
    }

    /// Points `−θ₁, …, −θ_m` and `o`, whose hull is `C_{−θ̄}`.
    pub fn negative_hull_points(&self) -> Vec<Vector> {
        let mut pts = vec![Vector::zeros(self.n)];
        pts.extend(self.data.chunks(self.n).map(|b| -Vector::from_column_slice(b)));
        pts
    }
}

/// Which of `C_θ̄` and `C_{−θ̄}` a support evaluation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `maxᵢ ⟨θᵢ,v⟩₋` on raw blocks; the workhorse of every gauge.
#[inline]
fn neg_part_max(theta: &[f64], n: usize, v: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for b in theta.chunks_exact(n) {
        let mut s = 0.0;
        for k in 0..n {
            s -= b[k] * v[k];
        }
        best = best.max(s);
    }
    best
}

/// Support function of `C_θ̄` (`Sign::Plus`) or `C_{−θ̄}` (`Sign::Minus`).
pub fn support_c(theta: &DirectionTuple, v: &[f64], sign: Sign) -> f64 {
    match sign {
        Sign::Minus => neg_part_max(&theta.data, theta.n, v),
        Sign::Plus => {
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            neg_part_max(&theta.data, theta.n, &neg)
        }
    }
}

/// `W_n(L) = (1/(nωₙ)) ∫ h_L` by the standard sphere quadrature.
pub fn mean_width(n: usize, support: impl FnMut(&[f64]) -> f64) -> Result<f64> {
    let q = SphereQuadrature::standard(n)?;
    Ok(q.integrate(support) / (n as f64 * unit_ball_volume(n)))
}

/// `nωₙ W_n(C_{−θ̄})`, the mth-order gauge of the unit ball.
pub fn gauge_of_ball_m_order(theta: &DirectionTuple) -> Result<f64> {
    if theta.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let q = SphereQuadrature::standard(theta.n)?;
    let neg: Vec<f64> = theta.data.iter().map(|x| -x).collect();
    Ok(q.hull_support_integral(&neg))
}

/// `Π°K` of a polytope as an explicit polytope: the polar of the zonotope
/// `ΠK = Σⱼ ½aⱼ[−uⱼ, uⱼ]`, whose support function is the classical gauge.
pub fn polar_projection_body(p: &Polytope) -> Result<Polytope> {
    let n = p.dim();
    let mut pts: Vec<P3> = vec![[0.0; 3]];
    for f in p.facets() {
        let g = to_p3(&(&f.normal * (0.5 * f.area)));
        pts = reduce_points(n, minkowski_points(&pts, &[g, vec3::scale(g, -1.0)]));
    }
    let zonotope = Polytope::from_p3(n, &pts)?;
    let cuts = zonotope
        .vertices()
        .iter()
        .map(|z| Halfspace::new(z.clone(), 1.0))
        .collect::<Result<Vec<_>>>()?;
    Polytope::halfspace_intersection(&cuts, None)
}

/// A body whose projection-body gauges can be evaluated.
#[derive(Clone, Debug)]
pub enum ConvexBody {
    Polytope(Polytope),
    /// Euclidean ball of the given radius centred at the origin.
    Ball {
        dim: usize,
        radius: f64,
    },
    Ellipsoid(Ellipsoid),
}

impl From<Polytope> for ConvexBody {
    fn from(p: Polytope) -> Self {
        ConvexBody::Polytope(p)
    }
}

impl ConvexBody {
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::TooHighDimension(dim));
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidInput(format!("ball radius {radius} must be positive")));
        }
        Ok(ConvexBody::Ball { dim, radius })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polytope(p) => p.dim(),
            ConvexBody::Ball { dim, .. } => *dim,
            ConvexBody::Ellipsoid(e) => e.dim(),
        }
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match self {
            ConvexBody::Polytope(p) => Some(p),
            _ => None,
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            ConvexBody::Polytope(p) => p.volume(),
            ConvexBody::Ball { dim, radius } => unit_ball_volume(*dim) * radius.powi(*dim as i32),
            ConvexBody::Ellipsoid(e) => e.volume(),
        }
    }

    /// `Vol_{n−1}(∂K)`; for ellipsoids `|det B| ∫ |B⁻¹u| du` by quadrature.
    pub fn surface_area(&self) -> f64 {
        match self {
            ConvexBody::Polytope(p) => p.surface_area(),
            ConvexBody::Ball { dim, radius } => *dim as f64 * unit_ball_volume(*dim) * radius.powi(*dim as i32 - 1),
            ConvexBody::Ellipsoid(e) => e.surface_area(),
        }
    }

    /// Image under `x ↦ Ax + t`.
    pub fn affine_image(&self, a: &Matrix, t: &Vector) -> Result<ConvexBody> {
        match self {
            ConvexBody::Polytope(p) => Ok(ConvexBody::Polytope(p.linear_image(a)?.translate(t))),
            ConvexBody::Ball { dim, radius } => {
                let e = Ellipsoid::new(Matrix::identity(*dim, *dim) * *radius, Vector::zeros(*dim))?;
                Ok(ConvexBody::Ellipsoid(e.affine_image(a, t)?))
            }
            ConvexBody::Ellipsoid(e) => Ok(ConvexBody::Ellipsoid(e.affine_image(a, t)?)),
        }
    }

    /// Precomputed evaluator of `θ̄ ↦ ‖θ̄‖_{Π°ᵐK}` on `ℝ^{nm}`.
    pub fn m_order_gauge(&self, m: usize) -> Result<MOrderGauge> {
        let n = self.dim();
        let kind = match self {
            ConvexBody::Polytope(p) => {
                let mut normals = Vec::with_capacity(n * p.facets().len());
                let mut weights = Vec::with_capacity(p.facets().len());
                for f in p.facets() {
                    normals.extend(f.normal.iter());
                    weights.push(f.area);
                }
                Kind::Atoms { normals, weights }
            }
            ConvexBody::Ball { dim, radius } => Kind::Sphere {
                quad: SphereQuadrature::standard(*dim)?,
                scale: radius.powi(*dim as i32 - 1),
                inverse: None,
            },
            ConvexBody::Ellipsoid(e) => Kind::Sphere {
                quad: SphereQuadrature::standard(n)?,
                scale: e.shape().determinant().abs(),
                inverse: Some(e.shape().clone().try_inverse().ok_or(Error::SingularMatrix)?),
            },
        };
        Ok(MOrderGauge { n, m, kind })
    }

    pub fn gauge_m_order(&self, theta: &DirectionTuple) -> Result<f64> {
        if theta.n() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: theta.n(),
            });
        }
        if theta.is_zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(self.m_order_gauge(theta.m())?.eval(theta.as_slice()))
    }

    /// `½ ∫ |⟨θ,u⟩| dσ_K(u)`, the gauge of the classical polar projection body.
    pub fn gauge_classic(&self, theta: &Vector) -> Result<f64> {
        if theta.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: theta.len(),
            });
        }
        if theta.iter().all(|x| *x == 0.0) {
            return Err(Error::ZeroDirection);
        }
        let n = self.dim();
        let half_abs = |t: &[f64], u: &[f64]| 0.5 * t.iter().zip(u).map(|(a, b)| a * b).sum::<f64>().abs();
        Ok(match self {
            ConvexBody::Polytope(p) => p.surface_area_measure().integrate(|u| half_abs(theta.as_slice(), u)),
            ConvexBody::Ball { radius, .. } => {
                radius.powi(n as i32 - 1) * SphereQuadrature::standard(n)?.integrate(|u| half_abs(theta.as_slice(), u))
            }
            ConvexBody::Ellipsoid(e) => {
                let inv = e.shape().clone().try_inverse().ok_or(Error::SingularMatrix)?;
                let t = inv * theta;
                e.shape().determinant().abs() * SphereQuadrature::standard(n)?.integrate(|u| half_abs(t.as_slice(), u))
            }
        })
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Atoms {
        normals: Vec<f64>,
        weights: Vec<f64>,
    },
    Sphere {
        quad: &'static SphereQuadrature,
        scale: f64,
        /// `B⁻¹` for the ellipsoid `B·Ball + d`.
        inverse: Option<Matrix>,
    },
}

/// A positive 1-homogeneous function on `ℝ^d`, the gauge of a star body.
pub trait Gauge: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
}

/// Gauge from a closure.
pub struct FnGauge<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> Gauge for FnGauge<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// `θ̄ ↦ ‖θ̄‖_{Π°ᵐK}` with body data laid out for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct MOrderGauge {
    n: usize,
    m: usize,
    kind: Kind,
}

impl Gauge for MOrderGauge {
    fn dim(&self) -> usize {
        self.n * self.m
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let n = self.n;
        match &self.kind {
            Kind::Atoms { normals, weights } => normals
                .chunks_exact(n)
                .zip(weights)
                .map(|(u, a)| a * neg_part_max(x, n, u))
                .sum(),
            Kind::Sphere { quad, scale, inverse } => {
                // C_{−θ̄} after mapping θ̄ blockwise by B⁻¹
                let t: Vec<f64> = match inverse {
                    None => x.iter().map(|v| -v).collect(),
                    Some(inv) => x
                        .chunks_exact(n)
                        .flat_map(|b| (0..n).map(move |r| -(0..n).map(|c| inv[(r, c)] * b[c]).sum::<f64>()))
                        .collect(),
                };
                scale * quad.hull_support_integral(&t)
            }
        }
    }
}

/// `(‖θ̄‖_{Π°ᵐ(OK)}, ‖Oᵀθ̄‖_{Π°ᵐK})`; the two agree for orthogonal `O`.
pub fn rotate_body_gauge_check(body: &ConvexBody, o: &Matrix, theta: &DirectionTuple) -> Result<(f64, f64)> {
    let n = body.dim();
    if o.nrows() != n || o.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: o.nrows(),
        });
    }
    let deviation = (o.transpose() * o - Matrix::identity(n, n)).amax();
    if deviation > 1e-9 {
        return Err(Error::NotOrthogonal { deviation });
    }
    let rotated = body.affine_image(o, &Vector::zeros(n))?;
    Ok((
        rotated.gauge_m_order(theta)?,
        body.gauge_m_order(&theta.mapped(&o.transpose()))?,
    ))
}
