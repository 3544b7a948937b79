//! Polytopes in R² and R³ with synchronized vertex and halfspace data.
//!
//! Every [`Polytope`] is full-dimensional. Lower-dimensional sets (segments,
//! the hulls `C_θ̄`) only enter as [`Summand`]s of Minkowski sums.

mod clip;
mod hull2;
mod hull3;
pub mod shapes;
pub(crate) mod vec3;

use crate::{Error, Matrix, Result, Vector, EPS_GEOM, EPS_VOL};
use clip::{Clip2, Clip3};
use hull2::monotone_chain;
use hull3::hull3;
use vec3::{loop_area, P2, P3};

/// Closed halfspace `{x : ⟨normal, x⟩ ≤ offset}` with unit normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

impl Halfspace {
    /// Normalizes `normal`; fails on a zero normal.
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        let len = normal.norm();
        if len == 0.0 || !len.is_finite() {
            return Err(Error::ZeroDirection);
        }
        Ok(Halfspace {
            normal: normal / len,
            offset: offset / len,
        })
    }

    pub fn translated(&self, x: &Vector) -> Self {
        Halfspace {
            normal: self.normal.clone(),
            offset: self.offset + self.normal.dot(x),
        }
    }
}

/// A facet: unit outward normal, offset, `(n-1)`-area and its vertices.
///
/// In R³ the vertex indices run counterclockwise seen from outside; in R²
/// they are the two endpoints of the edge.
#[derive(Clone, Debug)]
pub struct Facet {
    pub normal: Vector,
    pub offset: f64,
    pub area: f64,
    pub vertices: Vec<usize>,
}

/// One atom `(u, a)` of a discrete surface area measure.
#[derive(Clone, Debug)]
pub struct Atom {
    pub normal: Vector,
    pub weight: f64,
}

/// Discrete measure on the sphere: sum of weighted point masses.
#[derive(Clone, Debug)]
pub struct FacetMeasure {
    dim: usize,
    atoms: Vec<Atom>,
}

impl FacetMeasure {
    pub fn new(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if a.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.normal.len(),
                });
            }
            if !(a.weight > 0.0) {
                return Err(Error::InvalidInput(format!("atom weight {} is not positive", a.weight)));
            }
        }
        Ok(FacetMeasure { dim, atoms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Total mass, i.e. the surface area of the body.
    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `‖Σ aⱼ uⱼ‖`, zero for the surface measure of a closed body.
    pub fn closedness_residual(&self) -> f64 {
        let mut s = Vector::zeros(self.dim);
        for a in &self.atoms {
            s.axpy(a.weight, &a.normal, 1.0);
        }
        s.norm()
    }

    /// `∫ f dσ` for a function of the unit normal.
    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        self.atoms.iter().map(|a| a.weight * f(a.normal.as_slice())).sum()
    }
}

/// Line segment `[a, b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub a: Vector,
    pub b: Vector,
}

impl Segment {
    pub fn new(a: Vector, b: Vector) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        Ok(Segment { a, b })
    }

    /// `[-θ/2, θ/2]`.
    pub fn centered(theta: &Vector) -> Self {
        Segment {
            a: -theta * 0.5,
            b: theta * 0.5,
        }
    }

    /// `[o, u]`.
    pub fn from_origin(u: &Vector) -> Self {
        Segment {
            a: Vector::zeros(u.len()),
            b: u.clone(),
        }
    }
}

/// A compact convex summand for Minkowski sums and mixed volumes.
#[derive(Clone, Debug)]
pub enum Summand {
    Polytope(Polytope),
    Segment(Segment),
    /// Convex hull of finitely many points, possibly lower dimensional.
    Hull(Vec<Vector>),
}

impl Summand {
    pub fn dim(&self) -> usize {
        match self {
            Summand::Polytope(p) => p.dim(),
            Summand::Segment(s) => s.a.len(),
            Summand::Hull(v) => v.first().map_or(0, |p| p.len()),
        }
    }

    pub fn points(&self) -> Vec<Vector> {
        match self {
            Summand::Polytope(p) => p.vertices().to_vec(),
            Summand::Segment(s) => vec![s.a.clone(), s.b.clone()],
            Summand::Hull(v) => v.clone(),
        }
    }

    /// Support function `h(u) = max ⟨p, u⟩` over the generating points.
    pub fn support(&self, u: &[f64]) -> f64 {
        let h = |p: &Vector| p.iter().zip(u).map(|(a, b)| a * b).sum::<f64>();
        match self {
            Summand::Polytope(p) => p.vertices().iter().map(h).fold(f64::NEG_INFINITY, f64::max),
            Summand::Segment(s) => h(&s.a).max(h(&s.b)),
            Summand::Hull(v) => v.iter().map(h).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn scaled(&self, lambda: f64) -> Summand {
        Summand::Hull(self.points().into_iter().map(|p| p * lambda).collect())
    }

    pub fn translated(&self, x: &Vector) -> Summand {
        match self {
            Summand::Polytope(p) => Summand::Polytope(p.translate(x)),
            other => Summand::Hull(other.points().into_iter().map(|p| p + x).collect()),
        }
    }
}

impl From<Polytope> for Summand {
    fn from(p: Polytope) -> Self {
        Summand::Polytope(p)
    }
}

impl From<Segment> for Summand {
    fn from(s: Segment) -> Self {
        Summand::Segment(s)
    }
}

pub(crate) fn to_p3(v: &Vector) -> P3 {
    let mut p = [0.0; 3];
    for (k, c) in v.iter().take(3).enumerate() {
        p[k] = *c;
    }
    p
}

fn from_p3(p: P3, dim: usize) -> Vector {
    Vector::from_iterator(dim, p.iter().copied().take(dim))
}

/// Pairwise sums of two point sets.
pub(crate) fn minkowski_points(a: &[P3], b: &[P3]) -> Vec<P3> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for p in a {
        for q in b {
            out.push(vec3::add(*p, *q));
        }
    }
    out
}

/// Hull volume of a point cloud, zero when it is not full dimensional.
pub(crate) fn points_volume(dim: usize, pts: &[P3]) -> f64 {
    match dim {
        2 => {
            let flat: Vec<P2> = pts.iter().map(|p| [p[0], p[1]]).collect();
            let tol = EPS_GEOM * vec3::extent(pts);
            let ring = monotone_chain(&flat, tol);
            if ring.len() < 3 {
                return 0.0;
            }
            let r: Vec<P2> = ring.iter().map(|&i| flat[i]).collect();
            loop_area(&r).max(0.0)
        }
        3 => match hull3(pts, EPS_GEOM) {
            Ok(h) => hull3_volume(&h),
            Err(_) => 0.0,
        },
        _ => f64::NAN,
    }
}

/// Strict hull vertices of a point cloud, or the cloud itself if degenerate.
pub(crate) fn reduce_points(dim: usize, pts: Vec<P3>) -> Vec<P3> {
    match dim {
        2 => {
            let flat: Vec<P2> = pts.iter().map(|p| [p[0], p[1]]).collect();
            let ring = monotone_chain(&flat, EPS_GEOM * vec3::extent(&pts));
            if ring.len() < 3 {
                pts
            } else {
                ring.iter().map(|&i| pts[i]).collect()
            }
        }
        _ => match hull3(&pts, EPS_GEOM) {
            Ok(h) => h.vertices,
            Err(_) => pts,
        },
    }
}

fn hull3_volume(h: &hull3::Hull3) -> f64 {
    let c = centroid3(&h.vertices);
    h.facets
        .iter()
        .map(|f| f.area * (f.offset - vec3::dot(f.normal, c)))
        .sum::<f64>()
        / 3.0
}

fn centroid3(pts: &[P3]) -> P3 {
    let mut c = [0.0; 3];
    for p in pts {
        for k in 0..3 {
            c[k] += p[k];
        }
    }
    vec3::scale(c, 1.0 / pts.len() as f64)
}

/// Convex polytope in R² or R³.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Vec<Facet>,
}

impl Polytope {
    /// Convex hull of a point set spanning R^n, n ∈ {2, 3}.
    pub fn convex_hull(points: &[Vector]) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.len());
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        let pts: Vec<P3> = points.iter().map(to_p3).collect();
        Self::from_p3(dim, &pts)
    }

    pub(crate) fn from_p3(dim: usize, pts: &[P3]) -> Result<Self> {
        match dim {
            2 => Self::hull_2d(pts),
            3 => Self::hull_3d(pts),
            d => Err(Error::TooHighDimension(d)),
        }
    }

    fn hull_2d(pts: &[P3]) -> Result<Self> {
        let flat: Vec<P2> = pts.iter().map(|p| [p[0], p[1]]).collect();
        let tol = EPS_GEOM * vec3::extent(pts);
        let ring = monotone_chain(&flat, tol);
        if ring.len() < 3 {
            return Err(Error::DegenerateInput {
                dim: 2,
                rank: ring.len().saturating_sub(1),
            });
        }
        let r: Vec<P2> = ring.iter().map(|&i| flat[i]).collect();
        if loop_area(&r) <= tol * vec3::extent(pts) {
            return Err(Error::DegenerateInput { dim: 2, rank: 1 });
        }
        Ok(Self::from_ring(&r))
    }

    fn from_ring(r: &[P2]) -> Self {
        let k = r.len();
        let vertices = r.iter().map(|p| Vector::from_column_slice(p)).collect();
        let facets = (0..k)
            .map(|i| {
                let (p, q) = (r[i], r[(i + 1) % k]);
                let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
                let len = (dx * dx + dy * dy).sqrt();
                let normal = Vector::from_column_slice(&[dy / len, -dx / len]);
                Facet {
                    offset: normal[0] * p[0] + normal[1] * p[1],
                    normal,
                    area: len,
                    vertices: vec![i, (i + 1) % k],
                }
            })
            .collect();
        Polytope {
            dim: 2,
            vertices,
            facets,
        }
    }

    fn hull_3d(pts: &[P3]) -> Result<Self> {
        let h = hull3(pts, EPS_GEOM)?;
        if h.facets.len() < 4 {
            return Err(Error::DegenerateInput { dim: 3, rank: 2 });
        }
        let vertices = h.vertices.iter().map(|p| from_p3(*p, 3)).collect();
        let facets = h
            .facets
            .into_iter()
            .map(|f| Facet {
                normal: from_p3(f.normal, 3),
                offset: f.offset,
                area: f.area,
                vertices: f.verts,
            })
            .collect();
        Ok(Polytope {
            dim: 3,
            vertices,
            facets,
        })
    }

    /// Bounded intersection of halfspaces.
    ///
    /// The computation starts from the box `[-R, R]^n`, `R = bound` (default
    /// `1e6`); a result touching that box is reported as [`Error::Unbounded`].
    pub fn halfspace_intersection(halfspaces: &[Halfspace], bound: Option<f64>) -> Result<Self> {
        let dim = halfspaces.first().map_or(0, |h| h.normal.len());
        if let Some(h) = halfspaces.iter().find(|h| h.normal.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: h.normal.len(),
            });
        }
        if !(2..=3).contains(&dim) {
            return Err(Error::TooHighDimension(dim));
        }
        let r = bound.unwrap_or(1e6);
        let pts = Self::clip_box(halfspaces, dim, r);
        if pts.is_empty() {
            // distinguish a flat intersection from an empty one by relaxing every constraint
            let slack = 1e-6 * halfspaces.iter().map(|h| h.offset.abs()).fold(1.0, f64::max);
            let relaxed: Vec<Halfspace> = halfspaces
                .iter()
                .map(|h| Halfspace {
                    normal: h.normal.clone(),
                    offset: h.offset + slack,
                })
                .collect();
            return Err(if Self::clip_box(&relaxed, dim, r).is_empty() {
                Error::Empty
            } else {
                Error::LowerDimensional { volume: 0.0 }
            });
        }
        if pts
            .iter()
            .any(|p| p.iter().take(dim).any(|c| c.abs() >= r * (1.0 - 1e-12)))
        {
            return Err(Error::Unbounded);
        }
        // clipping a huge box loses digits; redo it in a box just around the result
        let reach = pts
            .iter()
            .flat_map(|p| p.iter().take(dim))
            .fold(0.0f64, |a, c| a.max(c.abs()));
        let pts = Self::clip_box(halfspaces, dim, 2.0 * reach + 1e-6);
        if pts.is_empty() {
            return Err(Error::Empty);
        }
        let volume = points_volume(dim, &pts);
        if volume < EPS_VOL {
            return Err(Error::LowerDimensional { volume });
        }
        Self::from_p3(dim, &pts)
    }

    fn clip_box(halfspaces: &[Halfspace], dim: usize, r: f64) -> Vec<P3> {
        let scale = halfspaces.iter().map(|h| h.offset.abs()).fold(1e-3, f64::max).min(r);
        let tol = EPS_GEOM * scale;
        let bx = shapes::cube_between(dim, -r, r);
        match dim {
            2 => {
                let mut c = bx.clip2();
                for h in halfspaces {
                    c.cut([h.normal[0], h.normal[1]], h.offset, tol);
                }
                c.ring.iter().map(|p| [p[0], p[1], 0.0]).collect()
            }
            _ => {
                let mut c = bx.clip3();
                for h in halfspaces {
                    c.cut(to_p3(&h.normal), h.offset, tol);
                }
                c.points()
            }
        }
    }

    /// Volume of `self ∩ ⋂ halfspaces`, zero when empty.
    pub fn clipped_volume(&self, halfspaces: &[Halfspace]) -> f64 {
        let tol = EPS_GEOM * self.extent();
        match self.dim {
            2 => {
                let mut c = self.clip2();
                for h in halfspaces {
                    c.cut([h.normal[0], h.normal[1]], h.offset, tol);
                    if c.ring.is_empty() {
                        return 0.0;
                    }
                }
                c.area()
            }
            _ => {
                let mut c = self.clip3();
                for h in halfspaces {
                    c.cut(to_p3(&h.normal), h.offset, tol);
                    if c.faces.is_empty() {
                        return 0.0;
                    }
                }
                c.volume()
            }
        }
    }

    fn clip2(&self) -> Clip2 {
        // facets run counterclockwise, so their first endpoints form the ring
        Clip2 {
            ring: self
                .facets
                .iter()
                .map(|f| {
                    let v = &self.vertices[f.vertices[0]];
                    [v[0], v[1]]
                })
                .collect(),
        }
    }

    fn clip3(&self) -> Clip3 {
        Clip3 {
            faces: self
                .facets
                .iter()
                .map(|f| f.vertices.iter().map(|&i| to_p3(&self.vertices[i])).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn halfspaces(&self) -> Vec<Halfspace> {
        self.facets
            .iter()
            .map(|f| Halfspace {
                normal: f.normal.clone(),
                offset: f.offset,
            })
            .collect()
    }

    pub(crate) fn points_p3(&self) -> Vec<P3> {
        self.vertices.iter().map(to_p3).collect()
    }

    fn extent(&self) -> f64 {
        vec3::extent(&self.points_p3())
    }

    pub fn vertex_centroid(&self) -> Vector {
        let mut c = Vector::zeros(self.dim);
        for v in &self.vertices {
            c += v;
        }
        c / self.vertices.len() as f64
    }

    /// Lebesgue volume as a sum of pyramids over an interior apex.
    pub fn volume(&self) -> f64 {
        let c = self.vertex_centroid();
        self.facets
            .iter()
            .map(|f| f.area * (f.offset - f.normal.dot(&c)))
            .sum::<f64>()
            / self.dim as f64
    }

    pub fn surface_area(&self) -> f64 {
        self.facets.iter().map(|f| f.area).sum()
    }

    /// One atom `(uⱼ, aⱼ)` per facet.
    pub fn surface_area_measure(&self) -> FacetMeasure {
        FacetMeasure {
            dim: self.dim,
            atoms: self
                .facets
                .iter()
                .map(|f| Atom {
                    normal: f.normal.clone(),
                    weight: f.area,
                })
                .collect(),
        }
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|p| p.iter().zip(u).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.facets.iter().all(|f| f.normal.dot(x) <= f.offset + tol)
    }

    pub fn minkowski_sum(&self, other: &Summand) -> Result<Polytope> {
        if other.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim(),
            });
        }
        let b: Vec<P3> = other.points().iter().map(to_p3).collect();
        Self::from_p3(self.dim, &minkowski_points(&self.points_p3(), &b))
    }

    pub fn translate(&self, x: &Vector) -> Polytope {
        Polytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v + x).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    offset: f.offset + f.normal.dot(x),
                    ..f.clone()
                })
                .collect(),
        }
    }

    /// Image under a nonsingular linear map.
    pub fn linear_image(&self, a: &Matrix) -> Result<Polytope> {
        if a.nrows() != self.dim || a.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: a.nrows(),
            });
        }
        if a.determinant().abs() < 1e-12 {
            return Err(Error::SingularMatrix);
        }
        let pts: Vec<Vector> = self.vertices.iter().map(|v| a * v).collect();
        Self::convex_hull(&pts)
    }

    pub fn scaled(&self, lambda: f64) -> Result<Polytope> {
        self.linear_image(&(Matrix::identity(self.dim, self.dim) * lambda))
    }

    /// `(n-1)`-volume of the orthogonal projection onto `θ⊥`, `|θ| = 1`.
    pub fn project_shadow(&self, theta: &Vector) -> Result<f64> {
        if theta.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: theta.len(),
            });
        }
        let len = theta.norm();
        if len == 0.0 {
            return Err(Error::ZeroDirection);
        }
        let t = theta / len;
        match self.dim {
            2 => {
                let perp = [-t[1], t[0]];
                let proj = self.vertices.iter().map(|v| v[0] * perp[0] + v[1] * perp[1]);
                let (lo, hi) = proj.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)));
                Ok(hi - lo)
            }
            _ => {
                let (u, v) = vec3::plane_basis(to_p3(&t));
                let flat: Vec<P2> = self
                    .points_p3()
                    .iter()
                    .map(|p| [vec3::dot(*p, u), vec3::dot(*p, v)])
                    .collect();
                let ring = monotone_chain(&flat, EPS_GEOM * self.extent());
                let r: Vec<P2> = ring.iter().map(|&i| flat[i]).collect();
                Ok(if r.len() < 3 { 0.0 } else { loop_area(&r) })
            }
        }
    }

    /// Surface area as the outer parallel-volume derivative.
    ///
    /// Uses `(Vol(P + εB̃) − Vol(P)) / ε` with `B̃` a regular 720-gon (n = 2) or
    /// a level-4 icosphere (n = 3). With several `ε`, the two smallest are
    /// combined by linear extrapolation.
    pub fn surface_area_via_limit(&self, eps: &[f64]) -> Result<f64> {
        let mut es: Vec<f64> = eps.iter().copied().filter(|e| *e > 0.0).collect();
        if es.is_empty() {
            return Err(Error::InvalidInput("need at least one positive ε".into()));
        }
        es.sort_by(|a, b| b.total_cmp(a));
        let ball: Vec<P3> = shapes::ball_approximation(self.dim).points_p3();
        let base = self.volume();
        let own = self.points_p3();
        let quotient = |e: f64| -> f64 {
            let scaled: Vec<P3> = ball.iter().map(|p| vec3::scale(*p, e)).collect();
            (points_volume(self.dim, &minkowski_points(&own, &scaled)) - base) / e
        };
        let k = es.len();
        if k == 1 {
            return Ok(quotient(es[0]));
        }
        let (e1, e2) = (es[k - 2], es[k - 1]);
        let (q1, q2) = (quotient(e1), quotient(e2));
        Ok((e1 * q2 - e2 * q1) / (e1 - e2))
    }

    /// Worst violation of the vertex/halfspace duality invariants.
    ///
    /// Returns the largest of: a vertex outside some halfspace, a facet
    /// vertex off its plane, and the closedness residual `‖Σ aⱼuⱼ‖`.
    pub fn representation_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for v in &self.vertices {
            for f in &self.facets {
                worst = worst.max(f.normal.dot(v) - f.offset);
            }
        }
        for f in &self.facets {
            for &i in &f.vertices {
                worst = worst.max((f.normal.dot(&self.vertices[i]) - f.offset).abs());
            }
        }
        worst.max(self.surface_area_measure().closedness_residual())
    }
}
