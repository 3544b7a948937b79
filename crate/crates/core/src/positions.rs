//! Ellipsoids, the John ellipsoid of a polytope, John position, and the
//! search for minimal surface-area position.

use crate::kernel::Polytope;
use crate::quadrature::SphereQuadrature;
use crate::stochastic::unit_ball_volume;
use crate::{Error, Matrix, Result, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `E = {Bu + d : |u| ≤ 1}`, with `B` symmetric positive definite.
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipsoid {
    b: Matrix,
    d: Vector,
}

impl Ellipsoid {
    pub fn new(b: Matrix, d: Vector) -> Result<Self> {
        let n = d.len();
        if b.nrows() != n || b.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.nrows(),
            });
        }
        let asym = (&b - b.transpose()).amax();
        if asym > 1e-10 * b.amax().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "shape matrix not symmetric (deviation {asym:e})"
            )));
        }
        let b = (&b + b.transpose()) * 0.5;
        if b.clone().cholesky().is_none() {
            return Err(Error::InvalidInput("shape matrix not positive definite".into()));
        }
        Ok(Ellipsoid { b, d })
    }

    pub fn unit_ball(n: usize) -> Self {
        Ellipsoid {
            b: Matrix::identity(n, n),
            d: Vector::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn shape(&self) -> &Matrix {
        &self.b
    }

    pub fn center(&self) -> &Vector {
        &self.d
    }

    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.dim()) * self.b.determinant()
    }

    /// `det B ∫_{S^{n−1}} |B⁻¹u| du` by the standard quadrature.
    pub fn surface_area(&self) -> f64 {
        let n = self.dim();
        let inv = self.b.clone().try_inverse().expect("positive definite");
        let q = SphereQuadrature::standard(n).expect("n ∈ {2,3}");
        self.b.determinant() * q.integrate(|u| (&inv * Vector::from_column_slice(u)).norm())
    }

    /// Image under `x ↦ Ax + t`; the shape becomes `√((AB)(AB)ᵀ)`.
    pub fn affine_image(&self, a: &Matrix, t: &Vector) -> Result<Ellipsoid> {
        let n = self.dim();
        if a.nrows() != n || a.ncols() != n || t.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.nrows(),
            });
        }
        if a.determinant().abs() < 1e-12 {
            return Err(Error::SingularMatrix);
        }
        let m = a * &self.b;
        let eig = (&m * m.transpose()).symmetric_eigen();
        let root = Matrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
        let b = &eig.eigenvectors * root * eig.eigenvectors.transpose();
        Ellipsoid::new((&b + b.transpose()) * 0.5, a * &self.d + t)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        match self.b.clone().try_inverse() {
            Some(inv) => (inv * (x - &self.d)).norm() <= 1.0 + tol,
            None => false,
        }
    }

    /// Support function `h_E(u) = |Bu| + ⟨d,u⟩`.
    pub fn support(&self, u: &Vector) -> f64 {
        (&self.b * u).norm() + self.d.dot(u)
    }
}

/// Affine map `x ↦ Ax + t`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub a: Matrix,
    pub t: Vector,
}

impl AffineMap {
    pub fn apply(&self, x: &Vector) -> Vector {
        &self.a * x + &self.t
    }

    pub fn apply_polytope(&self, p: &Polytope) -> Result<Polytope> {
        Ok(p.linear_image(&self.a)?.translate(&self.t))
    }
}

/// Converged John ellipsoid with solver diagnostics.
#[derive(Clone, Debug)]
pub struct JohnSolution {
    pub ellipsoid: Ellipsoid,
    /// Bound on the suboptimality of `log det B` plus the final centering error.
    pub kkt_residual: f64,
    pub newton_steps: usize,
}

const GAP_TARGET: f64 = 1e-11;
const MAX_NEWTON: usize = 2000;

/// Number of free entries in a symmetric `n×n` matrix.
fn vech_len(n: usize) -> usize {
    n * (n + 1) / 2
}

fn sym_basis(n: usize) -> Vec<Matrix> {
    let mut out = Vec::with_capacity(vech_len(n));
    for i in 0..n {
        for j in i..n {
            let mut e = Matrix::zeros(n, n);
            e[(i, j)] = 1.0;
            e[(j, i)] = 1.0;
            out.push(e);
        }
    }
    out
}

fn unpack(n: usize, x: &Vector) -> (Matrix, Vector) {
    let mut b = Matrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            b[(i, j)] = x[k];
            b[(j, i)] = x[k];
            k += 1;
        }
    }
    (b, Vector::from_iterator(n, x.iter().skip(k).copied()))
}

fn pack(b: &Matrix, d: &Vector) -> Vector {
    let n = d.len();
    let mut v = Vec::with_capacity(vech_len(n) + n);
    for i in 0..n {
        for j in i..n {
            v.push(b[(i, j)]);
        }
    }
    v.extend(d.iter());
    Vector::from_vec(v)
}

/// Barrier problem `min −t·log det B − Σ log(sᵢ² − |Baᵢ|²)`, `sᵢ = bᵢ − ⟨aᵢ,d⟩ > 0`.
struct Barrier<'a> {
    n: usize,
    normals: &'a [Vector],
    offsets: &'a [f64],
    basis: Vec<Matrix>,
}

impl Barrier<'_> {
    fn value(&self, x: &Vector, t: f64) -> Option<f64> {
        let (b, d) = unpack(self.n, x);
        let chol = b.clone().cholesky()?;
        let logdet = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let mut f = -t * logdet;
        for (a, off) in self.normals.iter().zip(self.offsets) {
            let s = off - a.dot(&d);
            let q = s * s - (&b * a).norm_squared();
            if s <= 0.0 || q <= 0.0 {
                return None;
            }
            f -= q.ln();
        }
        Some(f)
    }

    fn derivatives(&self, x: &Vector, t: f64) -> (Vector, Matrix) {
        let n = self.n;
        let kb = vech_len(n);
        let dim = kb + n;
        let (b, d) = unpack(n, x);
        let inv = b.clone().try_inverse().expect("iterate keeps B positive definite");
        let mut g = Vector::zeros(dim);
        let mut h = Matrix::zeros(dim, dim);
        let ie: Vec<Matrix> = self.basis.iter().map(|e| &inv * e).collect();
        for k in 0..kb {
            g[k] -= t * ie[k].trace();
            for l in 0..kb {
                h[(k, l)] += t * (&ie[k] * &ie[l]).trace();
            }
        }
        for (a, off) in self.normals.iter().zip(self.offsets) {
            let s = off - a.dot(&d);
            let v = &b * a;
            let q = s * s - v.norm_squared();
            // columns E_k a
            let mcols = Matrix::from_columns(&self.basis.iter().map(|e| e * a).collect::<Vec<_>>());
            let mut dq = Vector::zeros(dim);
            dq.rows_mut(0, kb).copy_from(&(mcols.transpose() * &v * -2.0));
            dq.rows_mut(kb, n).copy_from(&(a * (-2.0 * s)));
            let mut d2q = Matrix::zeros(dim, dim);
            d2q.view_mut((0, 0), (kb, kb))
                .copy_from(&(mcols.transpose() * &mcols * -2.0));
            d2q.view_mut((kb, kb), (n, n)).copy_from(&(a * a.transpose() * 2.0));
            g -= &dq / q;
            h += &dq * dq.transpose() / (q * q) - d2q / q;
        }
        (g, h)
    }
}

/// Maximal-volume ellipsoid inside `p`.
pub fn john_ellipsoid(p: &Polytope) -> Result<Ellipsoid> {
    Ok(john_solve(p, None)?.ellipsoid)
}

/// Barrier Newton solver for the John ellipsoid, optionally warm-started
/// from an ellipsoid strictly inside `p`.
pub fn john_solve(p: &Polytope, start: Option<&Ellipsoid>) -> Result<JohnSolution> {
    let n = p.dim();
    // work in a normalized frame: vertex centroid at o, circumradius 1
    let c = p.vertex_centroid();
    let scale = p.vertices().iter().map(|v| (v - &c).norm()).fold(0.0, f64::max);
    let normals: Vec<Vector> = p.facets().iter().map(|f| f.normal.clone()).collect();
    let offsets: Vec<f64> = p
        .facets()
        .iter()
        .map(|f| (f.offset - f.normal.dot(&c)) / scale)
        .collect();
    let barrier = Barrier {
        n,
        normals: &normals,
        offsets: &offsets,
        basis: sym_basis(n),
    };
    let mut x = match start {
        Some(e) => pack(&(e.shape() / scale), &((e.center() - &c) / scale)),
        None => {
            let slack = offsets.iter().copied().fold(f64::INFINITY, f64::min);
            pack(&(Matrix::identity(n, n) * 0.5 * slack), &Vector::zeros(n))
        }
    };
    let mut t = 1.0;
    if barrier.value(&x, t).is_none() {
        return Err(Error::InvalidInput(
            "starting ellipsoid is not strictly inside the polytope".into(),
        ));
    }
    let constraints = 2.0 * offsets.len() as f64;
    let mut steps = 0;
    let mut decrement;
    loop {
        // centering
        decrement = f64::INFINITY;
        loop {
            let (g, h) = barrier.derivatives(&x, t);
            let dx = match h.clone().cholesky() {
                Some(ch) => ch.solve(&-&g),
                None => h.clone().lu().solve(&-&g).ok_or(Error::SingularMatrix)?,
            };
            let previous = decrement;
            decrement = -g.dot(&dx);
            // stop when centred, or when round-off keeps the decrement from shrinking
            let centred = decrement / 2.0 <= 1e-10 || decrement / t <= 1e-15;
            let stalled = decrement < 1e-3 && decrement > 0.5 * previous;
            if centred || stalled || steps >= MAX_NEWTON {
                break;
            }
            let f0 = barrier.value(&x, t).expect("feasible iterate");
            let mut alpha = 1.0;
            loop {
                let trial = &x + &dx * alpha;
                if let Some(f) = barrier.value(&trial, t) {
                    // inside the quadratic region a full step is safe, and the
                    // Armijo test would only see round-off in f
                    if decrement < 0.1 || f <= f0 - 0.25 * alpha * decrement {
                        x = trial;
                        break;
                    }
                }
                alpha *= 0.5;
                if alpha < 1e-14 {
                    break;
                }
            }
            steps += 1;
            if alpha < 1e-14 {
                break;
            }
        }
        let gap = constraints / t;
        if gap < GAP_TARGET || steps >= MAX_NEWTON {
            let residual = gap.max(decrement.max(0.0) / t);
            let (b, d) = unpack(n, &x);
            let ellipsoid = Ellipsoid::new(b * scale, d * scale + &c)?;
            if steps >= MAX_NEWTON || residual > 1e-8 {
                return Err(Error::NotConverged {
                    iterations: steps,
                    residual,
                });
            }
            return Ok(JohnSolution {
                ellipsoid,
                kkt_residual: residual,
                newton_steps: steps,
            });
        }
        t *= 10.0;
    }
}

/// `(Vol(P)/Vol(E))^{1/n}` for the John ellipsoid `E`.
pub fn volume_ratio(p: &Polytope) -> Result<f64> {
    let e = john_ellipsoid(p)?;
    Ok((p.volume() / e.volume()).powf(1.0 / p.dim() as f64))
}

/// Affine map sending the John ellipsoid of `p` to the unit ball, and the image.
pub fn john_position_transform(p: &Polytope) -> Result<(AffineMap, Polytope)> {
    let e = john_ellipsoid(p)?;
    let a = e.shape().clone().try_inverse().ok_or(Error::SingularMatrix)?;
    let t = -(&a * e.center());
    let map = AffineMap { a, t };
    let image = map.apply_polytope(p)?;
    Ok((map, image))
}

/// `(Vol_{n−1}(∂P), n·Vol(P))`; the first never exceeds the second in John position.
pub fn ball_surface_bound_check(p: &Polytope) -> (f64, f64) {
    (p.surface_area(), p.dim() as f64 * p.volume())
}

/// `Vol_{n−1}(∂K) / Vol(K)^{(n−1)/n}`.
pub fn isoperimetric_ratio(p: &Polytope) -> f64 {
    let n = p.dim() as f64;
    p.surface_area() / p.volume().powf((n - 1.0) / n)
}

/// Outcome of the minimal surface-area position search.
#[derive(Clone, Debug)]
pub struct IsoperimetricSearch {
    pub value: f64,
    pub transform: Matrix,
    /// Set when `value` is only known to bound the minimum from above.
    pub upper_bound_only: bool,
    pub evaluations: usize,
}

/// Minimizes the isoperimetric ratio over linear images of `p`.
///
/// In the plane this is a Nelder–Mead search over `T = [[eˢ, t], [0, e⁻ˢ]]`
/// (rotations and dilations leave the ratio unchanged) with five seeded
/// restarts of `budget` evaluations each. In space the better of `p` and its
/// John position is returned as an upper bound.
pub fn minimal_isoperimetric_ratio(p: &Polytope, budget: usize, seed: u64) -> Result<IsoperimetricSearch> {
    match p.dim() {
        2 => Ok(planar_search(p, budget, seed)),
        3 => {
            let own = isoperimetric_ratio(p);
            let (map, image) = john_position_transform(p)?;
            let john = isoperimetric_ratio(&image);
            let (value, transform) = if john < own {
                (john, map.a)
            } else {
                (own, Matrix::identity(3, 3))
            };
            Ok(IsoperimetricSearch {
                value,
                transform,
                upper_bound_only: true,
                evaluations: 2,
            })
        }
        d => Err(Error::TooHighDimension(d)),
    }
}

fn chart(s: f64, t: f64) -> Matrix {
    Matrix::from_row_slice(2, 2, &[s.exp(), t, 0.0, (-s).exp()])
}

fn planar_search(p: &Polytope, budget: usize, seed: u64) -> IsoperimetricSearch {
    let edges: Vec<[f64; 2]> = p
        .facets()
        .iter()
        .map(|f| {
            let (a, b) = (&p.vertices()[f.vertices[0]], &p.vertices()[f.vertices[1]]);
            [b[0] - a[0], b[1] - a[1]]
        })
        .collect();
    let root_area = p.volume().sqrt();
    let ratio = |x: [f64; 2]| -> f64 {
        let (es, t, ei) = (x[0].exp(), x[1], (-x[0]).exp());
        edges
            .iter()
            .map(|e| (es * e[0] + t * e[1]).hypot(ei * e[1]))
            .sum::<f64>()
            / root_area
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = ([0.0, 0.0], ratio([0.0, 0.0]));
    let mut evaluations = 1;
    for restart in 0..5 {
        let x0 = if restart == 0 {
            [0.0, 0.0]
        } else {
            [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]
        };
        let (x, fx, used) = nelder_mead(&ratio, x0, 0.25, budget);
        evaluations += used;
        if fx < best.1 {
            best = (x, fx);
        }
    }
    IsoperimetricSearch {
        value: best.1,
        transform: chart(best.0[0], best.0[1]),
        upper_bound_only: false,
        evaluations,
    }
}

/// Nelder–Mead on ℝ² with standard coefficients.
fn nelder_mead(f: &impl Fn([f64; 2]) -> f64, x0: [f64; 2], step: f64, budget: usize) -> ([f64; 2], f64, usize) {
    let mut simplex = [x0, [x0[0] + step, x0[1]], [x0[0], x0[1] + step]];
    let mut values = simplex.map(f);
    let mut used = 3;
    let lerp = |a: [f64; 2], b: [f64; 2], w: f64| [a[0] + w * (b[0] - a[0]), a[1] + w * (b[1] - a[1])];
    while used < budget {
        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        if values[2] - values[0] <= 1e-14 * values[0].abs() {
            break;
        }
        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = lerp(centroid, simplex[2], -1.0);
        let fr = f(reflected);
        used += 1;
        if fr < values[0] {
            let expanded = lerp(centroid, simplex[2], -2.0);
            let fe = f(expanded);
            used += 1;
            (simplex[2], values[2]) = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < values[1] {
            (simplex[2], values[2]) = (reflected, fr);
        } else {
            let (target, ft) = if fr < values[2] {
                (reflected, fr)
            } else {
                (simplex[2], values[2])
            };
            let contracted = lerp(centroid, target, 0.5);
            let fc = f(contracted);
            used += 1;
            if fc < ft {
                (simplex[2], values[2]) = (contracted, fc);
            } else {
                for k in 1..3 {
                    simplex[k] = lerp(simplex[0], simplex[k], 0.5);
                    values[k] = f(simplex[k]);
                }
                used += 2;
            }
        }
    }
    let k = (0..3).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();
    (simplex[k], values[k], used)
}
