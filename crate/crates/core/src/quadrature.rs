//! Deterministic quadrature on the unit circle and the unit 2-sphere.
//!
//! The circle uses the trapezoid rule, which is spectrally accurate for
//! smooth periodic integrands and second order for the kinks of `max(0, ·)`.
//! The sphere uses the vertices of a subdivided icosahedron, each weighted
//! by a third of the spherical area of its incident triangles.

use crate::kernel::vec3::{self, P3};
use crate::{Error, Result};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

const LANES: usize = 8;

/// Nodes and weights of a rule on `S^{n-1}`; weights sum to `nωₙ`.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// The same rule in `LANES`-wide blocks, coordinate-major within a block
    /// and padded with zero-weight nodes, for the vectorised hull integral.
    lanes: Vec<[f64; LANES]>,
    lane_weights: Vec<[f64; LANES]>,
}

impl SphereQuadrature {
    fn from_parts(dim: usize, nodes: Vec<f64>, weights: Vec<f64>) -> Self {
        let blocks = weights.len().div_ceil(LANES);
        let mut lanes = vec![[0.0; LANES]; blocks * dim];
        let mut lane_weights = vec![[0.0; LANES]; blocks];
        for (i, w) in weights.iter().enumerate() {
            let (b, l) = (i / LANES, i % LANES);
            lane_weights[b][l] = *w;
            for k in 0..dim {
                lanes[b * dim + k][l] = nodes[i * dim + k];
            }
        }
        SphereQuadrature {
            dim,
            nodes,
            weights,
            lanes,
            lane_weights,
        }
    }

    /// Trapezoid rule with `k` equispaced nodes.
    pub fn circle(k: usize) -> Self {
        let mut nodes = Vec::with_capacity(2 * k);
        for j in 0..k {
            let a = 2.0 * PI * j as f64 / k as f64;
            nodes.extend([a.cos(), a.sin()]);
        }
        Self::from_parts(2, nodes, vec![2.0 * PI / k as f64; k])
    }

    /// Vertex rule on the icosphere subdivided `level` times.
    pub fn icosphere(level: u32) -> Self {
        let (v, tris) = icosphere(level);
        let mut weights = vec![0.0; v.len()];
        for t in &tris {
            let a = spherical_triangle_area(v[t[0]], v[t[1]], v[t[2]]) / 3.0;
            for &i in t {
                weights[i] += a;
            }
        }
        Self::from_parts(3, v.iter().flat_map(|p| p.iter().copied()).collect(), weights)
    }

    /// Default rule: 2048 circle nodes, or the level-5 icosphere (10242 nodes).
    pub fn standard(n: usize) -> Result<&'static SphereQuadrature> {
        static C: OnceLock<SphereQuadrature> = OnceLock::new();
        static S: OnceLock<SphereQuadrature> = OnceLock::new();
        match n {
            2 => Ok(C.get_or_init(|| Self::circle(2048))),
            3 => Ok(S.get_or_init(|| Self::icosphere(5))),
            _ => Err(Error::TooHighDimension(n)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        (0..self.len()).map(|i| self.weights[i] * f(self.node(i))).sum()
    }

    /// `∫ max(0, maxⱼ ⟨θⱼ, u⟩) du`, i.e. the integral of the support function
    /// of `conv{o, θ₁, …, θ_m}` for `θ` laid out as m consecutive n-blocks.
    ///
    /// Same value as [`integrate`](Self::integrate) up to summation order,
    /// several times faster: this is the inner loop of every sphere-based gauge.
    pub fn hull_support_integral(&self, theta: &[f64]) -> f64 {
        let n = self.dim;
        let mut acc = [0.0; LANES];
        for (c, w) in self.lanes.chunks_exact(n).zip(&self.lane_weights) {
            let mut best = [0.0; LANES];
            for t in theta.chunks_exact(n) {
                let mut s = [0.0; LANES];
                for k in 0..n {
                    for l in 0..LANES {
                        s[l] += t[k] * c[k][l];
                    }
                }
                for l in 0..LANES {
                    best[l] = if s[l] > best[l] { s[l] } else { best[l] };
                }
            }
            for l in 0..LANES {
                acc[l] += w[l] * best[l];
            }
        }
        acc.iter().sum()
    }
}

fn spherical_triangle_area(a: P3, b: P3, c: P3) -> f64 {
    // Van Oosterom–Strackee
    let num = vec3::dot(a, vec3::cross(b, c)).abs();
    let den = 1.0 + vec3::dot(a, b) + vec3::dot(b, c) + vec3::dot(c, a);
    2.0 * num.atan2(den)
}

/// Unit icosphere: vertices and outward-oriented triangles.
pub(crate) fn icosphere(level: u32) -> (Vec<P3>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut v: Vec<P3> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|p| vec3::normalize(*p))
    .collect();
    let mut f: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, v: &mut Vec<P3>| -> usize {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                v.push(vec3::normalize(vec3::add(v[a], v[b])));
                v.len() - 1
            })
        };
        let mut next = Vec::with_capacity(f.len() * 4);
        for [a, b, c] in f {
            let ab = midpoint(a, b, &mut v);
            let bc = midpoint(b, c, &mut v);
            let ca = midpoint(c, a, &mut v);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        f = next;
    }
    (v, f)
}
