#![allow(dead_code)]

use hpl_core::kernel::Polytope;
use hpl_core::{Matrix, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn v(xs: &[f64]) -> Vector {
    Vector::from_column_slice(xs)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_points(rng: &mut impl Rng, n: usize, count: usize) -> Vec<Vector> {
    (0..count)
        .map(|_| Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)))
        .collect()
}

/// Hull of `count` random points in `[-1, 1]^n`.
pub fn random_polytope(rng: &mut impl Rng, n: usize, count: usize) -> Polytope {
    loop {
        if let Ok(p) = Polytope::convex_hull(&random_points(rng, n, count)) {
            if p.volume() > 1e-3 {
                return p;
            }
        }
    }
}

pub fn random_unit(rng: &mut impl Rng, n: usize) -> Vector {
    loop {
        let x = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let r = x.norm();
        if r > 1e-3 && r <= 1.0 {
            return x / r;
        }
    }
}

/// Random orthogonal matrix from the QR factorization of a random matrix.
pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> Matrix {
    let a = Matrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    a.qr().q()
}

/// Random matrix with singular values in `[1/√κ, √κ]`.
pub fn random_linear(rng: &mut impl Rng, n: usize, kappa: f64) -> Matrix {
    let u = random_orthogonal(rng, n);
    let w = random_orthogonal(rng, n);
    let s = Matrix::from_diagonal(&Vector::from_fn(n, |_, _| kappa.powf(rng.random_range(-0.5..0.5))));
    u * s * w
}
