//! Standard polytopes.

use super::Polytope;
use crate::quadrature::icosphere;
use crate::{Error, Result, Vector};
use std::f64::consts::PI;
use std::sync::OnceLock;

fn hull(pts: Vec<Vector>) -> Polytope {
    Polytope::convex_hull(&pts).expect("standard shape is full dimensional")
}

fn check_dim(n: usize) -> Result<()> {
    if (2..=3).contains(&n) {
        Ok(())
    } else {
        Err(Error::TooHighDimension(n))
    }
}

pub(crate) fn cube_between(n: usize, lo: f64, hi: f64) -> Polytope {
    let pts = (0..1usize << n)
        .map(|mask| Vector::from_iterator(n, (0..n).map(|k| if mask >> k & 1 == 1 { hi } else { lo })))
        .collect();
    hull(pts)
}

/// `[0, 1]^n`.
pub fn unit_cube(n: usize) -> Result<Polytope> {
    check_dim(n)?;
    Ok(cube_between(n, 0.0, 1.0))
}

/// `[-1, 1]^n`.
pub fn symmetric_cube(n: usize) -> Result<Polytope> {
    check_dim(n)?;
    Ok(cube_between(n, -1.0, 1.0))
}

/// `conv{o, e₁, …, eₙ}`.
pub fn simplex(n: usize) -> Result<Polytope> {
    check_dim(n)?;
    let mut pts = vec![Vector::zeros(n)];
    for k in 0..n {
        let mut e = Vector::zeros(n);
        e[k] = 1.0;
        pts.push(e);
    }
    Ok(hull(pts))
}

/// `conv{±eᵢ}`.
pub fn cross_polytope(n: usize) -> Result<Polytope> {
    check_dim(n)?;
    let mut pts = Vec::new();
    for k in 0..n {
        for s in [-1.0, 1.0] {
            let mut e = Vector::zeros(n);
            e[k] = s;
            pts.push(e);
        }
    }
    Ok(hull(pts))
}

/// Regular `k`-gon with circumradius `r`, one vertex on the positive x-axis.
pub fn regular_polygon(k: usize, r: f64) -> Result<Polytope> {
    if k < 3 || !(r > 0.0) {
        return Err(Error::InvalidInput(format!(
            "regular polygon needs k ≥ 3 and r > 0, got k={k}, r={r}"
        )));
    }
    let pts = (0..k)
        .map(|j| {
            let a = 2.0 * PI * j as f64 / k as f64;
            Vector::from_column_slice(&[r * a.cos(), r * a.sin()])
        })
        .collect();
    Ok(hull(pts))
}

/// Inscribed polytope approximating the unit ball: a regular 720-gon in the
/// plane, the level-4 icosphere (2562 vertices) in space.
pub fn ball_approximation(n: usize) -> &'static Polytope {
    static DISK: OnceLock<Polytope> = OnceLock::new();
    static SPHERE: OnceLock<Polytope> = OnceLock::new();
    match n {
        2 => DISK.get_or_init(|| regular_polygon(720, 1.0).unwrap()),
        3 => SPHERE.get_or_init(|| {
            let (v, _) = icosphere(4);
            hull(v.into_iter().map(|p| Vector::from_column_slice(&p)).collect())
        }),
        _ => panic!("ball approximation only exists for n = 2, 3"),
    }
}
