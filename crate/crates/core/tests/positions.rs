mod common;

use approx::assert_relative_eq;
use common::*;
use hpl_core::kernel::{shapes, Polytope};
use hpl_core::positions::{
    ball_surface_bound_check, isoperimetric_ratio, john_ellipsoid, john_position_transform, john_solve,
    minimal_isoperimetric_ratio, volume_ratio,
};
use hpl_core::{Ellipsoid, Matrix, Vector};
use std::f64::consts::PI;

fn inscribed_slack(p: &Polytope, e: &Ellipsoid) -> f64 {
    p.facets()
        .iter()
        .map(|f| f.offset - e.support(&f.normal))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn square_gives_unit_disk() {
    let sq = shapes::symmetric_cube(2).unwrap();
    let sol = john_solve(&sq, None).unwrap();
    assert!((sol.ellipsoid.shape() - Matrix::identity(2, 2)).amax() < 1e-8);
    assert!(sol.ellipsoid.center().norm() < 1e-8);
    assert!(sol.kkt_residual <= 1e-8);
    assert_relative_eq!(volume_ratio(&sq).unwrap(), 2.0 / PI.sqrt(), epsilon = 1e-6);
}

#[test]
fn triangle_gives_steiner_inellipse() {
    // the maximal ellipse in a triangle touches each side at its midpoint
    let tri = shapes::simplex(2).unwrap();
    let e = john_ellipsoid(&tri).unwrap();
    assert!((e.center() - v(&[1.0 / 3.0, 1.0 / 3.0])).norm() < 1e-7);
    assert_relative_eq!(e.volume(), PI / (3.0 * 3f64.sqrt()) * tri.volume(), max_relative = 1e-8);
    for mid in [v(&[0.5, 0.0]), v(&[0.0, 0.5]), v(&[0.5, 0.5])] {
        let inv = e.shape().clone().try_inverse().unwrap();
        assert_relative_eq!((inv * (mid - e.center())).norm(), 1.0, epsilon = 1e-7);
    }
    assert_relative_eq!(
        volume_ratio(&tri).unwrap(),
        (3.0 * 3f64.sqrt() / PI).sqrt(),
        max_relative = 1e-7
    );
}

#[test]
fn cube_and_simplex_3d() {
    let cube = shapes::symmetric_cube(3).unwrap();
    let e = john_ellipsoid(&cube).unwrap();
    assert!((e.shape() - Matrix::identity(3, 3)).amax() < 1e-7);
    let tet = shapes::simplex(3).unwrap();
    let e = john_ellipsoid(&tet).unwrap();
    assert!((e.center() - Vector::from_element(3, 0.25)).norm() < 1e-7);
    assert!(inscribed_slack(&tet, &e) >= -1e-9);
    // vr is affine invariant, so the corner simplex must match a regular tetrahedron
    let regular = Polytope::convex_hull(&[
        v(&[1.0, 1.0, 1.0]),
        v(&[1.0, -1.0, -1.0]),
        v(&[-1.0, 1.0, -1.0]),
        v(&[-1.0, -1.0, 1.0]),
    ])
    .unwrap();
    let er = john_ellipsoid(&regular).unwrap();
    // the insphere of this tetrahedron has radius 1/√3
    assert!((er.shape() - Matrix::identity(3, 3) / 3f64.sqrt()).amax() < 1e-7);
    assert_relative_eq!(
        volume_ratio(&tet).unwrap(),
        volume_ratio(&regular).unwrap(),
        max_relative = 1e-6
    );
}

#[test]
fn affine_equivariance() {
    let mut r = rng(1);
    for n in [2, 3] {
        for _ in 0..5 {
            let p = random_polytope(&mut r, n, 10);
            let e = john_ellipsoid(&p).unwrap();
            let x = Vector::from_element(n, 0.7);
            let q = p.scaled(2.0).unwrap().translate(&x);
            let f = john_ellipsoid(&q).unwrap();
            assert!((f.shape() - e.shape() * 2.0).amax() < 1e-6);
            assert!((f.center() - (e.center() * 2.0 + &x)).norm() < 1e-6);

            let a = random_linear(&mut r, n, 10.0);
            let img = p.linear_image(&a).unwrap().translate(&x);
            assert_relative_eq!(
                volume_ratio(&img).unwrap(),
                volume_ratio(&p).unwrap(),
                max_relative = 1e-6
            );
        }
    }
}

#[test]
fn inscribed_and_locally_maximal() {
    let mut r = rng(2);
    for n in [2, 3] {
        for _ in 0..10 {
            let p = random_polytope(&mut r, n, 12);
            let sol = john_solve(&p, None).unwrap();
            assert!(inscribed_slack(&p, &sol.ellipsoid) >= -1e-9);
            assert!(sol.kkt_residual <= 1e-8);
            let vr = (p.volume() / sol.ellipsoid.volume()).powf(1.0 / n as f64);
            assert!(vr >= 1.0 && vr <= n as f64 + 1e-6);
            let shrunk = Ellipsoid::new(sol.ellipsoid.shape() * (1.0 - 1e-3), sol.ellipsoid.center().clone()).unwrap();
            let again = john_solve(&p, Some(&shrunk)).unwrap();
            let (d0, d1) = (
                sol.ellipsoid.shape().determinant(),
                again.ellipsoid.shape().determinant(),
            );
            assert!((d0 - d1).abs() <= 1e-6 * d0);
        }
    }
}

#[test]
fn john_position() {
    let sq = shapes::symmetric_cube(2).unwrap();
    let (map, img) = john_position_transform(&sq).unwrap();
    assert!((map.a.clone() - Matrix::identity(2, 2)).amax() < 1e-7);
    assert!(map.t.norm() < 1e-7);
    assert_relative_eq!(img.volume(), 4.0, max_relative = 1e-7);

    let big = sq.scaled(3.0).unwrap().translate(&v(&[1.0, 2.0]));
    let (map, _) = john_position_transform(&big).unwrap();
    assert!((map.a.clone() - Matrix::identity(2, 2) / 3.0).amax() < 1e-7);
    assert!((map.apply(&v(&[1.0, 2.0]))).norm() < 1e-7);

    let mut r = rng(3);
    for n in [2, 3] {
        for _ in 0..5 {
            let p = random_polytope(&mut r, n, if n == 2 { 3 } else { 10 });
            let (_, img) = john_position_transform(&p).unwrap();
            let e = john_ellipsoid(&img).unwrap();
            assert!((e.shape() - Matrix::identity(n, n)).amax() < 1e-6);
            assert!(e.center().norm() < 1e-6);
            let vr = volume_ratio(&p).unwrap();
            let omega = hpl_core::stochastic::unit_ball_volume(n);
            assert_relative_eq!(vr, (img.volume() / omega).powf(1.0 / n as f64), max_relative = 1e-8);
        }
    }
}

#[test]
fn ball_bound() {
    let sq = shapes::symmetric_cube(2).unwrap();
    let (s, v2) = ball_surface_bound_check(&sq);
    assert_relative_eq!(s, 8.0);
    assert_relative_eq!(v2, 8.0);
    let cube = shapes::symmetric_cube(3).unwrap();
    let (s, v3) = ball_surface_bound_check(&cube);
    assert_relative_eq!(s, v3, max_relative = 1e-12);
    // every facet of a triangle touches its John disk, so equality holds there too;
    // a corner cut that misses the disk makes the bound strict
    let (_, tri) = john_position_transform(&shapes::simplex(2).unwrap()).unwrap();
    let (s, v2) = ball_surface_bound_check(&tri);
    assert_relative_eq!(s, v2, max_relative = 1e-7);
    let cut = Polytope::convex_hull(&[
        v(&[-1.0, -1.0]),
        v(&[1.0, -1.0]),
        v(&[1.0, 0.9]),
        v(&[0.9, 1.0]),
        v(&[-1.0, 1.0]),
    ])
    .unwrap();
    let (_, cut) = john_position_transform(&cut).unwrap();
    let (s, v2) = ball_surface_bound_check(&cut);
    assert!(s < v2 - 1e-4, "{s} vs {v2}");
    let disk = shapes::regular_polygon(720, 1.0).unwrap();
    let (_, disk) = john_position_transform(&disk).unwrap();
    let (s, v2) = ball_surface_bound_check(&disk);
    assert!(s <= v2 + 1e-9 && s > v2 * (1.0 - 1e-4));
    let mut r = rng(4);
    for n in [2, 3] {
        for _ in 0..10 {
            let (_, p) = john_position_transform(&random_polytope(&mut r, n, 12)).unwrap();
            let (s, v) = ball_surface_bound_check(&p);
            assert!(s <= v * (1.0 + 1e-7));
        }
    }
}

#[test]
fn minimal_isoperimetric_examples() {
    let root_pi = PI.sqrt();
    let disk = shapes::regular_polygon(512, 1.0).unwrap();
    let res = minimal_isoperimetric_ratio(&disk, 400, 1).unwrap();
    assert_relative_eq!(res.value, 2.0 * root_pi, max_relative = 1e-4);
    let sq = shapes::unit_cube(2).unwrap();
    let res = minimal_isoperimetric_ratio(&sq, 400, 1).unwrap();
    assert_relative_eq!(res.value, 4.0, max_relative = 1e-9);
    assert!(!res.upper_bound_only);
    // the optimum of a sheared square is the square again
    let sheared = sq
        .linear_image(&Matrix::from_row_slice(2, 2, &[2.0, 1.3, 0.0, 0.5]))
        .unwrap();
    let res = minimal_isoperimetric_ratio(&sheared, 400, 1).unwrap();
    assert_relative_eq!(res.value, 4.0, max_relative = 1e-8);
    let img = sheared.linear_image(&res.transform).unwrap();
    assert_relative_eq!(isoperimetric_ratio(&img), res.value, max_relative = 1e-12);

    let mut r = rng(5);
    for n in [2, 3] {
        for _ in 0..10 {
            let p = random_polytope(&mut r, n, 10);
            let res = minimal_isoperimetric_ratio(&p, 300, 2).unwrap();
            let omega = hpl_core::stochastic::unit_ball_volume(n);
            let floor = n as f64 * omega.powf(1.0 / n as f64);
            assert!(res.value >= floor - 1e-6);
            assert!(res.value <= isoperimetric_ratio(&p) + 1e-12);
            assert!(res.value <= floor * volume_ratio(&p).unwrap() + 1e-6);
            assert_eq!(res.upper_bound_only, n == 3);
        }
    }
}

#[test]
fn ellipsoid_validation() {
    assert!(Ellipsoid::new(Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]), Vector::zeros(2)).is_err());
    assert!(Ellipsoid::new(-Matrix::identity(2, 2), Vector::zeros(2)).is_err());
    let ball = Ellipsoid::unit_ball(3);
    assert_relative_eq!(ball.volume(), 4.0 * PI / 3.0, max_relative = 1e-14);
    assert_relative_eq!(ball.surface_area(), 4.0 * PI, max_relative = 1e-10);
}
