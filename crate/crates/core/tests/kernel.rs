mod common;

use approx::assert_relative_eq;
use common::*;
use hpl_core::kernel::{shapes, Halfspace, Polytope, Segment, Summand};
use hpl_core::{Error, Matrix, Vector, EPS_GEOM};
use proptest::prelude::*;
use rand::Rng;
use std::f64::consts::PI;

fn hs(normal: &[f64], offset: f64) -> Halfspace {
    Halfspace::new(v(normal), offset).unwrap()
}

fn square_halfspaces() -> Vec<Halfspace> {
    vec![
        hs(&[1.0, 0.0], 1.0),
        hs(&[-1.0, 0.0], 0.0),
        hs(&[0.0, 1.0], 1.0),
        hs(&[0.0, -1.0], 0.0),
    ]
}

#[test]
fn unit_square_from_points() {
    let p = Polytope::convex_hull(&[v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])]).unwrap();
    assert_eq!(p.vertices().len(), 4);
    assert_eq!(p.facets().len(), 4);
    for f in p.facets() {
        assert_relative_eq!(f.area, 1.0, epsilon = 1e-15);
    }
    assert_relative_eq!(p.volume(), 1.0, epsilon = 1e-15);
}

#[test]
fn triangle_volume() {
    let p = Polytope::convex_hull(&[v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
    assert_relative_eq!(p.volume(), 0.5, epsilon = 1e-15);
}

#[test]
fn collinear_and_interior_points_are_dropped() {
    let mut pts = vec![v(&[0.0, 0.0]), v(&[2.0, 0.0]), v(&[2.0, 2.0]), v(&[0.0, 2.0])];
    pts.extend([v(&[1.0, 0.0]), v(&[2.0, 1.0]), v(&[1.0, 1.0]), v(&[0.5, 0.5])]);
    let p = Polytope::convex_hull(&pts).unwrap();
    assert_eq!(p.vertices().len(), 4);
}

#[test]
fn cube_with_face_and_edge_points() {
    let mut pts: Vec<Vector> = shapes::unit_cube(3).unwrap().vertices().to_vec();
    pts.extend([
        v(&[0.5, 0.5, 0.0]),
        v(&[0.5, 0.5, 1.0]),
        v(&[0.5, 0.0, 0.0]),
        v(&[1.0, 0.5, 1.0]),
        v(&[0.3, 0.7, 0.5]),
        v(&[0.0, 0.2, 0.9]),
    ]);
    let p = Polytope::convex_hull(&pts).unwrap();
    assert_eq!(p.vertices().len(), 8);
    assert_eq!(p.facets().len(), 6);
    for f in p.facets() {
        assert_eq!(f.vertices.len(), 4);
        assert_relative_eq!(f.area, 1.0, epsilon = 1e-12);
    }
    assert_relative_eq!(p.volume(), 1.0, epsilon = 1e-12);
    assert_relative_eq!(p.surface_area_measure().total(), 6.0, epsilon = 1e-12);
}

#[test]
fn standard_shapes() {
    assert_relative_eq!(shapes::simplex(3).unwrap().volume(), 1.0 / 6.0, epsilon = 1e-14);
    assert_relative_eq!(shapes::cross_polytope(3).unwrap().volume(), 4.0 / 3.0, epsilon = 1e-14);
    assert_relative_eq!(shapes::symmetric_cube(2).unwrap().volume(), 4.0, epsilon = 1e-14);
    let hex = shapes::regular_polygon(6, 1.0).unwrap();
    assert_relative_eq!(hex.volume(), 1.5 * 3f64.sqrt(), epsilon = 1e-14);
    assert_eq!(shapes::ball_approximation(2).vertices().len(), 720);
    assert_eq!(shapes::ball_approximation(3).vertices().len(), 2562);
}

#[test]
fn degenerate_input_is_rejected() {
    let line = [v(&[0.0, 0.0]), v(&[1.0, 1.0]), v(&[2.0, 2.0])];
    assert!(matches!(
        Polytope::convex_hull(&line),
        Err(Error::DegenerateInput { dim: 2, .. })
    ));
    let plane = [
        v(&[0.0, 0.0, 1.0]),
        v(&[1.0, 0.0, 1.0]),
        v(&[0.0, 1.0, 1.0]),
        v(&[1.0, 1.0, 1.0]),
    ];
    assert!(matches!(
        Polytope::convex_hull(&plane),
        Err(Error::DegenerateInput { dim: 3, rank: 2 })
    ));
    assert!(matches!(
        Polytope::convex_hull(&[v(&[0.0; 4]), v(&[1.0, 0.0, 0.0, 0.0])]),
        Err(Error::TooHighDimension(4))
    ));
}

#[test]
fn random_hull_duality_3d() {
    let mut r = rng(11);
    for _ in 0..100 {
        let pts = random_points(&mut r, 3, 50);
        let p = Polytope::convex_hull(&pts).unwrap();
        assert!(
            p.representation_residual() <= EPS_GEOM,
            "{}",
            p.representation_residual()
        );
        // every input point lies inside
        for x in &pts {
            assert!(p.contains(x, 1e-9));
        }
        // each facet is tight at ≥ n vertices
        for f in p.facets() {
            assert!(f.vertices.len() >= 3);
        }
        // probes: halfspace membership agrees with "x is a convex combination", tested via hull growth
        for _ in 0..20 {
            let probe = Vector::from_fn(3, |_, _| r.random_range(-1.2..1.2));
            let inside = p.contains(&probe, 0.0);
            let mut grown = p.vertices().to_vec();
            grown.push(probe.clone());
            let q = Polytope::convex_hull(&grown).unwrap();
            assert_eq!(inside, (q.volume() - p.volume()).abs() < 1e-12, "probe {probe:?}");
        }
    }
}

#[test]
fn random_hull_volume_matches_membership_sampling() {
    let mut r = rng(5);
    let p = random_polytope(&mut r, 3, 30);
    let samples = 200_000;
    let hit = (0..samples)
        .filter(|_| p.contains(&Vector::from_fn(3, |_, _| r.random_range(-1.0..1.0)), 0.0))
        .count();
    let estimate = 8.0 * hit as f64 / samples as f64;
    assert!(
        (estimate - p.volume()).abs() / p.volume() < 0.005 * 2.0,
        "{estimate} vs {}",
        p.volume()
    );
}

#[test]
fn halfspace_examples() {
    let sq = Polytope::halfspace_intersection(&square_halfspaces(), None).unwrap();
    assert_relative_eq!(sq.volume(), 1.0, epsilon = 1e-12);
    assert_eq!(sq.vertices().len(), 4);

    let shifted = sq.translate(&v(&[0.5, 0.0]));
    let mut both = square_halfspaces();
    both.extend(shifted.halfspaces());
    let rect = Polytope::halfspace_intersection(&both, None).unwrap();
    assert_relative_eq!(rect.volume(), 0.5, epsilon = 1e-12);

    let bad = [hs(&[1.0, 0.0], 0.0), hs(&[-1.0, 0.0], -1.0)];
    assert_eq!(Polytope::halfspace_intersection(&bad, None).unwrap_err(), Error::Empty);
    let open = [hs(&[1.0, 0.0], 1.0), hs(&[0.0, 1.0], 1.0)];
    assert_eq!(
        Polytope::halfspace_intersection(&open, None).unwrap_err(),
        Error::Unbounded
    );
    let flat = [
        hs(&[1.0, 0.0], 0.0),
        hs(&[-1.0, 0.0], 0.0),
        hs(&[0.0, 1.0], 1.0),
        hs(&[0.0, -1.0], 1.0),
    ];
    assert!(matches!(
        Polytope::halfspace_intersection(&flat, None),
        Err(Error::LowerDimensional { .. })
    ));
}

#[test]
fn halfspace_round_trip_3d() {
    let mut r = rng(3);
    for _ in 0..20 {
        let p = random_polytope(&mut r, 3, 25);
        let q = Polytope::halfspace_intersection(&p.halfspaces(), None).unwrap();
        assert_relative_eq!(q.volume(), p.volume(), max_relative = 1e-10);
        assert_eq!(q.facets().len(), p.facets().len());
        assert_eq!(q.vertices().len(), p.vertices().len());
    }
}

#[test]
fn surface_area_measure_examples() {
    let sq = shapes::unit_cube(2).unwrap();
    let m = sq.surface_area_measure();
    assert_eq!(m.atoms().len(), 4);
    for a in m.atoms() {
        assert_relative_eq!(a.weight, 1.0, epsilon = 1e-15);
        assert!(a.normal.iter().map(|c| c.abs()).sum::<f64>() - 1.0 < 1e-15);
    }
    let big = sq.scaled(2.0).unwrap().surface_area_measure();
    assert!(big.atoms().iter().all(|a| (a.weight - 2.0).abs() < 1e-14));
    assert_relative_eq!(
        shapes::unit_cube(3).unwrap().surface_area_measure().total(),
        6.0,
        epsilon = 1e-14
    );
}

#[test]
fn minkowski_examples() {
    let sq = shapes::unit_cube(2).unwrap();
    assert_relative_eq!(
        sq.minkowski_sum(&sq.clone().into()).unwrap().volume(),
        4.0,
        epsilon = 1e-13
    );
    let seg = Segment::from_origin(&v(&[1.0, 0.0]));
    assert_relative_eq!(sq.minkowski_sum(&seg.into()).unwrap().volume(), 2.0, epsilon = 1e-13);
    let origin = Summand::Hull(vec![v(&[0.0, 0.0])]);
    let same = sq.minkowski_sum(&origin).unwrap();
    assert_relative_eq!(same.volume(), 1.0, epsilon = 1e-15);
    assert_eq!(same.vertices().len(), 4);
    assert!(matches!(
        sq.minkowski_sum(&shapes::unit_cube(3).unwrap().into()),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn parallel_volume_is_polynomial() {
    let mut r = rng(17);
    for n in [2usize, 3] {
        for _ in 0..10 {
            let p = random_polytope(&mut r, n, 12);
            let q: Summand = random_polytope(&mut r, n, 8).into();
            let vol = |e: f64| p.minkowski_sum(&q.scaled(e)).unwrap().volume();
            // Lagrange interpolation through n+1 nodes, evaluated at a further point
            let nodes: Vec<f64> = (0..=n).map(|k| 0.3 + 0.5 * k as f64).collect();
            let values: Vec<f64> = nodes.iter().map(|&e| vol(e)).collect();
            let x = 2.7;
            let mut interp = 0.0;
            for (i, xi) in nodes.iter().enumerate() {
                let mut l = 1.0;
                for (j, xj) in nodes.iter().enumerate() {
                    if i != j {
                        l *= (x - xj) / (xi - xj);
                    }
                }
                interp += values[i] * l;
            }
            assert_relative_eq!(interp, vol(x), max_relative = 1e-8);
        }
    }
}

#[test]
fn surface_area_via_limit_examples() {
    let sq = shapes::unit_cube(2).unwrap();
    assert_relative_eq!(sq.surface_area_via_limit(&[1e-3]).unwrap(), 4.0, max_relative = 1e-2);
    let cube = shapes::unit_cube(3).unwrap();
    assert_relative_eq!(cube.surface_area_via_limit(&[1e-3]).unwrap(), 6.0, max_relative = 1e-2);
    let disk = shapes::ball_approximation(2);
    assert_relative_eq!(
        disk.surface_area_via_limit(&[1e-3]).unwrap(),
        disk.surface_area(),
        max_relative = 1e-2
    );
    // extrapolation removes the O(ε) term
    let r = cube.surface_area_via_limit(&[2e-3, 1e-3]).unwrap();
    assert_relative_eq!(r, 6.0, max_relative = 1e-4);
}

#[test]
fn random_surface_area_via_limit() {
    let mut r = rng(23);
    for n in [2, 3] {
        for _ in 0..5 {
            let p = random_polytope(&mut r, n, 15);
            assert_relative_eq!(
                p.surface_area_via_limit(&[1e-3]).unwrap(),
                p.surface_area(),
                max_relative = 1e-2
            );
        }
    }
}

#[test]
fn shadow_examples() {
    let sq = shapes::unit_cube(2).unwrap();
    assert_relative_eq!(sq.project_shadow(&v(&[1.0, 0.0])).unwrap(), 1.0, epsilon = 1e-15);
    let d = v(&[1.0, 1.0]) / 2f64.sqrt();
    assert_relative_eq!(sq.project_shadow(&d).unwrap(), 2f64.sqrt(), epsilon = 1e-14);
    let cube = shapes::unit_cube(3).unwrap();
    assert_relative_eq!(cube.project_shadow(&v(&[0.0, 0.0, 1.0])).unwrap(), 1.0, epsilon = 1e-14);
    // the cube's shadow along (1,1,1)/√3 is a regular hexagon of area √3
    let diag = v(&[1.0, 1.0, 1.0]) / 3f64.sqrt();
    assert_relative_eq!(cube.project_shadow(&diag).unwrap(), 3f64.sqrt(), epsilon = 1e-12);
}

#[test]
fn shadow_is_half_the_absolute_normal_integral() {
    // Cauchy: every facet projects onto θ⊥ with area aⱼ|⟨θ,uⱼ⟩|, covering the shadow twice
    let mut r = rng(29);
    for n in [2, 3] {
        for _ in 0..50 {
            let p = random_polytope(&mut r, n, 20);
            let t = random_unit(&mut r, n);
            let cauchy = 0.5
                * p.surface_area_measure()
                    .integrate(|u| u.iter().zip(t.iter()).map(|(a, b)| a * b).sum::<f64>().abs());
            assert_relative_eq!(p.project_shadow(&t).unwrap(), cauchy, max_relative = 1e-10);
        }
    }
}

#[test]
fn linear_images() {
    let sq = shapes::unit_cube(2).unwrap();
    assert_relative_eq!(sq.translate(&v(&[5.0, 5.0])).volume(), 1.0, epsilon = 1e-12);
    assert_relative_eq!(sq.scaled(2.0).unwrap().volume(), 4.0, epsilon = 1e-14);
    let mut r = rng(31);
    for _ in 0..20 {
        let mut a = random_linear(&mut r, 2, 10.0);
        let det: f64 = a.determinant();
        a /= det.abs().sqrt();
        let img = sq.linear_image(&a).unwrap();
        assert_relative_eq!(img.volume(), 1.0, epsilon = EPS_GEOM);
    }
    let singular = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
    assert_eq!(sq.linear_image(&singular).unwrap_err(), Error::SingularMatrix);
}

fn polytope_strategy(n: usize) -> impl Strategy<Value = Polytope> {
    proptest::collection::vec(proptest::collection::vec(-1.0f64..1.0, n), 8..30).prop_filter_map(
        "degenerate hull",
        move |pts| {
            let pts: Vec<Vector> = pts.into_iter().map(Vector::from_vec).collect();
            Polytope::convex_hull(&pts).ok().filter(|p| p.volume() > 1e-3)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closedness_2d(p in polytope_strategy(2)) {
        prop_assert!(p.surface_area_measure().closedness_residual() <= EPS_GEOM);
        prop_assert!(p.representation_residual() <= EPS_GEOM);
    }

    #[test]
    fn closedness_3d(p in polytope_strategy(3)) {
        prop_assert!(p.surface_area_measure().closedness_residual() <= EPS_GEOM);
        prop_assert!(p.representation_residual() <= EPS_GEOM);
    }

    #[test]
    fn volume_scales_with_determinant(p in polytope_strategy(3), seed in any::<u64>()) {
        let a = random_linear(&mut rng(seed), 3, 5.0);
        let img = p.linear_image(&a).unwrap();
        let expected = p.volume() * a.determinant().abs();
        prop_assert!((img.volume() - expected).abs() <= 1e-10 * expected);
    }

    #[test]
    fn translation_keeps_volume(p in polytope_strategy(3), x in proptest::collection::vec(-10.0f64..10.0, 3)) {
        let q = p.translate(&Vector::from_vec(x));
        prop_assert!((q.volume() - p.volume()).abs() <= 1e-12 * 100.0);
    }

    #[test]
    fn rotated_ball_shadow(theta in 0.0..2.0 * PI) {
        let disk = shapes::regular_polygon(720, 1.0).unwrap();
        let s = disk.project_shadow(&Vector::from_vec(vec![theta.cos(), theta.sin()])).unwrap();
        prop_assert!((s - 2.0).abs() < 1e-4);
    }
}
