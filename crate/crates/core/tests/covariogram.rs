mod common;

use approx::assert_relative_eq;
use common::*;
use hpl_core::covariogram::{covariogram, radial_derivative, DEFAULT_STEPS};
use hpl_core::kernel::shapes;
use hpl_core::{ConvexBody, DirectionTuple, Error};
use rand::Rng;
use std::f64::consts::SQRT_2;
use std::time::Instant;

fn tuple(n: usize, data: &[f64]) -> DirectionTuple {
    DirectionTuple::new(n, data.len() / n, data.to_vec()).unwrap()
}

#[test]
fn origin_gives_volume() {
    let mut r = rng(1);
    for n in [2, 3] {
        let p = random_polytope(&mut r, n, 12);
        let zero = DirectionTuple::new(n, 2, vec![0.0; 2 * n]).unwrap();
        assert_relative_eq!(covariogram(&p, &zero).unwrap(), p.volume(), max_relative = 1e-12);
    }
}

#[test]
fn square_examples() {
    let sq = shapes::unit_cube(2).unwrap();
    for t in [0.0, 0.1, 0.25, 0.5, 0.9, 1.0] {
        assert_relative_eq!(
            covariogram(&sq, &tuple(2, &[t, 0.0])).unwrap(),
            1.0 - t,
            epsilon = 1e-12
        );
        let g = covariogram(&sq, &tuple(2, &[t, 0.0, 0.0, t])).unwrap();
        assert_relative_eq!(g, (1.0 - t) * (1.0 - t), epsilon = 1e-12);
    }
    assert_eq!(covariogram(&sq, &tuple(2, &[1.5, 0.0])).unwrap(), 0.0);
}

#[test]
fn cube_example() {
    let cube = shapes::unit_cube(3).unwrap();
    let g = covariogram(&cube, &tuple(3, &[0.2, 0.0, 0.0, 0.0, -0.1, 0.3])).unwrap();
    assert_relative_eq!(g, 0.8 * 0.9 * 0.7, epsilon = 1e-12);
}

#[test]
fn bounded_and_symmetric() {
    let mut r = rng(2);
    for n in [2, 3] {
        for _ in 0..20 {
            let p = random_polytope(&mut r, n, 12);
            let data: Vec<f64> = (0..2 * n).map(|_| r.random_range(-0.5..0.5)).collect();
            let x = DirectionTuple::new(n, 2, data.clone()).unwrap();
            let swapped: Vec<f64> = data[n..].iter().chain(&data[..n]).copied().collect();
            let g = covariogram(&p, &x).unwrap();
            assert!(g <= p.volume() + 1e-12);
            let h = covariogram(&p, &DirectionTuple::new(n, 2, swapped).unwrap()).unwrap();
            assert_relative_eq!(g, h, epsilon = 1e-12);
        }
    }
}

#[test]
fn root_concavity_along_rays() {
    let mut r = rng(3);
    for n in [2usize, 3] {
        for _ in 0..20 {
            let p = random_polytope(&mut r, n, 12);
            let theta = tuple(n, random_unit(&mut r, 2 * n).as_slice());
            // find the support radius along θ̄ by bisection
            let (mut lo, mut hi) = (0.0, 4.0);
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                if covariogram(&p, &theta.scaled(mid)).unwrap() > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let f = |s: f64| covariogram(&p, &theta.scaled(s)).unwrap().powf(1.0 / n as f64);
            let rs: Vec<f64> = (0..5).map(|k| lo * k as f64 / 5.0).collect();
            for w in rs.windows(3) {
                assert!(f(w[1]) >= 0.5 * (f(w[0]) + f(w[2])) - 1e-8);
            }
        }
    }
}

#[test]
fn derivative_examples() {
    let sq = shapes::unit_cube(2).unwrap();
    let d = radial_derivative(&sq, &tuple(2, &[1.0, 0.0]), &DEFAULT_STEPS).unwrap();
    assert_relative_eq!(d.value, -1.0, epsilon = 1e-10);
    let d = radial_derivative(&sq, &tuple(2, &[1.0 / SQRT_2, 0.0, 0.0, 1.0 / SQRT_2]), &DEFAULT_STEPS).unwrap();
    assert_relative_eq!(d.value, -SQRT_2, epsilon = 1e-10);
    assert!(d.error_estimate < 1e-10);
}

#[test]
fn derivative_errors() {
    let sq = shapes::unit_cube(2).unwrap();
    let e1 = tuple(2, &[1.0, 0.0]);
    assert_eq!(
        radial_derivative(&sq, &e1, &[2.0, 1.0]).unwrap_err(),
        Error::StepTooLarge
    );
    assert!(matches!(
        radial_derivative(&sq, &e1, &[1e-3, 1e-2]),
        Err(Error::InvalidInput(_))
    ));
    assert!(matches!(
        radial_derivative(&sq, &e1, &[1e-3]),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn variational_formula_random() {
    let start = Instant::now();
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        for m in [1, 2] {
            for _ in 0..25 {
                let p = random_polytope(&mut r, n, 12);
                let theta = tuple(n, random_unit(&mut r, n * m).as_slice());
                let g = ConvexBody::from(p.clone()).gauge_m_order(&theta).unwrap();
                let d = radial_derivative(&p, &theta, &DEFAULT_STEPS).unwrap();
                worst = worst.max((d.value + g).abs() / g);
            }
        }
    }
    assert!(worst <= 1e-2, "worst relative error {worst}");
    assert!(start.elapsed().as_secs_f64() < 60.0);
}
