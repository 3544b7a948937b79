//! `d/dr g_{K,m}(rθ̄)|₀₊ = −‖θ̄‖_{Π°ᵐK} = −n V(K[n−1], C_{−θ̄})`.

use hpl_core::covariogram::{radial_derivative, DEFAULT_STEPS};
use hpl_core::kernel::{shapes, Polytope, Summand};
use hpl_core::mixed::{mixed_volume, mixed_volume_via_perturbation, negative_hull, repeated};
use hpl_core::{ConvexBody, DirectionTuple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::anchors::VARIATIONAL;
use super::Context;
use crate::config::Tolerance;
use crate::report::{Check, Relation};

/// Random directions per body.
pub const CASES: usize = 10;
/// Relative agreement required of the finite-difference derivative.
pub const DERIVATIVE_REL: f64 = 1e-2;

fn random_direction(rng: &mut ChaCha8Rng, n: usize, m: usize) -> DirectionTuple {
    loop {
        let x: Vec<f64> = (0..n * m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > 1e-3 && r <= 1.0 {
            return DirectionTuple::new(n, m, x.iter().map(|v| v / r).collect()).expect("well-formed tuple");
        }
    }
}

/// The three quantities compared for one `(K, θ̄)`.
fn case(k: &Polytope, theta: &DirectionTuple, label: &str, tol: &Tolerance) -> Vec<Check> {
    let n = k.dim();
    let names = [
        format!("radial derivative matches gauge ({label})"),
        format!("perturbation mixed volume matches gauge ({label})"),
        format!("polarized mixed volume matches gauge ({label})"),
    ];
    let gauge = match ConvexBody::Polytope(k.clone()).gauge_m_order(theta) {
        Ok(g) => g,
        Err(e) => {
            return names
                .iter()
                .map(|nm| Check::failed(nm.clone(), VARIATIONAL, Relation::Equal, e.to_string()))
                .collect()
        }
    };
    let c = negative_hull(theta);
    let mut out = Vec::with_capacity(3);
    out.push(match radial_derivative(k, theta, &DEFAULT_STEPS) {
        Ok(d) => Check::compare(
            names[0].clone(),
            VARIATIONAL,
            Relation::Equal,
            d.value,
            -gauge,
            0.0,
            DERIVATIVE_REL * gauge,
            tol,
        )
        .note(format!("extrapolation error estimate {:.2e}", d.error_estimate)),
        Err(e) => Check::failed(names[0].clone(), VARIATIONAL, Relation::Equal, e.to_string()),
    });
    out.push(match mixed_volume_via_perturbation(k, &c) {
        Ok(v) => Check::compare(
            names[1].clone(),
            VARIATIONAL,
            Relation::Equal,
            -(n as f64) * v,
            -gauge,
            0.0,
            tol.eps * gauge,
            tol,
        ),
        Err(e) => Check::failed(names[1].clone(), VARIATIONAL, Relation::Equal, e.to_string()),
    });
    let mut tuple = repeated(&Summand::Polytope(k.clone()), n - 1);
    tuple.push(c);
    out.push(match mixed_volume(&tuple) {
        Ok(v) => Check::compare(
            names[2].clone(),
            VARIATIONAL,
            Relation::Equal,
            -(n as f64) * v,
            -gauge,
            0.0,
            tol.eps * gauge,
            tol,
        ),
        Err(e) => Check::failed(names[2].clone(), VARIATIONAL, Relation::Equal, e.to_string()),
    });
    out
}

pub fn run(ctx: &Context) -> Vec<Check> {
    let (n, m) = (ctx.cfg.n, ctx.cfg.m);
    let tol = ctx.tol();
    let mut out = ctx.per_body(Relation::Equal, VARIATIONAL, |e, body| {
        let Some(k) = body.as_polytope() else {
            return vec![
                Check::failed("polytope required", VARIATIONAL, Relation::Equal, "not a polytope").body(&e.name),
            ];
        };
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed(&[&e.name, "directions"]));
        (0..CASES)
            .flat_map(|i| {
                let theta = random_direction(&mut rng, n, m);
                case(k, &theta, &format!("direction {i}"), tol)
            })
            .map(|c| c.body(&e.name))
            .collect()
    });
    if n == 2 {
        // the unit square along e₁ (m = 1) and along (e₁, e₂)/√2 (m = 2), where the
        // covariogram is exactly linear near the origin
        let square = shapes::unit_cube(2).expect("unit square");
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let fixed = [
            ("unit square, e₁", vec![1.0, 0.0], -1.0),
            (
                "unit square, (e₁, e₂)/√2",
                vec![h, 0.0, 0.0, h],
                -std::f64::consts::SQRT_2,
            ),
        ];
        for (label, data, expected) in fixed {
            let t = DirectionTuple::new(2, data.len() / 2, data).expect("well-formed tuple");
            out.extend(case(&square, &t, label, tol).into_iter().map(|c| c.body("unit square")));
            let name = format!("radial derivative equals {expected:.6} ({label})");
            out.push(
                match radial_derivative(&square, &t, &DEFAULT_STEPS) {
                    Ok(d) => Check::compare(name, VARIATIONAL, Relation::Equal, d.value, expected, 0.0, tol.eps, tol),
                    Err(e) => Check::failed(name, VARIATIONAL, Relation::Equal, e.to_string()),
                }
                .body("unit square"),
            );
        }
    }
    out
}
