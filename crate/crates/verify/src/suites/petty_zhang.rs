//! `C(nm+n, n)/n^{nm} ≤ Vol(K)^{nm−m} Vol(Π°ᵐK) ≤ ω_{nm}/(n^{nm}ωₙ^m) E[W(C_Θ̄)^{−nm}]`.

use hpl_core::gauge::polar_projection_body;
use hpl_core::stochastic::{petty_upper_constant, zhang_lower_constant};

use super::anchors::{EXACT_POLAR, PETTY, ZHANG};
use super::{is_ellipsoidal, is_simplex, projection_functional, Context, QUAD_REL};
use crate::report::{Check, Relation};

pub fn run(ctx: &Context) -> Vec<Check> {
    let (n, m, samples) = (ctx.cfg.n, ctx.cfg.m, ctx.cfg.samples);
    let tol = ctx.tol();
    let lower = zhang_lower_constant(n, m);
    let upper = petty_upper_constant(n, m, samples, ctx.seed(&["petty-upper-constant"])).map_err(|e| e.to_string());
    ctx.per_body(Relation::AtLeast, ZHANG, |e, body| {
        let quad = if is_ellipsoidal(body) { QUAD_REL } else { 0.0 };
        let p = match projection_functional(body, m, samples, ctx.seed(&[&e.name, "functional"])) {
            Ok(p) => p,
            Err(r) => {
                return vec![
                    Check::failed("zhang lower bound", ZHANG, Relation::AtLeast, r.clone()).body(&e.name),
                    Check::failed("petty upper bound", PETTY, Relation::AtMost, r).body(&e.name),
                ]
            }
        };
        let mut out = Vec::new();
        let rel = if is_simplex(body) {
            Relation::Equal
        } else {
            Relation::Greater
        };
        let eps = (tol.eps + quad) * p.mean.max(lower);
        out.push(
            Check::compare("zhang lower bound", ZHANG, rel, p.mean, lower, p.std_error, eps, tol)
                .body(&e.name)
                .note(format!("P(K) = {:.6} ± {:.2e}", p.mean, p.std_error)),
        );
        out.push(match &upper {
            Ok(u) => {
                let rel = if is_ellipsoidal(body) {
                    Relation::Equal
                } else {
                    Relation::Less
                };
                let sigma = p.std_error.hypot(u.std_error);
                let eps = (tol.eps + QUAD_REL + quad) * u.mean;
                Check::compare("petty upper bound", PETTY, rel, p.mean, u.mean, sigma, eps, tol)
                    .body(&e.name)
                    .note(format!("relative gap {:.3e}", 1.0 - p.mean / u.mean))
            }
            Err(r) => Check::failed("petty upper bound", PETTY, Relation::AtMost, r.clone()).body(&e.name),
        });
        if let (1, Some(poly)) = (m, body.as_polytope()) {
            // second route: the polar of the zonotope ΠK, computed exactly
            out.push(match polar_projection_body(poly) {
                Ok(polar) => {
                    let exact = poly.volume().powi(n as i32 - 1) * polar.volume();
                    Check::compare(
                        "functional agrees with exact polar body",
                        EXACT_POLAR,
                        Relation::Equal,
                        p.mean,
                        exact,
                        p.std_error,
                        tol.eps * exact,
                        tol,
                    )
                    .body(&e.name)
                }
                Err(err) => Check::failed(
                    "functional agrees with exact polar body",
                    EXACT_POLAR,
                    Relation::Equal,
                    err.to_string(),
                )
                .body(&e.name),
            });
        }
        out
    })
}
