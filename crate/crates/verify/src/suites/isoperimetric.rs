//! `Vol(Π°ᵐK)·Vol_{n−1}(∂K)^{nm} ≥ ω_{nm} E[W(C_Θ̄)^{−nm}]`, and how the gap
//! closes along regular polygons.

use hpl_core::kernel::shapes::regular_polygon;
use hpl_core::stochastic::{mean_width_constant, star_volume, unit_ball_volume};
use hpl_core::{ConvexBody, EstimateCI, Gauge};

use super::anchors::{ISOPERIMETRIC, SATURATION};
use super::{is_ellipsoidal, is_round, joint_star_volumes, Context, QUAD_REL};
use crate::report::{Check, Relation};

/// Polygon vertex counts of the saturation sequence in the plane.
pub const POLYGONS: [usize; 5] = [4, 8, 16, 64, 256];

pub fn run(ctx: &Context) -> Vec<Check> {
    let (n, m, samples) = (ctx.cfg.n, ctx.cfg.m, ctx.cfg.samples);
    let d = (n * m) as i32;
    let tol = ctx.tol();
    let rhs: Result<EstimateCI, String> = mean_width_constant(n, m, samples, ctx.seed(&["mean-width-constant"]))
        .map(|e| e.scaled(unit_ball_volume(n * m)))
        .map_err(|e| e.to_string());
    let name = "isoperimetric inequality";
    let mut out = ctx.per_body(Relation::AtLeast, ISOPERIMETRIC, |e, body| {
        let lhs = body
            .m_order_gauge(m)
            .and_then(|g| star_volume(&g, samples, ctx.seed(&[&e.name, "polar-volume"])))
            .map(|v| v.scaled(body.surface_area().powi(d)))
            .map_err(|e| e.to_string());
        let check = match (&lhs, &rhs) {
            (Err(r), _) | (_, Err(r)) => Check::failed(name, ISOPERIMETRIC, Relation::AtLeast, r.clone()),
            (Ok(l), Ok(r)) => {
                let rel = if is_round(body) {
                    Relation::Equal
                } else {
                    Relation::Greater
                };
                let quad = if is_ellipsoidal(body) { 2.0 * QUAD_REL } else { QUAD_REL };
                let eps = (tol.eps + quad) * r.mean;
                Check::compare(
                    name,
                    ISOPERIMETRIC,
                    rel,
                    l.mean,
                    r.mean,
                    l.std_error.hypot(r.std_error),
                    eps,
                    tol,
                )
                .note(format!("relative gap {:.3e}", l.mean / r.mean - 1.0))
            }
        };
        vec![check.body(&e.name)]
    });
    if n == 2 {
        out.extend(saturation(ctx, &rhs));
    }
    out
}

/// Consecutive left-hand sides along the polygon sequence must not increase;
/// all polygons share one sample stream so the comparison sees only the
/// difference of the integrands.
fn saturation(ctx: &Context, rhs: &Result<EstimateCI, String>) -> Vec<Check> {
    let (m, samples) = (ctx.cfg.m, ctx.cfg.samples);
    let d = (2 * m) as i32;
    let tol = ctx.tol();
    let label = |k: usize| format!("{k}-gon");
    let names: Vec<String> = POLYGONS
        .windows(2)
        .map(|w| format!("saturation {} → {}", label(w[0]), label(w[1])))
        .collect();
    let fail_all = |r: String| -> Vec<Check> {
        names
            .iter()
            .map(|nm| Check::failed(nm.clone(), SATURATION, Relation::AtLeast, r.clone()))
            .collect()
    };
    let bodies: Result<Vec<ConvexBody>, String> = POLYGONS
        .iter()
        .map(|&k| {
            regular_polygon(k, 1.0)
                .map(ConvexBody::Polytope)
                .map_err(|e| e.to_string())
        })
        .collect();
    let bodies = match bodies {
        Ok(b) => b,
        Err(r) => return fail_all(r),
    };
    let gauges: Result<Vec<_>, String> = bodies
        .iter()
        .map(|b| b.m_order_gauge(m).map_err(|e| e.to_string()))
        .collect();
    let gauges = match gauges {
        Ok(g) => g,
        Err(r) => return fail_all(r),
    };
    let refs: Vec<&dyn Gauge> = gauges.iter().map(|g| g as &dyn Gauge).collect();
    let joint = match joint_star_volumes(&refs, samples, ctx.seed(&["saturation"])) {
        Ok(j) => j,
        Err(r) => return fail_all(r),
    };
    let scale: Vec<f64> = bodies.iter().map(|b| b.surface_area().powi(d)).collect();
    let lhs: Vec<f64> = joint.mean.iter().zip(&scale).map(|(v, s)| v * s).collect();
    let reference = rhs.as_ref().map(|r| r.mean).ok();
    (0..POLYGONS.len() - 1)
        .map(|i| {
            let mut grad = vec![0.0; POLYGONS.len()];
            grad[i] = scale[i];
            grad[i + 1] = -scale[i + 1];
            let mut c = Check::compare(
                names[i].clone(),
                SATURATION,
                Relation::AtLeast,
                lhs[i],
                lhs[i + 1],
                joint.sigma(&grad),
                tol.eps * lhs[i],
                tol,
            );
            if let Some(r) = reference {
                c = c.note(format!(
                    "relative gaps {:.3e} → {:.3e}",
                    lhs[i] / r - 1.0,
                    lhs[i + 1] / r - 1.0
                ));
            }
            c
        })
        .collect()
}
