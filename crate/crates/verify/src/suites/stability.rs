//! Stability of the upper bound:
//! `P(K) ≥ vr(K)^{−nm}·U` and `P(K)/(ω_{nm}E) ≥ ∂_K^{−nm}`, with the chain
//! `∂_K ≤ nωₙ^{1/n} vr(K)` through Ball's bound in John position.

use hpl_core::gauge::polar_projection_body;
use hpl_core::positions::{
    ball_surface_bound_check, john_position_transform, minimal_isoperimetric_ratio, volume_ratio,
};
use hpl_core::stochastic::{petty_upper_constant, unit_ball_volume};
use hpl_core::{ConvexBody, EstimateCI};

use super::anchors::{BALL_BOUND, ISO_VS_VR, MEAN_WIDTH_M1, REVERSE_PETTY, STABILITY_ISO, STABILITY_VR, VR_RANGE};
use super::{is_ellipsoidal, projection_functional, Context, QUAD_REL};
use crate::report::{Check, Relation};

/// Relative slack for quantities that go through the John solver.
pub const JOHN_REL: f64 = 1e-7;
/// Nelder–Mead evaluations per restart in the planar position search.
pub const SEARCH_BUDGET: usize = 400;

struct Positions {
    vr: f64,
    partial: f64,
    upper_bound_only: bool,
    /// `(surface, n·volume)` in John position.
    ball_bound: Option<(f64, f64)>,
}

fn positions(ctx: &Context, name: &str, body: &ConvexBody) -> Result<Positions, String> {
    let n = body.dim();
    match body.as_polytope() {
        None => Ok(Positions {
            vr: 1.0,
            // every ellipsoid is a linear image of the ball
            partial: n as f64 * unit_ball_volume(n).powf(1.0 / n as f64),
            upper_bound_only: false,
            ball_bound: None,
        }),
        Some(p) => {
            let err = |e: hpl_core::Error| e.to_string();
            let vr = volume_ratio(p).map_err(err)?;
            let search =
                minimal_isoperimetric_ratio(p, SEARCH_BUDGET, ctx.seed(&[name, "position-search"])).map_err(err)?;
            let (_, image) = john_position_transform(p).map_err(err)?;
            Ok(Positions {
                vr,
                partial: search.value,
                upper_bound_only: search.upper_bound_only,
                ball_bound: Some(ball_surface_bound_check(&image)),
            })
        }
    }
}

pub fn run(ctx: &Context) -> Vec<Check> {
    let (n, m, samples) = (ctx.cfg.n, ctx.cfg.m, ctx.cfg.samples);
    let nm = (n * m) as i32;
    let tol = ctx.tol();
    let upper: Result<EstimateCI, String> =
        petty_upper_constant(n, m, samples, ctx.seed(&["petty-upper-constant"])).map_err(|e| e.to_string());
    // ω_{nm}E[W^{−nm}] = U·n^{nm}ωₙ^m
    let to_expectation = (n as f64).powi(nm) * unit_ball_volume(n).powi(m as i32);
    let classical = (unit_ball_volume(n) / unit_ball_volume(n - 1)).powi(n as i32);

    let mut out = Vec::new();
    if m == 1 {
        out.push(match &upper {
            Ok(u) => Check::compare(
                "upper constant at m = 1",
                MEAN_WIDTH_M1,
                Relation::Equal,
                u.mean,
                classical,
                u.std_error,
                QUAD_REL * classical,
                tol,
            ),
            Err(r) => Check::failed("upper constant at m = 1", MEAN_WIDTH_M1, Relation::Equal, r.clone()),
        });
    }
    out.extend(ctx.per_body(Relation::AtLeast, STABILITY_VR, |e, body| {
        let mut v = Vec::new();
        let ell = is_ellipsoidal(body);
        let quad = if ell { 2.0 * QUAD_REL } else { QUAD_REL };
        let tight = |ell: bool| if ell { Relation::Equal } else { Relation::AtLeast };
        let p = projection_functional(body, m, samples, ctx.seed(&[&e.name, "functional"]));
        let pos = positions(ctx, &e.name, body);
        let fail = |name: &str, anchor: &str, r: &String| {
            Check::failed(name, anchor, Relation::AtLeast, r.clone()).body(&e.name)
        };
        match (&p, &upper, &pos) {
            (Err(r), ..) | (_, Err(r), _) | (.., Err(r)) => {
                v.push(fail("volume-ratio lower bound", STABILITY_VR, r));
                v.push(fail("minimal-isoperimetric lower bound", STABILITY_ISO, r));
            }
            (Ok(p), Ok(u), Ok(pos)) => {
                let f = pos.vr.powi(-nm);
                let rhs = f * u.mean;
                v.push(
                    Check::compare(
                        "volume-ratio lower bound",
                        STABILITY_VR,
                        tight(ell),
                        p.mean,
                        rhs,
                        p.std_error.hypot(f * u.std_error),
                        (tol.eps + quad + JOHN_REL) * rhs,
                        tol,
                    )
                    .body(&e.name)
                    .note(format!("vr = {:.9}", pos.vr)),
                );
                let e_total = u.mean * to_expectation;
                let lhs = p.mean / e_total;
                let sigma = lhs * (p.std_error / p.mean).hypot(u.std_error / u.mean);
                let rhs = pos.partial.powi(-nm);
                let mut c = Check::compare(
                    "minimal-isoperimetric lower bound",
                    STABILITY_ISO,
                    tight(ell),
                    lhs,
                    rhs,
                    sigma,
                    (tol.eps + quad) * rhs,
                    tol,
                )
                .body(&e.name)
                .note(format!(
                    "∂ ≤ {:.9} from a position search; a non-optimal search weakens this check",
                    pos.partial
                ));
                if pos.upper_bound_only {
                    c = c.note("upper bound only (identity and John position)");
                }
                v.push(c);
                if m == 1 {
                    let rhs = pos.vr.powi(-(n as i32)) * classical;
                    v.push(
                        Check::compare(
                            "classical volume-ratio bound",
                            REVERSE_PETTY,
                            tight(ell),
                            p.mean,
                            rhs,
                            p.std_error,
                            (tol.eps + quad + JOHN_REL) * rhs,
                            tol,
                        )
                        .body(&e.name),
                    );
                    if let Some(poly) = body.as_polytope() {
                        v.push(match polar_projection_body(poly) {
                            Ok(polar) => {
                                let exact = poly.volume().powi(n as i32 - 1) * polar.volume();
                                Check::compare(
                                    "classical volume-ratio bound (exact functional)",
                                    REVERSE_PETTY,
                                    Relation::AtLeast,
                                    exact,
                                    rhs,
                                    0.0,
                                    (tol.eps + JOHN_REL) * rhs,
                                    tol,
                                )
                                .body(&e.name)
                            }
                            Err(r) => fail(
                                "classical volume-ratio bound (exact functional)",
                                REVERSE_PETTY,
                                &r.to_string(),
                            ),
                        });
                    }
                }
            }
        }
        if let Ok(pos) = &pos {
            let bound = n as f64 * unit_ball_volume(n).powf(1.0 / n as f64) * pos.vr;
            v.push(
                Check::compare(
                    "isoperimetric ratio below volume-ratio bound",
                    ISO_VS_VR,
                    Relation::AtMost,
                    pos.partial,
                    bound,
                    0.0,
                    (tol.eps + JOHN_REL) * bound,
                    tol,
                )
                .body(&e.name),
            );
            if let Some((surface, nvol)) = pos.ball_bound {
                v.push(
                    Check::compare(
                        "surface bound in John position",
                        BALL_BOUND,
                        Relation::AtMost,
                        surface,
                        nvol,
                        0.0,
                        JOHN_REL * nvol,
                        tol,
                    )
                    .body(&e.name),
                );
                v.push(
                    Check::compare(
                        "volume ratio at least 1",
                        VR_RANGE,
                        Relation::AtLeast,
                        pos.vr,
                        1.0,
                        0.0,
                        JOHN_REL,
                        tol,
                    )
                    .body(&e.name),
                );
                v.push(
                    Check::compare(
                        "volume ratio at most n",
                        VR_RANGE,
                        Relation::AtMost,
                        pos.vr,
                        n as f64,
                        0.0,
                        JOHN_REL,
                        tol,
                    )
                    .body(&e.name),
                );
            }
        }
        v
    }));
    out
}
