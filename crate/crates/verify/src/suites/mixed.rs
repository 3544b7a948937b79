//! Mixed mth-order polar projection bodies `Π°ᵐ(K₁, K₂)` with
//! `‖θ̄‖ = n V(K₁[n−2], K₂, C_{−θ̄})`: pointwise Aleksandrov–Fenchel-type bounds
//! on the gauges and the volume inequality they integrate to.

use hpl_core::kernel::Polytope;
use hpl_core::mixed::{MixedGaugeEvaluator, PolarizedMixedGauge};
use hpl_core::stochastic::{petty_upper_constant, star_volume};
use hpl_core::{ConvexBody, DirectionTuple, EstimateCI, Gauge, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::anchors::{
    AF_GAUGE, AF_GAUGE_SQUARE, HOMOTHETY, LOG_CONVEX, MIXED_PETTY, MIXED_ROUTES, MIXED_VOLUME, TWO_SEED,
};
use super::{joint_star_volumes, Context, QUAD_REL};
use crate::report::{Check, Relation};

/// Directions per pair in the pointwise checks.
pub const POINTWISE: usize = 1000;
/// Dilation and translation producing a homothet of each body.
pub const HOMOTHET_SCALE: f64 = 1.7;
pub const HOMOTHET_SHIFT: [f64; 3] = [0.3, -0.2, 0.1];

fn random_direction(rng: &mut ChaCha8Rng, n: usize, m: usize) -> DirectionTuple {
    loop {
        let x: Vec<f64> = (0..n * m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > 1e-3 && r <= 1.0 {
            return DirectionTuple::new(n, m, x.iter().map(|v| v / r).collect()).expect("well-formed tuple");
        }
    }
}

struct Pair<'a> {
    label: String,
    k1: &'a Polytope,
    k2: Polytope,
    homothetic: bool,
}

pub fn run(ctx: &Context) -> Vec<Check> {
    let (n, m, samples) = (ctx.cfg.n, ctx.cfg.m, ctx.cfg.samples);
    let upper = petty_upper_constant(n, m, samples, ctx.seed(&["petty-upper-constant"])).map_err(|e| e.to_string());
    if n == 2 {
        return ctx.per_body(Relation::Equal, MIXED_VOLUME, |e, body| match body.as_polytope() {
            Some(k) => planar(ctx, &e.name, k, &upper),
            None => {
                vec![Check::failed("polytope required", MIXED_VOLUME, Relation::AtMost, "not a polytope").body(&e.name)]
            }
        });
    }
    let mut out = Vec::new();
    let mut polys: Vec<(&str, &Polytope)> = Vec::new();
    for e in &ctx.entries {
        match e.body.as_ref().map(ConvexBody::as_polytope) {
            Ok(Some(p)) => polys.push((&e.name, p)),
            Ok(None) => out.push(
                Check::failed("polytope required", MIXED_VOLUME, Relation::AtMost, "not a polytope").body(&e.name),
            ),
            Err(r) => {
                out.push(Check::failed("body construction", MIXED_VOLUME, Relation::AtMost, r.clone()).body(&e.name))
            }
        }
    }
    let mut pairs = Vec::new();
    for (i, (a, k1)) in polys.iter().enumerate() {
        for (b, k2) in &polys[i + 1..] {
            pairs.push(Pair {
                label: format!("{a}+{b}"),
                k1,
                k2: (*k2).clone(),
                homothetic: false,
            });
        }
    }
    for (a, k1) in &polys {
        let shift = Vector::from_column_slice(&HOMOTHET_SHIFT[..n]);
        match k1.scaled(HOMOTHET_SCALE) {
            Ok(k2) => pairs.push(Pair {
                label: format!("{a}+homothet"),
                k1,
                k2: k2.translate(&shift),
                homothetic: true,
            }),
            Err(r) => out.push(Check::failed("homothet", HOMOTHETY, Relation::Equal, r.to_string()).body(a)),
        }
    }
    use rayon::prelude::*;
    let per_pair: Vec<Vec<Check>> = pairs.par_iter().map(|p| spatial(ctx, p, &upper)).collect();
    out.extend(per_pair.into_iter().flatten());
    out
}

/// In the plane the mixed body of a single `K` is `Π°ᵐK` itself.
fn planar(ctx: &Context, name: &str, k: &Polytope, upper: &Result<EstimateCI, String>) -> Vec<Check> {
    let (m, samples) = (ctx.cfg.m, ctx.cfg.samples);
    let tol = ctx.tol();
    let gauges = PolarizedMixedGauge::new(std::slice::from_ref(k), m)
        .and_then(|mixed| Ok((mixed, ConvexBody::Polytope(k.clone()).m_order_gauge(m)?)))
        .map_err(|e| e.to_string());
    let joint = gauges.and_then(|(a, b)| joint_star_volumes(&[&a, &b], samples, ctx.seed(&[name, "volumes"])));
    let mut out = Vec::new();
    match (&joint, upper) {
        (Err(r), _) => {
            out.push(Check::failed(
                "mixed volume inequality",
                MIXED_VOLUME,
                Relation::AtMost,
                r.clone(),
            ));
            out.push(Check::failed(
                "mixed Petty bound",
                MIXED_PETTY,
                Relation::Less,
                r.clone(),
            ));
        }
        (Ok(j), upper) => {
            let (mixed, own) = (j.mean[0], j.mean[1]);
            out.push(Check::compare(
                "mixed volume inequality",
                MIXED_VOLUME,
                Relation::Equal,
                mixed,
                own,
                j.sigma(&[1.0, -1.0]),
                tol.eps * own,
                tol,
            ));
            out.push(match upper {
                Ok(u) => {
                    let c = k.volume().powi(m as i32);
                    Check::compare(
                        "mixed Petty bound",
                        MIXED_PETTY,
                        Relation::Less,
                        c * mixed,
                        u.mean,
                        (c * j.sigma(&[1.0, 0.0])).hypot(u.std_error),
                        (tol.eps + QUAD_REL) * u.mean,
                        tol,
                    )
                }
                Err(r) => Check::failed("mixed Petty bound", MIXED_PETTY, Relation::Less, r.clone()),
            });
        }
    }
    out.into_iter().map(|c| c.body(name)).collect()
}

fn spatial(ctx: &Context, pair: &Pair, upper: &Result<EstimateCI, String>) -> Vec<Check> {
    let (n, m, samples) = (ctx.cfg.n, ctx.cfg.m, ctx.cfg.samples);
    let nm = (n * m) as f64;
    let tol = ctx.tol();
    let label = pair.label.as_str();
    let bodies = [pair.k1.clone(), pair.k2.clone()];
    let names = [
        "pointwise gauge inequality",
        "pointwise gauge inequality, squared form",
        "mixed gauge routes agree",
        "mixed volume inequality",
        "log-convexity of volume sequence",
        "mixed Petty bound",
        "mixed volume two-seed agreement",
    ];
    let setup = (|| -> hpl_core::Result<_> {
        let hull = MixedGaugeEvaluator::new(&bodies, m)?;
        let fast = PolarizedMixedGauge::new(&bodies, m)?;
        let g1 = ConvexBody::Polytope(bodies[0].clone()).m_order_gauge(m)?;
        let g2 = ConvexBody::Polytope(bodies[1].clone()).m_order_gauge(m)?;
        Ok((hull, fast, g1, g2))
    })();
    let (hull, fast, g1, g2) = match setup {
        Ok(s) => s,
        Err(e) => {
            return names
                .iter()
                .map(|nm| Check::failed(*nm, MIXED_VOLUME, Relation::AtLeast, e.to_string()).body(label))
                .collect()
        }
    };
    let mut out = Vec::new();

    // pointwise: G₁₂^{n−1} ≥ G₁^{n−2} G₂ and G₁₂^{nm} ≥ G₁^{nm/2} G₂^{nm/2}
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed(&[label, "pointwise"]));
    let (mut af, mut af_sq, mut routes) = (f64::INFINITY, f64::INFINITY, 0.0f64);
    for _ in 0..POINTWISE {
        let t = random_direction(&mut rng, n, m);
        let x = t.as_slice();
        let (a, b, c) = (hull.eval(x), g1.eval(x), g2.eval(x));
        af = af.min(1.0 - b.powi(n as i32 - 2) * c / a.powi(n as i32 - 1));
        af_sq = af_sq.min(1.0 - b.powf(nm / 2.0) * c.powf(nm / 2.0) / a.powf(nm));
        routes = routes.max((a - fast.eval(x)).abs() / a);
    }
    let note = format!("minimum relative slack over {POINTWISE} directions");
    out.push(Check::compare(names[0], AF_GAUGE, Relation::AtLeast, af, 0.0, 0.0, tol.eps, tol).note(note.clone()));
    out.push(
        Check::compare(
            names[1],
            AF_GAUGE_SQUARE,
            Relation::AtLeast,
            af_sq,
            0.0,
            0.0,
            tol.eps,
            tol,
        )
        .note(note),
    );
    out.push(
        Check::compare(names[2], MIXED_ROUTES, Relation::AtMost, routes, 0.0, 0.0, tol.eps, tol)
            .note("maximum relative difference"),
    );

    // volumes on one sample stream: V₁₂ = Vol(Π°ᵐ(K₁,K₂)), V₁, V₂
    match joint_star_volumes(&[&fast, &g1, &g2], samples, ctx.seed(&[label, "volumes"])) {
        Err(r) => {
            for (i, anchor) in [(3, MIXED_VOLUME), (4, LOG_CONVEX), (5, MIXED_PETTY), (6, TWO_SEED)] {
                out.push(Check::failed(names[i], anchor, Relation::AtLeast, r.clone()));
            }
        }
        Ok(j) => {
            let (v12, v1, v2) = (j.mean[0], j.mean[1], j.mean[2]);
            let sigma = j.sigma(&[-2.0 * v12, v2, v1]);
            let (rel, anchor) = if pair.homothetic {
                (Relation::Equal, HOMOTHETY)
            } else {
                (Relation::Greater, MIXED_VOLUME)
            };
            out.push(
                Check::compare(names[3], anchor, rel, v1 * v2, v12 * v12, sigma, tol.eps * v1 * v2, tol)
                    .note(format!("V₁₂²/(V₁V₂) = {:.6}", v12 * v12 / (v1 * v2))),
            );
            out.push(Check::compare(
                names[4],
                LOG_CONVEX,
                Relation::AtLeast,
                v1 * v2,
                v12 * v12,
                sigma,
                tol.eps * v1 * v2,
                tol,
            ));
            out.push(match upper {
                Ok(u) => {
                    let c = (bodies[0].volume() * bodies[1].volume()).powi(m as i32);
                    Check::compare(
                        names[5],
                        MIXED_PETTY,
                        Relation::Less,
                        c * v12,
                        u.mean,
                        (c * j.sigma(&[1.0, 0.0, 0.0])).hypot(u.std_error),
                        (tol.eps + QUAD_REL) * u.mean,
                        tol,
                    )
                }
                Err(r) => Check::failed(names[5], MIXED_PETTY, Relation::Less, r.clone()),
            });
            out.push(match star_volume(&fast, samples, ctx.seed(&[label, "second-seed"])) {
                Ok(b) => Check::compare(
                    names[6],
                    TWO_SEED,
                    Relation::Equal,
                    v12,
                    b.mean,
                    j.sigma(&[1.0, 0.0, 0.0]).hypot(b.std_error),
                    tol.eps * v12,
                    tol,
                ),
                Err(e) => Check::failed(names[6], TWO_SEED, Relation::Equal, e.to_string()),
            });
        }
    }
    out.into_iter().map(|c| c.body(label)).collect()
}
