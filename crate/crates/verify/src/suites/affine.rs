//! `P(AK + x) = P(K)` for the projection functional `P`, by common random numbers.

use hpl_core::{ConvexBody, Matrix, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::anchors::AFFINE;
use super::{is_ellipsoidal, joint_star_volumes, Context, QUAD_REL};
use crate::report::{Check, Relation};

pub const RANDOM_MAPS: usize = 50;
pub const MAX_CONDITION: f64 = 20.0;

fn orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let a = Matrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        if a.determinant().abs() < 1e-3 {
            continue;
        }
        let qr = a.qr();
        let (q, r) = (qr.q(), qr.r());
        // fix the column signs so the factor is unique
        let signs = Matrix::from_diagonal(&Vector::from_iterator(n, (0..n).map(|i| r[(i, i)].signum())));
        return q * signs;
    }
}

/// `U·diag(s)·Vᵀ` with singular values spread over `[λ, λκ]`, `κ ≤ 20`.
fn random_map(rng: &mut ChaCha8Rng, n: usize) -> (Matrix, Vector, f64) {
    let kappa = rng.random_range(0.0..MAX_CONDITION.ln()).exp();
    let lambda = rng.random_range(0.5..2.0);
    let mut s: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..kappa.ln()).exp()).collect();
    s[0] = 1.0;
    s[n - 1] = kappa;
    let mut d = Matrix::from_diagonal(&Vector::from_vec(s)) * lambda;
    if rng.random_bool(0.5) {
        d[(0, 0)] = -d[(0, 0)];
    }
    let a = orthogonal(rng, n) * d * orthogonal(rng, n).transpose();
    let t = Vector::from_iterator(n, (0..n).map(|_| rng.random_range(-2.0..2.0)));
    (a, t, kappa)
}

pub fn run(ctx: &Context) -> Vec<Check> {
    let (n, m, samples) = (ctx.cfg.n, ctx.cfg.m, ctx.cfg.samples);
    let tol = ctx.tol();
    let power = (n * m - m) as i32;
    ctx.per_body(Relation::Equal, AFFINE, |e, body| {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed(&[&e.name, "maps"]));
        let mut maps = vec![
            ("identity".to_string(), Matrix::identity(n, n), Vector::zeros(n)),
            (
                "dilation by 2".to_string(),
                Matrix::identity(n, n) * 2.0,
                Vector::zeros(n),
            ),
        ];
        for i in 0..RANDOM_MAPS {
            let (a, t, kappa) = random_map(&mut rng, n);
            maps.push((format!("random map {i} (condition {kappa:.2})"), a, t));
        }
        let base = body.m_order_gauge(m);
        let images: Vec<Result<(ConvexBody, _), String>> = maps
            .iter()
            .map(|(_, a, t)| {
                let img = body.affine_image(a, t).map_err(|e| e.to_string())?;
                let g = img.m_order_gauge(m).map_err(|e| e.to_string())?;
                Ok((img, g))
            })
            .collect();
        let ok: Vec<usize> = (0..maps.len()).filter(|&i| images[i].is_ok()).collect();
        let joint = base.map_err(|e| e.to_string()).and_then(|g0| {
            let mut gs: Vec<&dyn hpl_core::Gauge> = vec![&g0];
            gs.extend(
                ok.iter()
                    .map(|&i| &images[i].as_ref().unwrap().1 as &dyn hpl_core::Gauge),
            );
            joint_star_volumes(&gs, samples, ctx.seed(&[&e.name, "common"]))
        });
        let quad = if is_ellipsoidal(body) { QUAD_REL } else { 0.0 };
        let mut out = Vec::with_capacity(maps.len());
        let mut slot = 0;
        for (i, (label, ..)) in maps.iter().enumerate() {
            let name = format!("ratio under {label}");
            let check = match (&images[i], &joint) {
                (Err(r), _) | (_, Err(r)) => Check::failed(name, AFFINE, Relation::Equal, r.clone()),
                (Ok((img, _)), Ok(j)) => {
                    slot += 1;
                    let c = (img.volume() / body.volume()).powi(power);
                    let (v0, v1) = (j.mean[0], j.mean[slot]);
                    let ratio = c * v1 / v0;
                    let mut grad = vec![0.0; j.mean.len()];
                    grad[0] = -c * v1 / (v0 * v0);
                    grad[slot] = c / v0;
                    Check::compare(
                        name,
                        AFFINE,
                        Relation::Equal,
                        ratio,
                        1.0,
                        j.sigma(&grad),
                        tol.eps + quad,
                        tol,
                    )
                }
            };
            out.push(check.body(&e.name));
        }
        out
    })
}
