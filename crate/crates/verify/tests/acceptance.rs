//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use hpl_core::covariogram::{radial_derivative, DEFAULT_STEPS};
use hpl_core::kernel::{shapes, Polytope};
use hpl_core::mixed::MixedGaugeEvaluator;
use hpl_core::positions::{ball_surface_bound_check, john_position_transform, volume_ratio};
use hpl_core::stochastic::{default_samples, mean_width_constant, petty_upper_constant};
use hpl_core::{ConvexBody, DirectionTuple, Vector};
use hpl_verify::suites::projection_functional;
use hpl_verify::{run_suite, Catalog, Relation, Suite, SuiteConfig, SuiteReport, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Width of every Monte Carlo confidence band, in standard errors.
const Z: f64 = 3.0;
/// Relative error allowed for the fixed sphere quadratures (2048 nodes on S¹,
/// 10242 on S²).
const QUAD_SLACK: f64 = 1e-4;
/// Absolute floor on equality margins.
const EPS: f64 = 1e-9;
/// Seed used for every suite run, as on the command line.
const SEED: u64 = 1;

const PETTY_SAMPLES: u64 = 1_000_000;
const PETTY_SIGMA_MAX: f64 = 0.005;
const PETTY_BUDGET: Duration = Duration::from_secs(10);
const IDENTITY_PAIRS: usize = 1000;
const IDENTITY_TOL: f64 = 1e-12;
const VARIATIONAL_CASES: usize = 100;
const VARIATIONAL_REL: f64 = 1e-2;
const VARIATIONAL_BUDGET: Duration = Duration::from_secs(60);
const AF_TRIPLES: usize = 1000;
const AF_SLACK: f64 = -1e-9;
const JOHN_TOL: f64 = 1e-6;
const JOHN_REL: f64 = 1e-7;
const RANDOM_VERTICES: usize = 8;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn body(name: &str, n: usize) -> ConvexBody {
    Catalog::builtin()
        .get(name)
        .unwrap_or_else(|| panic!("catalog has no {name}"))
        .build(n)
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn polytope(name: &str, n: usize) -> Polytope {
    body(name, n).as_polytope().expect("polytope").clone()
}

fn suite(suite: Suite, n: usize, m: usize) -> SuiteReport {
    let cfg = SuiteConfig::new(suite, n, m).with_seed(SEED);
    run_suite(cfg, &Catalog::builtin(), false).expect("suite configuration is valid")
}

fn random_polytope(rng: &mut ChaCha8Rng, n: usize) -> Polytope {
    loop {
        let pts: Vec<Vector> = (0..RANDOM_VERTICES)
            .map(|_| Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)))
            .collect();
        if let Ok(p) = Polytope::convex_hull(&pts) {
            if p.volume() > 1e-3 {
                return p;
            }
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > 1e-3 && r <= 1.0 {
            return x.iter().map(|v| v / r).collect();
        }
    }
}

/// Missing report values compare as NaN, which fails every test below.
fn num(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NAN)
}

fn within(value: f64, target: f64, sigma: f64, slack: f64) -> bool {
    (value - target).abs() <= Z * sigma + slack
}

/// Every check of `report` matching `keep` passes; returns how many did.
fn all_pass(report: &SuiteReport, keep: impl Fn(&hpl_verify::Check) -> bool) -> Result<usize, String> {
    let mut count = 0;
    for c in report.checks.iter().filter(|c| keep(c)) {
        if c.verdict != Verdict::Pass {
            return Err(format!(
                "{} [{}]: {:?} lhs {:.6} rhs {:.6} σ {:.2e}",
                c.name,
                c.body.as_deref().unwrap_or("-"),
                c.verdict,
                num(c.lhs),
                num(c.rhs),
                c.sigma
            ));
        }
        count += 1;
    }
    Ok(count)
}

fn classical_petty() -> Outcome {
    let ball = body("ball", 2);
    let start = Instant::now();
    let p = projection_functional(&ball, 1, PETTY_SAMPLES, SEED)?;
    let elapsed = start.elapsed();
    let target = (PI / 2.0).powi(2);
    let detail = format!(
        "P = {:.7} ± {:.1e} vs {target:.7}, {:.1} s",
        p.mean,
        p.std_error,
        elapsed.as_secs_f64()
    );
    if !within(p.mean, target, p.std_error, QUAD_SLACK * target) {
        return Err(detail);
    }
    if p.std_error >= PETTY_SIGMA_MAX || elapsed >= PETTY_BUDGET {
        return Err(detail);
    }
    Ok(detail)
}

fn zhang_simplices() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for (name, n, target) in [("triangle", 2, 1.5), ("tetrahedron", 3, 20.0 / 27.0)] {
        let p = projection_functional(&body(name, n), 1, default_samples(n, 1), SEED)?;
        ok &= within(p.mean, target, p.std_error, EPS);
        detail.push(format!("{name} {:.5} ± {:.1e} vs {target:.5}", p.mean, p.std_error));
    }
    let detail = detail.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sandwich_m2() -> Outcome {
    let (n, m) = (2, 2);
    let report = suite(Suite::PettyZhang, n, m);
    let lower = 15.0 / 16.0;
    let upper = petty_upper_constant(n, m, default_samples(n, m), SEED).map_err(|e| e.to_string())?;
    let mut bodies = 0;
    for name in &report.meta.bodies {
        let c = report
            .find("zhang lower bound", Some(name))
            .ok_or_else(|| format!("{name}: no functional"))?;
        let (p, s) = (num(c.lhs), c.sigma);
        if !(p >= lower - Z * s - EPS && p <= upper.mean + Z * s.hypot(upper.std_error) + QUAD_SLACK * upper.mean) {
            return Err(format!(
                "{name}: P = {p:.6} ± {s:.1e} outside [{lower}, {:.6}]",
                upper.mean
            ));
        }
        bodies += 1;
    }
    let t = report
        .find("zhang lower bound", Some("triangle"))
        .ok_or("triangle missing")?;
    let detail = format!(
        "{bodies} bodies in band; triangle {:.5} ± {:.1e} vs 15/16",
        num(t.lhs),
        t.sigma
    );
    if within(num(t.lhs), lower, t.sigma, EPS) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn m1_constant() -> Outcome {
    // ∫_{S^{n−1}} ⟨u,v⟩₊ dv = ω_{n−1}, so W(segment)^{−n} = (nωₙ/ω_{n−1})ⁿ
    let omega = [1.0, 2.0, PI, 4.0 * PI / 3.0];
    let mut detail = Vec::new();
    let mut ok = true;
    for (n, closed) in [(2usize, PI * PI), (3, 64.0)] {
        let oracle = (n as f64 * omega[n] / omega[n - 1]).powi(n as i32);
        assert!((oracle - closed).abs() <= 1e-12 * closed);
        let c = mean_width_constant(n, 1, default_samples(n, 1), SEED).map_err(|e| e.to_string())?;
        let rel = (c.mean - oracle).abs() / oracle;
        ok &= rel <= QUAD_SLACK;
        detail.push(format!("n={n}: {:.8} (rel {rel:.1e})", c.mean));
    }
    let detail = detail.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn section_diagonal() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for i in 0..IDENTITY_PAIRS {
        let n = 2 + i % 2;
        let m = 2 + (i / 2) % (9 / n - 1);
        let k: ConvexBody = random_polytope(&mut rng, n).into();
        let u = Vector::from_vec(random_unit(&mut rng, n));
        let classic = k.gauge_classic(&u).map_err(|e| e.to_string())?;
        let block = rng.random_range(0..m);
        let section = k
            .gauge_m_order(&DirectionTuple::embedded(m, block, &u).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let diagonal = k
            .gauge_m_order(&DirectionTuple::diagonal(m, &u).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let scale = classic.max(1.0);
        worst = worst
            .max((section - classic).abs() / scale)
            .max((diagonal - classic / (m as f64).sqrt()).abs() / scale);
    }
    let detail = format!("{IDENTITY_PAIRS} pairs, worst relative error {worst:.1e}");
    if worst <= IDENTITY_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn variational() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for i in 0..VARIATIONAL_CASES {
        let (n, m) = [(2, 1), (2, 2), (3, 1), (3, 2)][i % 4];
        let k = random_polytope(&mut rng, n);
        let theta = DirectionTuple::new(n, m, random_unit(&mut rng, n * m)).map_err(|e| e.to_string())?;
        let g = ConvexBody::Polytope(k.clone())
            .gauge_m_order(&theta)
            .map_err(|e| e.to_string())?;
        let d = radial_derivative(&k, &theta, &DEFAULT_STEPS).map_err(|e| e.to_string())?;
        worst = worst.max((d.value + g).abs() / g);
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{VARIATIONAL_CASES} cases, worst relative error {worst:.1e}, {:.1} s",
        elapsed.as_secs_f64()
    );
    if worst <= VARIATIONAL_REL && elapsed < VARIATIONAL_BUDGET {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn affine() -> Outcome {
    let mut detail = Vec::new();
    for m in [1, 2] {
        let report = suite(Suite::AffineInvariance, 2, m);
        let count = all_pass(&report, |_| true).map_err(|e| format!("n=2, m={m}: {e}"))?;
        detail.push(format!("n=2, m={m}: {count} ratios"));
    }
    Ok(detail.join("; "))
}

fn af_pointwise() -> Outcome {
    let n = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut detail = Vec::new();
    let mut ok = true;
    for m in [1, 2] {
        let nm = (n * m) as f64;
        let (mut af, mut af_sq) = (f64::INFINITY, f64::INFINITY);
        for _ in 0..AF_TRIPLES {
            let bodies = [random_polytope(&mut rng, n), random_polytope(&mut rng, n)];
            let mixed = MixedGaugeEvaluator::new(&bodies, m).map_err(|e| e.to_string())?;
            let theta = DirectionTuple::new(n, m, random_unit(&mut rng, n * m)).map_err(|e| e.to_string())?;
            let g12 = mixed.eval_tuple(&theta).map_err(|e| e.to_string())?;
            let g1 = ConvexBody::Polytope(bodies[0].clone())
                .gauge_m_order(&theta)
                .map_err(|e| e.to_string())?;
            let g2 = ConvexBody::Polytope(bodies[1].clone())
                .gauge_m_order(&theta)
                .map_err(|e| e.to_string())?;
            af = af.min(1.0 - g1 * g2 / (g12 * g12));
            af_sq = af_sq.min(1.0 - (g1 * g2).powf(nm / 2.0) / g12.powf(nm));
        }
        ok &= af >= AF_SLACK && af_sq >= AF_SLACK;
        detail.push(format!("m={m}: min slack {af:.2e} / {af_sq:.2e}"));
    }
    let detail = detail.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn mixed_volume() -> Outcome {
    let cfg = SuiteConfig::new(Suite::Mixed, 3, 1)
        .with_bodies(&["cube", "tetrahedron"])
        .with_seed(SEED);
    let report = run_suite(cfg, &Catalog::builtin(), false).map_err(|e| e.to_string())?;
    let name = "mixed volume inequality";
    let strict = report.find(name, Some("cube+tetrahedron")).ok_or("pair missing")?;
    if strict.relation != Relation::Greater || strict.verdict != Verdict::Pass || !(num(strict.ci_lo) > 0.0) {
        return Err(format!(
            "cube+tetrahedron: {:?}, CI [{:.3e}, {:.3e}]",
            strict.verdict,
            num(strict.ci_lo),
            num(strict.ci_hi)
        ));
    }
    let mut detail = vec![format!(
        "cube+tetrahedron CI [{:.3e}, {:.3e}]",
        num(strict.ci_lo),
        num(strict.ci_hi)
    )];
    for label in ["cube+homothet", "tetrahedron+homothet"] {
        let c = report.find(name, Some(label)).ok_or("homothet missing")?;
        if c.relation != Relation::Equal || c.verdict != Verdict::Pass {
            return Err(format!("{label}: {:?}", c.verdict));
        }
        detail.push(format!("{label} equal"));
    }
    Ok(detail.join("; "))
}

fn stability() -> Outcome {
    let mut detail = Vec::new();
    for m in [1, 2] {
        let report = suite(Suite::Stability, 2, m);
        let count = all_pass(&report, |_| true).map_err(|e| format!("m={m}: {e}"))?;
        detail.push(format!("m={m}: {count} checks"));
        if m == 1 {
            let c = report
                .find("classical volume-ratio bound (exact functional)", Some("square"))
                .ok_or("square exact check missing")?;
            let target = PI / 4.0 * (PI / 2.0).powi(2);
            let (lhs, rhs) = (num(c.lhs), num(c.rhs));
            if lhs != 2.0 || c.sigma != 0.0 || !((rhs - target).abs() <= 1e-6) || c.verdict != Verdict::Pass {
                return Err(format!("square: {lhs} ≥ {rhs}"));
            }
            detail.push(format!("square {lhs} ≥ {rhs:.4}"));
        }
    }
    Ok(detail.join("; "))
}

fn john() -> Outcome {
    let vr = volume_ratio(&polytope("square", 2)).map_err(|e| e.to_string())?;
    let target = 2.0 / PI.sqrt();
    if (vr - target).abs() > JOHN_TOL {
        return Err(format!("vr(square) = {vr:.9}"));
    }
    let catalog = Catalog::builtin();
    let mut count = 0;
    for n in [2, 3] {
        for name in catalog.names_for(n, true) {
            let p = polytope(&name, n);
            let vr = volume_ratio(&p).map_err(|e| e.to_string())?;
            if !(vr >= 1.0 - JOHN_REL && vr <= n as f64 * (1.0 + JOHN_REL)) {
                return Err(format!("{name}: vr = {vr}"));
            }
            let (_, q) = john_position_transform(&p).map_err(|e| e.to_string())?;
            let (surface, bound) = ball_surface_bound_check(&q);
            if surface > bound * (1.0 + JOHN_REL) {
                return Err(format!("{name}: surface {surface} > {bound}"));
            }
            count += 1;
        }
    }
    let (_, cube) =
        john_position_transform(&shapes::symmetric_cube(3).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let (surface, bound) = ball_surface_bound_check(&cube);
    if (surface - bound).abs() > JOHN_REL * bound {
        return Err(format!("cube: surface {surface} vs {bound}"));
    }
    Ok(format!(
        "vr(square) = {vr:.9}; {count} bodies in range and bounded; cube {surface:.6} = {bound:.6}"
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |format: &str, tag: &str| -> Result<Vec<u8>, String> {
        let out = dir.path().join(format!("{tag}.{format}"));
        let status = Command::new(env!("CARGO_BIN_EXE_verify"))
            .args(["--suite", "petty-zhang,petty-isoperimetric", "--n", "2", "--m", "2"])
            .args([
                "--bodies",
                "square,triangle,ball",
                "--samples",
                "100000",
                "--seed",
                "42",
            ])
            .args(["--format", format, "--no-meta", "--out"])
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        if status.status.code() != Some(0) {
            return Err(format!(
                "exit {:?}: {}",
                status.status.code(),
                String::from_utf8_lossy(&status.stderr)
            ));
        }
        std::fs::read(&out).map_err(|e| e.to_string())
    };
    let mut detail = Vec::new();
    for format in ["json", "csv"] {
        let (a, b) = (run(format, "a")?, run(format, "b")?);
        if a != b {
            return Err(format!("{format} reports differ"));
        }
        detail.push(format!("{format} {} bytes identical", a.len()));
    }
    Ok(detail.join("; "))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("classical Petty constant, n=2, m=1", classical_petty),
        ("Zhang equality on simplices", zhang_simplices),
        ("mth-order sandwich, n=2, m=2", sandwich_m2),
        ("m=1 constant reduction", m1_constant),
        ("section and diagonal identities", section_diagonal),
        ("variational formula", variational),
        ("affine invariance", affine),
        ("pointwise AF-type gauge inequalities", af_pointwise),
        ("mixed volume inequality, n=3, m=1", mixed_volume),
        ("stability chain, n=2", stability),
        ("John solver and Ball's bound", john),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2}. {title} ({secs:.1} s): {detail}", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
