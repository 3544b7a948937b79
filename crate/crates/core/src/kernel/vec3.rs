//! Fixed-size helpers used by the hull and clipping code.

pub(crate) type P3 = [f64; 3];
pub(crate) type P2 = [f64; 2];

#[inline]
pub(crate) fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub(crate) fn add(a: P3, b: P3) -> P3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub(crate) fn scale(a: P3, s: f64) -> P3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub(crate) fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn cross(a: P3, b: P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub(crate) fn norm(a: P3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn normalize(a: P3) -> P3 {
    let l = norm(a);
    [a[0] / l, a[1] / l, a[2] / l]
}

#[inline]
pub(crate) fn cross2(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

#[inline]
pub(crate) fn dist2(a: P2, b: P2) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Orthonormal `(u, v)` with `(u, v, n)` right-handed, for unit `n`.
pub(crate) fn plane_basis(n: P3) -> (P3, P3) {
    let ax = n
        .iter()
        .map(|c| c.abs())
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, c)| if c < acc.1 { (i, c) } else { acc });
    let mut e = [0.0; 3];
    e[ax.0] = 1.0;
    let u = normalize(cross(e, n));
    let v = cross(n, u);
    (u, v)
}

/// Largest coordinate extent of a point cloud (at least `f64::MIN_POSITIVE`).
pub(crate) fn extent(pts: &[P3]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in pts {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (0..3).map(|k| hi[k] - lo[k]).fold(f64::MIN_POSITIVE, f64::max)
}

/// Shoelace area of a closed loop.
pub(crate) fn loop_area(pts: &[P2]) -> f64 {
    let k = pts.len();
    let mut s = 0.0;
    for i in 0..k {
        let a = pts[i];
        let b = pts[(i + 1) % k];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}
