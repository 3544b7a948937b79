//! Convex clipping by halfspaces `⟨a, x⟩ ≤ b`.
//!
//! A planar body is one counterclockwise loop; a spatial body is a list of
//! outward-oriented face loops. Each cut runs Sutherland–Hodgman on every loop
//! and closes the hole with a cap polygon lying in the cutting plane.

use super::hull2::monotone_chain;
use super::vec3::{add, cross, dot, loop_area, normalize, plane_basis, scale, sub, P2, P3};

#[derive(Clone, Debug)]
pub(crate) struct Clip2 {
    pub ring: Vec<P2>,
}

impl Clip2 {
    pub fn cut(&mut self, a: P2, b: f64, tol: f64) {
        let k = self.ring.len();
        if k == 0 {
            return;
        }
        let d: Vec<f64> = self.ring.iter().map(|p| a[0] * p[0] + a[1] * p[1] - b).collect();
        if d.iter().all(|&x| x <= tol) {
            return;
        }
        let mut out = Vec::with_capacity(k + 1);
        for i in 0..k {
            let j = (i + 1) % k;
            let (p, q) = (self.ring[i], self.ring[j]);
            let (dp, dq) = (d[i], d[j]);
            if dp <= tol {
                out.push(p);
            }
            if (dp < -tol && dq > tol) || (dp > tol && dq < -tol) {
                let t = dp / (dp - dq);
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
        self.ring = if out.len() >= 3 { out } else { Vec::new() };
    }

    pub fn area(&self) -> f64 {
        if self.ring.len() < 3 {
            0.0
        } else {
            loop_area(&self.ring).max(0.0)
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Clip3 {
    pub faces: Vec<Vec<P3>>,
}

impl Clip3 {
    pub fn cut(&mut self, a: P3, b: f64, tol: f64) {
        let mut cap: Vec<P3> = Vec::new();
        let mut any_out = false;
        let mut faces = Vec::with_capacity(self.faces.len() + 1);
        for face in &self.faces {
            let d: Vec<f64> = face.iter().map(|&p| dot(a, p) - b).collect();
            if d.iter().all(|&x| x <= tol) {
                cap.extend(face.iter().zip(&d).filter(|(_, &x)| x.abs() <= tol).map(|(p, _)| *p));
                faces.push(face.clone());
                continue;
            }
            any_out = true;
            let k = face.len();
            let mut out = Vec::with_capacity(k + 1);
            for i in 0..k {
                let j = (i + 1) % k;
                let (p, q) = (face[i], face[j]);
                let (dp, dq) = (d[i], d[j]);
                if dp <= tol {
                    out.push(p);
                    if dp.abs() <= tol {
                        cap.push(p);
                    }
                }
                if (dp < -tol && dq > tol) || (dp > tol && dq < -tol) {
                    let t = dp / (dp - dq);
                    let x = add(p, scale(sub(q, p), t));
                    out.push(x);
                    cap.push(x);
                }
            }
            if out.len() >= 3 {
                faces.push(out);
            }
        }
        if !any_out {
            return;
        }
        let nrm = normalize(a);
        let (u, v) = plane_basis(nrm);
        let flat: Vec<P2> = cap.iter().map(|&p| [dot(p, u), dot(p, v)]).collect();
        let chain = monotone_chain(&flat, tol);
        if chain.len() >= 3 {
            faces.push(chain.iter().map(|&i| cap[i]).collect());
        }
        self.faces = if faces.len() >= 4 { faces } else { Vec::new() };
    }

    /// Signed-tetrahedron volume of the closed surface.
    pub fn volume(&self) -> f64 {
        let Some(o) = self.faces.first().and_then(|f| f.first()).copied() else {
            return 0.0;
        };
        let mut v = 0.0;
        for f in &self.faces {
            for i in 1..f.len().saturating_sub(1) {
                v += dot(sub(f[0], o), cross(sub(f[i], o), sub(f[i + 1], o)));
            }
        }
        (v / 6.0).max(0.0)
    }

    pub fn points(&self) -> Vec<P3> {
        self.faces.iter().flatten().copied().collect()
    }
}
