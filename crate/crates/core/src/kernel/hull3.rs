//! Spatial hulls by incremental insertion.
//!
//! Faces are kept as outward-oriented triangles. A point is inserted when it
//! lies more than `tol` beyond some face; the region removed is the connected
//! set of faces that the point does not lie strictly beneath, which keeps new
//! triangles nondegenerate when the input has coplanar or collinear points.
//! Coplanar triangles are merged into polygonal facets at the end.

use std::collections::HashMap;

use super::hull2::monotone_chain;
use super::vec3::{cross, dot, extent, loop_area, norm, normalize, plane_basis, sub, P2, P3};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct FacetLoop {
    pub normal: P3,
    pub offset: f64,
    pub area: f64,
    /// Indices into the hull's vertex list, counterclockwise seen from outside.
    pub verts: Vec<usize>,
}

#[derive(Clone, Debug)]
pub(crate) struct Hull3 {
    pub vertices: Vec<P3>,
    pub facets: Vec<FacetLoop>,
}

#[derive(Clone, Copy)]
struct Tri {
    v: [usize; 3],
    n: P3,
    off: f64,
    alive: bool,
}

impl Tri {
    fn new(v: [usize; 3], pts: &[P3]) -> Self {
        let n = normalize(cross(sub(pts[v[1]], pts[v[0]]), sub(pts[v[2]], pts[v[0]])));
        Tri {
            v,
            n,
            off: dot(n, pts[v[0]]),
            alive: true,
        }
    }

    #[inline]
    fn dist(&self, p: P3) -> f64 {
        dot(self.n, p) - self.off
    }

    fn edges(&self) -> [(usize, usize); 3] {
        [(self.v[0], self.v[1]), (self.v[1], self.v[2]), (self.v[2], self.v[0])]
    }
}

struct Mesh<'a> {
    pts: &'a [P3],
    tris: Vec<Tri>,
    edges: HashMap<(usize, usize), usize>,
}

impl<'a> Mesh<'a> {
    fn add(&mut self, v: [usize; 3]) {
        let id = self.tris.len();
        let t = Tri::new(v, self.pts);
        for e in t.edges() {
            self.edges.insert(e, id);
        }
        self.tris.push(t);
    }

    fn kill(&mut self, id: usize) {
        self.tris[id].alive = false;
        for e in self.tris[id].edges() {
            if self.edges.get(&e) == Some(&id) {
                self.edges.remove(&e);
            }
        }
    }

    fn neighbour(&self, e: (usize, usize)) -> Option<usize> {
        self.edges.get(&(e.1, e.0)).copied()
    }

    /// Faces to remove for inserting `p`, grown from `seed` while `keep(dist)`.
    fn region(&self, p: P3, seed: usize, keep: impl Fn(f64) -> bool) -> Vec<usize> {
        let mut inside = vec![false; self.tris.len()];
        let mut stack = vec![seed];
        let mut out = Vec::new();
        inside[seed] = true;
        while let Some(f) = stack.pop() {
            out.push(f);
            for e in self.tris[f].edges() {
                if let Some(g) = self.neighbour(e) {
                    if !inside[g] && keep(self.tris[g].dist(p)) {
                        inside[g] = true;
                        stack.push(g);
                    }
                }
            }
        }
        out
    }

    /// Boundary edges of `region`, or `None` when they do not form one cycle.
    fn horizon(&self, region: &[usize]) -> Option<Vec<(usize, usize)>> {
        let mut inside = vec![false; self.tris.len()];
        for &f in region {
            inside[f] = true;
        }
        let mut hz = Vec::new();
        for &f in region {
            for e in self.tris[f].edges() {
                match self.neighbour(e) {
                    Some(g) if inside[g] => {}
                    Some(_) => hz.push(e),
                    None => return None,
                }
            }
        }
        let mut next: HashMap<usize, usize> = HashMap::with_capacity(hz.len());
        for &(a, b) in &hz {
            if next.insert(a, b).is_some() {
                return None;
            }
        }
        // a single cycle visits every start vertex exactly once
        let start = hz.first()?.0;
        let mut cur = start;
        for _ in 0..hz.len() {
            cur = *next.get(&cur)?;
        }
        if cur != start {
            return None;
        }
        let mut seen = 1;
        let mut c = next[&start];
        while c != start {
            seen += 1;
            c = next[&c];
        }
        (seen == hz.len()).then_some(hz)
    }
}

/// Initial tetrahedron, or the affine rank of the input if it is degenerate.
fn initial_simplex(pts: &[P3], tol: f64) -> std::result::Result<[usize; 4], usize> {
    let far = |from: &dyn Fn(P3) -> f64| -> (usize, f64) {
        pts.iter()
            .enumerate()
            .map(|(i, &p)| (i, from(p)))
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
    };
    let i0 = (0..pts.len())
        .min_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]))
        .ok_or(0usize)?;
    let p0 = pts[i0];
    let (i1, d1) = far(&|p| norm(sub(p, p0)));
    if d1 <= tol {
        return Err(0);
    }
    let dir = normalize(sub(pts[i1], p0));
    let (i2, d2) = far(&|p| norm(cross(sub(p, p0), dir)));
    if d2 <= tol {
        return Err(1);
    }
    let n = normalize(cross(sub(pts[i1], p0), sub(pts[i2], p0)));
    let (i3, d3) = far(&|p| dot(sub(p, p0), n).abs());
    if d3 <= tol {
        return Err(2);
    }
    Ok([i0, i1, i2, i3])
}

pub(crate) fn hull3(pts: &[P3], tol_rel: f64) -> Result<Hull3> {
    let tol = tol_rel * extent(pts).max(f64::MIN_POSITIVE);
    let [a, b, c, d] = initial_simplex(pts, tol).map_err(|rank| Error::DegenerateInput { dim: 3, rank })?;
    let mut mesh = Mesh {
        pts,
        tris: Vec::new(),
        edges: HashMap::new(),
    };
    let below = dot(cross(sub(pts[b], pts[a]), sub(pts[c], pts[a])), sub(pts[d], pts[a])) < 0.0;
    let (b, c) = if below { (b, c) } else { (c, b) };
    mesh.add([a, b, c]);
    mesh.add([a, d, b]);
    mesh.add([b, d, c]);
    mesh.add([c, d, a]);

    let centre = [0, 1, 2].map(|k| (pts[a][k] + pts[b][k] + pts[c][k] + pts[d][k]) / 4.0);
    let mut order: Vec<usize> = (0..pts.len()).filter(|&i| ![a, b, c, d].contains(&i)).collect();
    // extreme points first so most interior points are rejected early
    order.sort_by(|&i, &j| norm(sub(pts[j], centre)).total_cmp(&norm(sub(pts[i], centre))));

    for &pi in &order {
        let p = pts[pi];
        let (seed, dmax) = mesh
            .tris
            .iter()
            .enumerate()
            .filter(|(_, t)| t.alive)
            .map(|(i, t)| (i, t.dist(p)))
            .fold((usize::MAX, f64::NEG_INFINITY), |x, y| if y.1 > x.1 { y } else { x });
        if dmax <= tol {
            continue;
        }
        let mut region = mesh.region(p, seed, |dist| dist > -tol);
        let mut hz = mesh.horizon(&region);
        if hz.is_none() {
            region = mesh.region(p, seed, |dist| dist > tol);
            hz = mesh.horizon(&region);
        }
        let Some(hz) = hz else {
            continue;
        };
        for f in region {
            mesh.kill(f);
        }
        for (u, v) in hz {
            mesh.add([u, v, pi]);
        }
    }
    Ok(merge_facets(&mesh, tol))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn merge_facets(mesh: &Mesh, tol: f64) -> Hull3 {
    let pts = mesh.pts;
    let n = mesh.tris.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for (i, t) in mesh.tris.iter().enumerate().filter(|(_, t)| t.alive) {
        for e in t.edges() {
            let Some(j) = mesh.neighbour(e) else { continue };
            let u = mesh.tris[j];
            let opp = u.v.iter().copied().find(|&x| x != e.0 && x != e.1).unwrap();
            let own = t.v.iter().copied().find(|&x| x != e.0 && x != e.1).unwrap();
            if dot(t.n, u.n) > 0.0 && t.dist(pts[opp]).abs() <= tol && u.dist(pts[own]).abs() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in (0..n).filter(|&i| mesh.tris[i].alive) {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut keys: Vec<usize> = groups.keys().copied().collect();
    keys.sort_unstable();

    let mut remap: HashMap<usize, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut facets = Vec::new();
    for k in keys {
        let tris = &groups[&k];
        let mut nsum = [0.0; 3];
        let mut ids: Vec<usize> = Vec::new();
        for &t in tris {
            let tri = &mesh.tris[t];
            let w = 0.5
                * norm(cross(
                    sub(pts[tri.v[1]], pts[tri.v[0]]),
                    sub(pts[tri.v[2]], pts[tri.v[0]]),
                ));
            for q in 0..3 {
                nsum[q] += w * tri.n[q];
            }
            ids.extend_from_slice(&tri.v);
        }
        ids.sort_unstable();
        ids.dedup();
        let normal = normalize(nsum);
        let (u, v) = plane_basis(normal);
        let flat: Vec<P2> = ids.iter().map(|&i| [dot(pts[i], u), dot(pts[i], v)]).collect();
        let chain = monotone_chain(&flat, tol);
        if chain.len() < 3 {
            continue;
        }
        let ring: Vec<P2> = chain.iter().map(|&c| flat[c]).collect();
        let area = loop_area(&ring);
        if area <= tol * tol {
            continue;
        }
        let offset = chain.iter().map(|&c| dot(normal, pts[ids[c]])).sum::<f64>() / chain.len() as f64;
        let verts = chain
            .iter()
            .map(|&c| {
                let g = ids[c];
                *remap.entry(g).or_insert_with(|| {
                    vertices.push(pts[g]);
                    vertices.len() - 1
                })
            })
            .collect();
        facets.push(FacetLoop {
            normal,
            offset,
            area,
            verts,
        });
    }
    Hull3 { vertices, facets }
}
