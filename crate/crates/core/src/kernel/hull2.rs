//! Planar hulls by Andrew's monotone chain.

use super::vec3::{cross2, dist2, P2};

/// Indices of the strict hull vertices in counterclockwise order.
///
/// Points within `tol` of the line through their neighbours are dropped, so
/// the result has no collinear triples. May return fewer than three indices
/// for degenerate input.
pub(crate) fn monotone_chain(pts: &[P2], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]).then(pts[a][1].total_cmp(&pts[b][1])));
    if idx.len() < 3 {
        idx.dedup_by(|a, b| dist2(pts[*a], pts[*b]) <= tol);
        return idx;
    }
    let keep = |chain: &Vec<usize>, c: usize| -> bool {
        let k = chain.len();
        let o = pts[chain[k - 2]];
        let a = pts[chain[k - 1]];
        let b = pts[c];
        let base = dist2(o, b);
        cross2(o, a, b) > tol * base
    };
    let mut lower: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in &idx {
        while lower.len() >= 2 && !keep(&lower, i) {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && !keep(&upper, i) {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // a fully collinear input folds back onto itself
    if lower.len() == 2 && dist2(pts[lower[0]], pts[lower[1]]) <= tol {
        lower.pop();
    }
    lower
}
