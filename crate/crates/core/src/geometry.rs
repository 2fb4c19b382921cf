//! Planar polygon routines and brute-force facet enumeration for small
//! dimensions.

use crate::linalg::{null_vector, solve_square};

pub type Point2 = [f64; 2];

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex hull by monotone chain, counterclockwise, collinear points dropped.
pub fn convex_hull(points: &[Point2], tol: f64) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= tol && (a[1] - b[1]).abs() <= tol);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Keeps the part of a convex polygon with `normal . p <= offset`.
pub fn clip_polygon(poly: &[Point2], normal: Point2, offset: f64) -> Vec<Point2> {
    let side = |p: &Point2| normal[0] * p[0] + normal[1] * p[1] - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let cur = poly[i];
        let next = poly[(i + 1) % poly.len()];
        let (sc, sn) = (side(&cur), side(&next));
        if sc <= 0.0 {
            out.push(cur);
        }
        if (sc < 0.0 && sn > 0.0) || (sc > 0.0 && sn < 0.0) {
            let t = sc / (sc - sn);
            out.push([cur[0] + t * (next[0] - cur[0]), cur[1] + t * (next[1] - cur[1])]);
        }
    }
    out
}

/// Removes consecutive duplicates and collinear vertices.
pub fn simplify_polygon(poly: &[Point2], tol: f64) -> Vec<Point2> {
    let mut pts: Vec<Point2> = Vec::with_capacity(poly.len());
    for &p in poly {
        if pts
            .last()
            .map_or(true, |q: &Point2| (p[0] - q[0]).hypot(p[1] - q[1]) > tol)
        {
            pts.push(p);
        }
    }
    while pts.len() > 1 {
        let (a, b) = (pts[0], pts[pts.len() - 1]);
        if (a[0] - b[0]).hypot(a[1] - b[1]) <= tol {
            pts.pop();
        } else {
            break;
        }
    }
    let mut changed = true;
    while changed && pts.len() >= 3 {
        changed = false;
        for i in 0..pts.len() {
            let prev = pts[(i + pts.len() - 1) % pts.len()];
            let next = pts[(i + 1) % pts.len()];
            let len = (next[0] - prev[0]).hypot(next[1] - prev[1]);
            if cross(prev, pts[i], next).abs() <= tol * len.max(1.0) {
                pts.remove(i);
                changed = true;
                break;
            }
        }
    }
    pts
}

/// Intersection of half-planes `normal . p <= offset`, starting from a box of
/// half-width `bound`. Returns `None` if the result touches the box.
pub fn intersect_halfplanes(planes: &[(Point2, f64)], bound: f64) -> Option<Vec<Point2>> {
    let mut poly = vec![
        [-bound, -bound],
        [bound, -bound],
        [bound, bound],
        [-bound, bound],
    ];
    for &(n, k) in planes {
        poly = clip_polygon(&poly, n, k);
        if poly.is_empty() {
            return Some(poly);
        }
    }
    let touches = poly
        .iter()
        .any(|p| p[0].abs() >= bound * (1.0 - 1e-12) || p[1].abs() >= bound * (1.0 - 1e-12));
    (!touches).then_some(poly)
}

pub fn polygon_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
}

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

/// Distance from a point to a counterclockwise convex polygon (zero inside).
pub fn distance_to_polygon(p: Point2, poly: &[Point2]) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => (p[0] - poly[0][0]).hypot(p[1] - poly[0][1]),
        n => {
            let inside = n >= 3 && (0..n).all(|i| cross(poly[i], poly[(i + 1) % n], p) >= 0.0);
            if inside {
                return 0.0;
            }
            (0..n)
                .map(|i| segment_distance(p, poly[i], poly[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

/// Hausdorff distance between convex polygons (attained at vertices).
pub fn hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    let ab = a
        .iter()
        .map(|&p| distance_to_polygon(p, b))
        .fold(0.0, f64::max);
    let ba = b
        .iter()
        .map(|&p| distance_to_polygon(p, a))
        .fold(0.0, f64::max);
    ab.max(ba)
}

/// Outward edge normals (unit) and offsets of a counterclockwise polygon.
pub fn edge_halfplanes(poly: &[Point2]) -> Vec<(Point2, f64)> {
    let n = poly.len();
    (0..n)
        .filter_map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let nrm = [b[1] - a[1], a[0] - b[0]];
            let len = nrm[0].hypot(nrm[1]);
            (len > 0.0).then(|| {
                let u = [nrm[0] / len, nrm[1] / len];
                (u, u[0] * a[0] + u[1] * a[1])
            })
        })
        .collect()
}

pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = idx.clone();
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in (i + 1)..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Facets `a . x <= b` (unit `a`) of the convex hull of full-dimensional
/// points, by testing every hyperplane through `dim` of them.
pub fn facets(points: &[Vec<f64>], tol: f64) -> Vec<(Vec<f64>, f64)> {
    let Some(dim) = points.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut out: Vec<(Vec<f64>, f64)> = Vec::new();
    for combo in combinations(points.len(), dim) {
        // a . x - b = 0 for each chosen point: rows [x, -1]
        let rows: Vec<Vec<f64>> = combo
            .iter()
            .map(|&i| {
                let mut r = points[i].clone();
                r.push(-1.0);
                r
            })
            .collect();
        let Some(v) = null_vector(&rows, 1e-12) else {
            continue;
        };
        let (mut a, mut b) = (v[..dim].to_vec(), v[dim]);
        let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= 1e-12 {
            continue;
        }
        a.iter_mut().for_each(|x| *x /= norm);
        b /= norm;
        let sides: Vec<f64> = points
            .iter()
            .map(|p| p.iter().zip(&a).map(|(x, y)| x * y).sum::<f64>() - b)
            .collect();
        let above = sides.iter().any(|&s| s > tol);
        let below = sides.iter().any(|&s| s < -tol);
        if above && below {
            continue;
        }
        if above {
            a.iter_mut().for_each(|x| *x = -*x);
            b = -b;
        }
        let dup = out.iter().any(|(oa, ob)| {
            (ob - b).abs() <= 1e-9 && oa.iter().zip(&a).all(|(x, y)| (x - y).abs() <= 1e-9)
        });
        if !dup {
            out.push((a, b));
        }
    }
    out
}

/// Vertices of `{x : a . x <= b}` for a bounded system, by brute force.
pub fn vertices_of(constraints: &[(Vec<f64>, f64)], dim: usize, tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for combo in combinations(constraints.len(), dim) {
        let a: Vec<Vec<f64>> = combo.iter().map(|&i| constraints[i].0.clone()).collect();
        let b: Vec<f64> = combo.iter().map(|&i| constraints[i].1).collect();
        let Some(x) = solve_square(&a, &b, 1e-12) else {
            continue;
        };
        let feasible = constraints
            .iter()
            .all(|(ai, bi)| ai.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= bi + tol);
        if feasible && !out.iter().any(|v| v.iter().zip(&x).all(|(p, q)| (p - q).abs() <= tol)) {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_square_with_interior_point() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5], [0.5, 0.0]];
        let h = convex_hull(&pts, 1e-12);
        assert_eq!(h.len(), 4);
        assert!((polygon_area(&h) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clip_and_halfplanes() {
        let sq = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        let c = clip_polygon(&sq, [1.0, 1.0], 2.0);
        assert!((polygon_area(&c) - 2.0).abs() < 1e-12);
        let planes = edge_halfplanes(&sq);
        let back = intersect_halfplanes(&planes, 100.0).unwrap();
        assert!(hausdorff(&simplify_polygon(&back, 1e-12), &sq) < 1e-12);
        assert!(intersect_halfplanes(&planes[..2], 100.0).is_none());
    }

    #[test]
    fn distances() {
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert_eq!(distance_to_polygon([0.5, 0.5], &sq), 0.0);
        assert!((distance_to_polygon([2.0, 0.5], &sq) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).count(), 10);
        assert_eq!(combinations(3, 3).count(), 1);
        assert_eq!(combinations(2, 3).count(), 0);
    }

    #[test]
    fn cube_facets_and_vertices() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        let f = facets(&pts, 1e-9);
        assert_eq!(f.len(), 6);
        let v = vertices_of(&f, 3, 1e-9);
        assert_eq!(v.len(), 8);
    }
}
