//! Incremental convex hull in ℝ³.

use nalgebra::Vector3;

use crate::{Error, Result};

fn orient(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>, p: &Vector3<f64>) -> f64 {
    (b - a).cross(&(c - a)).dot(&(p - a))
}

/// Hull of `points` as outward-oriented triangles over the input indices.
/// Points on the hull boundary but not at a corner (coplanar with a face)
/// are not made vertices.
pub fn convex_hull(points: &[Vector3<f64>]) -> Result<Vec<[usize; 3]>> {
    if points.len() < 4 {
        return Err(Error::DegenerateHull(format!("need at least 4 points, got {}", points.len())));
    }
    if points.iter().any(|p| !p.iter().all(|v| v.is_finite())) {
        return Err(Error::DegenerateHull("non-finite coordinate".into()));
    }
    let lo = points.iter().fold(Vector3::repeat(f64::INFINITY), |a, p| a.inf(p));
    let hi = points.iter().fold(Vector3::repeat(f64::NEG_INFINITY), |a, p| a.sup(p));
    let scale = (hi - lo).norm();
    if scale == 0.0 {
        return Err(Error::DegenerateHull("all points coincide".into()));
    }
    let eps = 1e-12 * scale.powi(3);

    // Initial simplex from extreme points.
    let i0 = 0;
    let i1 = (0..points.len()).max_by(|&a, &b| (points[a] - points[i0]).norm().total_cmp(&(points[b] - points[i0]).norm())).expect("nonempty");
    let line = points[i1] - points[i0];
    let dist_line = |p: &Vector3<f64>| (p - points[i0]).cross(&line).norm();
    let i2 = (0..points.len()).max_by(|&a, &b| dist_line(&points[a]).total_cmp(&dist_line(&points[b]))).expect("nonempty");
    if dist_line(&points[i2]) <= 1e-12 * scale * scale {
        return Err(Error::DegenerateHull("points are collinear".into()));
    }
    let vol = |p: &Vector3<f64>| orient(&points[i0], &points[i1], &points[i2], p);
    let i3 = (0..points.len()).max_by(|&a, &b| vol(&points[a]).abs().total_cmp(&vol(&points[b]).abs())).expect("nonempty");
    if vol(&points[i3]).abs() <= eps {
        return Err(Error::DegenerateHull("points are coplanar".into()));
    }

    let mut faces: Vec<[usize; 3]> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let add = |f: [usize; 3], faces: &mut Vec<[usize; 3]>, alive: &mut Vec<bool>| {
        faces.push(f);
        alive.push(true);
    };
    let inner = (points[i0] + points[i1] + points[i2] + points[i3]) / 4.0;
    for f in [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]] {
        let f = if orient(&points[f[0]], &points[f[1]], &points[f[2]], &inner) > 0.0 { [f[0], f[2], f[1]] } else { f };
        add(f, &mut faces, &mut alive);
    }

    for (pi, p) in points.iter().enumerate() {
        if [i0, i1, i2, i3].contains(&pi) {
            continue;
        }
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&k| alive[k] && orient(&points[faces[k][0]], &points[faces[k][1]], &points[faces[k][2]], p) > eps)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &k in &visible {
            let f = faces[k];
            edges.extend([(f[0], f[1]), (f[1], f[2]), (f[2], f[0])]);
            alive[k] = false;
        }
        let horizon: Vec<(usize, usize)> = edges.iter().copied().filter(|&(a, b)| !edges.contains(&(b, a))).collect();
        for (a, b) in horizon {
            add([a, b, pi], &mut faces, &mut alive);
        }
    }
    Ok(faces.into_iter().zip(alive).filter(|(_, a)| *a).map(|(f, _)| f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_hull_has_twelve_triangles() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(Vector3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64));
        }
        pts.push(Vector3::new(0.5, 0.5, 0.5));
        pts.push(Vector3::new(0.5, 0.5, 1.0));
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.len(), 12);
        assert!(hull.iter().all(|f| f.iter().all(|&v| v < 8)));
    }

    #[test]
    fn rejects_coplanar() {
        let pts: Vec<_> = (0..5).map(|i| Vector3::new(i as f64, (i * i) as f64, 0.0)).collect();
        assert!(matches!(convex_hull(&pts), Err(Error::DegenerateHull(_))));
    }
}
