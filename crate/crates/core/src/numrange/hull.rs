//! Planar convex hulls and distance queries on complex points.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Points closer than this to a common line are treated as collinear.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HullShape {
    Empty,
    Point,
    Segment,
    Polygon,
}

#[inline]
fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Counter-clockwise convex hull (Andrew's monotone chain). Collinear and
/// duplicate points are dropped, so consecutive edges turn strictly left.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.iter().copied().filter(|p| p.re.is_finite() && p.im.is_finite()).collect();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Classifies a point cloud: all points within [`DEGENERACY_TOL`] of one
/// point, of one line, or neither.
pub fn classify(points: &[Complex64]) -> HullShape {
    let Some(&p0) = points.first() else {
        return HullShape::Empty;
    };
    let far = points.iter().copied().max_by(|a, b| (a - p0).norm().total_cmp(&(b - p0).norm())).unwrap();
    if (far - p0).norm() <= DEGENERACY_TOL {
        return HullShape::Point;
    }
    let far2 = points.iter().copied().max_by(|a, b| (a - far).norm().total_cmp(&(b - far).norm())).unwrap();
    let dir = (far2 - far) / (far2 - far).norm();
    let off_line = points
        .iter()
        .map(|p| ((p - far) * dir.conj()).im.abs())
        .fold(0.0, f64::max);
    if off_line <= DEGENERACY_TOL {
        HullShape::Segment
    } else {
        HullShape::Polygon
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Minimum over edges of the signed distance from `p` to the edge's line,
/// positive inside a counter-clockwise convex polygon. For interior points
/// this is the distance to the boundary.
pub fn signed_edge_distance(hull: &[Complex64], p: Complex64) -> f64 {
    let n = hull.len();
    if n < 3 {
        return f64::NEG_INFINITY;
    }
    (0..n)
        .map(|i| {
            let a = hull[i];
            let b = hull[(i + 1) % n];
            cross(a, b, p) / (b - a).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Euclidean distance from `p` to the boundary of the polygon (or to the
/// point/segment when the hull is degenerate).
pub fn boundary_distance(hull: &[Complex64], p: Complex64) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (p - hull[0]).norm(),
        n => (0..n)
            .map(|i| segment_distance(p, hull[i], hull[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Signed distance to the boundary: positive inside, negative outside.
pub fn signed_distance(hull: &[Complex64], p: Complex64) -> f64 {
    let d = boundary_distance(hull, p);
    if hull.len() >= 3 && signed_edge_distance(hull, p) >= 0.0 {
        d
    } else {
        -d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use proptest::prelude::*;

    #[test]
    fn square_with_interior_and_collinear_points() {
        let pts = [
            c64(0.0, 0.0),
            c64(1.0, 0.0),
            c64(1.0, 1.0),
            c64(0.0, 1.0),
            c64(0.5, 0.5),
            c64(0.5, 0.0),
            c64(1.0, 1.0),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h, vec![c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 1.0), c64(0.0, 1.0)]);
        assert!((signed_edge_distance(&h, c64(0.5, 0.5)) - 0.5).abs() < 1e-15);
        assert!((signed_distance(&h, c64(0.5, 0.25)) - 0.25).abs() < 1e-15);
        assert!((signed_distance(&h, c64(2.0, 0.5)) + 1.0).abs() < 1e-15);
        assert!(signed_edge_distance(&h, c64(-0.1, 0.5)) < 0.0);
    }

    #[test]
    fn degenerate_clouds() {
        assert_eq!(classify(&[]), HullShape::Empty);
        assert_eq!(classify(&[c64(1.0, 0.0); 5]), HullShape::Point);
        let seg: Vec<_> = (0..10).map(|k| c64(0.1 * k as f64, 0.2 * k as f64)).collect();
        assert_eq!(classify(&seg), HullShape::Segment);
        assert_eq!(convex_hull(&seg).len(), 2);
        assert_eq!(classify(&[c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 1e-6)]), HullShape::Polygon);
    }

    #[test]
    fn segment_distance_cases() {
        let (a, b) = (c64(0.0, 0.0), c64(2.0, 0.0));
        assert_eq!(segment_distance(c64(1.0, 3.0), a, b), 3.0);
        assert_eq!(segment_distance(c64(-3.0, 4.0), a, b), 5.0);
        assert_eq!(segment_distance(c64(1.0, 1.0), a, a), 2f64.sqrt());
    }

    proptest! {
        #[test]
        fn hull_is_convex_and_contains_inputs(pts in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3..60)) {
            let pts: Vec<Complex64> = pts.into_iter().map(|(a, b)| c64(a, b)).collect();
            let h = convex_hull(&pts);
            if h.len() >= 3 {
                for i in 0..h.len() {
                    prop_assert!(cross(h[i], h[(i + 1) % h.len()], h[(i + 2) % h.len()]) > 0.0);
                }
                for p in &pts {
                    prop_assert!(signed_edge_distance(&h, *p) >= -1e-12);
                }
            }
        }
    }
}
