//! Numerical ranges by the rotation method.
//!
//! For each angle `θ` the top eigenvector `v` of `Re(e^{iθ} A)` gives the
//! boundary point `⟨A v, v⟩` of `W(A)` whose outward normal is `e^{−iθ}`.
//! The convex hull of these points is an inner approximation of `W(A)`.

pub mod eigen;
pub mod hull;
pub mod regions;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use eigen::{hermitian_eigen, hermitian_top_eigenpair, HermitianEigen};
pub use hull::HullShape;
pub use regions::*;

use crate::error::{domain, Error, Result};
use crate::linalg::{vec_norm, CMatrix};

/// Minimum number of sweep angles.
pub const MIN_ANGLES: usize = 16;
/// Default angle count for interactive use.
pub const DEFAULT_ANGLES: usize = 720;
/// Top-two eigenvalue gap below which the eigenspace is treated as
/// two-dimensional and a flat boundary segment is recorded.
pub const FLAT_GAP: f64 = 1e-10;
/// Default containment margin.
pub const DEFAULT_MARGIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub theta: f64,
    pub point: Complex64,
}

/// Boundary samples of a numerical range and their convex hull
/// (counter-clockwise).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub points: Vec<BoundaryPoint>,
    pub hull: Vec<Complex64>,
    pub shape: HullShape,
}

impl BoundaryCurve {
    pub fn from_points(points: Vec<BoundaryPoint>) -> Self {
        let raw: Vec<Complex64> = points.iter().map(|b| b.point).collect();
        let shape = hull::classify(&raw);
        let hull = match shape {
            HullShape::Empty => Vec::new(),
            HullShape::Point => vec![raw[0]],
            HullShape::Segment => segment_ends(&raw).to_vec(),
            HullShape::Polygon => hull::convex_hull(&raw),
        };
        Self { points, hull, shape }
    }

    /// `max |p|` over the hull vertices.
    pub fn max_modulus(&self) -> f64 {
        self.hull.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Distance from `p` to the hull boundary, signed positive inside.
    pub fn signed_distance(&self, p: Complex64) -> f64 {
        hull::signed_distance(&self.hull, p)
    }
}

fn segment_ends(points: &[Complex64]) -> [Complex64; 2] {
    let p0 = points[0];
    let far = |from: Complex64| {
        points.iter().copied().max_by(|a, b| (a - from).norm().total_cmp(&(b - from).norm())).unwrap()
    };
    let a = far(p0);
    [a, far(a)]
}

/// Support data at one angle.
#[derive(Debug, Clone)]
struct Support {
    theta: f64,
    /// `max Re(e^{iθ} w)` over `w ∈ W(A)`.
    lambda: f64,
    points: Vec<Complex64>,
}

fn support(a: &CMatrix, theta: f64) -> Result<Support> {
    let h = a.rotated_hermitian_part(theta);
    let top = eigen::top_eigenpairs(&h, 2)?;
    let (lambda, v1) = &top[0];
    let mut points = vec![a.quadratic_form(v1)?];
    if let Some((l2, v2)) = top.get(1) {
        if lambda - l2 < FLAT_GAP {
            points.push(a.quadratic_form(v2)?);
            let mut mid: Vec<Complex64> = v1.iter().zip(v2).map(|(x, y)| x + y).collect();
            let nrm = vec_norm(&mid);
            if nrm > 0.0 {
                mid.iter_mut().for_each(|x| *x /= nrm);
                points.push(a.quadratic_form(&mid)?);
            }
            points.extend(flat_segment_ends(a, theta, v1, v2)?);
        }
    }
    Ok(Support { theta, lambda: *lambda, points })
}

/// Endpoints of the flat piece of the boundary seen from angle `θ` when the
/// top eigenspace is spanned by `v1, v2`: the extreme eigenvectors of
/// `Im(e^{iθ} B)` for the 2×2 compression `B` of `A` to that span.
fn flat_segment_ends(a: &CMatrix, theta: f64, v1: &[Complex64], v2: &[Complex64]) -> Result<[Complex64; 2]> {
    let basis = [v1, v2];
    let rot = Complex64::from_polar(1.0, theta);
    let av: Vec<Vec<Complex64>> = basis.iter().map(|v| a.matvec(v)).collect::<Result<_>>()?;
    let b = CMatrix::from_fn(2, 2, |i, j| crate::linalg::dot(basis[i], &av[j]));
    let im = CMatrix::from_fn(2, 2, |i, j| {
        let v = (rot * b[(i, j)] - (rot * b[(j, i)]).conj()) / Complex64::new(0.0, 2.0);
        if i == j { Complex64::new(v.re, 0.0) } else { v }
    });
    let eig = hermitian_eigen(&im)?;
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (slot, col) in out.iter_mut().zip([0, 1]) {
        let x = eig.vectors.column(col);
        let u: Vec<Complex64> = (0..v1.len()).map(|k| x[0] * v1[k] + x[1] * v2[k]).collect();
        *slot = a.quadratic_form(&u)?;
    }
    Ok(out)
}

fn check_sweep_input(a: &CMatrix, m: usize) -> Result<()> {
    if m < MIN_ANGLES {
        return domain(format!("angle count must be at least {MIN_ANGLES}, got {m}"));
    }
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Shape(format!("numerical range needs a nonempty square matrix, got {}x{}", a.rows(), a.cols())));
    }
    Ok(())
}

fn supports(a: &CMatrix, thetas: &[f64]) -> Result<Vec<Support>> {
    thetas.par_iter().map(|&t| support(a, t)).collect()
}

fn into_curve(sup: Vec<Support>) -> BoundaryCurve {
    let points = sup
        .into_iter()
        .flat_map(|s| {
            let theta = s.theta;
            s.points.into_iter().map(move |point| BoundaryPoint { theta, point })
        })
        .collect();
    BoundaryCurve::from_points(points)
}

/// Rotation sweep at the uniform angles `θ_k = 2πk/M`.
pub fn boundary_sweep(a: &CMatrix, m: usize) -> Result<BoundaryCurve> {
    check_sweep_input(a, m)?;
    let thetas: Vec<f64> = (0..m).map(|k| TAU * k as f64 / m as f64).collect();
    Ok(into_curve(supports(a, &thetas)?))
}

/// Intersection of the support lines at two angles.
fn support_corner(a: &Support, b: &Support) -> Option<Complex64> {
    let det = (a.theta - b.theta).sin();
    if det.abs() < 1e-14 {
        return None;
    }
    let (sa, ca) = a.theta.sin_cos();
    let (sb, cb) = b.theta.sin_cos();
    let x = (b.lambda * sa - a.lambda * sb) / det;
    let y = (ca * b.lambda - cb * a.lambda) / det;
    Some(Complex64::new(x, y))
}

/// Upper bound for the distance between the true boundary arc joining the
/// two support points and the chord between them.
fn arc_gap(a: &Support, b: &Support) -> f64 {
    let Some(q) = support_corner(a, b) else {
        return 0.0;
    };
    let nearest = |s: &Support| {
        s.points.iter().copied().min_by(|x, y| (x - q).norm().total_cmp(&(y - q).norm())).unwrap()
    };
    hull::segment_distance(q, nearest(a), nearest(b))
}

/// Rotation sweep starting from `M` uniform angles and bisecting every
/// angular interval whose outer support corner lies farther than `tol` from
/// the chord, so the hull is within `tol` of `W(A)` everywhere.
pub fn boundary_sweep_refined(a: &CMatrix, m: usize, tol: f64) -> Result<BoundaryCurve> {
    const MAX_ROUNDS: usize = 40;
    check_sweep_input(a, m)?;
    if !(tol > 0.0) {
        return domain("refinement tolerance must be positive");
    }
    let thetas: Vec<f64> = (0..m).map(|k| TAU * k as f64 / m as f64).collect();
    let mut sup = supports(a, &thetas)?;
    for _ in 0..MAX_ROUNDS {
        let n = sup.len();
        let mut new_thetas = Vec::new();
        for i in 0..n {
            let cur = &sup[i];
            let mut next = sup[(i + 1) % n].clone();
            if i + 1 == n {
                next.theta += TAU;
            }
            if next.theta - cur.theta > 1e-12 && arc_gap(cur, &next) > tol {
                new_thetas.push(0.5 * (cur.theta + next.theta) % TAU);
            }
        }
        if new_thetas.is_empty() {
            break;
        }
        sup.extend(supports(a, &new_thetas)?);
        sup.sort_by(|x, y| x.theta.total_cmp(&y.theta));
    }
    Ok(into_curve(sup))
}

/// Largest modulus of the sweep hull: a lower bound for the numerical
/// radius that converges as `M` grows.
pub fn numerical_radius(a: &CMatrix, m: usize) -> Result<f64> {
    Ok(boundary_sweep(a, m)?.max_modulus())
}

/// Outcome of a point-in-range query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    /// Whether the point is interior with at least the requested margin.
    pub inside: bool,
    /// Signed distance to the hull boundary (positive inside).
    pub depth: f64,
    /// Degenerate hulls have empty interior.
    pub shape: HullShape,
}

impl Containment {
    pub fn degenerate(&self) -> bool {
        self.shape != HullShape::Polygon
    }
}

/// Whether `p` lies inside the hull with distance at least `margin` to
/// every edge.
pub fn contains_point(curve: &BoundaryCurve, p: Complex64, margin: f64) -> Containment {
    if curve.shape != HullShape::Polygon {
        return Containment { inside: false, depth: -hull::boundary_distance(&curve.hull, p), shape: curve.shape };
    }
    let depth = curve.signed_distance(p);
    let edge = hull::signed_edge_distance(&curve.hull, p);
    Containment { inside: edge >= margin, depth, shape: curve.shape }
}
