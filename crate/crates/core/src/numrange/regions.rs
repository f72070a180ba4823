//! Discs and ellipses predicted to lie inside numerical ranges.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::special::SpaceParam;
use crate::c64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscRegion {
    pub center: Complex64,
    pub radius: f64,
}

impl DiscRegion {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return domain(format!("disc radius must be a nonnegative number, got {radius}"));
        }
        Ok(Self { center, radius })
    }

    /// `k` equally spaced boundary points.
    pub fn boundary_points(&self, k: usize) -> Vec<Complex64> {
        (0..k).map(|j| self.center + Complex64::from_polar(self.radius, TAU * j as f64 / k as f64)).collect()
    }

    /// The concentric disc scaled by `factor`.
    pub fn shrink(&self, factor: f64) -> Self {
        Self { center: self.center, radius: self.radius * factor }
    }

    pub fn contains(&self, p: Complex64) -> bool {
        (p - self.center).norm() <= self.radius
    }
}

/// A closed elliptical disc given by its foci and full axis lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseRegion {
    pub focus1: Complex64,
    pub focus2: Complex64,
    pub major_axis_len: f64,
    pub minor_axis_len: f64,
}

impl EllipseRegion {
    /// Validates `major ≥ minor ≥ 0` and `major² = minor² + |f1 − f2|²`.
    pub fn new(focus1: Complex64, focus2: Complex64, major: f64, minor: f64) -> Result<Self> {
        if !(minor >= 0.0) || !(major >= minor) || !major.is_finite() {
            return domain(format!("ellipse axes must satisfy major >= minor >= 0, got {major}, {minor}"));
        }
        let focal = (focus1 - focus2).norm_sqr();
        let mismatch = (major * major - minor * minor - focal).abs();
        if mismatch > 1e-10 * major.max(1.0).powi(2) {
            return domain(format!("ellipse axes inconsistent with foci (mismatch {mismatch:e})"));
        }
        Ok(Self { focus1, focus2, major_axis_len: major, minor_axis_len: minor })
    }

    /// The ellipse with the given foci and minor axis.
    pub fn from_foci_and_minor(focus1: Complex64, focus2: Complex64, minor: f64) -> Result<Self> {
        let major = (minor * minor + (focus1 - focus2).norm_sqr()).sqrt();
        Self::new(focus1, focus2, major, minor)
    }

    pub fn center(&self) -> Complex64 {
        (self.focus1 + self.focus2) * 0.5
    }

    fn frame(&self) -> (Complex64, Complex64, f64, f64) {
        let d = self.focus2 - self.focus1;
        let dir = if d.norm() == 0.0 { c64(1.0, 0.0) } else { d / d.norm() };
        (self.center(), dir, self.major_axis_len / 2.0, self.minor_axis_len / 2.0)
    }

    fn at(&self, t: f64) -> Complex64 {
        let (c, dir, a, b) = self.frame();
        c + dir * c64(a * t.cos(), b * t.sin())
    }

    /// `k` boundary points at equally spaced parameter values.
    pub fn boundary_points(&self, k: usize) -> Vec<Complex64> {
        (0..k).map(|j| self.at(TAU * j as f64 / k as f64)).collect()
    }

    /// The ellipse scaled about its center by `factor`.
    pub fn shrink(&self, factor: f64) -> Self {
        let c = self.center();
        Self {
            focus1: c + (self.focus1 - c) * factor,
            focus2: c + (self.focus2 - c) * factor,
            major_axis_len: self.major_axis_len * factor,
            minor_axis_len: self.minor_axis_len * factor,
        }
    }

    pub fn contains(&self, p: Complex64) -> bool {
        (p - self.focus1).norm() + (p - self.focus2).norm() <= self.major_axis_len
    }

    /// Distance from `p` to the boundary curve.
    pub fn boundary_distance(&self, p: Complex64) -> f64 {
        const COARSE: usize = 720;
        let dist = |t: f64| (self.at(t) - p).norm();
        let step = TAU / COARSE as f64;
        let best = (0..COARSE)
            .map(|j| j as f64 * step)
            .min_by(|&x, &y| dist(x).total_cmp(&dist(y)))
            .unwrap();
        // golden-section search in the bracketing cell pair
        let (mut lo, mut hi) = (best - step, best + step);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (dist(x1), dist(x2));
        for _ in 0..80 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = dist(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = dist(x2);
            }
        }
        f1.min(f2).min(dist(best))
    }
}

/// Numerical range of `[[a, 0], [c, b]]`: foci `a`, `b`, minor axis `|c|`.
pub fn ellipse_2x2(a: Complex64, b: Complex64, c: Complex64) -> EllipseRegion {
    let minor = c.norm();
    let major = (minor * minor + (a - b).norm_sqr()).sqrt();
    EllipseRegion { focus1: a, focus2: b, major_axis_len: major, minor_axis_len: minor }
}

fn hypothesis<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Hypothesis(msg.into()))
}

/// Disc about 0 inside `W(C_{ψ,φ})` when `φ(0) = 0` and `ψ` vanishes to
/// order `r ≥ 1` with leading coefficient `b_r`: radius
/// `w_r / (1 + w_r) · |b_r|`.
pub fn disc_from_vanishing_order(r: usize, s: SpaceParam, b_r: Complex64) -> Result<DiscRegion> {
    if r == 0 {
        return hypothesis("vanishing order must be positive");
    }
    let w = s.weight(r);
    DiscRegion::new(c64(0.0, 0.0), w / (1.0 + w) * b_r.norm())
}

/// Disc about 0 inside `W(C_{ψ,φ})` for `φ(z) = μ z` and `ψ(0) = 0`, one
/// for each `r ≥ 2`: radius `½ √(s w_r) |μ b_{r−1}|`.
pub fn disc_from_dilation(r: usize, s: SpaceParam, mu: Complex64, b_rm1: Complex64) -> Result<DiscRegion> {
    if r < 2 {
        return hypothesis(format!("index r must be at least 2, got {r}"));
    }
    if mu.norm() == 0.0 {
        return hypothesis("dilation factor must be nonzero");
    }
    let factor = (s.value() * s.weight(r)).sqrt();
    DiscRegion::new(c64(0.0, 0.0), 0.5 * factor * (mu * b_rm1).norm())
}

/// Coefficient triple used by [`disc_from_root_of_unity`]:
/// `(b_{m r1}, b_{m r2}, b_{m (r2 − r1)})`.
pub fn root_of_unity_triple(m: usize, r1: usize, r2: usize, b: &[Complex64]) -> [Complex64; 3] {
    let get = |k: usize| b.get(k).copied().unwrap_or_default();
    [get(m * r1), get(m * r2), get(m * (r2 - r1))]
}

/// Disc about `b_0` inside `W(C_{ψ,φ})` for `φ(z) = e^{2πi/m} z`, from the
/// compression to `span{e_0, e_{m r1}, e_{m r2}}`. Requires
/// `b_{m r1} b_{m r2} b_{m(r2 − r1)} = 0` with one factor nonzero; the radius
/// is `½ √(w_{m r1}|b_{m r1}|² + w_{m r2}|b_{m r2}|² + (w_{m r2}/w_{m r1})|b_{m(r2−r1)}|²)`.
pub fn disc_from_root_of_unity(m: usize, r1: usize, r2: usize, s: SpaceParam, b: &[Complex64]) -> Result<DiscRegion> {
    if m == 0 || r1 == 0 || r1 >= r2 {
        return hypothesis(format!("need m >= 1 and 0 < r1 < r2, got m={m}, r1={r1}, r2={r2}"));
    }
    let [x, y, z] = root_of_unity_triple(m, r1, r2, b);
    if (x * y * z).norm() != 0.0 {
        return hypothesis("the product b_{m r1} b_{m r2} b_{m(r2-r1)} must vanish");
    }
    if x.norm() == 0.0 && y.norm() == 0.0 && z.norm() == 0.0 {
        return hypothesis("at least one of b_{m r1}, b_{m r2}, b_{m(r2-r1)} must be nonzero");
    }
    let w1 = s.weight(m * r1);
    let w2 = s.weight(m * r2);
    let sum = w1 * x.norm_sqr() + w2 * y.norm_sqr() + (w2 / w1) * z.norm_sqr();
    DiscRegion::new(b.first().copied().unwrap_or_default(), 0.5 * sum.sqrt())
}

/// Ellipse inside `W(C_{ψ,φ})` for `φ(z) = e^{2πi/m} z` and
/// `b_{mr+k} ≠ 0`, `0 < k < m`: foci `b_0` and `b_0 e^{2πi(mr+k)/m}`, minor
/// axis `√w_{mr+k} |b_{mr+k}|`.
pub fn ellipse_from_root_of_unity(
    m: usize,
    r: usize,
    k: usize,
    s: SpaceParam,
    b0: Complex64,
    b_mrk: Complex64,
) -> Result<EllipseRegion> {
    if k == 0 || k >= m {
        return hypothesis(format!("k must lie strictly between 0 and m={m}, got {k}"));
    }
    if b_mrk.norm() == 0.0 {
        return hypothesis("coefficient b_{mr+k} must be nonzero");
    }
    let n = m * r + k;
    let rot = Complex64::from_polar(1.0, TAU * n as f64 / m as f64);
    EllipseRegion::from_foci_and_minor(b0, b0 * rot, s.weight(n).sqrt() * b_mrk.norm())
}

/// Ellipse inside `W(C_{ψ,φ})` for `φ(z) = e^{2πit} z` (t irrational):
/// foci `b_0 e^{2πipt}`, `b_0 e^{2πi(p+q)t}`, minor axis
/// `√(w_{p+q}/w_p) |b_q|`.
pub fn ellipse_from_irrational_rotation(
    p: usize,
    q: usize,
    t: f64,
    s: SpaceParam,
    b0: Complex64,
    b_q: Complex64,
) -> Result<EllipseRegion> {
    if q == 0 {
        return hypothesis("q must be positive");
    }
    let f1 = b0 * Complex64::from_polar(1.0, 2.0 * PI * p as f64 * t);
    let f2 = b0 * Complex64::from_polar(1.0, 2.0 * PI * (p + q) as f64 * t);
    let factor = (s.ln_weight(p + q) - s.ln_weight(p)).exp().sqrt();
    EllipseRegion::from_foci_and_minor(f1, f2, factor * b_q.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: f64) -> SpaceParam {
        SpaceParam::new(s).unwrap()
    }

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);
    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn ellipse_2x2_examples() {
        let e = ellipse_2x2(ZERO, ZERO, ONE);
        assert_eq!((e.major_axis_len, e.minor_axis_len), (1.0, 1.0));
        let e = ellipse_2x2(ONE, -ONE, c64(2f64.sqrt(), 0.0));
        assert!((e.minor_axis_len - 2f64.sqrt()).abs() < 1e-15);
        assert!((e.major_axis_len - 6f64.sqrt()).abs() < 1e-15);
        let e = ellipse_2x2(ONE, c64(0.2, 0.3), ZERO);
        assert_eq!(e.minor_axis_len, 0.0);
        assert!((e.major_axis_len - (ONE - c64(0.2, 0.3)).norm()).abs() < 1e-15);
    }

    #[test]
    fn ellipse_validation() {
        assert!(EllipseRegion::new(ONE, -ONE, 1.0, 2.0).is_err());
        assert!(EllipseRegion::new(ONE, -ONE, 3.0, 1.0).is_err());
        assert!(EllipseRegion::new(ONE, -ONE, 5f64.sqrt(), 1.0).is_ok());
        assert!(DiscRegion::new(ZERO, -1.0).is_err());
    }

    #[test]
    fn ellipse_geometry() {
        let e = EllipseRegion::from_foci_and_minor(c64(-0.3, 0.1), c64(0.5, 0.4), 0.6).unwrap();
        for p in e.boundary_points(50) {
            let sum = (p - e.focus1).norm() + (p - e.focus2).norm();
            assert!((sum - e.major_axis_len).abs() < 1e-12);
            assert!(e.boundary_distance(p) < 1e-12);
        }
        assert!(e.contains(e.center()));
        let c = e.center();
        let far = c + (e.focus2 - c) * 10.0;
        assert!(!e.contains(far));
        let d = EllipseRegion::from_foci_and_minor(ZERO, ZERO, 2.0).unwrap();
        assert!((d.boundary_distance(c64(3.0, 0.0)) - 2.0).abs() < 1e-12);
        assert!((d.boundary_distance(c64(0.0, 0.25)) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn vanishing_order_disc() {
        let d = disc_from_vanishing_order(2, sp(0.5), ONE).unwrap();
        assert!((d.radius - 8.0 / 11.0).abs() < 1e-14);
        assert_eq!(disc_from_vanishing_order(3, sp(0.5), ZERO).unwrap().radius, 0.0);
        for r in 1..30 {
            for s in [0.1, 0.5, 0.9] {
                assert!(disc_from_vanishing_order(r, sp(s), ONE).unwrap().radius < 1.0);
            }
        }
        assert!(disc_from_vanishing_order(0, sp(0.5), ONE).is_err());
    }

    #[test]
    fn dilation_disc() {
        let d = disc_from_dilation(2, sp(0.5), ONE, ONE).unwrap();
        assert!((d.radius - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(disc_from_dilation(4, sp(0.5), ONE, ZERO).unwrap().radius, 0.0);
        assert!(disc_from_dilation(1, sp(0.5), ONE, ONE).is_err());
        assert!(disc_from_dilation(3, sp(0.5), ZERO, ONE).is_err());

        // ψ = αz/(1 − βz): b_{r−1} = α β^{r−2}; the family decreases in r
        // and its first member is |μα|/√(2(s+1))
        let (alpha, beta, mu) = (0.3, 0.4f64, Complex64::from_polar(1.0, 1.0));
        for s in [0.2, 0.5, 0.8] {
            let f = |r: usize| disc_from_dilation(r, sp(s), mu, c64(alpha * beta.powi(r as i32 - 2), 0.0)).unwrap().radius;
            assert!((f(2) - alpha / (2.0 * (s + 1.0)).sqrt()).abs() < 1e-14);
            for r in 2..40 {
                assert!(f(r + 1) < f(r));
            }
        }
    }

    #[test]
    fn root_of_unity_disc() {
        let s = sp(0.5);
        // single nonzero coefficient reduces to the nilpotent radius
        let b = [ZERO, ZERO, c64(0.7, 0.0)];
        let d = disc_from_root_of_unity(2, 1, 3, s, &b).unwrap();
        assert!((d.radius - 0.5 * s.weight(2).sqrt() * 0.7).abs() < 1e-14);

        // m=1, r1=1, r2=2, b1=1, b2=0: b_{m r1} and b_{m(r2−r1)} are both b_1
        let b = [c64(0.2, 0.0), ONE, ZERO];
        let d = disc_from_root_of_unity(1, 1, 2, s, &b).unwrap();
        assert!((d.radius - 0.5 * (2.0 + 4.0 / 3.0f64).sqrt()).abs() < 1e-14);
        assert_eq!(d.center, c64(0.2, 0.0));

        assert!(disc_from_root_of_unity(2, 1, 2, s, &[ONE, ZERO, ZERO, ZERO, ZERO]).is_err());
        assert!(disc_from_root_of_unity(1, 1, 2, s, &[ZERO, ONE, ONE]).is_err());
        assert!(disc_from_root_of_unity(2, 2, 1, s, &[ONE; 5]).is_err());
    }

    #[test]
    fn root_of_unity_ellipse() {
        let e = ellipse_from_root_of_unity(2, 0, 1, sp(0.5), ONE, ONE).unwrap();
        assert!((e.focus1 - ONE).norm() < 1e-15 && (e.focus2 + ONE).norm() < 1e-15);
        assert!((e.minor_axis_len - 2f64.sqrt()).abs() < 1e-14);
        assert!((e.major_axis_len - 6f64.sqrt()).abs() < 1e-14);
        let z = ellipse_from_root_of_unity(3, 1, 2, sp(0.3), ZERO, c64(0.4, 0.0)).unwrap();
        assert_eq!(z.focus1, z.focus2);
        assert!((z.major_axis_len - z.minor_axis_len).abs() < 1e-15);
        assert!(ellipse_from_root_of_unity(2, 0, 2, sp(0.5), ONE, ONE).is_err());
        assert!(ellipse_from_root_of_unity(2, 0, 1, sp(0.5), ONE, ZERO).is_err());
        for (m, r, k) in [(3, 1, 1), (5, 0, 3), (4, 2, 1)] {
            let b0 = c64(0.6, -0.3);
            let e = ellipse_from_root_of_unity(m, r, k, sp(0.4), b0, c64(0.2, 0.1)).unwrap();
            let rot = Complex64::from_polar(1.0, TAU * (m * r + k) as f64 / m as f64);
            let lhs = e.major_axis_len.powi(2) - e.minor_axis_len.powi(2);
            assert!((lhs - b0.norm_sqr() * (ONE - rot).norm_sqr()).abs() < 1e-13);
        }
    }

    #[test]
    fn irrational_rotation_ellipse() {
        let t = 0.5f64.sqrt();
        let s = sp(0.5);
        let e = ellipse_from_irrational_rotation(1, 1, t, s, ONE, ONE).unwrap();
        assert!((e.minor_axis_len - (4.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert!((e.focus1 - Complex64::from_polar(1.0, TAU * t)).norm() < 1e-15);
        let p0 = ellipse_from_irrational_rotation(0, 3, t, s, ONE, ONE).unwrap();
        assert!((p0.minor_axis_len - s.weight(3).sqrt()).abs() < 1e-14);
        let seg = ellipse_from_irrational_rotation(2, 1, t, s, ONE, ZERO).unwrap();
        assert_eq!(seg.minor_axis_len, 0.0);
        assert!((seg.major_axis_len - (seg.focus1 - seg.focus2).norm()).abs() < 1e-15);
        assert!(ellipse_from_irrational_rotation(1, 0, t, s, ONE, ONE).is_err());
    }
}
