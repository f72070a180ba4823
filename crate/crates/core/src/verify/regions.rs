//! Containment of predicted discs and ellipses in the swept numerical range.

use num_complex::Complex64;
use serde_json::{json, Value};
use std::f64::consts::PI;

use super::{cj, fj, spec, Status, TheoremCheck, VerifyConfig};
use crate::c64;
use crate::error::Result;
use crate::linalg::CMatrix;
use crate::numrange::{
    boundary_sweep, disc_from_dilation, disc_from_root_of_unity, disc_from_vanishing_order, ellipse_from_irrational_rotation,
    ellipse_from_root_of_unity, hull, BoundaryCurve, HullShape,
};
use crate::operator::{build_matrix, compression, OperatorMatrix, PhiSymbol, PsiSymbol};
use crate::series::PowerSeries;

/// Boundary samples of each predicted region.
const REGION_SAMPLES: usize = 128;
/// Predicted regions are shrunk by this factor before the containment test.
const SHRINK: f64 = 0.999;
const COMPRESSION_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn series(coeffs: &[f64]) -> PowerSeries {
    PowerSeries::from_real(coeffs).expect("finite coefficients")
}

/// Minimum signed edge distance of the points to the hull; all points are
/// contained with the margin iff it is at least `margin`.
fn containment(curve: &BoundaryCurve, points: &[Complex64], margin: f64) -> (bool, f64, usize) {
    if curve.shape != HullShape::Polygon {
        return (false, f64::NEG_INFINITY, points.len());
    }
    let depths: Vec<f64> = points.iter().map(|p| hull::signed_edge_distance(&curve.hull, *p)).collect();
    let outside = depths.iter().filter(|&&d| d < margin).count();
    let min = depths.iter().copied().fold(f64::INFINITY, f64::min);
    (outside == 0, min, outside)
}

fn containment_check(id: &str, params: Value, expectation: Value, curve: &BoundaryCurve, points: &[Complex64], margin: f64) -> TheoremCheck {
    let (ok, min_depth, outside) = containment(curve, points, margin);
    TheoremCheck::new(
        id,
        params,
        expectation,
        json!({ "min_depth": fj(min_depth), "points_outside": outside, "points": points.len(), "hull_vertices": curve.hull.len() }),
        margin,
        Status::from_bool(ok),
    )
}

fn matrix_json(m: &CMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|z| cj(*z)).collect())).collect())
}

fn compression_check(id: &str, params: Value, a: &OperatorMatrix, indices: &[usize], display: CMatrix) -> TheoremCheck {
    match compression(a, indices).and_then(|c| Ok((c.max_abs_diff(&display)?, c))) {
        Ok((diff, c)) => TheoremCheck::new(
            id,
            params,
            json!({ "indices": indices, "matrix": matrix_json(&display) }),
            json!({ "matrix": matrix_json(&c), "max_entry_difference": diff }),
            COMPRESSION_TOL,
            Status::from_bool(diff <= COMPRESSION_TOL),
        ),
        Err(e) => TheoremCheck::errored(id, params, COMPRESSION_TOL, &e),
    }
}

/// Discs about 0 for vanishing weights and dilation symbols, and about `b_0`
/// for root-of-unity rotations, each with its compression or radius floor.
pub fn check_disc_theorems(config: &VerifyConfig) -> Vec<TheoremCheck> {
    let mut out = Vec::new();
    vanishing_order_disc(config, &mut out);
    dilation_discs(config, &mut out);
    root_of_unity_discs(config, &mut out);
    out
}

fn vanishing_order_disc(config: &VerifyConfig, out: &mut Vec<TheoremCheck>) {
    let (s, n, margin) = (config.space(), config.order, config.containment_margin);
    let params = json!({ "phi": "z/2", "psi": "z^2", "r": 2, "s": s.value(), "N": n, "M": config.angles });
    let run = || -> Result<TheoremCheck> {
        let disc = disc_from_vanishing_order(2, s, ONE)?;
        let sp = spec(PsiSymbol::Series(series(&[0.0, 0.0, 1.0])), PhiSymbol::Dilation(c64(0.5, 0.0)), s, n)?;
        let curve = boundary_sweep(&build_matrix(&sp)?.entries, config.angles)?;
        let pts = disc.shrink(SHRINK).boundary_points(REGION_SAMPLES);
        Ok(containment_check("T1.4", params.clone(), json!({ "disc_center": cj(disc.center), "disc_radius": disc.radius, "shrink": SHRINK }), &curve, &pts, margin))
    };
    out.push(run().unwrap_or_else(|e| TheoremCheck::errored("T1.4", params.clone(), margin, &e)));
}

/// `ψ = 0.3 z / (1 − 0.4 z)`, `φ = μ z`.
fn dilation_discs(config: &VerifyConfig, out: &mut Vec<TheoremCheck>) {
    const ALPHA: f64 = 0.3;
    const BETA: f64 = 0.4;
    const FLOOR_TOL: f64 = 1e-8;
    let (s, n, margin) = (config.space(), config.order, config.containment_margin);
    let b = |k: usize| if k == 0 { ZERO } else { c64(ALPHA * BETA.powi(k as i32 - 1), 0.0) };
    let psi = PowerSeries::from_fn(n, b).expect("finite coefficients");
    for mu in [ONE, Complex64::from_polar(1.0, PI / 3.0)] {
        let base = json!({ "phi": format!("mu z"), "mu": cj(mu), "psi": "0.3 z/(1 - 0.4 z)", "s": s.value(), "N": n, "M": config.angles });
        let built = spec(PsiSymbol::Series(psi.clone()), PhiSymbol::Dilation(mu), s, n)
            .and_then(|sp| build_matrix(&sp))
            .and_then(|a| Ok((boundary_sweep(&a.entries, config.angles)?, a)));
        let (curve, a) = match built {
            Ok(x) => x,
            Err(e) => {
                out.push(TheoremCheck::errored("T1.5", base, margin, &e));
                continue;
            }
        };
        for r in [2usize, 3] {
            let mut params = base.clone();
            params["r"] = json!(r);
            match disc_from_dilation(r, s, mu, b(r - 1)) {
                Ok(disc) => {
                    let pts = disc.shrink(SHRINK).boundary_points(REGION_SAMPLES);
                    let exp = json!({ "disc_center": cj(disc.center), "disc_radius": disc.radius, "shrink": SHRINK });
                    out.push(containment_check("T1.5", params.clone(), exp, &curve, &pts, margin));
                }
                Err(e) => out.push(TheoremCheck::errored("T1.5", params.clone(), margin, &e)),
            }
            let entry = (s.value() * s.weight(r)).sqrt() * mu * b(r - 1);
            let display = CMatrix::from_rows(&[vec![ZERO, ZERO], vec![entry, ZERO]]).expect("square");
            out.push(compression_check("T1.5.compression", params, &a, &[1, r], display));
        }
        let floor = mu.norm() * ALPHA / (2.0 * (s.value() + 1.0)).sqrt();
        let w = curve.max_modulus();
        out.push(TheoremCheck::new(
            "T1.5.floor",
            base,
            json!({ "numerical_radius_at_least": floor }),
            json!({ "numerical_radius": w }),
            FLOOR_TOL,
            Status::from_bool(w >= floor - FLOOR_TOL),
        ));
    }
}

/// `φ = −z` (`m = 2`), `r1 = 1`, `r2 = 2`; the compression to
/// `span{e_0, e_2, e_4}` involves `b_2` twice and `b_4` once.
fn root_of_unity_discs(config: &VerifyConfig, out: &mut Vec<TheoremCheck>) {
    let (s, n, margin) = (config.space(), config.order, config.containment_margin);
    let (m, r1, r2) = (2usize, 1usize, 2usize);
    let mu = Complex64::from_polar(1.0, 2.0 * PI / m as f64);
    for (label, coeffs) in [("1 + 0.5 z^2", vec![1.0, 0.0, 0.5]), ("1 + 0.3 z^4", vec![1.0, 0.0, 0.0, 0.0, 0.3])] {
        let psi = series(&coeffs);
        let params = json!({ "phi": "-z", "m": m, "r1": r1, "r2": r2, "psi": label, "s": s.value(), "N": n, "M": config.angles,
            "hypothesis_index": "b_{m(r2-r1)}" });
        let run = || -> Result<Vec<TheoremCheck>> {
            let disc = disc_from_root_of_unity(m, r1, r2, s, psi.coeffs())?;
            let a = build_matrix(&spec(PsiSymbol::Series(psi.clone()), PhiSymbol::Dilation(mu), s, n)?)?;
            let curve = boundary_sweep(&a.entries, config.angles)?;
            let pts = disc.shrink(SHRINK).boundary_points(REGION_SAMPLES);
            let exp = json!({ "disc_center": cj(disc.center), "disc_radius": disc.radius, "shrink": SHRINK });
            let note = "the hypothesis index b_{m(r1-r2)} is read as b_{m(r2-r1)}";
            let b = |k: usize| psi.coeff(k);
            let (i1, i2) = (m * r1, m * r2);
            let display = CMatrix::from_rows(&[
                vec![b(0), ZERO, ZERO],
                vec![s.weight(i1).sqrt() * b(i1), b(0), ZERO],
                vec![s.weight(i2).sqrt() * b(i2), (s.weight(i2) / s.weight(i1)).sqrt() * b(m * (r2 - r1)), b(0)],
            ])?;
            Ok(vec![
                containment_check("T1.6", params.clone(), exp, &curve, &pts, margin).with_note(note),
                compression_check("T1.6.compression", params.clone(), &a, &[0, i1, i2], display),
            ])
        };
        match run() {
            Ok(checks) => out.extend(checks),
            Err(e) => out.push(TheoremCheck::errored("T1.6", params, margin, &e)),
        }
    }
}

/// Ellipses for a root-of-unity rotation and an irrational rotation, with
/// the compressions behind them.
pub fn check_ellipse_theorems(config: &VerifyConfig) -> Vec<TheoremCheck> {
    let (s, n, margin) = (config.space(), config.order, config.containment_margin);
    let psi = series(&[1.0, 1.0]);
    let mut out = Vec::new();

    // m = 2, r = 0, k = 1
    {
        let (m, r, k) = (2usize, 0usize, 1usize);
        let idx = m * r + k;
        let mu = Complex64::from_polar(1.0, 2.0 * PI / m as f64);
        let params = json!({ "phi": "-z", "m": m, "r": r, "k": k, "psi": "1 + z", "s": s.value(), "N": n, "M": config.angles });
        let run = || -> Result<Vec<TheoremCheck>> {
            let e = ellipse_from_root_of_unity(m, r, k, s, psi.coeff(0), psi.coeff(idx))?;
            let a = build_matrix(&spec(PsiSymbol::Series(psi.clone()), PhiSymbol::Dilation(mu), s, n)?)?;
            let curve = boundary_sweep(&a.entries, config.angles)?;
            let pts = e.shrink(SHRINK).boundary_points(REGION_SAMPLES);
            let exp = json!({ "foci": [cj(e.focus1), cj(e.focus2)], "major": e.major_axis_len, "minor": e.minor_axis_len, "shrink": SHRINK });
            let rot = Complex64::from_polar(1.0, 2.0 * PI * idx as f64 / m as f64);
            let display = CMatrix::from_rows(&[
                vec![psi.coeff(0), ZERO],
                vec![s.weight(idx).sqrt() * psi.coeff(idx), psi.coeff(0) * rot],
            ])?;
            Ok(vec![
                containment_check("T1.7", params.clone(), exp, &curve, &pts, margin),
                compression_check("T1.7.compression", params.clone(), &a, &[0, idx], display),
            ])
        };
        match run() {
            Ok(c) => out.extend(c),
            Err(e) => out.push(TheoremCheck::errored("T1.7", params, margin, &e)),
        }
    }

    // t = 1/√2, p = 1, q = 1
    {
        let (p, q) = (1usize, 1usize);
        let t = std::f64::consts::FRAC_1_SQRT_2;
        let mu = Complex64::from_polar(1.0, 2.0 * PI * t);
        let params = json!({ "phi": "exp(2 pi i t) z", "t": t, "p": p, "q": q, "psi": "1 + z", "s": s.value(), "N": n, "M": config.angles });
        let run = || -> Result<Vec<TheoremCheck>> {
            let e = ellipse_from_irrational_rotation(p, q, t, s, psi.coeff(0), psi.coeff(q))?;
            let a = build_matrix(&spec(PsiSymbol::Series(psi.clone()), PhiSymbol::Dilation(mu), s, n)?)?;
            let curve = boundary_sweep(&a.entries, config.angles)?;
            let pts = e.shrink(SHRINK).boundary_points(REGION_SAMPLES);
            let exp = json!({ "foci": [cj(e.focus1), cj(e.focus2)], "major": e.major_axis_len, "minor": e.minor_axis_len, "shrink": SHRINK });
            let rp = Complex64::from_polar(1.0, 2.0 * PI * p as f64 * t);
            let rpq = Complex64::from_polar(1.0, 2.0 * PI * (p + q) as f64 * t);
            let factor = (s.weight(p + q) / s.weight(p)).sqrt();
            let display = CMatrix::from_rows(&[
                vec![psi.coeff(0) * rp, ZERO],
                vec![rp * factor * psi.coeff(q), psi.coeff(0) * rpq],
            ])?;
            Ok(vec![
                containment_check("T1.8", params.clone(), exp, &curve, &pts, margin),
                compression_check("T1.8.compression", params.clone(), &a, &[p, p + q], display),
            ])
        };
        match run() {
            Ok(c) => out.extend(c),
            Err(e) => out.push(TheoremCheck::errored("T1.8", params, margin, &e)),
        }
    }
    out
}
