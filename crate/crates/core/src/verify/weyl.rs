//! Berezin ranges and radii of Weyl-type operators and of `X_γ`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::f64::consts::PI;

use super::zero::{radial_decay, DECAY_THRESHOLD};
use super::{cj, Status, TheoremCheck, VerifyConfig};
use crate::berezin::{berezin_grid, berezin_grid_fn, product_berezin, weyl_berezin, weyl_fixed_point, xgamma_berezin_quantities};
use crate::c64;
use crate::error::Result;
use crate::operator::weyl_operator;
use crate::special::SpaceParam;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const BOUND_TOL: f64 = 1e-12;
const REAL_TOL: f64 = 1e-11;
const FIXED_POINT_TOL: f64 = 1e-10;
const GRID_PEAK_TOL: f64 = 1e-6;
const RADIUS_TOL: f64 = 1e-10;
const XGAMMA_TOL: f64 = 1e-8;
/// Truncation order of the operator specs; Berezin values use closed forms,
/// so it only matters for validation.
const SPEC_ORDER: usize = 8;

pub fn check_weyl_suite(config: &VerifyConfig) -> Vec<TheoremCheck> {
    let mut out = Vec::new();
    for &sv in &config.weyl_s {
        let s = SpaceParam::new(sv).expect("validated");
        for &gamma in &config.weyl_gammas {
            let params = json!({ "gamma": cj(gamma), "s": sv, "R": config.grid_radial, "K": config.grid_angular });
            out.push(lower_bound_check(gamma, s, params.clone()));
            out.push(decay_check(gamma, s, params.clone()));
            out.push(reflection_range_check(gamma, s, config, params.clone()));
            out.push(radius_check(gamma, s, config, params.clone()));
            out.push(xgamma_check(gamma, s, config, params));
        }
    }
    if !config.weyl_s.is_empty() && !config.weyl_gammas.is_empty() {
        out.push(strictness_check(config));
    }
    out
}

fn run_or_fail(id: &str, params: Value, tol: f64, f: impl FnOnce(Value) -> Result<TheoremCheck>) -> TheoremCheck {
    f(params.clone()).unwrap_or_else(|e| TheoremCheck::errored(id, params, tol, &e))
}

/// `|T̃(z)| ≥ (1−|γ|²)^{s/2} (1−|z|²)^s / 4^s` on 2000 points for several `α`.
fn lower_bound_check(gamma: Complex64, s: SpaceParam, params: Value) -> TheoremCheck {
    run_or_fail("T1.9.bound", params, BOUND_TOL, |params| {
        let sv = s.value();
        let mut min_slack = f64::INFINITY;
        let mut min_modulus = f64::INFINITY;
        for alpha in [ONE, -ONE, c64(0.0, 1.0), Complex64::from_polar(1.0, PI / 5.0)] {
            for j in 1..=40 {
                let r = j as f64 / 41.0;
                for k in 0..50 {
                    let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / 50.0);
                    let v = weyl_berezin(gamma, alpha, s, z)?.norm();
                    let floor = (1.0 - gamma.norm_sqr()).powf(sv / 2.0) * (1.0 - r * r).powf(sv) / 4f64.powf(sv);
                    min_slack = min_slack.min(v - floor);
                    min_modulus = min_modulus.min(v);
                }
            }
        }
        Ok(TheoremCheck::new(
            "T1.9.bound",
            params,
            json!({ "modulus_at_least": "(1-|gamma|^2)^(s/2) (1-|z|^2)^s / 4^s", "alphas": [cj(ONE), cj(-ONE), cj(c64(0.0, 1.0)), cj(Complex64::from_polar(1.0, PI / 5.0))] }),
            json!({ "min_slack": min_slack, "min_modulus": min_modulus, "points_per_alpha": 2000 }),
            BOUND_TOL,
            Status::from_bool(min_slack >= -BOUND_TOL && min_modulus > 0.0),
        ))
    })
}

/// Radial decay toward a boundary point moved by `φ_{γ,α}`.
fn decay_check(gamma: Complex64, s: SpaceParam, params: Value) -> TheoremCheck {
    run_or_fail("T1.9.decay", params, DECAY_THRESHOLD, |params| {
        let mut rows = Vec::new();
        for alpha in [ONE, -ONE] {
            if alpha == ONE && gamma.norm() == 0.0 {
                continue;
            }
            // iγ/|γ| is not fixed by φ_{γ,±1}
            let z0 = if gamma.norm() == 0.0 { ONE } else { c64(0.0, 1.0) * gamma / gamma.norm() };
            let (first, table) = radial_decay(|z| weyl_berezin(gamma, alpha, s, z), z0)?;
            rows.push(json!({ "alpha": cj(alpha), "boundary_point": cj(z0), "first_distance_below_threshold": first, "modulus_by_distance": table }));
        }
        Ok(TheoremCheck::new(
            "T1.9.decay",
            params,
            json!({ "zero_in_closure": true, "threshold": DECAY_THRESHOLD }),
            Value::Array(rows),
            DECAY_THRESHOLD,
            Status::Informational,
        )
        .with_note("the approach distance needed grows sharply as s decreases; closure membership is not certified"))
    })
}

/// `α = −1`: the sampled range is real, inside `(0, 1]`, and reaches 1 at
/// the fixed point.
fn reflection_range_check(gamma: Complex64, s: SpaceParam, config: &VerifyConfig, params: Value) -> TheoremCheck {
    run_or_fail("T1.10", params, REAL_TOL, |params| {
        let spec = weyl_operator(gamma, -ONE, s, SPEC_ORDER)?;
        let sample = berezin_grid(&spec, config.grid_radial, config.grid_angular)?;
        let max_im = sample.values().map(|v| v.im.abs()).fold(0.0, f64::max);
        let min_re = sample.values().map(|v| v.re).fold(f64::INFINITY, f64::min);
        let max_re = sample.values().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
        let zf = weyl_fixed_point(gamma)?;
        let at_fixed = weyl_berezin(gamma, -ONE, s, zf)?;
        let ok = max_im <= REAL_TOL
            && min_re > 0.0
            && max_re <= 1.0 + REAL_TOL
            && (at_fixed - 1.0).norm() <= FIXED_POINT_TOL
            && sample.radius_estimate >= 1.0 - GRID_PEAK_TOL;
        Ok(TheoremCheck::new(
            "T1.10",
            params,
            json!({ "range": "(0, 1]", "fixed_point": cj(zf), "value_at_fixed_point": 1.0, "grid_max_at_least": 1.0 - GRID_PEAK_TOL,
                "fixed_point_tolerance": FIXED_POINT_TOL }),
            json!({ "max_abs_imag": max_im, "min_real": min_re, "max_real": max_re, "value_at_fixed_point": cj(at_fixed),
                "grid_max": sample.radius_estimate, "grid_maximizer": cj(sample.maximizer) }),
            REAL_TOL,
            Status::from_bool(ok),
        ))
    })
}

/// `α = 1`: the grid radius equals `(1−|γ|²)^{s/2}`, attained at `z = 0`.
fn radius_check(gamma: Complex64, s: SpaceParam, config: &VerifyConfig, params: Value) -> TheoremCheck {
    run_or_fail("T1.11", params, RADIUS_TOL, |params| {
        let spec = weyl_operator(gamma, ONE, s, SPEC_ORDER)?;
        let sample = berezin_grid(&spec, config.grid_radial, config.grid_angular)?;
        let expected = (1.0 - gamma.norm_sqr()).powf(s.value() / 2.0);
        let at_origin = sample.grid[0].value;
        let ok = (sample.radius_estimate - expected).abs() <= RADIUS_TOL && (at_origin.norm() - expected).abs() <= RADIUS_TOL;
        Ok(TheoremCheck::new(
            "T1.11",
            params,
            json!({ "berezin_radius": expected, "attained_at": cj(c64(0.0, 0.0)) }),
            json!({ "grid_radius": sample.radius_estimate, "value_at_origin": cj(at_origin), "grid_maximizer": cj(sample.maximizer) }),
            RADIUS_TOL,
            Status::from_bool(ok),
        ))
    })
}

/// Closed-form Berezin radii of `X_γ` and `X_γ²`, the strict reverse power
/// inequality, and grid confirmation of both suprema.
fn xgamma_check(gamma: Complex64, s: SpaceParam, config: &VerifyConfig, params: Value) -> TheoremCheck {
    run_or_fail("P4.xgamma", params, XGAMMA_TOL, |params| {
        let (bx, bx2) = xgamma_berezin_quantities(gamma, s)?;
        let plus = weyl_operator(gamma, ONE, s, SPEC_ORDER)?;
        let minus = weyl_operator(-gamma, ONE, s, SPEC_ORDER)?;
        let x_grid = berezin_grid_fn(|z| Ok(weyl_berezin(gamma, ONE, s, z)? + weyl_berezin(-gamma, ONE, s, z)?), config.grid_radial, config.grid_angular)?;
        let x2_grid = berezin_grid_fn(
            |z| {
                let mut total = c64(0.0, 0.0);
                for (l, r) in [(&plus, &plus), (&plus, &minus), (&minus, &plus), (&minus, &minus)] {
                    total += product_berezin(l, r, z)?;
                }
                Ok(total)
            },
            config.grid_radial,
            config.grid_angular,
        )?;
        let grid_ok = (x_grid.radius_estimate - bx).abs() <= XGAMMA_TOL && (x2_grid.radius_estimate - bx2).abs() <= XGAMMA_TOL;
        let origin_ok = (x_grid.grid[0].value.norm() - bx).abs() <= XGAMMA_TOL && (x2_grid.grid[0].value.norm() - bx2).abs() <= XGAMMA_TOL;
        let strict = if gamma.norm() == 0.0 { bx2 == bx * bx } else { bx2 > bx * bx };
        Ok(TheoremCheck::new(
            "P4.xgamma",
            params,
            json!({ "ber_x": bx, "ber_x_squared": bx2, "ber_x_sq": bx * bx, "reverse_power_strict": gamma.norm() > 0.0 }),
            json!({ "grid_ber_x": x_grid.radius_estimate, "grid_ber_x_squared": x2_grid.radius_estimate,
                "x_maximizer": cj(x_grid.maximizer), "x_squared_maximizer": cj(x2_grid.maximizer),
                "x_at_origin": cj(x_grid.grid[0].value), "x_squared_at_origin": cj(x2_grid.grid[0].value) }),
            XGAMMA_TOL,
            Status::from_bool(grid_ok && origin_ok && strict),
        ))
    })
}

/// `ber(X_γ²) > ber(X_γ)²` for 20 random `γ` with `0.05 < |γ| < 0.95` per `s`.
fn strictness_check(config: &VerifyConfig) -> TheoremCheck {
    let params = json!({ "samples_per_s": 20, "modulus_range": [0.05, 0.95], "s": config.weyl_s, "seed": config.seed });
    run_or_fail("P4.strict", params, 0.0, |params| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut min_gap = f64::INFINITY;
        for &sv in &config.weyl_s {
            let s = SpaceParam::new(sv)?;
            for _ in 0..20 {
                let g = Complex64::from_polar(rng.gen_range(0.05..0.95), rng.gen_range(-PI..PI));
                let (bx, bx2) = xgamma_berezin_quantities(g, s)?;
                min_gap = min_gap.min(bx2 - bx * bx);
            }
        }
        Ok(TheoremCheck::new(
            "P4.strict",
            params,
            json!({ "min_gap_positive": true }),
            json!({ "min_gap": min_gap }),
            0.0,
            Status::from_bool(min_gap > 0.0),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_suite_passes() {
        let cfg = VerifyConfig {
            weyl_gammas: vec![c64(0.5, 0.0), c64(0.0, 0.0)],
            weyl_s: vec![0.5],
            grid_radial: 32,
            grid_angular: 64,
            ..VerifyConfig::default()
        };
        let checks = check_weyl_suite(&cfg);
        assert_eq!(checks.len(), 2 * 5 + 1);
        for c in &checks {
            assert_ne!(c.status, Status::Fail, "{c:?}");
        }
        let x = checks.iter().find(|c| c.id == "P4.xgamma").unwrap();
        assert!((x.expectation["ber_x"].as_f64().unwrap() - 1.861_210).abs() < 1e-6);
        assert!((x.expectation["ber_x_squared"].as_f64().unwrap() - 3.549_193).abs() < 1e-6);
    }
}
