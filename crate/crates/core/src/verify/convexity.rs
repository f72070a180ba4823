//! Convexity of Berezin ranges of dilations and Blaschke factors.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::{cj, Status, TheoremCheck, VerifyConfig};
use crate::berezin::{
    berezin_transform, blaschke_berezin_parts, blaschke_mirror_witness, convexity_probe, dilation_berezin, berezin_grid_fn,
    BerezinSample, ConvexityVerdict, ProbeTolerance,
};
use crate::c64;
use crate::error::Result;
use crate::operator::{OperatorSpec, PhiSymbol, PsiSymbol};
use crate::special::SpaceParam;

const SINGLETON_TOL: f64 = 1e-12;
const REAL_TOL: f64 = 1e-11;
const ROUTE_TOL: f64 = 1e-11;
const CONFINEMENT_TOL: f64 = 1e-9;
const LOCUS_SAMPLES: usize = 401;
/// Grid points with `|Im(γ̄z)|` below this are treated as on the real locus.
const LOCUS_BAND: f64 = 1e-3;
const SPEC_ORDER: usize = 8;

pub fn check_convexity_suite(config: &VerifyConfig) -> Vec<TheoremCheck> {
    let mut out = Vec::new();
    for &sv in &config.convexity_s {
        let s = SpaceParam::new(sv).expect("validated");
        for &xi in &config.dilation_xis {
            let params = json!({ "xi": cj(xi), "s": sv, "R": config.grid_radial, "K": config.grid_angular, "pairs": config.probe_pairs, "seed": config.seed });
            out.push(or_fail("T1.12", params, |p| dilation_check(xi, s, config, p)));
        }
        for &gamma in &config.blaschke_gammas {
            let params = json!({ "gamma": cj(gamma), "s": sv, "R": config.grid_radial, "K": config.grid_angular, "pairs": config.probe_pairs, "seed": config.seed });
            out.push(or_fail("T1.13", params.clone(), |p| blaschke_check(gamma, s, config, p)));
            if gamma.norm() > 0.0 {
                out.push(or_fail("L5.2", params, |p| real_locus_check(gamma, s, config, p)));
            }
        }
    }
    out
}

fn or_fail(id: &str, params: Value, f: impl FnOnce(Value) -> Result<TheoremCheck>) -> TheoremCheck {
    f(params.clone()).unwrap_or_else(|e| TheoremCheck::errored(id, params, 0.0, &e))
}

/// Largest gap between two routes on the regular grid.
fn route_gap(sample: &BerezinSample, spec: &OperatorSpec) -> Result<f64> {
    let mut gap = 0.0f64;
    for p in &sample.grid[..sample.regular_len()] {
        gap = gap.max((berezin_transform(spec, p.z)? - p.value).norm());
    }
    Ok(gap)
}

fn verdict_json(v: &ConvexityVerdict) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn dilation_check(xi: Complex64, s: SpaceParam, config: &VerifyConfig, params: Value) -> Result<TheoremCheck> {
    let sample = berezin_grid_fn(|z| dilation_berezin(xi, s, z), config.grid_radial, config.grid_angular)?;
    let spec = OperatorSpec::new(PsiSymbol::One, PhiSymbol::Dilation(xi), s, SPEC_ORDER)?;
    let gap = route_gap(&sample, &spec)?;
    let max_im = sample.values().map(|v| v.im.abs()).fold(0.0, f64::max);
    let min_re = sample.values().map(|v| v.re).fold(f64::INFINITY, f64::min);
    let max_re = sample.values().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
    let stats = json!({ "route_gap": gap, "max_abs_imag": max_im, "min_real": min_re, "max_real": max_re });

    if xi == c64(1.0, 0.0) {
        let spread = sample.values().map(|v| (v - 1.0).norm()).fold(0.0, f64::max);
        return Ok(TheoremCheck::new(
            "L5.1",
            params,
            json!({ "range": "singleton {1}", "convex": true }),
            json!({ "max_distance_from_one": spread, "route_gap": gap }),
            SINGLETON_TOL,
            Status::from_bool(spread <= SINGLETON_TOL && gap <= ROUTE_TOL),
        ));
    }
    let verdict = convexity_probe(&sample, config.probe_pairs, ProbeTolerance::default(), config.seed);
    let mut observed = stats;
    observed["probe"] = verdict_json(&verdict);
    if xi.im == 0.0 {
        let ok = gap <= ROUTE_TOL && max_im <= REAL_TOL && min_re > 0.0 && max_re <= 1.0 + REAL_TOL && !verdict.is_violated();
        Ok(TheoremCheck::new(
            "T1.12",
            params,
            json!({ "range": "(0, 1]", "convex": true, "probe": "convex_consistent" }),
            observed,
            REAL_TOL,
            Status::from_bool(ok),
        ))
    } else {
        Ok(TheoremCheck::new(
            "T1.12",
            params,
            json!({ "convex": false, "probe": "violated" }),
            observed,
            ROUTE_TOL,
            Status::from_bool(gap <= ROUTE_TOL && verdict.is_violated()),
        ))
    }
}

fn blaschke_sample(gamma: Complex64, s: SpaceParam, config: &VerifyConfig) -> Result<BerezinSample> {
    berezin_grid_fn(|z| blaschke_berezin_parts(gamma, s, z).map(|p| c64(p.re, p.im)), config.grid_radial, config.grid_angular)
}

fn blaschke_check(gamma: Complex64, s: SpaceParam, config: &VerifyConfig, params: Value) -> Result<TheoremCheck> {
    let sample = blaschke_sample(gamma, s, config)?;
    let spec = OperatorSpec::new(PsiSymbol::One, PhiSymbol::Mobius { gamma, alpha: c64(1.0, 0.0) }, s, SPEC_ORDER)?;
    let gap = route_gap(&sample, &spec)?;
    if gamma.norm() == 0.0 {
        let spread = sample.values().map(|v| (v - 1.0).norm()).fold(0.0, f64::max);
        return Ok(TheoremCheck::new(
            "T1.13",
            params,
            json!({ "range": "singleton {1}", "convex": true }),
            json!({ "max_distance_from_one": spread, "route_gap": gap }),
            SINGLETON_TOL,
            Status::from_bool(spread <= SINGLETON_TOL && gap <= ROUTE_TOL),
        ));
    }
    let witness = blaschke_mirror_witness(gamma, s, &sample)?;
    let verdict = convexity_probe(&sample, config.probe_pairs, ProbeTolerance::default(), config.seed);
    let min_modulus = sample.values().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    let witness_ok = witness.is_some_and(|w| w.conjugation_error <= ROUTE_TOL && w.midpoint.im.abs() <= REAL_TOL && w.midpoint.re < w.real_lower_bound);
    Ok(TheoremCheck::new(
        "T1.13",
        params,
        json!({ "convex": false, "real_values_above": (1.0 - gamma.norm()).powf(s.value()), "probe": "violated" }),
        json!({ "route_gap": gap, "min_modulus": min_modulus, "mirror_witness": witness, "probe": verdict_json(&verdict) }),
        ROUTE_TOL,
        Status::from_bool(gap <= ROUTE_TOL && witness_ok && verdict.is_violated()),
    )
    .with_note("the mirror midpoint is real and below every real value of the range"))
}

/// Values are real exactly on `Im(γ̄z) = 0`, where `T̃(t γ/|γ|) = (1 − t|γ|)^s`.
fn real_locus_check(gamma: Complex64, s: SpaceParam, config: &VerifyConfig, params: Value) -> Result<TheoremCheck> {
    let sv = s.value();
    let r = gamma.norm();
    let unit = gamma / r;
    let (lo, hi) = ((1.0 - r).powf(sv), (1.0 + r).powf(sv));
    let mut max_im = 0.0f64;
    let mut max_formula_err = 0.0f64;
    let mut confinement_excess = f64::NEG_INFINITY;
    for i in 0..LOCUS_SAMPLES {
        let t = -0.999 + 1.998 * i as f64 / (LOCUS_SAMPLES - 1) as f64;
        let p = blaschke_berezin_parts(gamma, s, unit * t)?;
        max_im = max_im.max(p.im.abs());
        max_formula_err = max_formula_err.max((p.re - (1.0 - t * r).powf(sv)).abs());
        confinement_excess = confinement_excess.max(lo - p.re).max(p.re - hi);
    }
    let sample = blaschke_sample(gamma, s, config)?;
    let min_off_locus_im = sample.grid[..sample.regular_len()]
        .iter()
        .filter(|p| (gamma.conj() * p.z).im.abs() > LOCUS_BAND)
        .map(|p| p.value.im.abs())
        .fold(f64::INFINITY, f64::min);
    let ok = max_im <= REAL_TOL && max_formula_err <= REAL_TOL && confinement_excess <= CONFINEMENT_TOL && min_off_locus_im > 0.0;
    Ok(TheoremCheck::new(
        "L5.2",
        params,
        json!({ "real_on_locus": "Im(conj(gamma) z) = 0", "locus_value": "(1 - t|gamma|)^s at z = t gamma/|gamma|", "real_interval": [lo, hi] }),
        json!({ "locus_samples": LOCUS_SAMPLES, "max_abs_imag_on_locus": max_im, "max_locus_formula_error": max_formula_err,
            "max_confinement_excess": confinement_excess, "min_abs_imag_off_locus": min_off_locus_im, "off_locus_band": LOCUS_BAND }),
        CONFINEMENT_TOL,
        Status::from_bool(ok),
    ))
}
