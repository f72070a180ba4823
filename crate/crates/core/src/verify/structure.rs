//! Structural invariants of `D_s`: orthonormal basis, reproducing property,
//! matrix/closed-form Berezin agreement and the weight-ratio limit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::f64::consts::PI;

use super::{Status, TheoremCheck, VerifyConfig};
use crate::berezin::berezin_transform;
use crate::c64;
use crate::error::Result;
use crate::operator::{build_matrix, OperatorSpec, PhiSymbol, PsiSymbol};
use crate::series::PowerSeries;
use crate::space::{basis_element, inner_product, kernel_tail_bound, reproduce, tail, SpaceElement};
use crate::special::SpaceParam;

const ORTHO_TOL: f64 = 1e-12;
const ORTHO_MAX_INDEX: usize = 64;
const REPRODUCE_TOL: f64 = 1e-10;
/// Rounding allowance on top of the analytic tail bound.
const ROUNDING: f64 = 1e-13;
const KERNEL_NORM_ORDER: usize = 256;
const MATRIX_TOL: f64 = 1e-10;
const POINT_RADIUS: f64 = 0.8;
const BEREZIN_RADIUS: f64 = 0.6;
const SAMPLES: usize = 20;

pub fn check_structure_suite(config: &VerifyConfig) -> Vec<TheoremCheck> {
    let s = SpaceParam::new(config.s).expect("validated");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    vec![
        or_fail("S.orthonormality", json!({ "s": config.s, "max_index": ORTHO_MAX_INDEX }), |p| orthonormality(s, p)),
        or_fail("S.reproducing", json!({ "s": config.s, "N": config.order, "max_modulus": POINT_RADIUS, "samples": SAMPLES, "seed": config.seed }), |p| {
            reproducing(s, config.order, &mut rng, p)
        }),
        or_fail("S.kernel-norm", json!({ "s": config.s, "N": KERNEL_NORM_ORDER, "max_modulus": POINT_RADIUS }), |p| kernel_norm(s, p)),
        or_fail(
            "S.berezin-matrix",
            json!({ "s": config.s, "N": config.berezin_order, "max_modulus": BEREZIN_RADIUS, "samples_per_operator": SAMPLES, "seed": config.seed }),
            |p| berezin_matrix(s, config.berezin_order, &mut rng, p),
        ),
        or_fail("S.weight-ratio", json!({ "s": config.s, "shifts": [1, 2, 3] }), |p| weight_ratio(s, p)),
    ]
}

fn or_fail(id: &str, params: Value, f: impl FnOnce(Value) -> Result<TheoremCheck>) -> TheoremCheck {
    f(params.clone()).unwrap_or_else(|e| TheoremCheck::errored(id, params, 0.0, &e))
}

fn rand_disc(rng: &mut ChaCha8Rng, rmax: f64) -> Complex64 {
    Complex64::from_polar(rmax * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI))
}

fn orthonormality(s: SpaceParam, params: Value) -> Result<TheoremCheck> {
    let basis: Vec<SpaceElement> = (0..=ORTHO_MAX_INDEX).map(|n| basis_element(n, s, ORTHO_MAX_INDEX)).collect::<Result<_>>()?;
    let mut max_dev = 0.0f64;
    for (n, en) in basis.iter().enumerate() {
        for (m, em) in basis.iter().enumerate() {
            let target = if n == m { 1.0 } else { 0.0 };
            max_dev = max_dev.max((inner_product(en, em)? - target).norm());
        }
    }
    Ok(TheoremCheck::new(
        "S.orthonormality",
        params,
        json!({ "gram": "identity" }),
        json!({ "max_gram_deviation": max_dev }),
        ORTHO_TOL,
        Status::from_bool(max_dev <= ORTHO_TOL),
    ))
}

/// `⟨f, k_γ⟩ = f(γ)`: exact for polynomials of degree ≤ 32, and within the
/// kernel tail for `f = k_w` truncated at `N`.
fn reproducing(s: SpaceParam, order: usize, rng: &mut ChaCha8Rng, params: Value) -> Result<TheoremCheck> {
    let mut poly_err = 0.0f64;
    for _ in 0..SAMPLES {
        let deg = rng.gen_range(0..=32usize);
        let coeffs: Vec<Complex64> = (0..=deg).map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let f = SpaceElement::new(PowerSeries::new(coeffs)?, s);
        let gamma = rand_disc(rng, POINT_RADIUS);
        let scale = f.series.abs_coeff_sum().max(1.0);
        poly_err = poly_err.max((reproduce(&f, gamma)? - f.series.eval(gamma)?).norm() / scale);
    }
    let mut max_err = 0.0f64;
    let mut max_excess = f64::NEG_INFINITY;
    let mut max_bound = 0.0f64;
    for _ in 0..SAMPLES {
        let w = rand_disc(rng, POINT_RADIUS);
        let gamma = rand_disc(rng, POINT_RADIUS);
        let f = SpaceElement::kernel(w, s, order)?;
        let exact = crate::special::principal_power(1.0 - w.conj() * gamma, -s.value())?;
        let err = (reproduce(&f, gamma)? - exact).norm();
        let bound = tail(w.conj(), gamma, s, order);
        max_err = max_err.max(err);
        max_bound = max_bound.max(bound);
        max_excess = max_excess.max(err - bound - ROUNDING);
    }
    let ok = poly_err <= ROUNDING && max_excess <= 0.0 && max_err <= REPRODUCE_TOL;
    Ok(TheoremCheck::new(
        "S.reproducing",
        params,
        json!({ "polynomial_error": 0.0, "kernel_error_within_tail_bound": true, "kernel_error_at_most": REPRODUCE_TOL }),
        json!({ "max_polynomial_relative_error": poly_err, "max_kernel_error": max_err, "max_tail_bound": max_bound, "max_excess_over_bound": max_excess }),
        REPRODUCE_TOL,
        Status::from_bool(ok),
    ))
}

fn kernel_norm(s: SpaceParam, params: Value) -> Result<TheoremCheck> {
    let mut max_excess = f64::NEG_INFINITY;
    let mut max_dev = 0.0f64;
    for k in 0..16 {
        let gamma = Complex64::from_polar(POINT_RADIUS * (k + 1) as f64 / 16.0, 2.0 * PI * k as f64 / 16.0);
        let dev = (SpaceElement::normalized_kernel(gamma, s, KERNEL_NORM_ORDER)?.norm() - 1.0).abs();
        let bound = (1.0 - gamma.norm_sqr()).powf(s.value()) * kernel_tail_bound(gamma.norm_sqr(), s, KERNEL_NORM_ORDER);
        max_dev = max_dev.max(dev);
        max_excess = max_excess.max(dev - bound - ROUNDING);
    }
    Ok(TheoremCheck::new(
        "S.kernel-norm",
        params,
        json!({ "norm": 1.0 }),
        json!({ "max_norm_deviation": max_dev, "max_excess_over_bound": max_excess }),
        ROUNDING,
        Status::from_bool(max_excess <= 0.0),
    ))
}

fn berezin_matrix(s: SpaceParam, order: usize, rng: &mut ChaCha8Rng, params: Value) -> Result<TheoremCheck> {
    let series = |c: &[f64]| PowerSeries::from_real(c);
    let specs = vec![
        ("identity", OperatorSpec::new(PsiSymbol::One, PhiSymbol::Identity, s, order)?),
        ("constant", OperatorSpec::new(PsiSymbol::Series(series(&[0.2, 1.0])?), PhiSymbol::Constant(c64(0.3, -0.2)), s, order)?),
        ("dilation", OperatorSpec::new(PsiSymbol::Series(series(&[0.5, 0.0, 0.7])?), PhiSymbol::Dilation(c64(0.4, 0.5)), s, order)?),
        (
            "mobius",
            OperatorSpec::new(PsiSymbol::NormalizedKernel(c64(0.5, 0.2)), PhiSymbol::Mobius { gamma: c64(0.5, 0.2), alpha: c64(0.0, 1.0) }, s, order)?,
        ),
        (
            "general_series",
            OperatorSpec::new(
                PsiSymbol::One,
                PhiSymbol::GeneralSeries { series: series(&[0.1, 0.5, 0.2])?, sup_bound: 0.8 },
                s,
                order,
            )?,
        ),
    ];
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for (name, spec) in &specs {
        let a = build_matrix(spec)?.entries;
        let mut err = 0.0f64;
        for _ in 0..SAMPLES {
            let z = rand_disc(rng, BEREZIN_RADIUS);
            let k = SpaceElement::normalized_kernel(z, s, order)?.basis_coords();
            err = err.max((a.quadratic_form(&k)? - berezin_transform(spec, z)?).norm());
        }
        worst = worst.max(err);
        rows.push(json!({ "operator": name, "max_error": err }));
    }
    Ok(TheoremCheck::new(
        "S.berezin-matrix",
        params,
        json!({ "matrix_equals_closed_form": true }),
        json!({ "max_error": worst, "by_operator": rows }),
        MATRIX_TOL,
        Status::from_bool(worst <= MATRIX_TOL),
    ))
}

/// `w_{r+p}/w_r → 1`. The exact product `Π_{k=1..p} (r+k)/(r+k−1+s)` is
/// compared with the log-gamma route (which loses about `r·ε` to
/// cancellation) and with the asymptotic `(1 + p/r)^{1−s}`.
fn weight_ratio(s: SpaceParam, params: Value) -> Result<TheoremCheck> {
    let sv = s.value();
    let mut rows = Vec::new();
    let mut monotone = true;
    let mut last_dev = [f64::INFINITY; 3];
    let mut route_excess = f64::NEG_INFINITY;
    let mut asymptotic_excess = f64::NEG_INFINITY;
    for e in 1..=6 {
        let r = 10usize.pow(e);
        let rf = r as f64;
        for p in 1..=3usize {
            let exact: f64 = (1..=p).map(|k| (rf + k as f64) / (rf + k as f64 - 1.0 + sv)).product();
            let via_log_gamma = (s.ln_weight(r + p) - s.ln_weight(r)).exp();
            let asymptotic = (1.0 + p as f64 / rf).powf(1.0 - sv);
            let dev = (exact - 1.0).abs();
            monotone &= dev < last_dev[p - 1];
            last_dev[p - 1] = dev;
            route_excess = route_excess.max((via_log_gamma - exact).abs() - 1e-14 * rf);
            // second-order term of the expansion is at most p²/r²
            asymptotic_excess = asymptotic_excess.max((asymptotic - exact).abs() - (p * p) as f64 / (rf * rf));
            rows.push(json!({ "r": r, "p": p, "ratio": exact, "log_gamma_route": via_log_gamma }));
        }
    }
    let final_dev = last_dev.iter().copied().fold(0.0, f64::max);
    let ok = monotone && final_dev < 1e-5 && route_excess <= 0.0 && asymptotic_excess <= 0.0;
    Ok(TheoremCheck::new(
        "S.weight-ratio",
        params,
        json!({ "limit": 1.0, "asymptotic": "(1 + p/r)^(1-s)" }),
        json!({ "monotone_approach": monotone, "deviation_at_r_1e6": final_dev, "max_route_excess": route_excess,
            "max_asymptotic_excess": asymptotic_excess, "ratios": rows }),
        1e-5,
        Status::from_bool(ok),
    ))
}
