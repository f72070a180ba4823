//! Berezin transforms `T̃(z) = ⟨T k̂_z, k̂_z⟩` of weighted composition
//! operators, grid sampling of Berezin ranges, and convexity probing.
//!
//! For `T = C_{ψ,φ}` the reproducing property gives the closed form
//! `T̃(z) = ψ(z) ((1 − |z|²) / (1 − z̄ φ(z)))^s`. The base of the power has
//! positive real part because `|z̄ φ(z)| < 1`, so the principal branch is used.

mod convexity;
mod sample;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use convexity::{blaschke_mirror_witness, convexity_probe, ConvexityVerdict, MirrorWitness, ProbeTolerance, ProbeWitness};
pub use sample::{berezin_grid, berezin_grid_fn, BerezinPoint, BerezinSample, REFINE_ROUNDS};

use crate::error::{domain, Result};
use crate::operator::OperatorSpec;
use crate::series::{check_in_disc, check_unimodular};
use crate::special::{principal_power, principal_power_unchecked, SpaceParam};
use crate::{c64, in_open_disc};

/// `((1 − |z|²) / (1 − z̄ w))^s` where `w = φ(z)`.
fn kernel_ratio_power(z: Complex64, w: Complex64, s: f64) -> Result<Complex64> {
    if !in_open_disc(w) {
        return domain(format!("phi(z) = {w} is not in the open disc"));
    }
    principal_power((1.0 - z.norm_sqr()) / (1.0 - z.conj() * w), s)
}

/// Closed-form Berezin transform of `C_{ψ,φ}` at `|z| < 1`.
pub fn berezin_transform(spec: &OperatorSpec, z: Complex64) -> Result<Complex64> {
    check_in_disc(z, "z")?;
    Ok(spec.psi_at(z) * kernel_ratio_power(z, spec.phi_at(z), spec.s.value())?)
}

/// Berezin transform of the product `C_{ψ1,φ1} C_{ψ2,φ2}`, which is the
/// weighted composition operator with weight `ψ1 · ψ2∘φ1` and symbol
/// `φ2∘φ1`.
pub fn product_berezin(left: &OperatorSpec, right: &OperatorSpec, z: Complex64) -> Result<Complex64> {
    check_in_disc(z, "z")?;
    let w1 = left.phi_at(z);
    let weight = left.psi_at(z) * right.psi_at(w1);
    Ok(weight * kernel_ratio_power(z, right.phi_at(w1), left.s.value())?)
}

/// Berezin transform of the Weyl-type operator `C_{k̂_γ, φ_{γ,α}}`, in the
/// factored form
/// `(1−|γ|²)^{s/2} (1−|z|²)^s / ((1 − γ̄ z)^s (1 − z̄ φ_{γ,α}(z))^s)`.
pub fn weyl_berezin(gamma: Complex64, alpha: Complex64, s: SpaceParam, z: Complex64) -> Result<Complex64> {
    check_in_disc(gamma, "gamma")?;
    check_unimodular(alpha)?;
    check_in_disc(z, "z")?;
    let sv = s.value();
    let phi = alpha * (z - gamma) / (1.0 - gamma.conj() * z);
    let num = (1.0 - gamma.norm_sqr()).powf(sv / 2.0) * (1.0 - z.norm_sqr()).powf(sv);
    let den = principal_power_unchecked(1.0 - gamma.conj() * z, sv) * principal_power_unchecked(1.0 - z.conj() * phi, sv);
    Ok(num / den)
}

/// The fixed point `(1 − √(1 − |γ|²)) / γ̄` of `φ_{γ,−1}` in the disc
/// (`0` when `γ = 0`).
pub fn weyl_fixed_point(gamma: Complex64) -> Result<Complex64> {
    check_in_disc(gamma, "gamma")?;
    if gamma.norm() == 0.0 {
        return Ok(c64(0.0, 0.0));
    }
    // 1 − √(1−x) = x / (1 + √(1−x)) avoids cancellation for small |γ|
    let g2 = gamma.norm_sqr();
    Ok(g2 / (1.0 + (1.0 - g2).sqrt()) / gamma.conj())
}

/// Real/imaginary parts of the Berezin transform of the Blaschke factor
/// `C_{(z−γ)/(1−γ̄z)}`, with the polar pieces `ρ, θ` of
/// `X + iY = (1−|z|²)(1−Re u) + 2(Im u)² + i Im u (1+|z|²−2 Re u)`,
/// `u = γ̄ z`. Then `T̃ = ((1−|z|²) ρ / |D|²)^s e^{isθ}` with
/// `|D|² = (1−|z|²)² + 4 (Im u)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeParts {
    pub re: f64,
    pub im: f64,
    pub rho: f64,
    pub theta: f64,
}

pub fn blaschke_berezin_parts(gamma: Complex64, s: SpaceParam, z: Complex64) -> Result<BlaschkeParts> {
    check_in_disc(gamma, "gamma")?;
    check_in_disc(z, "z")?;
    let sv = s.value();
    let u = gamma.conj() * z;
    let (a, b) = (u.re, u.im);
    let q = 1.0 - z.norm_sqr();
    let x = q * (1.0 - a) + 2.0 * b * b;
    let y = b * (1.0 + z.norm_sqr() - 2.0 * a);
    // x > 0 on the disc, so arctan(y/x) is the principal argument
    let theta = (y / x).atan();
    let rho = x.hypot(y);
    let d2 = q * q + 4.0 * b * b;
    let modulus = (q * rho / d2).powf(sv);
    Ok(BlaschkeParts { re: modulus * (sv * theta).cos(), im: modulus * (sv * theta).sin(), rho, theta })
}

/// Berezin transform of `C_{ξ z}`: `((1 − |z|²) / (1 − ξ |z|²))^s`.
pub fn dilation_berezin(xi: Complex64, s: SpaceParam, z: Complex64) -> Result<Complex64> {
    if xi.norm() > 1.0 + 1e-12 {
        return domain(format!("dilation factor must satisfy |xi| <= 1, got {xi}"));
    }
    check_in_disc(z, "z")?;
    let r2 = z.norm_sqr();
    principal_power((1.0 - r2) / (1.0 - xi * r2), s.value())
}

/// Closed-form Berezin radii of `X_γ` and `X_γ²`:
/// `2 (1−|γ|²)^{s/2}` and `2 (((1−|γ|²)/(1+|γ|²))^s + 1)`.
pub fn xgamma_berezin_quantities(gamma: Complex64, s: SpaceParam) -> Result<(f64, f64)> {
    check_in_disc(gamma, "gamma")?;
    let sv = s.value();
    let g2 = gamma.norm_sqr();
    let ber_x = 2.0 * (1.0 - g2).powf(sv / 2.0);
    let ber_x2 = 2.0 * (((1.0 - g2) / (1.0 + g2)).powf(sv) + 1.0);
    Ok((ber_x, ber_x2))
}
