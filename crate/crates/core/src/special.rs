//! Gamma-function machinery and principal complex powers.
//!
//! Every weight of the space is a ratio of Gamma values. Those ratios are
//! formed in log-space: for `n` in the hundreds the individual Gamma values
//! overflow long before their ratio does.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// The exponent `s` of the weighted Dirichlet space, restricted to `0 < s < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SpaceParam(f64);

impl SpaceParam {
    pub fn new(s: f64) -> Result<Self> {
        if s.is_finite() && s > 0.0 && s < 1.0 {
            Ok(Self(s))
        } else {
            Err(Error::InvalidSpaceParam(s))
        }
    }

    /// The Hardy space `s = 1`. Only meant for sanity checks against the
    /// classical `H^2` formulas.
    pub fn hardy() -> Self {
        Self(1.0)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `ln w_n`, see [`monomial_norm_sq`].
    pub fn ln_weight(self, n: usize) -> f64 {
        let n = n as f64;
        ln_gamma(n + 1.0) + ln_gamma(self.0) - ln_gamma(n + self.0)
    }

    /// Shorthand for [`monomial_norm_sq`].
    pub fn weight(self, n: usize) -> f64 {
        monomial_norm_sq(n, self)
    }

    /// `ln w_0 .. ln w_order` in one pass.
    pub fn ln_weights(self, order: usize) -> Vec<f64> {
        (0..=order).map(|n| self.ln_weight(n)).collect()
    }
}

impl TryFrom<f64> for SpaceParam {
    type Error = Error;
    fn try_from(s: f64) -> Result<Self> {
        Self::new(s)
    }
}

impl From<SpaceParam> for f64 {
    fn from(s: SpaceParam) -> f64 {
        s.0
    }
}

// Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// zeta(2) ..= zeta(30)
const ZETA: [f64; 29] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_370_0,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818_1,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308_0,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307_0,
    1.000_015_282_259_408_7,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265_0,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_925_97,
    1.000_000_059_608_189_05,
    1.000_000_029_803_503_5,
    1.000_000_014_901_554_8,
    1.000_000_007_450_711_8,
    1.000_000_003_725_334_0,
    1.000_000_001_862_659_7,
    1.000_000_000_931_327_4,
];

/// `ln Γ(1 + eps)` from its Taylor series; accurate to full relative
/// precision for `|eps| <= 0.2`, where the Lanczos form loses digits to
/// cancellation around the zero of `ln Γ`.
fn ln_gamma_1p(eps: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = -eps;
    for (i, z) in ZETA.iter().enumerate() {
        let k = (i + 2) as f64;
        pow *= -eps;
        sum += z * pow / k;
    }
    -EULER_GAMMA * eps + sum
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    let t = x - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (t + i as f64);
    }
    let tt = t + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (t + 0.5) * tt.ln() - tt + a.ln()
}

/// `ln Γ(x)` for `x > 0`, unchecked.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if (x - 1.0).abs() <= 0.2 {
        ln_gamma_1p(x - 1.0)
    } else if (x - 2.0).abs() <= 0.2 {
        let eps = x - 2.0;
        eps.ln_1p() + ln_gamma_1p(eps)
    } else if x < 0.5 {
        ln_gamma(x + 1.0) - x.ln()
    } else {
        ln_gamma_lanczos(x)
    }
}

/// Natural logarithm of the Gamma function for real `x > 0`.
///
/// Relative error stays below `1e-13` on `(0, 200]`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma requires x > 0, got {x}"));
    }
    Ok(ln_gamma(x))
}

/// Squared norm of the monomial `z^n` in `D_s`:
/// `w_n = Γ(n+1) Γ(s) / Γ(n+s)`.
pub fn monomial_norm_sq(n: usize, s: SpaceParam) -> f64 {
    if n == 0 {
        return 1.0;
    }
    s.ln_weight(n).exp()
}

/// Principal branch of `z^s` for `Re z > 0`.
pub fn principal_power(z: Complex64, s: f64) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return domain(format!("principal_power requires Re z > 0, got {z}"));
    }
    Ok(principal_power_unchecked(z, s))
}

#[inline]
pub(crate) fn principal_power_unchecked(z: Complex64, s: f64) -> Complex64 {
    Complex64::from_polar((s * z.norm().ln()).exp(), s * z.arg())
}
