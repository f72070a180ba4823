//! Truncated complex power series.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::special::SpaceParam;
use crate::{c64, in_open_disc};

/// Taylor coefficients `c_0 ..= c_N` of a function about the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Wraps a coefficient vector. An empty vector is the zero series of
    /// order 0.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return domain("power series coefficients must be finite");
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| c64(c, 0.0)).collect())
    }

    /// Builds `c_n = f(n)` for `n ≤ order`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex64) -> Result<Self> {
        Self::new((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    pub fn constant(v: Complex64, order: usize) -> Self {
        let mut out = Self::zero(order);
        out.coeffs[0] = v;
        out
    }

    pub fn one(order: usize) -> Self {
        Self::constant(c64(1.0, 0.0), order)
    }

    /// `c · z^n`, truncated at `order` (so zero when `n > order`).
    pub fn monomial(n: usize, c: Complex64, order: usize) -> Self {
        let mut out = Self::zero(order);
        if n <= order {
            out.coeffs[n] = c;
        }
        out
    }

    /// The truncation degree `N`.
    #[inline]
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c_n`, or zero beyond the truncation order.
    #[inline]
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Re-truncates (or zero-pads) to a new order.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Coefficient-wise sum; the shorter series is zero-padded.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Self { coeffs }
    }

    /// Cauchy product truncated at the larger of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_truncated(other, self.order().max(other.order()))
    }

    /// Cauchy product truncated at `order`.
    pub fn mul_truncated(&self, other: &Self, order: usize) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// `f^r` by binary exponentiation; `f^0 = 1`.
    pub fn pow(&self, mut r: u32) -> Self {
        let order = self.order();
        let mut acc = Self::one(order);
        let mut base = self.clone();
        while r > 0 {
            if r & 1 == 1 {
                acc = acc.mul_truncated(&base, order);
            }
            r >>= 1;
            if r > 0 {
                base = base.mul_truncated(&base, order);
            }
        }
        acc
    }

    /// Horner evaluation at `|z| < 1`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !in_open_disc(z) {
            return domain(format!("series evaluation requires |z| < 1, got |z| = {}", z.norm()));
        }
        Ok(self.eval_unchecked(z))
    }

    /// Horner evaluation without the disc check (polynomials are entire).
    pub fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// `Σ |c_n|`, an upper bound for `sup_{|z|≤1} |f(z)|`.
    pub fn abs_coeff_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::add(self, rhs)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::add(self, &-rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        self.scale(c64(-1.0, 0.0))
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::mul(self, rhs)
    }
}

const UNIMODULAR_TOL: f64 = 1e-12;

pub(crate) fn check_unimodular(alpha: Complex64) -> Result<()> {
    if (alpha.norm() - 1.0).abs() > UNIMODULAR_TOL {
        return domain(format!("|alpha| must be 1, got {}", alpha.norm()));
    }
    Ok(())
}

pub(crate) fn check_in_disc(gamma: Complex64, what: &str) -> Result<()> {
    if !in_open_disc(gamma) || !gamma.re.is_finite() || !gamma.im.is_finite() {
        return domain(format!("{what} must lie in the open unit disc, got {gamma}"));
    }
    Ok(())
}

/// Taylor series of the disc automorphism `α (z − γ) / (1 − γ̄ z)`.
pub fn mobius_series(gamma: Complex64, alpha: Complex64, order: usize) -> Result<PowerSeries> {
    check_in_disc(gamma, "gamma")?;
    check_unimodular(alpha)?;
    let gbar = gamma.conj();
    let scale = alpha * (1.0 - gamma.norm_sqr());
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(-alpha * gamma);
    let mut g = c64(1.0, 0.0);
    for _ in 1..=order {
        coeffs.push(scale * g);
        g *= gbar;
    }
    PowerSeries::new(coeffs)
}

/// Taylor series of the reproducing kernel `k_γ(z) = (1 − γ̄ z)^{−s}`:
/// `c_n = γ̄^n / w_n`. With `normalized` the series is scaled by
/// `(1 − |γ|²)^{s/2}` so it has unit norm in `D_s`.
pub fn kernel_series(gamma: Complex64, s: SpaceParam, order: usize, normalized: bool) -> Result<PowerSeries> {
    check_in_disc(gamma, "gamma")?;
    let sv = s.value();
    let gbar = gamma.conj();
    let mut c = if normalized {
        c64((1.0 - gamma.norm_sqr()).powf(sv / 2.0), 0.0)
    } else {
        c64(1.0, 0.0)
    };
    let mut coeffs = Vec::with_capacity(order + 1);
    for n in 0..=order {
        coeffs.push(c);
        // 1/w_{n+1} = 1/w_n · (n+s)/(n+1)
        let nf = n as f64;
        c *= gbar * ((nf + sv) / (nf + 1.0));
    }
    PowerSeries::new(coeffs)
}
