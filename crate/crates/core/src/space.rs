//! Hilbert-space structure of `D_s`: inner product, orthonormal basis and
//! the reproducing property.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{check_in_disc, kernel_series, PowerSeries};
use crate::special::SpaceParam;
use crate::c64;

/// A (truncated) element of `D_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceElement {
    pub series: PowerSeries,
    pub s: SpaceParam,
}

impl SpaceElement {
    pub fn new(series: PowerSeries, s: SpaceParam) -> Self {
        Self { series, s }
    }

    /// The reproducing kernel `k_γ`, truncated at `order`.
    pub fn kernel(gamma: Complex64, s: SpaceParam, order: usize) -> Result<Self> {
        Ok(Self::new(kernel_series(gamma, s, order, false)?, s))
    }

    /// The unit-norm kernel `k̂_γ = (1 − |γ|²)^{s/2} k_γ`, truncated at `order`.
    pub fn normalized_kernel(gamma: Complex64, s: SpaceParam, order: usize) -> Result<Self> {
        Ok(Self::new(kernel_series(gamma, s, order, true)?, s))
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn norm(&self) -> f64 {
        norm_sq(self).sqrt()
    }

    /// Coordinates in the orthonormal basis: `a_n √w_n`.
    pub fn basis_coords(&self) -> Vec<Complex64> {
        self.series
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, a)| a * self.s.weight(n).sqrt())
            .collect()
    }

    /// Inverse of [`SpaceElement::basis_coords`].
    pub fn from_basis_coords(coords: &[Complex64], s: SpaceParam) -> Result<Self> {
        let coeffs = coords.iter().enumerate().map(|(n, x)| x / s.weight(n).sqrt()).collect();
        Ok(Self::new(PowerSeries::new(coeffs)?, s))
    }
}

/// `⟨f, g⟩ = Σ w_n a_n conj(b_n)`, summed up to the shorter order (the
/// missing coefficients of the shorter element are zero).
pub fn inner_product(f: &SpaceElement, g: &SpaceElement) -> Result<Complex64> {
    if f.s != g.s {
        return Err(Error::MismatchedSpace(f.s.value(), g.s.value()));
    }
    let n = f.order().min(g.order());
    let mut acc = c64(0.0, 0.0);
    for k in 0..=n {
        acc += f.series.coeff(k) * g.series.coeff(k).conj() * f.s.weight(k);
    }
    Ok(acc)
}

fn norm_sq(f: &SpaceElement) -> f64 {
    f.series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| a.norm_sqr() * f.s.weight(n))
        .sum()
}

/// `e_n = z^n / √w_n`, truncated at `order`.
pub fn basis_element(n: usize, s: SpaceParam, order: usize) -> Result<SpaceElement> {
    if n > order {
        return Err(Error::IndexOutOfRange { index: n, order });
    }
    let c = c64(1.0 / s.weight(n).sqrt(), 0.0);
    Ok(SpaceElement::new(PowerSeries::monomial(n, c, order), s))
}

/// `⟨f, k_γ⟩`, which by the reproducing property equals `f(γ)`.
pub fn reproduce(f: &SpaceElement, gamma: Complex64) -> Result<Complex64> {
    check_in_disc(gamma, "gamma")?;
    let k = SpaceElement::kernel(gamma, f.s, f.order())?;
    inner_product(f, &k)
}

/// Upper bound for the kernel tail `Σ_{n>N} x^n / w_n` with `x = |γ z|`:
/// `x^{N+1} / ((1 − x) w_{N+1}) · (N + 2)`.
pub fn kernel_tail_bound(x: f64, s: SpaceParam, order: usize) -> f64 {
    let x = x.abs();
    if x >= 1.0 {
        return f64::INFINITY;
    }
    let n1 = order + 1;
    x.powi(n1 as i32) / ((1.0 - x) * s.weight(n1)) * (order as f64 + 2.0)
}

/// [`kernel_tail_bound`] for the pair `(γ, z)`.
pub fn tail(gamma: Complex64, z: Complex64, s: SpaceParam, order: usize) -> f64 {
    kernel_tail_bound((gamma * z).norm(), s, order)
}
