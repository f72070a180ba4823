//! Weighted composition operators on the weighted Dirichlet spaces `D_s`,
//! `0 < s < 1`.
//!
//! The crate builds truncated matrices of `C_{ψ,φ} f = ψ · (f ∘ φ)` in the
//! orthonormal monomial basis, computes numerical ranges by the rotation
//! method, evaluates Berezin transforms in closed form, and runs a battery of
//! quantitative checks against the predicted discs, ellipses and radii.

pub mod berezin;
pub mod error;
pub mod linalg;
pub mod numrange;
pub mod operator;
pub mod series;
pub mod space;
pub mod special;
pub mod verify;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use operator::{OperatorMatrix, OperatorSpec, PhiSymbol, PsiSymbol};
pub use series::PowerSeries;
pub use space::SpaceElement;
pub use special::SpaceParam;

/// `|z| < 1`
#[inline]
pub(crate) fn in_open_disc(z: Complex64) -> bool {
    z.norm_sqr() < 1.0
}

pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
