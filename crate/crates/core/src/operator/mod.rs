//! Weighted composition operators `C_{ψ,φ} f = ψ · (f ∘ φ)` and their
//! truncated matrices in the orthonormal basis `e_n = z^n / √w_n`.

mod descriptor;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use descriptor::{format_complex, parse_complex};

use crate::error::{domain, Error, Result};
use crate::linalg::CMatrix;
use crate::series::{check_in_disc, check_unimodular, kernel_series, mobius_series, PowerSeries};
use crate::space::SpaceElement;
use crate::special::{principal_power_unchecked, SpaceParam};
use crate::{c64, in_open_disc};

/// The composition symbol `φ`, a holomorphic self-map of the disc.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiSymbol {
    Identity,
    /// `φ ≡ v`, `|v| < 1`.
    Constant(Complex64),
    /// `φ(z) = λ z`, `|λ| ≤ 1`.
    Dilation(Complex64),
    /// `φ(z) = α (z − γ) / (1 − γ̄ z)`.
    Mobius { gamma: Complex64, alpha: Complex64 },
    /// A truncated series whose self-map property is attested by the caller
    /// through `sup_bound ≥ sup_{|z|<1} |φ(z)|`, which must not exceed 1.
    GeneralSeries { series: PowerSeries, sup_bound: f64 },
}

impl PhiSymbol {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Identity => Ok(()),
            Self::Constant(v) => check_in_disc(*v, "constant map value"),
            Self::Dilation(l) => {
                if l.norm() > 1.0 + 1e-12 || !l.re.is_finite() || !l.im.is_finite() {
                    return domain(format!("dilation factor must satisfy |lambda| <= 1, got {l}"));
                }
                Ok(())
            }
            Self::Mobius { gamma, alpha } => {
                check_in_disc(*gamma, "gamma")?;
                check_unimodular(*alpha)
            }
            Self::GeneralSeries { series, sup_bound } => {
                if !(*sup_bound <= 1.0) || *sup_bound < 0.0 {
                    return domain(format!("self-map attestation requires sup |phi| <= 1, got {sup_bound}"));
                }
                check_in_disc(series.coeff(0), "phi(0)")
            }
        }
    }

    /// `φ(z)`, in closed form where one exists.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Identity => z,
            Self::Constant(v) => *v,
            Self::Dilation(l) => l * z,
            Self::Mobius { gamma, alpha } => alpha * (z - gamma) / (1.0 - gamma.conj() * z),
            Self::GeneralSeries { series, .. } => series.eval_unchecked(z),
        }
    }

    /// Taylor series truncated at `order`.
    pub fn series(&self, order: usize) -> Result<PowerSeries> {
        Ok(match self {
            Self::Identity => PowerSeries::monomial(1, c64(1.0, 0.0), order),
            Self::Constant(v) => PowerSeries::constant(*v, order),
            Self::Dilation(l) => PowerSeries::monomial(1, *l, order),
            Self::Mobius { gamma, alpha } => mobius_series(*gamma, *alpha, order)?,
            Self::GeneralSeries { series, .. } => series.with_order(order),
        })
    }

    pub fn is_general_series(&self) -> bool {
        matches!(self, Self::GeneralSeries { .. })
    }
}

/// The weight `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub enum PsiSymbol {
    One,
    Series(PowerSeries),
    /// `ψ = k̂_γ`, the normalized kernel of the ambient space.
    NormalizedKernel(Complex64),
}

impl PsiSymbol {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::NormalizedKernel(g) => check_in_disc(*g, "kernel point"),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, z: Complex64, s: SpaceParam) -> Complex64 {
        match self {
            Self::One => c64(1.0, 0.0),
            Self::Series(p) => p.eval_unchecked(z),
            Self::NormalizedKernel(g) => {
                let sv = s.value();
                let scale = (1.0 - g.norm_sqr()).powf(sv / 2.0);
                scale / principal_power_unchecked(1.0 - g.conj() * z, sv)
            }
        }
    }

    pub fn series(&self, s: SpaceParam, order: usize) -> Result<PowerSeries> {
        match self {
            Self::One => Ok(PowerSeries::one(order)),
            Self::Series(p) => Ok(p.with_order(order)),
            Self::NormalizedKernel(g) => kernel_series(*g, s, order, true),
        }
    }
}

/// A weighted composition operator on `D_s` together with the truncation
/// order used for its matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    pub psi: PsiSymbol,
    pub phi: PhiSymbol,
    pub s: SpaceParam,
    pub order: usize,
}

impl OperatorSpec {
    pub fn new(psi: PsiSymbol, phi: PhiSymbol, s: SpaceParam, order: usize) -> Result<Self> {
        psi.validate()?;
        phi.validate()?;
        if order == 0 {
            return domain("truncation order must be at least 1");
        }
        Ok(Self { psi, phi, s, order })
    }

    pub fn psi_at(&self, z: Complex64) -> Complex64 {
        self.psi.eval(z, self.s)
    }

    pub fn phi_at(&self, z: Complex64) -> Complex64 {
        self.phi.eval(z)
    }
}

/// The `(N+1) × (N+1)` matrix `A[m][r] = ⟨C e_r, e_m⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: CMatrix,
    pub s: SpaceParam,
    pub order: usize,
    /// The operators whose sum this matrix represents.
    pub terms: Vec<OperatorSpec>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.order + 1
    }

    /// JSON dump `{s, N, psi, phi, entries}` with row-major `[re, im]` pairs.
    pub fn dump(&self) -> MatrixDump {
        let join = |f: &dyn Fn(&OperatorSpec) -> String| {
            self.terms.iter().map(f).collect::<Vec<_>>().join(" + ")
        };
        MatrixDump {
            s: self.s.value(),
            n: self.order,
            psi: join(&|t| t.psi.to_string()),
            phi: join(&|t| t.phi.to_string()),
            entries: self.entries.as_slice().iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub s: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub psi: String,
    pub phi: String,
    pub entries: Vec<[f64; 2]>,
}

/// Builds `A[m][r] = c_m(ψ φ^r) √(w_m / w_r)` for `m, r ≤ N`.
///
/// Truncating every product at degree `N` leaves the coefficients of degree
/// `≤ N` exact, so the result is the exact compression of the operator to
/// `span{e_0, …, e_N}`.
pub fn build_matrix(spec: &OperatorSpec) -> Result<OperatorMatrix> {
    let n = spec.order;
    let psi = spec.psi.series(spec.s, n)?;
    let phi = spec.phi.series(n)?;
    let half_ln_w: Vec<f64> = spec.s.ln_weights(n).into_iter().map(|l| 0.5 * l).collect();

    let mut a = CMatrix::zeros(n + 1, n + 1);
    let mut col = psi;
    for r in 0..=n {
        for m in 0..=n {
            let c = col.coeff(m);
            if c.re != 0.0 || c.im != 0.0 {
                a[(m, r)] = c * (half_ln_w[m] - half_ln_w[r]).exp();
            }
        }
        if r < n {
            col = col.mul_truncated(&phi, n);
        }
    }
    Ok(OperatorMatrix { entries: a, s: spec.s, order: n, terms: vec![spec.clone()] })
}

/// `C* k_z = conj(ψ(z)) k_{φ(z)}`, truncated at the spec's order.
pub fn adjoint_kernel_action(spec: &OperatorSpec, z: Complex64) -> Result<SpaceElement> {
    check_in_disc(z, "z")?;
    let w = spec.phi_at(z);
    if !in_open_disc(w) {
        return domain(format!("phi(z) = {w} leaves the open disc"));
    }
    let k = kernel_series(w, spec.s, spec.order, false)?;
    Ok(SpaceElement::new(k.scale(spec.psi_at(z).conj()), spec.s))
}

/// The Weyl-type operator with weight `k̂_γ` and symbol `α (z − γ)/(1 − γ̄ z)`.
/// At `γ = 0` the weight is `1` and the symbol is the rotation `α z`.
pub fn weyl_operator(gamma: Complex64, alpha: Complex64, s: SpaceParam, order: usize) -> Result<OperatorSpec> {
    check_in_disc(gamma, "gamma")?;
    check_unimodular(alpha)?;
    if gamma == Complex64::new(0.0, 0.0) {
        let phi = if alpha == c64(1.0, 0.0) { PhiSymbol::Identity } else { PhiSymbol::Dilation(alpha) };
        return OperatorSpec::new(PsiSymbol::One, phi, s, order);
    }
    OperatorSpec::new(PsiSymbol::NormalizedKernel(gamma), PhiSymbol::Mobius { gamma, alpha }, s, order)
}

/// Matrix of `X_γ = C_{k̂_γ, φ_{γ,1}} + C_{k̂_{−γ}, φ_{−γ,1}}`.
pub fn xgamma_operator(gamma: Complex64, s: SpaceParam, order: usize) -> Result<OperatorMatrix> {
    let one = c64(1.0, 0.0);
    let plus = build_matrix(&weyl_operator(gamma, one, s, order)?)?;
    let minus = build_matrix(&weyl_operator(-gamma, one, s, order)?)?;
    Ok(OperatorMatrix {
        entries: plus.entries.add(&minus.entries)?,
        s,
        order,
        terms: vec![plus.terms[0].clone(), minus.terms[0].clone()],
    })
}

/// The principal submatrix of `A` on the basis vectors `e_i`, `i ∈ indices`,
/// in the given order.
pub fn compression(a: &OperatorMatrix, indices: &[usize]) -> Result<CMatrix> {
    for (k, &i) in indices.iter().enumerate() {
        if i > a.order {
            return Err(Error::IndexOutOfRange { index: i, order: a.order });
        }
        if indices[..k].contains(&i) {
            return domain(format!("compression indices must be distinct, {i} repeats"));
        }
    }
    Ok(a.entries.principal_submatrix(indices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{basis_element, inner_product};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sp(s: f64) -> SpaceParam {
        SpaceParam::new(s).unwrap()
    }

    fn series(c: &[f64]) -> PowerSeries {
        PowerSeries::from_real(c).unwrap()
    }

    #[test]
    fn identity_operator_gives_identity_matrix() {
        let spec = OperatorSpec::new(PsiSymbol::One, PhiSymbol::Identity, sp(0.4), 12).unwrap();
        let a = build_matrix(&spec).unwrap();
        assert!(a.entries.max_abs_diff(&CMatrix::identity(13)).unwrap() < 1e-14);
    }

    #[test]
    fn rank_one_multiplication_example() {
        let spec = OperatorSpec::new(
            PsiSymbol::Series(series(&[0.0, 1.0])),
            PhiSymbol::Constant(c64(0.0, 0.0)),
            sp(0.5),
            6,
        )
        .unwrap();
        let a = build_matrix(&spec).unwrap().entries;
        for m in 0..7 {
            for r in 0..7 {
                let want = if (m, r) == (1, 0) { 2f64.sqrt() } else { 0.0 };
                assert!((a[(m, r)] - want).norm() < 1e-14, "({m},{r})");
            }
        }
    }

    #[test]
    fn dilation_matrix_is_diagonal() {
        let lam = c64(0.3, -0.5);
        let spec = OperatorSpec::new(PsiSymbol::One, PhiSymbol::Dilation(lam), sp(0.5), 10).unwrap();
        let a = build_matrix(&spec).unwrap().entries;
        let want = CMatrix::diag(&(0..=10).map(|r| lam.powu(r)).collect::<Vec<_>>());
        assert!(a.max_abs_diff(&want).unwrap() < 1e-15);
    }

    #[test]
    fn dilation_with_weight_is_lower_triangular() {
        let lam = c64(0.6, 0.2);
        let psi = series(&[0.7, -0.2, 0.5, 0.1]);
        let spec = OperatorSpec::new(PsiSymbol::Series(psi), PhiSymbol::Dilation(lam), sp(0.3), 16).unwrap();
        let a = build_matrix(&spec).unwrap().entries;
        for m in 0..17 {
            for r in 0..17 {
                if r > m {
                    assert_eq!(a[(m, r)], c64(0.0, 0.0));
                }
            }
            assert!((a[(m, m)] - 0.7 * lam.powu(m as u32)).norm() < 1e-14);
        }
    }

    #[test]
    fn matrix_columns_are_images_of_basis_vectors() {
        // column r must equal the e-coordinates of ψ · φ^r / √w_r computed directly
        let s = sp(0.6);
        let psi = series(&[0.2, 0.5, -0.3]);
        let phi = PhiSymbol::Mobius { gamma: c64(0.2, 0.3), alpha: Complex64::from_polar(1.0, 0.7) };
        let spec = OperatorSpec::new(PsiSymbol::Series(psi.clone()), phi.clone(), s, 20).unwrap();
        let a = build_matrix(&spec).unwrap().entries;
        let phis = phi.series(20).unwrap();
        for r in [0u32, 1, 5, 13, 20] {
            let img = psi.with_order(20).mul(&phis.pow(r)).scale(c64(1.0 / s.weight(r as usize).sqrt(), 0.0));
            let coords = SpaceElement::new(img, s).basis_coords();
            for m in 0..=20 {
                assert!((a[(m, r as usize)] - coords[m]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn matrix_entries_are_inner_products() {
        // A[m][r] = ⟨C e_r, e_m⟩ for the Möbius case
        let s = sp(0.5);
        let spec = weyl_operator(c64(0.3, 0.1), c64(0.0, 1.0), s, 14).unwrap();
        let a = build_matrix(&spec).unwrap().entries;
        let psi = spec.psi.series(s, 14).unwrap();
        let phi = spec.phi.series(14).unwrap();
        for r in 0..=14 {
            let ce = SpaceElement::new(
                psi.mul(&phi.pow(r as u32)).scale(c64(1.0 / s.weight(r).sqrt(), 0.0)),
                s,
            );
            for m in 0..=14 {
                let ip = inner_product(&ce, &basis_element(m, s, 14).unwrap()).unwrap();
                assert!((a[(m, r)] - ip).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn adjoint_action_examples() {
        let s = sp(0.5);
        let id = OperatorSpec::new(PsiSymbol::One, PhiSymbol::Identity, s, 40).unwrap();
        let got = adjoint_kernel_action(&id, c64(0.3, 0.0)).unwrap();
        assert_eq!(got, SpaceElement::kernel(c64(0.3, 0.0), s, 40).unwrap());

        let zpsi = OperatorSpec::new(PsiSymbol::Series(series(&[0.0, 1.0])), PhiSymbol::Dilation(c64(0.5, 0.0)), s, 10).unwrap();
        let got = adjoint_kernel_action(&zpsi, c64(0.0, 0.0)).unwrap();
        assert!(got.series.coeffs().iter().all(|c| c.norm() == 0.0));
        assert!(adjoint_kernel_action(&id, c64(1.0, 0.0)).is_err());
    }

    #[test]
    fn adjoint_action_reproduces_weighted_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = sp(0.45);
        let spec = OperatorSpec::new(
            PsiSymbol::Series(series(&[1.0, 0.5, -0.25])),
            PhiSymbol::Mobius { gamma: c64(0.25, -0.1), alpha: c64(0.0, -1.0) },
            s,
            200,
        )
        .unwrap();
        for _ in 0..50 {
            let f = PowerSeries::from_fn(10, |_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).unwrap();
            let z = Complex64::from_polar(rng.gen_range(0.0..0.5), rng.gen_range(-3.0..3.0));
            let f = SpaceElement::new(f, s);
            let lhs = inner_product(&f, &adjoint_kernel_action(&spec, z).unwrap()).unwrap();
            let rhs = spec.psi_at(z) * f.series.eval(spec.phi_at(z)).unwrap();
            assert!((lhs - rhs).norm() < 1e-11);
        }
    }

    #[test]
    fn weyl_operator_examples() {
        let s = sp(0.5);
        let id = weyl_operator(c64(0.0, 0.0), c64(1.0, 0.0), s, 8).unwrap();
        assert_eq!((id.psi.clone(), id.phi.clone()), (PsiSymbol::One, PhiSymbol::Identity));
        let neg = weyl_operator(c64(0.0, 0.0), c64(-1.0, 0.0), s, 8).unwrap();
        assert_eq!(neg.phi, PhiSymbol::Dilation(c64(-1.0, 0.0)));
        assert_eq!(neg.psi, PsiSymbol::One);

        let w = weyl_operator(c64(0.5, 0.0), c64(1.0, 0.0), s, 8).unwrap();
        let psi = w.psi.series(s, 8).unwrap();
        assert!((psi.coeff(0).re - 0.930_605).abs() < 1e-6);
        assert!((psi.coeff(1).re - 0.232_651).abs() < 1e-6);
        // column 0 is ψ in e-coordinates
        let a = build_matrix(&w).unwrap().entries;
        for m in 0..=8 {
            assert!((a[(m, 0)] - psi.coeff(m) * s.weight(m).sqrt()).norm() < 1e-14);
        }
        assert!(weyl_operator(c64(1.0, 0.0), c64(1.0, 0.0), s, 8).is_err());
        assert!(weyl_operator(c64(0.5, 0.0), c64(0.5, 0.0), s, 8).is_err());
    }

    #[test]
    fn xgamma_at_zero_is_twice_identity() {
        let x = xgamma_operator(c64(0.0, 0.0), sp(0.5), 10).unwrap();
        assert!(x.entries.max_abs_diff(&CMatrix::identity(11).scale(c64(2.0, 0.0))).unwrap() < 1e-15);
    }

    /// Max entry difference over the leading `k × k` block, where truncation
    /// effects of matrix products have not yet reached.
    fn leading_block_diff(a: &CMatrix, b: &CMatrix, k: usize) -> f64 {
        let idx: Vec<usize> = (0..k).collect();
        a.principal_submatrix(&idx).max_abs_diff(&b.principal_submatrix(&idx)).unwrap()
    }

    #[test]
    fn weyl_square_law() {
        for (g, sv) in [(c64(0.3, 0.0), 0.5), (c64(0.2, 0.3), 0.25), (c64(-0.4, 0.1), 0.75)] {
            let s = sp(sv);
            let n = 160;
            let one = c64(1.0, 0.0);
            let c = build_matrix(&weyl_operator(g, one, s, n).unwrap()).unwrap().entries;
            let c2 = c.matmul(&c).unwrap();
            let g2 = 2.0 * g / (1.0 + g.norm_sqr());
            let direct = build_matrix(&weyl_operator(g2, one, s, n).unwrap()).unwrap().entries;
            assert!(leading_block_diff(&c2, &direct, 24) < 1e-9, "gamma={g}");
        }
    }

    #[test]
    fn weyl_pair_is_mutually_inverse() {
        let s = sp(0.5);
        let g = c64(0.35, -0.2);
        let n = 160;
        let one = c64(1.0, 0.0);
        let cp = build_matrix(&weyl_operator(g, one, s, n).unwrap()).unwrap().entries;
        let cm = build_matrix(&weyl_operator(-g, one, s, n).unwrap()).unwrap().entries;
        let prod = cp.matmul(&cm).unwrap();
        assert!(leading_block_diff(&prod, &CMatrix::identity(n + 1), 24) < 1e-9);

        // hence X² = C_γ² + C_{−γ}² + 2I on the leading block
        let x = xgamma_operator(g, s, n).unwrap().entries;
        let x2 = x.matmul(&x).unwrap();
        let rhs = cp
            .matmul(&cp)
            .unwrap()
            .add(&cm.matmul(&cm).unwrap())
            .unwrap()
            .add(&CMatrix::identity(n + 1).scale(c64(2.0, 0.0)))
            .unwrap();
        assert!(leading_block_diff(&x2, &rhs, 24) < 1e-9);
    }

    #[test]
    fn compression_examples() {
        let s = sp(0.5);
        let spec = OperatorSpec::new(PsiSymbol::Series(series(&[0.5, 1.0, 0.25])), PhiSymbol::Dilation(c64(0.5, 0.0)), s, 10).unwrap();
        let a = build_matrix(&spec).unwrap();
        let all: Vec<usize> = (0..=10).collect();
        assert_eq!(compression(&a, &all).unwrap(), a.entries);
        assert!(compression(&a, &[1, 11]).is_err());
        assert!(compression(&a, &[2, 2]).is_err());
    }

    #[test]
    fn compression_on_first_and_rth_basis_vectors() {
        // ψ = Σ_{n≥1} b_n z^n, φ = μ z: the block on {e_1, e_r} is
        // [[0, 0], [√(Γ(r+1)Γ(s+1)/Γ(r+s)) μ b_{r−1}, 0]]
        let s = sp(0.5);
        let mu = Complex64::from_polar(1.0, 1.0);
        let b = [0.0, 0.3, -0.7, 0.2, 0.9, 0.4];
        let spec = OperatorSpec::new(PsiSymbol::Series(series(&b)), PhiSymbol::Dilation(mu), s, 20).unwrap();
        let a = build_matrix(&spec).unwrap();
        for r in 2..=6usize {
            let block = compression(&a, &[1, r]).unwrap();
            let factor = (s.ln_weight(r) - s.ln_weight(1)).exp().sqrt();
            let want = factor * mu * b.get(r - 1).copied().unwrap_or(0.0);
            assert_eq!(block[(0, 0)], c64(0.0, 0.0));
            assert_eq!(block[(0, 1)], c64(0.0, 0.0));
            assert_eq!(block[(1, 1)], c64(0.0, 0.0));
            assert!((block[(1, 0)] - want).norm() < 1e-13);
        }
    }

    #[test]
    fn symbol_validation() {
        let s = sp(0.5);
        assert!(OperatorSpec::new(PsiSymbol::One, PhiSymbol::Constant(c64(1.0, 0.0)), s, 4).is_err());
        assert!(OperatorSpec::new(PsiSymbol::One, PhiSymbol::Dilation(c64(1.0, 0.1)), s, 4).is_err());
        assert!(OperatorSpec::new(PsiSymbol::One, PhiSymbol::Dilation(c64(0.0, -1.0)), s, 4).is_ok());
        let bad = PhiSymbol::GeneralSeries { series: series(&[0.0, 1.0]), sup_bound: 1.5 };
        assert!(OperatorSpec::new(PsiSymbol::One, bad, s, 4).is_err());
        assert!(OperatorSpec::new(PsiSymbol::NormalizedKernel(c64(0.0, 1.0)), PhiSymbol::Identity, s, 4).is_err());
        assert!(OperatorSpec::new(PsiSymbol::One, PhiSymbol::Identity, s, 0).is_err());
    }
}
