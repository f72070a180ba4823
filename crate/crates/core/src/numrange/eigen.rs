//! Dense Hermitian eigensolver.
//!
//! The matrix is reduced to real symmetric tridiagonal form by Householder
//! reflections followed by a diagonal phase scaling, then diagonalized with
//! the implicit QL iteration (`tql2` from EISPACK/JAMA).

use num_complex::Complex64;

use crate::c64;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues in ascending order with the matching unit eigenvectors as
/// columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

struct Tridiagonal {
    n: usize,
    /// Householder vectors (unit norm), applied as `I − 2 u u*`.
    reflectors: Vec<Vec<Complex64>>,
    /// Phases making the off-diagonal real and nonnegative.
    phases: Vec<Complex64>,
    diag: Vec<f64>,
    /// `off[i]` couples `i` and `i+1`; `off[n-1] = 0`.
    off: Vec<f64>,
}

fn check_hermitian(h: &CMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::Shape(format!("{}x{} is not square", h.rows(), h.cols())));
    }
    let scale = h.as_slice().iter().map(|v| v.norm()).fold(1.0, f64::max);
    let dev = h.hermitian_deviation();
    if !(dev <= HERMITIAN_TOL * scale) {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

fn tridiagonalize(h: &CMatrix) -> Tridiagonal {
    let n = h.rows();
    let mut a = h.clone();
    let mut reflectors = Vec::new();

    for k in 0..n.saturating_sub(2) {
        let x0 = a[(k + 1, k)];
        let tail: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let sigma = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0.norm() == 0.0 { c64(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * sigma;

        let mut u = vec![c64(0.0, 0.0); n];
        u[k + 1] = x0 - alpha;
        for i in k + 2..n {
            u[i] = a[(i, k)];
        }
        let unorm = (2.0 * sigma * (sigma + x0.norm())).sqrt();
        for v in &mut u[k + 1..] {
            *v /= unorm;
        }

        // A ← A − 2 u w* − 2 w u*, with p = A u, K = u* p, w = p − K u
        let mut p = vec![c64(0.0, 0.0); n];
        for i in k..n {
            let row = a.row(i);
            p[i] = (k + 1..n).map(|j| row[j] * u[j]).sum();
        }
        let kk: f64 = (k + 1..n).map(|i| (u[i].conj() * p[i]).re).sum();
        let w: Vec<Complex64> = (0..n).map(|i| p[i] - kk * u[i]).collect();
        for i in k..n {
            for j in k..n {
                let d = 2.0 * (u[i] * w[j].conj() + w[i] * u[j].conj());
                if d.re != 0.0 || d.im != 0.0 {
                    a[(i, j)] -= d;
                }
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in k + 2..n {
            a[(i, k)] = c64(0.0, 0.0);
            a[(k, i)] = c64(0.0, 0.0);
        }
        reflectors.push(u);
    }

    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut off = vec![0.0; n];
    let mut phases = vec![c64(1.0, 0.0); n];
    for i in 0..n.saturating_sub(1) {
        let e = a[(i + 1, i)];
        let m = e.norm();
        off[i] = m;
        phases[i + 1] = if m == 0.0 { phases[i] } else { phases[i] * (e / m) };
    }
    Tridiagonal { n, reflectors, phases, diag, off }
}

impl Tridiagonal {
    /// Maps an eigenvector of the real tridiagonal matrix back to one of
    /// the original Hermitian matrix.
    fn back_transform(&self, z: &[f64]) -> Vec<Complex64> {
        let mut x: Vec<Complex64> = z.iter().zip(&self.phases).map(|(v, ph)| ph * *v).collect();
        for u in self.reflectors.iter().rev() {
            let d: Complex64 = u.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
            for (xi, ui) in x.iter_mut().zip(u) {
                *xi -= 2.0 * d * ui;
            }
        }
        x
    }
}

/// Symmetric tridiagonal QL with implicit shifts. `z` is column-major
/// (`z[i * n + k]` is component `k` of vector `i`) and starts as the
/// identity. On return `d` holds the eigenvalues in ascending order.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    let eps = f64::EPSILON;
    let max_iter = 30 * n.max(1);
    let mut f = 0.0;
    let mut tst1 = 0.0f64;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return Err(Error::NoConvergence);
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for k in 0..n {
                        let hk = zi1[k];
                        zi1[k] = s * zi[k] + c * hk;
                        zi[k] = c * zi[k] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // selection sort keeps the vector swaps simple
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        for j in i + 1..n {
            if d[j] < d[k] {
                k = j;
            }
        }
        if k != i {
            d.swap(i, k);
            for c in 0..n {
                z.swap(i * n + c, k * n + c);
            }
        }
    }
    Ok(())
}

fn solve(h: &CMatrix) -> Result<(Tridiagonal, Vec<f64>, Vec<f64>)> {
    check_hermitian(h)?;
    let t = tridiagonalize(h);
    let n = t.n;
    let mut d = t.diag.clone();
    let mut e = t.off.clone();
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql2(&mut d, &mut e, &mut z)?;
    Ok((t, d, z))
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigen(h: &CMatrix) -> Result<HermitianEigen> {
    let (t, d, z) = solve(h)?;
    let n = t.n;
    let mut vectors = CMatrix::zeros(n, n);
    for i in 0..n {
        vectors.set_column(i, &t.back_transform(&z[i * n..(i + 1) * n]));
    }
    Ok(HermitianEigen { values: d, vectors })
}

/// Largest eigenvalue and a unit eigenvector.
pub fn hermitian_top_eigenpair(h: &CMatrix) -> Result<(f64, Vec<Complex64>)> {
    let mut top = top_eigenpairs(h, 1)?;
    Ok(top.remove(0))
}

/// The `k` largest eigenpairs, largest first.
pub fn top_eigenpairs(h: &CMatrix, k: usize) -> Result<Vec<(f64, Vec<Complex64>)>> {
    let (t, d, z) = solve(h)?;
    let n = t.n;
    Ok((0..k.min(n))
        .map(|j| {
            let i = n - 1 - j;
            (d[i], t.back_transform(&z[i * n..(i + 1) * n]))
        })
        .collect())
}
