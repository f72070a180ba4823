//! Polar grid sampling of Berezin ranges.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::berezin_transform;
use crate::error::{Error, Result};
use crate::operator::OperatorSpec;
use crate::{c64, in_open_disc};

/// Rounds of 3×3 stencil refinement around the grid maximizer.
pub const REFINE_ROUNDS: usize = 4;
/// Relative margin a later point needs to displace the current maximizer, so
/// rounding noise does not move it off an earlier (exact) attainment point.
const TIE_RTOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerezinPoint {
    pub z: Complex64,
    pub value: Complex64,
}

/// Values of a Berezin transform on `z = 0` followed by the polar grid
/// `(j/(R+1)) e^{2πik/K}` in radial-major order, then the refinement points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerezinSample {
    pub grid: Vec<BerezinPoint>,
    pub radial_count: usize,
    pub angular_count: usize,
    pub radius_estimate: f64,
    pub maximizer: Complex64,
}

impl BerezinSample {
    /// Number of points on the regular grid (origin included).
    pub fn regular_len(&self) -> usize {
        1 + self.radial_count * self.angular_count
    }

    /// Index of grid point `(j, k)` with `1 ≤ j ≤ R`.
    pub fn index(&self, j: usize, k: usize) -> usize {
        1 + (j - 1) * self.angular_count + k % self.angular_count
    }

    pub fn values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.grid.iter().map(|p| p.value)
    }
}

/// Samples `T̃` for `C_{ψ,φ}` on the polar grid.
pub fn berezin_grid(spec: &OperatorSpec, radial_count: usize, angular_count: usize) -> Result<BerezinSample> {
    berezin_grid_fn(|z| berezin_transform(spec, z), radial_count, angular_count)
}

/// Samples an arbitrary function of the disc on the polar grid and refines
/// the modulus maximum with [`REFINE_ROUNDS`] rounds of a shrinking 3×3
/// stencil.
pub fn berezin_grid_fn<F>(f: F, radial_count: usize, angular_count: usize) -> Result<BerezinSample>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if radial_count < 4 || angular_count < 8 {
        return Err(Error::Config(format!(
            "grid resolution must satisfy R >= 4 and K >= 8, got R={radial_count}, K={angular_count}"
        )));
    }
    let step = 1.0 / (radial_count + 1) as f64;
    let mut zs = Vec::with_capacity(1 + radial_count * angular_count);
    zs.push(c64(0.0, 0.0));
    for j in 1..=radial_count {
        for k in 0..angular_count {
            zs.push(Complex64::from_polar(j as f64 * step, 2.0 * PI * k as f64 / angular_count as f64));
        }
    }
    let values: Vec<Complex64> = zs.par_iter().map(|&z| f(z)).collect::<Result<_>>()?;
    let mut grid: Vec<BerezinPoint> = zs.into_iter().zip(values).map(|(z, value)| BerezinPoint { z, value }).collect();

    let mut best = argmax(&grid);
    let mut h = step;
    for _ in 0..REFINE_ROUNDS {
        h /= 2.0;
        let center = grid[best].z;
        let cands: Vec<Complex64> = (-1..=1)
            .flat_map(|a| (-1..=1).map(move |b| center + c64(a as f64 * h, b as f64 * h)))
            .filter(|&z| z != center && in_open_disc(z))
            .collect();
        for z in cands {
            grid.push(BerezinPoint { z, value: f(z)? });
            if beats(grid.last().unwrap().value.norm(), grid[best].value.norm()) {
                best = grid.len() - 1;
            }
        }
    }
    Ok(BerezinSample {
        radius_estimate: grid[best].value.norm(),
        maximizer: grid[best].z,
        grid,
        radial_count,
        angular_count,
    })
}

fn beats(candidate: f64, best: f64) -> bool {
    candidate > best * (1.0 + TIE_RTOL)
}

/// First index of maximal modulus, up to [`TIE_RTOL`].
fn argmax(grid: &[BerezinPoint]) -> usize {
    let mut best = 0;
    for (i, p) in grid.iter().enumerate() {
        if beats(p.value.norm(), grid[best].value.norm()) {
            best = i;
        }
    }
    best
}
