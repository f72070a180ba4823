//! One-sided convexity probing of sampled Berezin ranges.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use super::{blaschke_berezin_parts, BerezinPoint, BerezinSample};
use crate::c64;
use crate::error::Result;
use crate::numrange::hull::segment_distance;
use crate::series::check_in_disc;
use crate::special::SpaceParam;

/// Distance a midpoint must keep from the sampled range to count as a
/// violation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeTolerance {
    Fixed(f64),
    /// Multiple of the local mesh at the sample value nearest the midpoint.
    LocalMesh(f64),
}

impl Default for ProbeTolerance {
    fn default() -> Self {
        ProbeTolerance::LocalMesh(3.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeWitness {
    pub a: BerezinPoint,
    pub b: BerezinPoint,
    pub midpoint: Complex64,
    /// Distance from the midpoint to the sampled polyline network.
    pub distance: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConvexityVerdict {
    ConvexConsistent { pairs: usize },
    /// `witness` maximizes `distance / delta` over the violating pairs.
    Violated { pairs: usize, violations: usize, witness: ProbeWitness },
}

impl ConvexityVerdict {
    pub fn is_violated(&self) -> bool {
        matches!(self, ConvexityVerdict::Violated { .. })
    }
}

/// Uniform bucket grid over the bounding box of the sampled values.
struct BucketIndex {
    origin: Complex64,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl BucketIndex {
    fn new(bbox: (Complex64, Complex64), items: usize) -> Self {
        let (lo, hi) = bbox;
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-300);
        let per_side = ((items as f64).sqrt().ceil() as usize).clamp(1, 1024);
        let cell = span / per_side as f64;
        let nx = ((hi.re - lo.re) / cell) as usize + 1;
        let ny = ((hi.im - lo.im) / cell) as usize + 1;
        BucketIndex { origin: lo, cell, nx, ny, buckets: vec![Vec::new(); nx * ny] }
    }

    fn coord(&self, x: f64, lo: f64, n: usize) -> usize {
        (((x - lo) / self.cell).floor().max(0.0) as usize).min(n - 1)
    }

    fn cell_range(&self, lo: Complex64, hi: Complex64) -> (usize, usize, usize, usize) {
        (
            self.coord(lo.re, self.origin.re, self.nx),
            self.coord(hi.re, self.origin.re, self.nx),
            self.coord(lo.im, self.origin.im, self.ny),
            self.coord(hi.im, self.origin.im, self.ny),
        )
    }

    fn insert(&mut self, lo: Complex64, hi: Complex64, id: usize) {
        let (x0, x1, y0, y1) = self.cell_range(lo, hi);
        for y in y0..=y1 {
            for x in x0..=x1 {
                self.buckets[y * self.nx + x].push(id);
            }
        }
    }

    /// Ids stored in cells meeting the square of half-width `r` around `p`.
    fn query(&self, p: Complex64, r: f64, mut visit: impl FnMut(usize)) {
        let (x0, x1, y0, y1) = self.cell_range(p - c64(r, r), p + c64(r, r));
        for y in y0..=y1 {
            for x in x0..=x1 {
                self.buckets[y * self.nx + x].iter().for_each(|&id| visit(id));
            }
        }
    }
}

fn bounding_box(values: &[Complex64]) -> (Complex64, Complex64) {
    values.iter().fold(
        (c64(f64::INFINITY, f64::INFINITY), c64(f64::NEG_INFINITY, f64::NEG_INFINITY)),
        |(lo, hi), v| (c64(lo.re.min(v.re), lo.im.min(v.im)), c64(hi.re.max(v.re), hi.im.max(v.im))),
    )
}

/// Neighbour pairs of the regular grid: angular neighbours on each ring,
/// radial neighbours along each ray, and the origin joined to the first ring.
fn neighbour_pairs(sample: &BerezinSample) -> Vec<(usize, usize)> {
    let (r, k) = (sample.radial_count, sample.angular_count);
    let mut pairs = Vec::with_capacity(2 * r * k);
    for j in 1..=r {
        for a in 0..k {
            pairs.push((sample.index(j, a), sample.index(j, a + 1)));
            let inner = if j == 1 { 0 } else { sample.index(j - 1, a) };
            pairs.push((inner, sample.index(j, a)));
        }
    }
    pairs
}

/// Draws `pair_count` random pairs of regular-grid values and looks for a
/// midpoint farther than the tolerance from every sampled value and every
/// segment joining neighbouring samples. Only a violation is conclusive.
pub fn convexity_probe(sample: &BerezinSample, pair_count: usize, tolerance: ProbeTolerance, seed: u64) -> ConvexityVerdict {
    let n = sample.regular_len().min(sample.grid.len());
    let values: Vec<Complex64> = sample.grid[..n].iter().map(|p| p.value).collect();
    if n < 2 {
        return ConvexityVerdict::ConvexConsistent { pairs: 0 };
    }

    let pairs = neighbour_pairs(sample);
    let mut mesh = vec![0.0f64; n];
    for &(i, j) in &pairs {
        let d = (values[i] - values[j]).norm();
        mesh[i] = mesh[i].max(d);
        mesh[j] = mesh[j].max(d);
    }

    // distinct segments, keyed by endpoint bit patterns
    let key = |v: Complex64| (v.re.to_bits(), v.im.to_bits());
    let mut seen = HashSet::new();
    let mut segments: Vec<(Complex64, Complex64)> = Vec::new();
    for &(i, j) in &pairs {
        let (a, b) = (values[i], values[j]);
        let (ka, kb) = (key(a), key(b));
        if seen.insert(if ka <= kb { (ka, kb) } else { (kb, ka) }) {
            segments.push((a, b));
        }
    }
    let mut points_seen = HashSet::new();
    let distinct: Vec<usize> = (0..n).filter(|&i| points_seen.insert(key(values[i]))).collect();

    let bbox = bounding_box(&values);
    let mut point_index = BucketIndex::new(bbox, distinct.len());
    for &i in &distinct {
        point_index.insert(values[i], values[i], i);
    }
    let mut seg_index = BucketIndex::new(bbox, segments.len());
    for (id, &(a, b)) in segments.iter().enumerate() {
        seg_index.insert(c64(a.re.min(b.re), a.im.min(b.im)), c64(a.re.max(b.re), a.im.max(b.im)), id);
    }

    let nearest = |m: Complex64| -> (usize, f64) {
        let mut r = point_index.cell;
        loop {
            let mut best = (usize::MAX, f64::INFINITY);
            point_index.query(m, r, |i| {
                let d = (values[i] - m).norm();
                if d < best.1 {
                    best = (i, d);
                }
            });
            // the square of half-width r contains every point within r
            if best.1 <= r || r > 4.0 * (bbox.1 - bbox.0).norm() + 1.0 {
                return best;
            }
            r *= 2.0;
        }
    };
    let segment_distance_within = |m: Complex64, r: f64| -> f64 {
        let mut best = f64::INFINITY;
        seg_index.query(m, r, |id| best = best.min(segment_distance(m, segments[id].0, segments[id].1)));
        best
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut witness: Option<(f64, ProbeWitness)> = None;
    for _ in 0..pair_count {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let m = (values[i] + values[j]) / 2.0;
        let (near, near_d) = nearest(m);
        let delta = match tolerance {
            ProbeTolerance::Fixed(d) => d,
            ProbeTolerance::LocalMesh(factor) => factor * mesh[near],
        };
        if near_d <= delta || segment_distance_within(m, delta) <= delta {
            continue;
        }
        violations += 1;
        // segments have sample endpoints, so the nearest one lies within near_d
        let distance = segment_distance_within(m, near_d).min(near_d);
        let ratio = distance / delta;
        if witness.as_ref().is_none_or(|(r, _)| ratio > *r) {
            let w = ProbeWitness { a: sample.grid[i], b: sample.grid[j], midpoint: m, distance, delta };
            witness = Some((ratio, w));
        }
    }
    match witness {
        Some((_, witness)) => ConvexityVerdict::Violated { pairs: pair_count, violations, witness },
        None => ConvexityVerdict::ConvexConsistent { pairs: pair_count },
    }
}

/// A pair of Blaschke Berezin values `T̃(z)` and `T̃(z*) = conj T̃(z)`, where
/// `z*` is the reflection of `z` across the line through `0` and `γ`. Their
/// midpoint is real and below `(1 − |γ|)^s`, the least real value of the
/// range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorWitness {
    pub z: Complex64,
    pub mirror: Complex64,
    pub value: Complex64,
    pub mirror_value: Complex64,
    pub midpoint: Complex64,
    pub real_lower_bound: f64,
    /// `|T̃(z*) − conj T̃(z)|`
    pub conjugation_error: f64,
}

/// Searches a sample of the Blaschke Berezin range for the sample with the
/// smallest real part below `(1 − |γ|)^s` and pairs it with its mirror point.
/// Returns `None` when `γ = 0` or no sample qualifies.
pub fn blaschke_mirror_witness(gamma: Complex64, s: SpaceParam, sample: &BerezinSample) -> Result<Option<MirrorWitness>> {
    check_in_disc(gamma, "gamma")?;
    if gamma.norm() == 0.0 {
        return Ok(None);
    }
    let bound = (1.0 - gamma.norm()).powf(s.value());
    let Some(p) = sample
        .grid
        .iter()
        .filter(|p| p.value.re < bound)
        .min_by(|a, b| a.value.re.total_cmp(&b.value.re))
    else {
        return Ok(None);
    };
    let unit = gamma / gamma.norm();
    let mirror = unit * unit * p.z.conj();
    let parts = blaschke_berezin_parts(gamma, s, mirror)?;
    let mirror_value = c64(parts.re, parts.im);
    Ok(Some(MirrorWitness {
        z: p.z,
        mirror,
        value: p.value,
        mirror_value,
        midpoint: (p.value + mirror_value) / 2.0,
        real_lower_bound: bound,
        conjugation_error: (mirror_value - p.value.conj()).norm(),
    }))
}
