//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use dsrange::berezin::{berezin_grid, berezin_grid_fn, product_berezin, weyl_berezin, weyl_fixed_point, xgamma_berezin_quantities};
use dsrange::numrange::{boundary_sweep, boundary_sweep_refined, disc_from_vanishing_order, ellipse_2x2, hull, EllipseRegion};
use dsrange::operator::{build_matrix, weyl_operator};
use dsrange::verify::{run_all, Report, Status, TheoremCheck, VerifyConfig};
use dsrange::{CMatrix, Complex64, OperatorSpec, PhiSymbol, PowerSeries, PsiSymbol, SpaceParam};

type Outcome = (bool, String);

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sp(s: f64) -> SpaceParam {
    SpaceParam::new(s).unwrap()
}

fn weyl_gammas() -> [Complex64; 4] {
    [c(0.3, 0.0), c(0.5, 0.0), c(0.0, 0.5), Complex64::from_polar(0.7, PI / 4.0)]
}

const WEYL_S: [f64; 3] = [0.25, 0.5, 0.75];
const GRID: (usize, usize) = (64, 256);

fn weyl_radius() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_origin = 0.0f64;
    for s in WEYL_S {
        for g in weyl_gammas() {
            let spec = weyl_operator(g, ONE, sp(s), 8).unwrap();
            let sample = berezin_grid(&spec, GRID.0, GRID.1).unwrap();
            let expected = (1.0 - g.norm_sqr()).powf(s / 2.0);
            worst = worst.max((sample.radius_estimate - expected).abs());
            worst_origin = worst_origin.max((sample.grid[0].value.norm() - expected).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst <= 1e-10 && worst_origin <= 1e-10 && secs < 5.0,
        format!("max |radius - (1-|g|^2)^(s/2)| = {worst:.2e}, at z=0 {worst_origin:.2e}, {secs:.2} s (limit 5 s)"),
    )
}

fn weyl_reflection_range() -> Outcome {
    let (mut max_im, mut min_re, mut max_re, mut fixed_err) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for s in WEYL_S {
        for g in weyl_gammas() {
            let sample = berezin_grid_fn(|z| weyl_berezin(g, -ONE, sp(s), z), GRID.0, GRID.1).unwrap();
            for v in sample.values() {
                max_im = max_im.max(v.im.abs());
                min_re = min_re.min(v.re);
                max_re = max_re.max(v.re);
            }
            let zf = weyl_fixed_point(g).unwrap();
            fixed_err = fixed_err.max((weyl_berezin(g, -ONE, sp(s), zf).unwrap() - 1.0).norm());
        }
    }
    (
        max_im <= 1e-11 && min_re > 0.0 && max_re <= 1.0 + 1e-11 && fixed_err <= 1e-10,
        format!("max |im| = {max_im:.2e}, real parts in [{min_re:.4e}, {max_re:.12}], |value at fixed point - 1| <= {fixed_err:.2e}"),
    )
}

fn reverse_power() -> Outcome {
    let (g, s) = (c(0.5, 0.0), sp(0.5));
    let (bx, bx2) = xgamma_berezin_quantities(g, s).unwrap();
    let closed_ok = (bx - 1.861210).abs() < 5e-7 && (bx2 - 3.549193).abs() < 5e-7 && (bx * bx - 3.464102).abs() < 5e-7 && bx2 > bx * bx;

    let plus = weyl_operator(g, ONE, s, 8).unwrap();
    let minus = weyl_operator(-g, ONE, s, 8).unwrap();
    let x = berezin_grid_fn(|z| Ok(weyl_berezin(g, ONE, s, z)? + weyl_berezin(-g, ONE, s, z)?), GRID.0, GRID.1).unwrap();
    let x2 = berezin_grid_fn(
        |z| {
            let mut t = c(0.0, 0.0);
            for (l, r) in [(&plus, &plus), (&plus, &minus), (&minus, &plus), (&minus, &minus)] {
                t += product_berezin(l, r, z)?;
            }
            Ok(t)
        },
        GRID.0,
        GRID.1,
    )
    .unwrap();
    let grid_err = (x.radius_estimate - bx).abs().max((x2.radius_estimate - bx2).abs());

    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut min_gap = f64::INFINITY;
    for _ in 0..20 {
        let g = Complex64::from_polar(rng.gen_range(0.05..0.95), rng.gen_range(-PI..PI));
        let s = sp(rng.gen_range(0.05..0.95));
        let (a, b) = xgamma_berezin_quantities(g, s).unwrap();
        min_gap = min_gap.min(b - a * a);
    }
    (
        closed_ok && grid_err <= 1e-8 && min_gap > 0.0,
        format!("ber(X) = {bx:.6}, ber(X^2) = {bx2:.6} > ber(X)^2 = {:.6}, grid error {grid_err:.2e}, min gap over 20 random gamma {min_gap:.2e}", bx * bx),
    )
}

fn disc_vanishing_weight() -> Outcome {
    let start = Instant::now();
    let s = sp(0.5);
    let disc = disc_from_vanishing_order(2, s, ONE).unwrap();
    let spec = OperatorSpec::new(PsiSymbol::Series(PowerSeries::from_real(&[0.0, 0.0, 1.0]).unwrap()), PhiSymbol::Dilation(c(0.5, 0.0)), s, 64).unwrap();
    let curve = boundary_sweep(&build_matrix(&spec).unwrap().entries, 1024).unwrap();
    let min_depth = disc
        .shrink(0.999)
        .boundary_points(128)
        .into_iter()
        .map(|p| hull::signed_edge_distance(&curve.hull, p))
        .fold(f64::INFINITY, f64::min);
    let secs = start.elapsed().as_secs_f64();
    (
        (disc.radius - 8.0 / 11.0).abs() < 1e-14 && min_depth >= 1e-8 && secs < 30.0,
        format!("radius {:.6} (8/11), min margin {min_depth:.3e}, {secs:.2} s (limit 30 s)", disc.radius),
    )
}

fn with_id<'a>(report: &'a Report, id: &'a str) -> impl Iterator<Item = &'a TheoremCheck> + 'a {
    report.checks.iter().filter(move |c| c.id == id)
}

fn all_pass<'a>(checks: impl Iterator<Item = &'a TheoremCheck>) -> (bool, usize) {
    let mut n = 0;
    let mut ok = true;
    for c in checks {
        n += 1;
        ok &= c.status == Status::Pass;
    }
    (ok && n > 0, n)
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

fn dilation_discs(report: &Report) -> Outcome {
    let (contained, n) = all_pass(with_id(report, "T1.5"));
    let (compress, _) = all_pass(with_id(report, "T1.5.compression"));
    let mut floor_ok = true;
    let mut detail = Vec::new();
    for c in with_id(report, "T1.5.floor") {
        let mu = Complex64::new(num(&c.params["mu"][0]), num(&c.params["mu"][1]));
        let floor = mu.norm() * 0.3 / 3f64.sqrt();
        let w = num(&c.observed["numerical_radius"]);
        floor_ok &= w >= floor - 1e-8;
        detail.push(format!("w = {w:.6} >= {floor:.6}"));
    }
    (
        contained && compress && floor_ok && !detail.is_empty(),
        format!("{n} predicted discs contained, compressions exact, {}", detail.join(", ")),
    )
}

fn ellipses(report: &Report) -> Outcome {
    let (c7, n7) = all_pass(with_id(report, "T1.7"));
    let (c8, n8) = all_pass(with_id(report, "T1.8"));
    let mut diff = 0.0f64;
    let mut n = 0;
    for c in with_id(report, "T1.7.compression").chain(with_id(report, "T1.8.compression")) {
        diff = diff.max(num(&c.observed["max_entry_difference"]));
        n += 1;
    }
    (
        c7 && c8 && n == n7 + n8 && diff <= 1e-12,
        format!("{} ellipses contained, max compression entry difference {diff:.2e}", n7 + n8),
    )
}

/// Distance from points near the boundary of a convex CCW polygon to that
/// boundary: locate the edge crossed by the ray from an interior center and
/// scan the edges around it.
struct PolygonProbe<'a> {
    hull: &'a [Complex64],
    center: Complex64,
    /// Vertex angles about the center, rotated to start at the smallest.
    sorted: Vec<f64>,
    start: usize,
}

impl<'a> PolygonProbe<'a> {
    const WINDOW: usize = 64;

    fn new(hull: &'a [Complex64], center: Complex64) -> Self {
        let angles: Vec<f64> = hull.iter().map(|v| (v - center).arg()).collect();
        let start = (0..hull.len()).min_by(|&i, &j| angles[i].total_cmp(&angles[j])).unwrap();
        let sorted = (0..hull.len()).map(|i| angles[(start + i) % hull.len()]).collect();
        Self { hull, center, sorted, start }
    }

    fn distance(&self, p: Complex64) -> f64 {
        let n = self.hull.len();
        let theta = (p - self.center).arg();
        let k = self.sorted.partition_point(|&a| a <= theta);
        let base = (self.start + k + n - 1) % n;
        let w = Self::WINDOW.min(n);
        (0..2 * w)
            .map(|j| (base + n * 2 + j - w) % n)
            .map(|i| hull::segment_distance(p, self.hull[i], self.hull[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }
}

/// First-order distance to the ellipse through the focal-sum defect.
fn ellipse_distance(e: &EllipseRegion, p: Complex64) -> f64 {
    let (d1, d2) = (p - e.focus1, p - e.focus2);
    let defect = d1.norm() + d2.norm() - e.major_axis_len;
    let grad = d1 / d1.norm() + d2 / d2.norm();
    defect.abs() / grad.norm()
}

fn elliptical_range_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut refined = 0.0f64;
    let mut uniform = 0.0f64;
    // largest disagreement of the fast distances with exhaustive ones
    let mut shortcut_gap = 0.0f64;
    let mut unit = || c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    for trial in 0..500 {
        let (a, b, cc) = (unit(), unit(), unit());
        let m = CMatrix::from_rows(&[vec![a, c(0.0, 0.0)], vec![cc, b]]).unwrap();
        let e = ellipse_2x2(a, b, cc);
        let samples = e.boundary_points(4096);
        if trial < 5 {
            let h = boundary_sweep_refined(&m, 2048, 1e-7).unwrap().hull;
            let probe = PolygonProbe::new(&h, e.center());
            for p in samples.iter().step_by(16) {
                shortcut_gap = shortcut_gap.max((probe.distance(*p) - hull::boundary_distance(&h, *p)).abs());
            }
            for p in h.iter().step_by(32) {
                shortcut_gap = shortcut_gap.max((ellipse_distance(&e, *p) - e.boundary_distance(*p)).abs());
            }
        }
        let hausdorff = |h: &[Complex64]| {
            let probe = PolygonProbe::new(h, e.center());
            let to_hull = samples.iter().map(|p| probe.distance(*p)).fold(0.0, f64::max);
            let to_ellipse = h.iter().map(|p| ellipse_distance(&e, *p)).fold(0.0, f64::max);
            to_hull.max(to_ellipse)
        };
        refined = refined.max(hausdorff(&boundary_sweep_refined(&m, 2048, 1e-7).unwrap().hull));
        uniform = uniform.max(hausdorff(&boundary_sweep(&m, 2048).unwrap().hull));
    }
    (
        refined <= 1e-6 && shortcut_gap <= 1e-9,
        format!(
            "max two-sided Hausdorff {refined:.2e} (refined sweep from M=2048; uniform M=2048 alone: {uniform:.2e}; distance shortcut vs exhaustive {shortcut_gap:.1e})"
        ),
    )
}

fn zero_inclusion(report: &Report) -> Outcome {
    let mut min_depth = f64::INFINITY;
    let mut n = 0;
    let mut interior = true;
    for c in with_id(report, "T1.2").chain(with_id(report, "T1.3")) {
        interior &= c.observed["zero_interior"].as_bool() == Some(true);
        min_depth = min_depth.min(num(&c.observed["depth"]));
        n += 1;
    }
    let ex = with_id(report, "EX2.nonvanishing").next();
    let (min_mod, max_ratio, samples) = ex
        .map(|c| (num(&c.observed["min_modulus"]), num(&c.observed["max_zeta_over_eta"]), c.params["samples"].as_u64().unwrap_or(0)))
        .unwrap_or((f64::NAN, f64::NAN, 0));
    (
        n > 0 && interior && min_depth >= 1e-6 && min_mod > 0.05 && max_ratio <= 2.5 && samples == 100_000,
        format!("{n} instances with 0 interior, min depth {min_depth:.3e}; counterexample over {samples} samples: min |<Cf,f>| = {min_mod:.4}, max |zeta|/eta = {max_ratio:.4}"),
    )
}

fn convexity(report: &Report) -> Outcome {
    let mut ok = true;
    let mut counts = [0usize; 4];
    for c in with_id(report, "T1.12") {
        let xi = Complex64::new(num(&c.params["xi"][0]), num(&c.params["xi"][1]));
        let verdict = c.observed["probe"]["verdict"].as_str().unwrap_or("");
        if xi.im == 0.0 {
            ok &= verdict == "convex_consistent" && num(&c.observed["min_real"]) > 0.0 && num(&c.observed["max_real"]) <= 1.0 + 1e-11;
            ok &= num(&c.observed["max_abs_imag"]) <= 1e-11;
            counts[0] += 1;
        } else {
            ok &= verdict == "violated" && c.observed["probe"]["witness"].is_object();
            counts[1] += 1;
        }
    }
    for c in with_id(report, "T1.13").filter(|c| num(&c.params["gamma"][0]).hypot(num(&c.params["gamma"][1])) > 0.0) {
        ok &= c.status == Status::Pass && c.observed["mirror_witness"].is_object() && c.observed["probe"]["verdict"] == "violated";
        counts[2] += 1;
    }
    let mut excess = f64::NEG_INFINITY;
    for c in with_id(report, "L5.2") {
        excess = excess.max(num(&c.observed["max_confinement_excess"]));
        counts[3] += 1;
    }
    ok &= excess <= 1e-9 && counts.iter().all(|&n| n > 0);
    (
        ok,
        format!(
            "{} real dilations convex-consistent, {} nonreal and {} Blaschke ranges with violation witnesses, real-locus confinement excess {excess:.2e}",
            counts[0], counts[1], counts[2]
        ),
    )
}

fn structure(report: &Report) -> Outcome {
    let ids = ["S.orthonormality", "S.reproducing", "S.kernel-norm", "S.berezin-matrix", "S.weight-ratio"];
    let mut ok = true;
    for id in ids {
        ok &= all_pass(with_id(report, id)).0;
    }
    let get = |id: &str, key: &str| with_id(report, id).next().map(|c| num(&c.observed[key])).unwrap_or(f64::NAN);
    (
        ok,
        format!(
            "Gram deviation {:.1e}, reproducing excess over tail bound {:.1e}, matrix vs closed-form Berezin {:.1e}, w(r+p)/w(r) - 1 at r=1e6 {:.1e}",
            get("S.orthonormality", "max_gram_deviation"),
            get("S.reproducing", "max_excess_over_bound"),
            get("S.berezin-matrix", "max_error"),
            get("S.weight-ratio", "deviation_at_r_1e6"),
        ),
    )
}

fn determinism(first: &str, second: &str) -> Outcome {
    (first == second, format!("two default verify runs, {} bytes each, identical: {}", first.len(), first == second))
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut run = |n: usize, title: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {n:>2} {} {title}: {} [{secs:.1} s]", if outcome.0 { "PASS" } else { "FAIL" }, outcome.1);
        results.push((n, title, outcome, secs));
    };

    run(1, "Weyl Berezin radius", &mut weyl_radius);
    run(2, "Weyl reflection Berezin range", &mut weyl_reflection_range);
    run(3, "reverse power inequality", &mut reverse_power);
    run(4, "disc from vanishing weight", &mut disc_vanishing_weight);

    let start = Instant::now();
    let config = VerifyConfig::default();
    let report = run_all(&config).expect("default config is valid");
    println!("(default verify run: {} checks in {:.1} s)", report.checks.len(), start.elapsed().as_secs_f64());

    run(5, "dilation discs and radius floor", &mut || dilation_discs(&report));
    run(6, "ellipse containment and compressions", &mut || ellipses(&report));
    run(7, "2x2 elliptical range oracle", &mut elliptical_range_oracle);
    run(8, "zero inclusion and nonvanishing counterexample", &mut || zero_inclusion(&report));
    run(9, "convexity of dilation and Blaschke ranges", &mut || convexity(&report));
    run(10, "structural invariants", &mut || structure(&report));
    let first = report.to_json();
    run(11, "deterministic verify report", &mut || determinism(&first, &run_all(&config).unwrap().to_json()));

    let failed: Vec<usize> = results.iter().filter(|r| !r.2 .0).map(|r| r.0).collect();
    println!("acceptance: {}/{} criteria pass", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
