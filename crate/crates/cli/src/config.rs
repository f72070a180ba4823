//! Run configuration: a line-oriented `key = value` file with `[section]`
//! headers.
//!
//! ```text
//! s = 0.5
//! N = 64
//! psi = series 0,0,1
//! phi = dilation lambda=0.5
//! seed = 20240601
//!
//! [sweep]
//! angles = 1024
//!
//! [grid]
//! radial = 64
//! angular = 256
//!
//! [verify]
//! suites = weyl,convexity
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Unknown keys are
//! errors.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use dsrange::numrange::MIN_ANGLES;
use dsrange::verify::{Suite, VerifyConfig};
use dsrange::{PhiSymbol, PsiSymbol, SpaceParam};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub s: f64,
    pub order: usize,
    pub psi: PsiSymbol,
    pub phi: PhiSymbol,
    pub angles: usize,
    pub grid_radial: usize,
    pub grid_angular: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub matrix_file: String,
    pub boundary_file: String,
    pub hull_file: String,
    pub berezin_file: String,
    pub report_file: String,
    pub suites: Vec<Suite>,
    pub probe_pairs: usize,
    pub counterexample_samples: usize,
    pub berezin_order: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let v = VerifyConfig::default();
        Self {
            s: v.s,
            order: v.order,
            psi: PsiSymbol::One,
            phi: PhiSymbol::Identity,
            angles: v.angles,
            grid_radial: v.grid_radial,
            grid_angular: v.grid_angular,
            seed: v.seed,
            out_dir: PathBuf::from("."),
            matrix_file: "matrix.json".into(),
            boundary_file: "boundary.csv".into(),
            hull_file: "hull.csv".into(),
            berezin_file: "berezin.csv".into(),
            report_file: "report.json".into(),
            suites: v.suites,
            probe_pairs: v.probe_pairs,
            counterexample_samples: v.counterexample_samples,
            berezin_order: v.berezin_order,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| invalid(format!("{key}: cannot parse {value:?}")))
}

/// Parses `a,b,c` suite lists; an empty value selects no suite.
pub fn parse_suites(value: &str) -> Result<Vec<Suite>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Suite>().map_err(|e| invalid(e.to_string())))
        .collect()
}

/// Parses `R,K`.
pub fn parse_grid(value: &str) -> Result<(usize, usize), CliError> {
    let (r, k) = value.split_once(',').ok_or_else(|| invalid(format!("grid: expected R,K, got {value:?}")))?;
    Ok((number("grid radial", r.trim())?, number("grid angular", k.trim())?))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |msg: String| invalid(format!("line {}: {msg}", lineno + 1));
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                if !matches!(section.as_str(), "sweep" | "grid" | "output" | "verify") {
                    return Err(at(format!("unknown section [{section}]")));
                }
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| at(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            cfg.set(&section, key, value).map_err(|e| at(e.to_string()))?;
        }
        Ok(cfg)
    }

    fn set(&mut self, section: &str, key: &str, value: &str) -> Result<(), CliError> {
        match (section, key) {
            ("", "s") => self.s = number(key, value)?,
            ("", "N") => self.order = number(key, value)?,
            ("", "psi") => self.psi = value.parse().map_err(|e: dsrange::Error| invalid(format!("psi: {e}")))?,
            ("", "phi") => self.phi = value.parse().map_err(|e: dsrange::Error| invalid(format!("phi: {e}")))?,
            ("", "seed") => self.seed = number(key, value)?,
            ("sweep", "angles") => self.angles = number(key, value)?,
            ("grid", "radial") => self.grid_radial = number(key, value)?,
            ("grid", "angular") => self.grid_angular = number(key, value)?,
            ("output", "dir") => self.out_dir = PathBuf::from(value),
            ("output", "matrix") => self.matrix_file = value.into(),
            ("output", "boundary") => self.boundary_file = value.into(),
            ("output", "hull") => self.hull_file = value.into(),
            ("output", "berezin") => self.berezin_file = value.into(),
            ("output", "report") => self.report_file = value.into(),
            ("verify", "suites") => self.suites = parse_suites(value)?,
            ("verify", "probe_pairs") => self.probe_pairs = number(key, value)?,
            ("verify", "counterexample_samples") => self.counterexample_samples = number(key, value)?,
            ("verify", "berezin_order") => self.berezin_order = number(key, value)?,
            _ => {
                let place = if section.is_empty() { "top level".to_string() } else { format!("[{section}]") };
                return Err(invalid(format!("unknown key {key:?} at {place}")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        SpaceParam::new(self.s).map_err(|e| invalid(e.to_string()))?;
        if self.order < 8 {
            return Err(invalid(format!("N must be at least 8, got {}", self.order)));
        }
        if self.angles < MIN_ANGLES {
            return Err(invalid(format!("angles must be at least {MIN_ANGLES}, got {}", self.angles)));
        }
        if self.grid_radial < 4 || self.grid_angular < 8 {
            return Err(invalid(format!("grid must satisfy R >= 4 and K >= 8, got {},{}", self.grid_radial, self.grid_angular)));
        }
        self.psi.validate().map_err(|e| invalid(e.to_string()))?;
        self.phi.validate().map_err(|e| invalid(e.to_string()))?;
        Ok(())
    }

    pub fn space(&self) -> SpaceParam {
        SpaceParam::new(self.s).expect("validated")
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            s: self.s,
            order: self.order,
            angles: self.angles,
            grid_radial: self.grid_radial,
            grid_angular: self.grid_angular,
            seed: self.seed,
            probe_pairs: self.probe_pairs,
            counterexample_samples: self.counterexample_samples,
            berezin_order: self.berezin_order,
            suites: self.suites.clone(),
            ..VerifyConfig::default()
        }
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "s = {}", self.s)?;
        writeln!(f, "N = {}", self.order)?;
        writeln!(f, "psi = {}", self.psi)?;
        writeln!(f, "phi = {}", self.phi)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "\n[sweep]\nangles = {}", self.angles)?;
        writeln!(f, "\n[grid]\nradial = {}\nangular = {}", self.grid_radial, self.grid_angular)?;
        writeln!(f, "\n[output]\ndir = {}", self.out_dir.display())?;
        writeln!(f, "matrix = {}\nboundary = {}\nhull = {}", self.matrix_file, self.boundary_file, self.hull_file)?;
        writeln!(f, "berezin = {}\nreport = {}", self.berezin_file, self.report_file)?;
        let suites: Vec<&str> = self.suites.iter().map(|s| s.name()).collect();
        writeln!(f, "\n[verify]\nsuites = {}", suites.join(","))?;
        writeln!(f, "probe_pairs = {}", self.probe_pairs)?;
        writeln!(f, "counterexample_samples = {}", self.counterexample_samples)?;
        write!(f, "berezin_order = {}", self.berezin_order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dsrange::{Complex64, PowerSeries};
    use proptest::prelude::*;

    #[test]
    fn parses_sections_and_descriptors() {
        let cfg = RunConfig::parse(
            "# weyl\ns = 0.25\nN = 16\npsi = kernel gamma=0.5\nphi = mobius gamma=0.5 alpha=-1\n\n[grid]\nradial = 8\nangular = 16\n[verify]\nsuites = weyl, structure\n",
        )
        .unwrap();
        assert_eq!(cfg.s, 0.25);
        assert_eq!(cfg.order, 16);
        assert_eq!(cfg.psi, PsiSymbol::NormalizedKernel(Complex64::new(0.5, 0.0)));
        assert_eq!(cfg.phi, PhiSymbol::Mobius { gamma: Complex64::new(0.5, 0.0), alpha: Complex64::new(-1.0, 0.0) });
        assert_eq!((cfg.grid_radial, cfg.grid_angular), (8, 16));
        assert_eq!(cfg.suites, vec![Suite::Weyl, Suite::Structure]);
        assert_eq!(cfg.angles, 1024);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("bogus = 1").is_err());
        assert!(RunConfig::parse("[sweep]\nradial = 3").is_err());
        assert!(RunConfig::parse("[nowhere]").is_err());
        assert!(RunConfig::parse("s 0.5").is_err());
        assert!(RunConfig::parse("N = many").is_err());
        assert!(RunConfig::parse("phi = mobius gamma=2").is_err());
        assert!(RunConfig::parse("[verify]\nsuites = weyl,nope").is_err());
        let err = RunConfig::parse("s = 0.5\nN = x").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn validation_limits() {
        let ok = RunConfig::default();
        assert!(ok.validate().is_ok());
        assert!(RunConfig { s: 1.5, ..ok.clone() }.validate().is_err());
        assert!(RunConfig { order: 7, ..ok.clone() }.validate().is_err());
        assert!(RunConfig { angles: 15, ..ok.clone() }.validate().is_err());
        assert!(RunConfig { grid_radial: 3, ..ok.clone() }.validate().is_err());
        assert!(RunConfig { grid_angular: 7, ..ok }.validate().is_err());
    }

    #[test]
    fn grid_and_suite_lists() {
        assert_eq!(parse_grid("32, 64").unwrap(), (32, 64));
        assert!(parse_grid("32").is_err());
        assert_eq!(parse_suites("").unwrap(), vec![]);
    }

    fn complex() -> impl Strategy<Value = Complex64> {
        (0.0..0.95f64, -3.1..3.1f64).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    fn psi() -> impl Strategy<Value = PsiSymbol> {
        prop_oneof![
            Just(PsiSymbol::One),
            complex().prop_map(PsiSymbol::NormalizedKernel),
            prop::collection::vec(complex(), 1..6).prop_map(|c| PsiSymbol::Series(PowerSeries::new(c).unwrap())),
        ]
    }

    fn phi() -> impl Strategy<Value = PhiSymbol> {
        prop_oneof![
            Just(PhiSymbol::Identity),
            complex().prop_map(PhiSymbol::Constant),
            complex().prop_map(PhiSymbol::Dilation),
            (complex(), -3.1..3.1f64).prop_map(|(gamma, t)| PhiSymbol::Mobius { gamma, alpha: Complex64::from_polar(1.0, t) }),
        ]
    }

    proptest! {
        #[test]
        fn round_trip(
            s in 0.01..0.99f64,
            order in 8usize..300,
            psi in psi(),
            phi in phi(),
            angles in 16usize..5000,
            radial in 4usize..200,
            angular in 8usize..600,
            seed in any::<u64>(),
            suites in prop::sample::subsequence(Suite::ALL.to_vec(), 0..=7),
        ) {
            let cfg = RunConfig {
                s, order, psi, phi, angles, grid_radial: radial, grid_angular: angular, seed, suites,
                out_dir: PathBuf::from("results/run 1"),
                ..RunConfig::default()
            };
            let text = cfg.to_string();
            let back = RunConfig::parse(&text).unwrap();
            prop_assert_eq!(&back, &cfg);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
