//! Text descriptors for symbols, e.g. `mobius gamma=0.5 alpha=1`,
//! `kernel gamma=0.5i`, `series 0,1,0.25`.
//!
//! Complex numbers are written `a`, `bi`, `a+bi`, `a-bi` or in polar form
//! `r@theta` (radians). Formatting uses the shortest round-trip decimal form,
//! so `parse(format(x)) == x` exactly.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{PhiSymbol, PsiSymbol};
use crate::error::{Error, Result};
use crate::series::PowerSeries;
use crate::c64;

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_real(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| bad(format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(bad(format!("non-finite number: {s:?}")));
    }
    Ok(v)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` or `r@theta`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad("empty complex number"));
    }
    if let Some((r, th)) = t.split_once('@') {
        return Ok(Complex64::from_polar(parse_real(r)?, parse_real(th)?));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(c64(parse_real(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other)?,
    };
    Ok(c64(re, im))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn format_list(p: &PowerSeries) -> String {
    p.coeffs().iter().map(|c| format_complex(*c)).collect::<Vec<_>>().join(",")
}

fn parse_list(text: &str) -> Result<PowerSeries> {
    let coeffs = text.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
    PowerSeries::new(coeffs)
}

/// Splits `name arg arg ...` into the name and its arguments.
fn split_descriptor(text: &str) -> (&str, Vec<&str>) {
    let mut words = text.split_whitespace();
    let head = words.next().unwrap_or("");
    (head, words.collect())
}

fn keyed<'a>(args: &[&'a str], allowed: &[&str]) -> Result<Vec<(&'a str, &'a str)>> {
    args.iter()
        .map(|a| {
            let (k, v) = a.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {a:?}")))?;
            if !allowed.contains(&k) {
                return Err(bad(format!("unknown key {k:?}, expected one of {allowed:?}")));
            }
            Ok((k, v))
        })
        .collect()
}

fn required<'a>(pairs: &[(&'a str, &'a str)], key: &str) -> Result<&'a str> {
    pairs
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| bad(format!("missing key {key:?}")))
}

fn no_args(head: &str, args: &[&str]) -> Result<()> {
    if args.is_empty() {
        Ok(())
    } else {
        Err(bad(format!("{head} takes no arguments")))
    }
}

impl fmt::Display for PhiSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity => write!(f, "identity"),
            Self::Constant(v) => write!(f, "constant v={}", format_complex(*v)),
            Self::Dilation(l) => write!(f, "dilation lambda={}", format_complex(*l)),
            Self::Mobius { gamma, alpha } => {
                write!(f, "mobius gamma={} alpha={}", format_complex(*gamma), format_complex(*alpha))
            }
            Self::GeneralSeries { series, sup_bound } => {
                write!(f, "series {} sup={}", format_list(series), sup_bound)
            }
        }
    }
}

impl FromStr for PhiSymbol {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (head, args) = split_descriptor(text);
        let sym = match head {
            "identity" => {
                no_args(head, &args)?;
                Self::Identity
            }
            "constant" => Self::Constant(parse_complex(required(&keyed(&args, &["v"])?, "v")?)?),
            "dilation" => Self::Dilation(parse_complex(required(&keyed(&args, &["lambda"])?, "lambda")?)?),
            "mobius" => {
                let kv = keyed(&args, &["gamma", "alpha"])?;
                let alpha = match kv.iter().find(|(k, _)| *k == "alpha") {
                    Some((_, v)) => parse_complex(v)?,
                    None => c64(1.0, 0.0),
                };
                Self::Mobius { gamma: parse_complex(required(&kv, "gamma")?)?, alpha }
            }
            "series" => {
                let (list, rest) = args.split_first().ok_or_else(|| bad("series needs a coefficient list"))?;
                let series = parse_list(list)?;
                let kv = keyed(rest, &["sup"])?;
                // without an explicit bound, Σ|c_n| bounds |φ| on the closed disc
                let sup_bound = match kv.first() {
                    Some((_, v)) => parse_real(v)?,
                    None => series.abs_coeff_sum(),
                };
                Self::GeneralSeries { series, sup_bound }
            }
            other => return Err(bad(format!("unknown phi form {other:?}"))),
        };
        sym.validate().map_err(|e| bad(e.to_string()))?;
        Ok(sym)
    }
}

impl fmt::Display for PsiSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::One => write!(f, "one"),
            Self::Series(p) => write!(f, "series {}", format_list(p)),
            Self::NormalizedKernel(g) => write!(f, "kernel gamma={}", format_complex(*g)),
        }
    }
}

impl FromStr for PsiSymbol {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (head, args) = split_descriptor(text);
        let sym = match head {
            "one" => {
                no_args(head, &args)?;
                Self::One
            }
            "kernel" => Self::NormalizedKernel(parse_complex(required(&keyed(&args, &["gamma"])?, "gamma")?)?),
            "series" => match args.as_slice() {
                [list] => Self::Series(parse_list(list)?),
                _ => return Err(bad("psi series takes exactly one coefficient list")),
            },
            other => return Err(bad(format!("unknown psi form {other:?}"))),
        };
        sym.validate().map_err(|e| bad(e.to_string()))?;
        Ok(sym)
    }
}
