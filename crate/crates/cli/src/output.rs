//! Number formatting, CSV emission and atomic file writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use dsrange::berezin::BerezinSample;
use dsrange::numrange::BoundaryCurve;
use dsrange::Complex64;

/// 17 significant digits, enough to parse back to the identical `f64`.
pub fn csv_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// 15 significant digits for terminal output.
pub fn show(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.14e}")
    }
}

pub fn show_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", show(z.re), show(z.im.abs()))
}

pub fn boundary_csv(curve: &BoundaryCurve) -> String {
    let mut out = String::from("theta,re,im\n");
    for p in &curve.points {
        out.push_str(&format!("{},{},{}\n", csv_num(p.theta), csv_num(p.point.re), csv_num(p.point.im)));
    }
    out
}

/// Hull vertices in counter-clockwise order.
pub fn hull_csv(curve: &BoundaryCurve) -> String {
    let mut out = String::from("index,re,im\n");
    for (i, p) in curve.hull.iter().enumerate() {
        out.push_str(&format!("{i},{},{}\n", csv_num(p.re), csv_num(p.im)));
    }
    out
}

pub fn berezin_csv(sample: &BerezinSample) -> String {
    let mut out = String::from("r,theta,z_re,z_im,val_re,val_im\n");
    for p in &sample.grid {
        let (r, theta) = p.z.to_polar();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_num(r),
            csv_num(theta),
            csv_num(p.z.re),
            csv_num(p.z.im),
            csv_num(p.value.re),
            csv_num(p.value.im)
        ));
    }
    out
}

/// Writes `contents` to a temporary file beside `path` and renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp: PathBuf = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_precision() {
        assert_eq!(show(0.930604859102100), "0.930604859102100");
        assert_eq!(show(1.0), "1.00000000000000");
        assert_eq!(show(-2.5e-9), "-2.50000000000000e-9");
        assert_eq!(show(0.0), "0");
        assert_eq!(show_complex(Complex64::new(0.5, -0.25)), "0.500000000000000-0.250000000000000i");
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/out.csv");
        write_atomic(&path, "a").unwrap();
        write_atomic(&path, "b").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "b");
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }

    proptest! {
        #[test]
        fn csv_numbers_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
            prop_assert_eq!(csv_num(x).parse::<f64>().unwrap(), x);
        }
    }
}
