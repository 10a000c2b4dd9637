//! Small shared helpers: complex-number argument parsing and atomic file
//! output.

use num_complex::Complex64;
use std::fs;
use std::io::Write;
use std::path::Path;

/// Parses a complex number from compact text: `0.5`, `-0.25+1i`, `1.5i`,
/// `-i`, `0.5-0.5i`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    // Pure real.
    if !t.contains('i') {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|e| format!("bad real part in {s:?}: {e}"));
    }
    let body = t
        .strip_suffix('i')
        .ok_or_else(|| format!("{s:?}: 'i' must be the final character"))?;
    // Split at the last +/- that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        let c = bytes[k] as char;
        if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
            split = Some(k);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other
            .parse::<f64>()
            .map_err(|e| format!("bad imaginary part in {s:?}: {e}"))?,
    };
    let re = if re_str.is_empty() {
        0.0
    } else {
        re_str
            .parse::<f64>()
            .map_err(|e| format!("bad real part in {s:?}: {e}"))?
    };
    Ok(Complex64::new(re, im))
}

/// Formats a complex number compactly for human-readable output.
pub fn fmt_complex(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{:.12}+{:.12}i", z.re, z.im)
    } else {
        format!("{:.12}-{:.12}i", z.re, -z.im)
    }
}

/// Writes a file atomically: a temp file in the same directory, then rename.
pub fn atomic_write(path: &Path, contents: &str) -> Result<(), String> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| format!("creating {}: {e}", dir.display()))?;
        }
    }
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    {
        let mut f =
            fs::File::create(&tmp).map_err(|e| format!("creating {}: {e}", tmp.display()))?;
        f.write_all(contents.as_bytes())
            .map_err(|e| format!("writing {}: {e}", tmp.display()))?;
        f.sync_all()
            .map_err(|e| format!("syncing {}: {e}", tmp.display()))?;
    }
    fs::rename(&tmp, path).map_err(|e| format!("renaming to {}: {e}", path.display()))
}
