//! Output files and value-list parsing.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::Failure;

/// Writes `bytes` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::Run(format!("cannot write {}: {e}", path.display()));
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Run(e.to_string()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn write_csv<S: Serialize>(path: &Path, rows: &[S]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Run(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Run(e.to_string()))?;
    write_atomic(path, &bytes)
}

/// A parsed value list.
#[derive(Clone, Debug, PartialEq)]
pub struct List(pub Vec<f64>);

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

fn power(s: &str) -> Result<(f64, i32), String> {
    let (base, exp) = s.split_once('^').ok_or_else(|| format!("expected b^k, got {s:?}"))?;
    let exp: i32 = exp.trim().parse().map_err(|_| format!("bad exponent in {s:?}"))?;
    Ok((number(base)?, exp))
}

/// A comma list `a,b,c` or a power range `b^k1..b^k2` (unit exponent steps).
pub fn parse_schedule(s: &str) -> Result<Vec<f64>, String> {
    let values = if let Some((a, b)) = s.split_once("..") {
        let ((b1, k1), (b2, k2)) = (power(a)?, power(b)?);
        if b1 != b2 || b1 <= 0.0 {
            return Err(format!("range {s:?} needs one positive base"));
        }
        let step = if k2 >= k1 { 1 } else { -1 };
        let mut out = vec![];
        let mut k = k1;
        loop {
            out.push(b1.powi(k));
            if k == k2 {
                break;
            }
            k += step;
        }
        out
    } else {
        s.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err("empty list".into());
    }
    Ok(values)
}

/// `a:b:step`, inclusive of `b` up to rounding.
pub fn parse_range(s: &str) -> Result<List, String> {
    let parts: Vec<f64> = s.split(':').map(number).collect::<Result<_, _>>()?;
    let [a, b, step] = parts[..] else {
        return Err(format!("expected a:b:step, got {s:?}"));
    };
    if step <= 0.0 || b < a {
        return Err(format!("range {s:?} needs a <= b and step > 0"));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize;
    Ok(List((0..=count).map(|k| a + k as f64 * step).collect()))
}

pub fn parse_positive_list(s: &str) -> Result<List, String> {
    let v = parse_schedule(s)?;
    match v.iter().find(|x| **x <= 0.0) {
        Some(x) => Err(format!("values must be positive, got {x}")),
        None => Ok(List(v)),
    }
}

pub fn parse_fractions(s: &str) -> Result<List, String> {
    let v = parse_schedule(s)?;
    match v.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
        Some(x) => Err(format!("values must lie in (0, 1), got {x}")),
        None => Ok(List(v)),
    }
}

pub fn parse_positive(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

pub fn parse_finite(s: &str) -> Result<f64, String> {
    number(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_ranges_expand() {
        let v = parse_schedule("2^-3..2^-6").unwrap();
        assert_eq!(v, vec![0.125, 0.0625, 0.03125, 0.015625]);
        assert_eq!(parse_schedule("1e-2,1e-3").unwrap(), vec![1e-2, 1e-3]);
        assert!(parse_schedule("2^-3..3^-4").is_err());
        assert!(parse_schedule("a,b").is_err());
    }

    #[test]
    fn colon_ranges_include_the_end() {
        assert_eq!(parse_range("0.5:2.0:0.25").unwrap().0.len(), 7);
        assert_eq!(parse_range("1:1:0.5").unwrap().0, vec![1.0]);
        assert!(parse_range("2:1:0.5").is_err());
        assert!(parse_range("1:2").is_err());
    }

    #[test]
    fn atomic_write_replaces_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
