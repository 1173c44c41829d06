//! JSON space files.
//!
//! ```json
//! { "n": 2,
//!   "d": [[0, 1], [1, 0]],
//!   "tau": [[0, 0.5], [0, 0]],
//!   "causal": [[1, 1], [0, 1]],
//!   "ambient": "minkowski-2", "scale": 1, "coords": [[0, 0, 0], [1, 0.8, 0]] }
//! ```
//!
//! `ambient`, `scale` and `coords` are optional. Floats are written in
//! shortest round-trip form, so a save/load cycle is bit-exact.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ambient::{AmbientKind, AmbientSpec};
use super::{FiniteLorentzSpace, Provenance};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Vec3};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
struct SpaceFile<T> {
    n: usize,
    d: Vec<Vec<T>>,
    tau: Vec<Vec<T>>,
    causal: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ambient: Option<AmbientKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<Vec3<T>>>,
}

pub fn space_to_json<T: Scalar>(space: &FiniteLorentzSpace<T>) -> String {
    let file = SpaceFile {
        n: space.len(),
        d: space.d_rows(),
        tau: space.tau_rows(),
        causal: space.causal_rows().into_iter().map(|r| r.into_iter().map(u8::from).collect()).collect(),
        ambient: space.provenance().map(|p| p.ambient.kind),
        scale: space.provenance().map(|p| p.ambient.scale),
        coords: space.provenance().map(|p| p.coords.clone()),
    };
    let mut out = serde_json::to_string(&file).expect("space serializes");
    out.push('\n');
    out
}

pub fn parse_space<T: Scalar>(text: &str) -> Result<FiniteLorentzSpace<T>> {
    let file: SpaceFile<T> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.d.len() != file.n {
        return Err(Error::Structural(format!("n = {} but d has {} rows", file.n, file.d.len())));
    }
    let mut causal = Vec::with_capacity(file.causal.len());
    for (i, row) in file.causal.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (j, v) in row.into_iter().enumerate() {
            match v {
                0 => out.push(false),
                1 => out.push(true),
                other => {
                    return Err(Error::Parse(format!("field `causal`: entry [{i}][{j}] is {other}, expected 0 or 1")))
                }
            }
        }
        causal.push(out);
    }
    let space = FiniteLorentzSpace::from_rows(file.d, file.tau, causal)?;
    match (file.ambient, file.coords) {
        (Some(kind), Some(coords)) => {
            let ambient = AmbientSpec::new(kind, file.scale.unwrap_or_else(T::one))?;
            space.with_provenance(Provenance { ambient, coords })
        }
        (None, None) => Ok(space),
        _ => Err(Error::Parse("fields `ambient` and `coords` must be given together".into())),
    }
}

pub fn save_space<T: Scalar>(space: &FiniteLorentzSpace<T>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, space_to_json(space))?;
    Ok(())
}

pub fn load_space<T: Scalar>(path: impl AsRef<Path>) -> Result<FiniteLorentzSpace<T>> {
    parse_space(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorspace::{sprinkle, Region};

    #[test]
    fn round_trip_is_bit_exact() {
        let ds = AmbientSpec::de_sitter(1.0).unwrap();
        let s = sprinkle(&ds, &Region::new((0.0, 2.0), (-1.0, 1.0)), 12, 5).unwrap();
        let back: FiniteLorentzSpace<f64> = parse_space(&space_to_json(&s)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn missing_field_is_named() {
        let err = parse_space::<f64>(r#"{"n": 1, "d": [[0]], "causal": [[1]]}"#).unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.contains("tau")), "{err}");
    }

    #[test]
    fn non_square_is_structural() {
        let err =
            parse_space::<f64>(r#"{"n": 2, "d": [[0, 1], [1]], "tau": [[0, 0], [0, 0]], "causal": [[1, 0], [0, 1]]}"#)
                .unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }

    #[test]
    fn unknown_field_rejected() {
        let err = parse_space::<f64>(r#"{"n": 0, "d": [], "tau": [], "causal": [], "extra": 1}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }
}
