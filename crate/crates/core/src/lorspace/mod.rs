//! Finite Lorentzian pre-length spaces: a background metric `d`, a time
//! separation `τ` and a causal relation `≤`, all stored as dense matrices.

mod ambient;
mod io;
mod sprinkle;

pub use ambient::{
    ambient_exp, ambient_geodesic, ambient_initial_tangent, ambient_ordered_tau, ambient_tau, AmbientKind, AmbientSpec,
};
pub use io::{load_space, parse_space, save_space, space_to_json};
pub use sprinkle::{chain, space_from_points, sprinkle, sprinkle_with_midpoints, MidpointPlan, Region};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Vec3};

/// Ambient origin of a generated space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance<T> {
    pub ambient: AmbientSpec<T>,
    pub coords: Vec<Vec3<T>>,
}

/// A finite Lorentzian pre-length space. Matrices are row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteLorentzSpace<T> {
    n: usize,
    d: Vec<T>,
    tau: Vec<T>,
    causal: Vec<bool>,
    provenance: Option<Provenance<T>>,
}

impl<T: Scalar> FiniteLorentzSpace<T> {
    /// Builds a space from row-major matrices of side `n`.
    pub fn from_flat(n: usize, d: Vec<T>, tau: Vec<T>, causal: Vec<bool>) -> Result<Self> {
        for (name, len) in [("d", d.len()), ("tau", tau.len()), ("causal", causal.len())] {
            if len != n * n {
                return Err(Error::Structural(format!("{name} has {len} entries, expected {n}x{n}")));
            }
        }
        Ok(Self { n, d, tau, causal, provenance: None })
    }

    /// Builds a space from nested rows, rejecting ragged or non-square input.
    pub fn from_rows(d: Vec<Vec<T>>, tau: Vec<Vec<T>>, causal: Vec<Vec<bool>>) -> Result<Self> {
        let n = d.len();
        fn flatten<X: Copy>(name: &str, rows: Vec<Vec<X>>, n: usize) -> Result<Vec<X>> {
            if rows.len() != n {
                return Err(Error::Structural(format!("{name} has {} rows, expected {n}", rows.len())));
            }
            let mut out = Vec::with_capacity(n * n);
            for (i, row) in rows.into_iter().enumerate() {
                if row.len() != n {
                    return Err(Error::Structural(format!("{name} row {i} has {} entries, expected {n}", row.len())));
                }
                out.extend(row);
            }
            Ok(out)
        }
        let d = flatten("d", d, n)?;
        let tau = flatten("tau", tau, n)?;
        let causal = flatten("causal", causal, n)?;
        Self::from_flat(n, d, tau, causal)
    }

    pub fn empty() -> Self {
        Self { n: 0, d: vec![], tau: vec![], causal: vec![], provenance: None }
    }

    pub fn with_provenance(mut self, provenance: Provenance<T>) -> Result<Self> {
        if provenance.coords.len() != self.n {
            return Err(Error::Structural(format!(
                "{} coordinate rows for {} points",
                provenance.coords.len(),
                self.n
            )));
        }
        self.provenance = Some(provenance);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> T {
        self.d[i * self.n + j]
    }

    #[inline]
    pub fn tau(&self, i: usize, j: usize) -> T {
        self.tau[i * self.n + j]
    }

    #[inline]
    pub fn causal(&self, i: usize, j: usize) -> bool {
        self.causal[i * self.n + j]
    }

    /// `i ≪ j`.
    #[inline]
    pub fn timelike(&self, i: usize, j: usize) -> bool {
        self.tau(i, j) > T::zero()
    }

    pub fn provenance(&self) -> Option<&Provenance<T>> {
        self.provenance.as_ref()
    }

    pub fn d_rows(&self) -> Vec<Vec<T>> {
        self.d.chunks(self.n.max(1)).map(<[T]>::to_vec).collect()
    }

    pub fn tau_rows(&self) -> Vec<Vec<T>> {
        self.tau.chunks(self.n.max(1)).map(<[T]>::to_vec).collect()
    }

    pub fn causal_rows(&self) -> Vec<Vec<bool>> {
        self.causal.chunks(self.n.max(1)).map(<[bool]>::to_vec).collect()
    }

    /// Number of ordered pairs `i ≠ j` with `i ≤ j`.
    pub fn causal_pair_count(&self) -> usize {
        (0..self.n).flat_map(|i| (0..self.n).map(move |j| (i, j))).filter(|&(i, j)| i != j && self.causal(i, j)).count()
    }

    /// Sub-space on the given indices, in the given order.
    pub fn subspace(&self, idx: &[usize]) -> Self {
        let m = idx.len();
        let mut d = Vec::with_capacity(m * m);
        let mut tau = Vec::with_capacity(m * m);
        let mut causal = Vec::with_capacity(m * m);
        for &i in idx {
            for &j in idx {
                d.push(self.d(i, j));
                tau.push(self.tau(i, j));
                causal.push(self.causal(i, j));
            }
        }
        let provenance = self
            .provenance
            .as_ref()
            .map(|p| Provenance { ambient: p.ambient, coords: idx.iter().map(|&i| p.coords[i]).collect() });
        Self { n: m, d, tau, causal, provenance }
    }
}

/// One violated axiom with its worst witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<usize>,
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
    pub not_applicable: Vec<String>,
    pub pass: bool,
}

/// Worst witness of one axiom, merged deterministically: larger magnitude
/// wins, ties go to the lexicographically smaller witness.
#[derive(Clone, Debug)]
struct Worst {
    magnitude: f64,
    witness: Vec<usize>,
}

fn merge_worst(a: Option<Worst>, b: Option<Worst>) -> Option<Worst> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if b.magnitude > a.magnitude || (b.magnitude == a.magnitude && b.witness < a.witness) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

const AXIOMS: [&str; 11] = [
    "d-finite",
    "d-nonnegative",
    "d-zero-diagonal",
    "d-symmetric",
    "d-triangle",
    "tau-nonnegative",
    "tau-zero-diagonal",
    "timelike-implies-causal",
    "causal-reflexive",
    "chronology",
    "causal-transitive",
];
const REVERSE_TRIANGLE: &str = "reverse-triangle";

/// Checks every axiom of a finite Lorentzian pre-length space and reports
/// the worst witness of each violated one. Lower semicontinuity of `τ` has
/// no content on a finite set and is listed as not applicable.
pub fn validate_axioms<T: Scalar>(space: &FiniteLorentzSpace<T>, tol: T) -> AxiomReport {
    let n = space.len();
    let tol64 = tol.as_f64();
    let slots = AXIOMS.len() + 1;

    let per_row: Vec<Vec<Option<Worst>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut worst: Vec<Option<Worst>> = vec![None; slots];
            let mut note = |slot: usize, magnitude: f64, witness: Vec<usize>| {
                let cand = Some(Worst { magnitude, witness });
                worst[slot] = merge_worst(worst[slot].take(), cand);
            };
            for j in 0..n {
                let dij = space.d(i, j).as_f64();
                let tij = space.tau(i, j).as_f64();
                if !dij.is_finite() || !tij.is_finite() {
                    note(0, f64::INFINITY, vec![i, j]);
                    continue;
                }
                if dij < -tol64 {
                    note(1, -dij, vec![i, j]);
                }
                if i == j && dij.abs() > tol64 {
                    note(2, dij.abs(), vec![i, j]);
                }
                if i < j {
                    let asym = (dij - space.d(j, i).as_f64()).abs();
                    if asym > tol64 {
                        note(3, asym, vec![i, j]);
                    }
                }
                if tij < -tol64 {
                    note(5, -tij, vec![i, j]);
                }
                if i == j && tij.abs() > tol64 {
                    note(6, tij.abs(), vec![i, j]);
                }
                if tij > 0.0 && !space.causal(i, j) {
                    note(7, tij, vec![i, j]);
                }
                if i == j && !space.causal(i, i) {
                    note(8, 1.0, vec![i]);
                }
                if i < j && tij > 0.0 && space.tau(j, i) > T::zero() {
                    note(9, tij.min(space.tau(j, i).as_f64()), vec![i, j]);
                }
                for k in 0..n {
                    let excess = dij - space.d(i, k).as_f64() - space.d(k, j).as_f64();
                    if i < j && excess > tol64 {
                        note(4, excess, vec![i, k, j]);
                    }
                    if space.causal(i, j) && space.causal(j, k) {
                        if !space.causal(i, k) {
                            note(10, 1.0, vec![i, j, k]);
                        }
                        let deficit = tij + space.tau(j, k).as_f64() - space.tau(i, k).as_f64();
                        if deficit > tol64 {
                            note(11, deficit, vec![i, j, k]);
                        }
                    }
                }
            }
            worst
        })
        .collect();

    let mut merged: Vec<Option<Worst>> = vec![None; slots];
    for row in per_row {
        for (slot, w) in row.into_iter().enumerate() {
            merged[slot] = merge_worst(merged[slot].take(), w);
        }
    }
    let names = AXIOMS.iter().copied().chain(std::iter::once(REVERSE_TRIANGLE));
    let violations: Vec<Violation> = names
        .zip(merged)
        .filter_map(|(axiom, w)| {
            w.map(|w| Violation { axiom: axiom.to_string(), witness: w.witness, magnitude: w.magnitude })
        })
        .collect();
    AxiomReport { pass: violations.is_empty(), violations, not_applicable: vec!["lower-semicontinuity".to_string()] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_chain(t13: f64, c13: bool) -> FiniteLorentzSpace<f64> {
        let d = vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]];
        let tau = vec![vec![0.0, 1.0, t13], vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 0.0]];
        let causal = vec![vec![true, true, c13], vec![false, true, true], vec![false, false, true]];
        FiniteLorentzSpace::from_rows(d, tau, causal).unwrap()
    }

    #[test]
    fn reverse_triangle_violation() {
        let rep = validate_axioms(&three_chain(1.5, true), 1e-9);
        assert!(!rep.pass);
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].axiom, "reverse-triangle");
        assert_eq!(rep.violations[0].witness, vec![0, 1, 2]);
        assert!((rep.violations[0].magnitude - 0.5).abs() < 1e-15);
        assert_eq!(rep.not_applicable, vec!["lower-semicontinuity"]);
    }

    #[test]
    fn transitivity_violation() {
        let rep = validate_axioms(&three_chain(0.0, false), 1e-9);
        assert!(rep.violations.iter().any(|v| v.axiom == "causal-transitive"));
    }

    #[test]
    fn valid_chain_passes() {
        assert!(validate_axioms(&three_chain(2.0, true), 1e-9).pass);
        assert!(validate_axioms(&FiniteLorentzSpace::<f64>::empty(), 1e-9).pass);
    }

    #[test]
    fn ragged_input_is_structural() {
        let err = FiniteLorentzSpace::<f64>::from_rows(
            vec![vec![0.0, 1.0], vec![1.0]],
            vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            vec![vec![true, false], vec![false, true]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }

    #[test]
    fn chronology_violation() {
        let d = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let tau = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let causal = vec![vec![true, true], vec![true, true]];
        let s = FiniteLorentzSpace::from_rows(d, tau, causal).unwrap();
        let rep = validate_axioms(&s, 1e-9);
        assert!(rep.violations.iter().any(|v| v.axiom == "chronology"));
    }
}
