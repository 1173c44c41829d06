//! Timelike curvature-bound checkers.
//!
//! Conventions: an upper bound `K` asks for `τ ≤ τ̃` between points on the
//! sides of a triangle and the matching points of its comparison triangle
//! in `L²_K`; a lower bound asks for `τ ≥ τ̃`. The four-point, ε-μ and
//! triangle checkers all report signed margins in these directions.

mod eps_mu;
mod four_point;
mod triangle;

pub use eps_mu::{decays, eps_mu_condition_scan, find_eps_mu_midpoints, EpsMuConfig, EpsMuReport, EpsMuWitness};
pub use four_point::{
    four_point_lower_margin, four_point_lower_margin_with, four_point_upper_margins, four_point_upper_margins_with,
    four_point_verdict, scan_four_point, scan_four_point_with, FourPointConfig, Gluing, QuadrupleTaus,
};
pub use triangle::{triangle_condition_check, triangle_condition_scan, TriangleReport};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which one-sided bound is being checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSide {
    Upper,
    Lower,
}

impl fmt::Display for BoundSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundSide::Upper => "upper",
            BoundSide::Lower => "lower",
        })
    }
}

impl FromStr for BoundSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "upper" => Ok(BoundSide::Upper),
            "lower" => Ok(BoundSide::Lower),
            other => Err(Error::Parse(format!("side must be upper or lower, got {other:?}"))),
        }
    }
}

/// Why a configuration was not evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    SizeBound,
    Infeasible,
}

/// Outcome of one comparison configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict<T> {
    pub margins: Vec<T>,
    pub pass: bool,
    pub skipped: Option<SkipReason>,
}

impl<T: crate::Scalar> Verdict<T> {
    fn from_margins(margins: Vec<T>, tol: T) -> Self {
        let pass = margins.iter().all(|&m| m >= -tol);
        Self { margins, pass, skipped: None }
    }

    fn skipped(reason: SkipReason) -> Self {
        Self { margins: vec![], pass: true, skipped: Some(reason) }
    }

    /// Smallest margin, if any was evaluated.
    pub fn worst(&self) -> Option<T> {
        self.margins.iter().copied().reduce(T::min)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SkipCounts {
    pub size_bound: usize,
    pub infeasible: usize,
}

impl SkipCounts {
    pub fn total(&self) -> usize {
        self.size_bound + self.infeasible
    }

    fn add(&mut self, reason: SkipReason) {
        match reason {
            SkipReason::SizeBound => self.size_bound += 1,
            SkipReason::Infeasible => self.infeasible += 1,
        }
    }

    fn merge(&mut self, other: &SkipCounts) {
        self.size_bound += other.size_bound;
        self.infeasible += other.infeasible;
    }
}

/// A violating (or near-violating) configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub margin: f64,
}

/// Deterministic order: smallest margin first, then indices.
fn witness_order(a: &Witness, b: &Witness) -> std::cmp::Ordering {
    a.margin.total_cmp(&b.margin).then_with(|| a.indices.cmp(&b.indices))
}

/// Keeps the `cap` worst witnesses.
fn push_witness(list: &mut Vec<Witness>, w: Witness, cap: usize) {
    if cap == 0 {
        return;
    }
    if list.len() == cap {
        if let Some(last) = list.last() {
            if witness_order(&w, last).is_ge() {
                return;
            }
        }
        list.pop();
    }
    let pos = list.partition_point(|x| witness_order(x, &w).is_lt());
    list.insert(pos, w);
}

/// Aggregated result of a scan over all configurations of a finite space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanReport {
    pub check: String,
    pub k: f64,
    pub side: BoundSide,
    pub tol: f64,
    pub enumerated: usize,
    pub tested: usize,
    pub skipped: SkipCounts,
    pub violations: usize,
    pub worst_margin: Option<f64>,
    pub witnesses: Vec<Witness>,
    pub pass: bool,
}
