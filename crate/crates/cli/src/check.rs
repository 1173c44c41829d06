use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Subcommand};
use lorcomp::cone::{base_curvature_minus1_check, load_base};
use lorcomp::curvcheck::{
    eps_mu_condition_scan, scan_four_point_with, triangle_condition_scan, BoundSide, EpsMuConfig, FourPointConfig,
    SkipCounts,
};
use lorcomp::lorspace::{load_space, validate_axioms};
use lorcomp::{Curvature, Space};
use serde::Serialize;
use serde_json::{json, Value};

use crate::io::{parse_finite, parse_fractions, parse_positive, parse_positive_list, write_json, List};
use crate::{Failure, Outcome, SideArg};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    /// Axioms of a finite Lorentzian pre-length space.
    Axioms(AxiomArgs),
    /// Four-point condition on every matching quadruple.
    FourPoint(BoundArgs),
    /// ε-μ midpoint triangle condition.
    EpsMu(EpsMuArgs),
    /// Triangle comparison along ambient realizers.
    Triangle(TriangleArgs),
    /// Comparison of a base metric space against the hyperbolic plane.
    #[command(name = "base-minus1")]
    BaseMinus1(BaseArgs),
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Maximum number of witnesses in the report.
    #[arg(long, default_value_t = 20)]
    pub witnesses: usize,
    /// Record the wall-clock runtime in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug)]
pub struct AxiomArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long, default_value_t = 1e-9, value_parser = parse_positive)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct BoundArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long = "K", default_value_t = 0.0, value_parser = parse_finite)]
    pub k: f64,
    #[arg(long, value_enum, default_value = "upper")]
    pub side: SideArg,
    #[arg(long, default_value_t = 1e-7, value_parser = parse_positive)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct EpsMuArgs {
    #[command(flatten)]
    pub bound: BoundArgs,
    #[arg(long, default_value = "1e-1,1e-2,1e-3", value_parser = parse_positive_list)]
    pub eps: List,
    #[arg(long, default_value = "0.25,0.5,0.75", value_parser = parse_fractions)]
    pub mus: List,
}

#[derive(Args, Debug)]
pub struct TriangleArgs {
    #[command(flatten)]
    pub bound: BoundArgs,
    /// Interior sample points per side.
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct BaseArgs {
    #[arg(long)]
    pub base: PathBuf,
    #[arg(long, default_value = "1e-2,1e-3,1e-4", value_parser = parse_positive_list)]
    pub eps: List,
    #[arg(long, default_value_t = 1e-6, value_parser = parse_positive)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportWitness {
    pub indices: Vec<usize>,
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Report file, `schemaVersion` 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub check: String,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub side: Option<BoundSide>,
    pub tol: f64,
    pub tested: usize,
    pub skipped: BTreeMap<String, usize>,
    pub violations: usize,
    pub witnesses: Vec<ReportWitness>,
    pub pass: bool,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
    pub details: Value,
}

fn skipped(counts: &SkipCounts) -> BTreeMap<String, usize> {
    BTreeMap::from([("sizeBound".into(), counts.size_bound), ("infeasible".into(), counts.infeasible)])
}

fn witness(indices: Vec<usize>, margin: f64) -> ReportWitness {
    ReportWitness { indices, margin, label: None }
}

fn space(path: &Path) -> Result<Space, Failure> {
    load_space(path).map_err(|e| match e {
        lorcomp::Error::Io(io) => Failure::Usage(format!("cannot read {}: {io}", path.display())),
        e => Failure::Usage(format!("{}: {e}", path.display())),
    })
}

fn axioms(args: &AxiomArgs) -> Result<Report, Failure> {
    let space = space(&args.space)?;
    let r = validate_axioms(&space, args.tol);
    let witnesses = r
        .violations
        .iter()
        .map(|v| ReportWitness { indices: v.witness.clone(), margin: -v.magnitude, label: Some(v.axiom.clone()) })
        .collect();
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        check: "axioms".into(),
        k: None,
        side: None,
        tol: args.tol,
        tested: space.len(),
        skipped: BTreeMap::new(),
        violations: r.violations.len(),
        witnesses,
        pass: r.pass,
        seed: None,
        runtime_seconds: None,
        details: json!({ "notApplicable": r.not_applicable }),
    })
}

fn bound(args: &BoundArgs) -> Result<(Space, Curvature), Failure> {
    Ok((space(&args.space)?, Curvature::new(args.k)?))
}

fn four_point(args: &BoundArgs) -> Result<Report, Failure> {
    let (space, k) = bound(args)?;
    let config = FourPointConfig { witness_cap: args.output.witnesses, ..FourPointConfig::default() };
    let r = scan_four_point_with(&space, &k, args.side.into(), args.tol, &config);
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        check: r.check,
        k: Some(r.k),
        side: Some(r.side),
        tol: r.tol,
        tested: r.tested,
        skipped: skipped(&r.skipped),
        violations: r.violations,
        witnesses: r.witnesses.into_iter().map(|w| witness(w.indices, w.margin)).collect(),
        pass: r.pass,
        seed: None,
        runtime_seconds: None,
        details: json!({ "enumerated": r.enumerated, "worstMargin": r.worst_margin }),
    })
}

fn eps_mu(args: &EpsMuArgs) -> Result<Report, Failure> {
    let b = &args.bound;
    let (space, k) = bound(b)?;
    let config = EpsMuConfig { eps: args.eps.0.clone(), mus: args.mus.0.clone(), tol: b.tol, witness_cap: usize::MAX };
    let r = eps_mu_condition_scan(&space, &k, b.side.into(), &config);
    let finest = r.eps.last().copied().unwrap_or(0.0);
    let mut violations = r.witnesses.iter().filter(|w| w.excess > finest + r.tol).count();
    if !r.monotone {
        violations += 1;
    }
    let witnesses = r
        .witnesses
        .iter()
        .take(b.output.witnesses)
        .map(|w| {
            let mut indices = w.triangle.to_vec();
            indices.extend([w.pair[0], w.pair[1], w.midpoint]);
            witness(indices, -w.excess)
        })
        .collect();
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        check: r.check.clone(),
        k: Some(r.k),
        side: Some(r.side),
        tol: r.tol,
        tested: r.configurations,
        skipped: skipped(&r.skipped),
        violations,
        witnesses,
        pass: r.pass,
        seed: None,
        runtime_seconds: None,
        details: json!({
            "eps": r.eps,
            "mus": r.mus,
            "deviation": r.deviation,
            "excess": r.excess,
            "triangles": r.triangles,
            "monotone": r.monotone,
            "slope": r.slope,
        }),
    })
}

fn triangle(args: &TriangleArgs) -> Result<Report, Failure> {
    let b = &args.bound;
    let (space, k) = bound(b)?;
    let r = triangle_condition_scan(&space, &k, b.side.into(), args.samples, b.tol)?;
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        check: r.check,
        k: Some(r.k),
        side: Some(r.side),
        tol: r.tol,
        tested: r.samples,
        skipped: skipped(&r.skipped),
        violations: r.violations,
        witnesses: r.witnesses.into_iter().take(b.output.witnesses).map(|w| witness(w.indices, w.margin)).collect(),
        pass: r.pass,
        seed: None,
        runtime_seconds: None,
        details: json!({ "triangles": r.triangles, "worstMargin": r.worst_margin }),
    })
}

fn base_minus1(args: &BaseArgs) -> Result<Report, Failure> {
    let base = load_base(&args.base).map_err(|e| Failure::Usage(format!("{}: {e}", args.base.display())))?;
    let r = base_curvature_minus1_check(&base, &args.eps.0, args.tol)?;
    let violations = r.witnesses.iter().filter(|w| w.excess > r.tol).count();
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        check: r.check,
        k: Some(-1.0),
        side: Some(BoundSide::Upper),
        tol: r.tol,
        tested: r.configurations.iter().sum(),
        skipped: BTreeMap::from([("infeasible".into(), r.skipped)]),
        violations: if r.pass { 0 } else { violations.max(1) },
        witnesses: r
            .witnesses
            .iter()
            .take(args.output.witnesses)
            .map(|w| witness(w.indices.to_vec(), -w.excess))
            .collect(),
        pass: r.pass,
        seed: None,
        runtime_seconds: None,
        details: json!({
            "eps": r.eps,
            "deviation": r.deviation,
            "excess": r.excess,
            "configurations": r.configurations,
        }),
    })
}

fn output(cmd: &CheckCmd) -> &Output {
    match cmd {
        CheckCmd::Axioms(a) => &a.output,
        CheckCmd::FourPoint(b) => &b.output,
        CheckCmd::EpsMu(a) => &a.bound.output,
        CheckCmd::Triangle(a) => &a.bound.output,
        CheckCmd::BaseMinus1(a) => &a.output,
    }
}

pub fn run(cmd: &CheckCmd) -> Result<Outcome, Failure> {
    let start = Instant::now();
    let mut report = match cmd {
        CheckCmd::Axioms(a) => axioms(a)?,
        CheckCmd::FourPoint(b) => four_point(b)?,
        CheckCmd::EpsMu(a) => eps_mu(a)?,
        CheckCmd::Triangle(a) => triangle(a)?,
        CheckCmd::BaseMinus1(a) => base_minus1(a)?,
    };
    let elapsed = start.elapsed().as_secs_f64();
    let out = output(cmd);
    if out.timing {
        report.runtime_seconds = Some(elapsed);
    }
    if let Some(path) = &out.report {
        write_json(path, &report)?;
    }
    let bound = match (report.k, report.side) {
        (Some(k), Some(side)) => format!(" K={k} {side}"),
        _ => String::new(),
    };
    let failed: Vec<&str> = report.witnesses.iter().filter_map(|w| w.label.as_deref()).collect();
    let named = if failed.is_empty() { String::new() } else { format!(" [{}]", failed.join(", ")) };
    println!(
        "{}{bound}: tested {}, skipped {}, violations {}{named}, {} ({elapsed:.3} s)",
        report.check,
        report.tested,
        report.skipped.values().sum::<usize>(),
        report.violations,
        if report.pass { "pass" } else { "FAIL" },
    );
    Ok(if report.pass { Outcome::Pass } else { Outcome::Fail })
}
