use std::path::PathBuf;

use clap::{Args, Subcommand};
use lorcomp::cone::BaseSample;
use lorcomp::directions::{
    angle_estimate_with, blowup_table, chronology_flip, chronology_threshold, direction_midpoint, midpoint_cauchy,
    smooth_angle, theta_monotonicity, BlowupItem, GridSpec,
};
use lorcomp::{Ambient, Curvature, Direction};
use serde::{Deserialize, Serialize};

use crate::gen::BaseKind;
use crate::io::{parse_finite, parse_positive, parse_positive_list, write_csv, List};
use crate::{AmbientArgs, Failure, Outcome, SideArg};

#[derive(Subcommand, Debug)]
pub enum ExperimentCmd {
    /// Rescaled separations of exponential points against the tangent cone.
    Blowup(BlowupArgs),
    /// Chronology flip of `exp(μt, d1) ≪ exp(t, d2)` in `μ`.
    Threshold(ThresholdArgs),
    /// First-order growth of cone midpoint defects under base ε-midpoints.
    ConeTransfer(ConeTransferArgs),
    /// Constructive midpoints of two directions.
    DirectionMidpoint(MidpointArgs),
    /// Monotonicity of the comparison angle along two geodesics.
    Monotonicity(MonotonicityArgs),
    /// Comparison angles between two geodesics over a grid.
    Angle(AngleArgs),
}

/// Two directions at the ambient origin, given by rapidity and polar angle.
#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct PairArgs {
    #[command(flatten)]
    pub ambient: AmbientArgs,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite)]
    pub rho1: f64,
    #[arg(long, default_value_t = 1.0, value_parser = parse_finite)]
    pub rho2: f64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite)]
    pub phi1: f64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite)]
    pub phi2: f64,
    #[arg(long)]
    pub out: PathBuf,
}

impl PairArgs {
    fn directions(&self) -> Result<(Direction, Direction), Failure> {
        let spec = self.ambient.spec()?;
        Ok((
            Direction::from_rapidity(spec, self.rho1, self.phi1)?,
            Direction::from_rapidity(spec, self.rho2, self.phi2)?,
        ))
    }
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct MidpointArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Finest midpoint level `ε = 2^-levels`.
    #[arg(long, default_value_t = 8)]
    pub levels: u32,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct GridArgs {
    /// Grid `2^-kmin .. 2^-kmax` on both curves.
    #[arg(long, default_value_t = 3)]
    pub kmin: i32,
    #[arg(long, default_value_t = 14)]
    pub kmax: i32,
}

impl GridArgs {
    fn grid(&self) -> Result<GridSpec<f64>, Failure> {
        Ok(GridSpec::geometric(self.kmin, self.kmax, 1.0)?)
    }
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct MonotonicityArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value = "upper")]
    pub side: SideArg,
    #[arg(long, default_value_t = 1e-9, value_parser = parse_positive)]
    pub tol: f64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct AngleArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long = "K", default_value_t = 0.0, value_parser = parse_finite)]
    pub k: f64,
}

#[derive(Args, Debug)]
pub struct BlowupArgs {
    #[command(flatten)]
    pub ambient: AmbientArgs,
    /// JSON list of `{"r": .., "rho": .., "phi": ..}`.
    #[arg(long)]
    pub items: PathBuf,
    #[arg(long, default_value = "2^-3..2^-12", value_parser = parse_positive_list)]
    pub lambda: List,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub ambient: AmbientArgs,
    /// Rapidity between the two directions.
    #[arg(long, default_value_t = 1.0, value_parser = parse_finite)]
    pub omega: f64,
    /// Proper times of the second point.
    #[arg(long, default_value = "1", value_parser = parse_positive_list)]
    pub t: List,
    #[arg(long, default_value_t = 1e-12, value_parser = parse_positive)]
    pub tol: f64,
    /// Bracket the flip by scanning `μ` on a uniform grid first, and check
    /// that it is the only one.
    #[arg(long)]
    pub mu_scan: bool,
    #[arg(long, default_value_t = 1000)]
    pub mu_steps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ConeTransferArgs {
    #[arg(long, value_enum, default_value = "h2-disc")]
    pub base: BaseKind,
    #[arg(long, default_value_t = 40)]
    pub base_n: usize,
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    pub base_radius: f64,
    #[arg(long, default_value_t = 5)]
    pub seed: u64,
    #[arg(long, default_value = "1e-2,1e-3,1e-4", value_parser = parse_positive_list)]
    pub eps: List,
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    pub r2: f64,
    #[arg(long, default_value_t = 3.0, value_parser = parse_positive)]
    pub r3: f64,
    /// Base pair `i,j`; by default the first point paired with the first
    /// other point at distance in (0.2, 0.9).
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub pair: Option<Vec<usize>>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemSpec {
    r: f64,
    rho: f64,
    #[serde(default)]
    phi: f64,
}

/// The common CSV row: parameter, pair indices, value, reference, error.
#[derive(Serialize)]
struct Row {
    #[serde(rename = "t")]
    param: f64,
    i: usize,
    j: usize,
    value: f64,
    reference: f64,
    error: f64,
}

impl Row {
    fn new(param: f64, (i, j): (usize, usize), value: f64, reference: f64) -> Self {
        Self { param, i, j, value, reference, error: (value - reference).abs() }
    }
}

#[derive(Serialize)]
struct EpsRow {
    eps: f64,
    i: usize,
    j: usize,
    value: f64,
    reference: f64,
    error: f64,
}

#[derive(Serialize)]
struct GridRow {
    t: f64,
    s: f64,
    value: Option<f64>,
    reference: f64,
    error: Option<f64>,
}

fn blowup(args: &BlowupArgs) -> Result<Outcome, Failure> {
    let spec: Ambient = args.ambient.spec()?;
    let text = std::fs::read_to_string(&args.items)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.items.display())))?;
    let specs: Vec<ItemSpec> =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", args.items.display())))?;
    let items = specs
        .iter()
        .map(|s| Ok(BlowupItem { r: s.r, d: Direction::from_rapidity(spec, s.rho, s.phi)? }))
        .collect::<Result<Vec<_>, Failure>>()?;
    let table = blowup_table(&items, &args.lambda.0)?;
    write_csv(&args.out, &table.rows())?;
    let decreasing = table.errors.windows(2).all(|w| w[1] <= w[0]);
    let (last_l, last_e) = (table.lambdas.last().copied().unwrap_or(0.0), table.errors.last().copied().unwrap_or(0.0));
    let cone = table
        .four_point
        .as_ref()
        .map_or(String::new(), |f| format!(", cone four-point margins upper {:.3e} lower {:.3e}", f.upper, f.lower));
    println!("blowup: error {last_e:.3e} at lambda {last_l:e}, decreasing {decreasing}{cone}");
    Ok(Outcome::Pass)
}

fn threshold(args: &ThresholdArgs) -> Result<Outcome, Failure> {
    let spec = args.ambient.spec()?;
    let d1 = Direction::from_rapidity(spec, 0.0, 0.0)?;
    let d2 = Direction::from_rapidity(spec, args.omega, 0.0)?;
    let reference = (-args.omega.abs()).exp();
    let mut rows = Vec::with_capacity(args.t.0.len());
    for &t in &args.t.0 {
        if args.mu_scan {
            let steps = args.mu_steps.max(2);
            let mut flips = 0;
            let mut prev = None;
            for k in 1..steps {
                let now = chronology_threshold(&d1, &d2, k as f64 / steps as f64, t)?;
                if prev.is_some_and(|p| p != now) {
                    flips += 1;
                }
                prev = Some(now);
            }
            if flips != 1 {
                return Err(Failure::Run(format!("chronology changes {flips} times on the μ grid at t = {t}")));
            }
        }
        let flip = chronology_flip(&d1, &d2, t, args.tol)?;
        rows.push(Row::new(t, (0, 1), flip, reference));
    }
    write_csv(&args.out, &rows)?;
    let worst = rows.iter().map(|r| r.error).fold(0.0, f64::max);
    let first = &rows[0];
    println!(
        "threshold: flip {:.12} at t={} (reference {reference:.12}), worst error {worst:.3e}",
        first.value, first.param
    );
    Ok(Outcome::Pass)
}

fn cone_transfer(args: &ConeTransferArgs) -> Result<Outcome, Failure> {
    let (n, r, seed) = (args.base_n, args.base_radius, args.seed);
    let sample = match args.base {
        BaseKind::H1 => BaseSample::line_grid(n, -r, r),
        BaseKind::H2Disc => BaseSample::hyperbolic_disc(n, r, seed),
        BaseKind::EuclideanDisc => BaseSample::euclidean_disc(n, r, seed),
        BaseKind::Tree => return Err(Failure::Usage("cone-transfer needs a geodesic base".into())),
    };
    let (i, j) = match args.pair.as_deref() {
        Some(&[i, j]) if i < n && j < n && i != j => (i, j),
        Some(p) => return Err(Failure::Usage(format!("--pair needs two distinct indices below {n}, got {p:?}"))),
        None => (1..n)
            .find(|&j| (0.2..0.9).contains(&sample.distance(0, j)))
            .map(|j| (0, j))
            .ok_or_else(|| Failure::Run("no base pair at distance in (0.2, 0.9)".into()))?,
    };
    let fit = sample.transfer_fit(i, j, args.r2, args.r3, &args.eps.0)?;
    let rows: Vec<EpsRow> = fit
        .rows
        .iter()
        .map(|row| EpsRow {
            eps: row.eps,
            i,
            j,
            value: row.defect,
            reference: row.predicted,
            error: (row.defect - row.predicted).abs(),
        })
        .collect();
    write_csv(&args.out, &rows)?;
    println!(
        "cone-transfer: slope {:.6} epsCoefficient {:.6} relative error {:.3e} (pair {i},{j}, mu {:.6}, r_m {:.6})",
        fit.slope, fit.eps_coefficient, fit.relative_error, fit.mu, fit.r_m
    );
    Ok(Outcome::Pass)
}

fn midpoint(args: &MidpointArgs) -> Result<Outcome, Failure> {
    let (d1, d2) = args.pair.directions()?;
    let mut rows = Vec::new();
    let mut omega = 0.0;
    for k in 1..=args.levels {
        let eps = 2f64.powi(-(k as i32));
        let m = direction_midpoint(&d1, &d2, eps)?;
        omega = m.omega;
        rows.push(EpsRow {
            eps,
            i: 0,
            j: 2,
            value: m.angles[0],
            reference: m.omega / 2.0,
            error: (m.angles[0] - m.omega / 2.0).abs(),
        });
        rows.push(EpsRow {
            eps,
            i: 2,
            j: 1,
            value: m.angles[1],
            reference: m.omega / 2.0,
            error: (m.angles[1] - m.omega / 2.0).abs(),
        });
    }
    write_csv(&args.pair.out, &rows)?;
    let cauchy = midpoint_cauchy(&d1, &d2, args.levels)?;
    let rate = cauchy.rate.map_or("n/a".into(), |r| format!("{r:.3}"));
    println!("direction-midpoint: omega {omega:.6}, Cauchy constant {:.3e}, rate {rate}", cauchy.constant);
    Ok(Outcome::Pass)
}

fn grid_rows(g: &lorcomp::directions::AngleGrid, reference: f64) -> Vec<GridRow> {
    let mut rows = Vec::new();
    for (i, &t) in g.t.iter().enumerate() {
        for (j, &s) in g.s.iter().enumerate() {
            let value = g.theta[i][j];
            rows.push(GridRow { t, s, value, reference, error: value.map(|v| (v - reference).abs()) });
        }
    }
    rows
}

fn monotonicity(args: &MonotonicityArgs) -> Result<Outcome, Failure> {
    let (d1, d2) = args.pair.directions()?;
    let grid = args.grid.grid()?;
    let smooth = smooth_angle(&d1, &d2)?;
    let g = angle_estimate_with(&d1, &d2, &grid, &Curvature::flat())?;
    let v = theta_monotonicity(&d1, &d2, &grid, args.side.into(), args.tol)?;
    write_csv(&args.pair.out, &grid_rows(&g, smooth))?;
    println!(
        "monotonicity {}: comparisons {}, worst defect {:.3e}, {}",
        v.side,
        v.comparisons,
        v.defect,
        if v.pass { "pass" } else { "fail" }
    );
    Ok(Outcome::Pass)
}

fn angle(args: &AngleArgs) -> Result<Outcome, Failure> {
    let (d1, d2) = args.pair.directions()?;
    let g = angle_estimate_with(&d1, &d2, &args.grid.grid()?, &Curvature::new(args.k)?)?;
    let smooth = smooth_angle(&d1, &d2)?;
    write_csv(&args.pair.out, &grid_rows(&g, smooth))?;
    let show = |v: Option<f64>| v.map_or("n/a".into(), |v| format!("{v:.9}"));
    let warning = g.warning.as_ref().map_or(String::new(), |w| format!(" ({w})"));
    println!("angle: estimate {} extrapolated {} smooth {smooth:.9}{warning}", show(g.estimate), show(g.extrapolated));
    Ok(Outcome::Pass)
}

pub fn run(cmd: &ExperimentCmd) -> Result<Outcome, Failure> {
    match cmd {
        ExperimentCmd::Blowup(a) => blowup(a),
        ExperimentCmd::Threshold(a) => threshold(a),
        ExperimentCmd::ConeTransfer(a) => cone_transfer(a),
        ExperimentCmd::DirectionMidpoint(a) => midpoint(a),
        ExperimentCmd::Monotonicity(a) => monotonicity(a),
        ExperimentCmd::Angle(a) => angle(a),
    }
}
