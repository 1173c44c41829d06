use std::path::PathBuf;

use clap::{Args, ValueEnum};
use lorcomp::cone::{base_to_json, build_cone_space, random_tree, BaseSample};
use lorcomp::lorspace::{space_to_json, sprinkle, sprinkle_with_midpoints, MidpointPlan, Region};
use lorcomp::{MetricSpace, Space};

use crate::io::{parse_fractions, parse_positive_list, parse_range, write_atomic, List};
use crate::{ambient_spec, AmbientName, Failure, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Minkowski,
    Desitter,
    Antidesitter,
    Cone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BaseKind {
    H1,
    H2Disc,
    EuclideanDisc,
    Tree,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 1.0, value_parser = crate::io::parse_positive)]
    pub scale: f64,
    /// Number of sprinkled points.
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Coordinate box `t0,t1,x0,x1[,y0,y1]`.
    #[arg(long = "box", value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1,-1,1")]
    pub region: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Append approximate midpoints of this many long timelike pairs.
    #[arg(long)]
    pub midpoints: Option<usize>,
    #[arg(long, default_value = "1e-1,1e-2,1e-3", value_parser = parse_positive_list)]
    pub eps: List,
    #[arg(long, default_value = "0.25,0.5,0.75", value_parser = parse_fractions)]
    pub mus: List,
    /// Base of a cone.
    #[arg(long, value_enum)]
    pub base: Option<BaseKind>,
    #[arg(long, default_value_t = 20)]
    pub base_n: usize,
    /// Radius of the disc bases, half-length of the `h1` segment.
    #[arg(long, default_value_t = 1.0, value_parser = crate::io::parse_positive)]
    pub base_radius: f64,
    /// Append ε-midpoints (at `--eps`) of this many base pairs.
    #[arg(long)]
    pub base_midpoints: Option<usize>,
    /// Cone radii `a:b:step`.
    #[arg(long, default_value = "0.5:2.0:0.5", value_parser = parse_range)]
    pub radii: List,
    /// Include the cone apex.
    #[arg(long)]
    pub apex: bool,
    /// Also write the base metric space.
    #[arg(long)]
    pub base_out: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

impl GenArgs {
    fn region(&self) -> Result<Region<f64>, Failure> {
        let b = &self.region;
        let region = match b.len() {
            4 => Region::new((b[0], b[1]), (b[2], b[3])),
            6 => Region::new((b[0], b[1]), (b[2], b[3])).with_y((b[4], b[5])),
            k => return Err(Failure::Usage(format!("--box needs 4 or 6 values, got {k}"))),
        };
        match (self.dim, region.y) {
            (3, None) => Ok(region.with_y(region.x)),
            (2, Some(_)) => Err(Failure::Usage("--box has y bounds but --dim is 2".into())),
            _ => Ok(region),
        }
    }
}

fn base_space(args: &GenArgs, kind: BaseKind) -> Result<MetricSpace, Failure> {
    let (n, r, seed) = (args.base_n, args.base_radius, args.seed);
    let sample = match kind {
        BaseKind::Tree => {
            if args.base_midpoints.is_some() {
                return Err(Failure::Usage("--base-midpoints needs a geodesic base".into()));
            }
            return Ok(random_tree(n, seed)?);
        }
        BaseKind::H1 => BaseSample::line_grid(n, -r, r),
        BaseKind::H2Disc => BaseSample::hyperbolic_disc(n, r, seed),
        BaseKind::EuclideanDisc => BaseSample::euclidean_disc(n, r, seed),
    };
    let sample = match args.base_midpoints {
        Some(pairs) => sample.with_eps_midpoints(pairs, &args.eps.0)?.0,
        None => sample,
    };
    Ok(sample.metric()?)
}

fn generate(args: &GenArgs) -> Result<Space, Failure> {
    let name = match args.kind {
        GenKind::Cone => {
            let kind = args.base.ok_or_else(|| Failure::Usage("gen cone needs --base".into()))?;
            let base = base_space(args, kind)?;
            if let Some(path) = &args.base_out {
                write_atomic(path, base_to_json(&base).as_bytes())?;
            }
            return Ok(build_cone_space(&base, &args.radii.0, args.apex)?);
        }
        GenKind::Minkowski => AmbientName::Minkowski,
        GenKind::Desitter => AmbientName::Desitter,
        GenKind::Antidesitter => AmbientName::Antidesitter,
    };
    if args.base.is_some() || args.base_out.is_some() {
        return Err(Failure::Usage("--base and --base-out apply to cones only".into()));
    }
    let spec = ambient_spec(name, args.dim, args.scale)?;
    let region = args.region()?;
    let space = match args.midpoints {
        Some(pairs) => {
            let plan =
                MidpointPlan { pairs, mus: args.mus.0.clone(), eps_levels: args.eps.0.clone(), offset_fraction: 0.5 };
            sprinkle_with_midpoints(&spec, &region, args.n, &plan, args.seed)
        }
        None => sprinkle(&spec, &region, args.n, args.seed),
    };
    space.map_err(|e| match e {
        lorcomp::Error::Generation(msg) => Failure::Run(format!("generation failed: {msg}")),
        e => e.into(),
    })
}

pub fn run(args: &GenArgs) -> Result<Outcome, Failure> {
    let space = generate(args)?;
    write_atomic(&args.out, space_to_json(&space).as_bytes())?;
    println!("n={} causal_pairs={} out={}", space.len(), space.causal_pair_count(), args.out.display());
    Ok(Outcome::Pass)
}
