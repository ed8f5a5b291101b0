use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use mdepth::depth::{expectile_depth, tukey_depth_2d_exact};
use mdepth::directions;
use mdepth::risk;
use mdepth::{
    conditional_region_2d, depth_region_2d, m_median, mdepth_grid_many, simulate_cigar, simulate_hetero, Direction,
    Engine, ExpectileDepthOptions, Kernel, LossSpec, MedianOptions, Order, RegressionData, Sample, Series,
};

use crate::error::{CliError, CliResult};
use crate::io::{emit_json, read_csv, write_csv, write_csv_to, Table};
use crate::output::*;
use crate::svg::write_regions_svg;

#[derive(Parser, Debug)]
#[command(name = "mdepth", version, about = "Halfspace M-depth, M-quantiles and expectile regions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Univariate M-quantile of one column.
    Mq(MqArgs),
    /// Depth of the points in a second CSV.
    Depth(DepthArgs),
    /// Bivariate depth regions.
    Region(RegionArgs),
    /// M-median.
    Median(MedianArgs),
    /// Expectile risk halfspaces, upper envelopes and coherency checks.
    Risk(RiskArgs),
    /// Conditional expectile regions of bivariate responses.
    Regress(RegressArgs),
    /// Write a synthetic data set.
    Simulate(SimulateArgs),
    /// Mean test statistic 1/2 - ED(mu0, P_n).
    Meantest(MeantestArgs),
}

fn parse_loss(s: &str) -> Result<LossSpec<f64>, String> {
    s.parse().map_err(|e: mdepth::Error| e.to_string())
}

fn parse_order(s: &str) -> Result<f64, String> {
    let a: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    Order::new(a).map(Order::value).map_err(|e| e.to_string())
}

/// A comma-separated list of numbers, e.g. `"1,-0.5"`.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(pub Vec<f64>);

fn parse_vector(s: &str) -> Result<Vector, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<Result<Vec<_>, _>>()
        .and_then(
            |v| if v.iter().all(|x| x.is_finite()) { Ok(Vector(v)) } else { Err("entries must be finite".into()) },
        )
}

fn parse_orders(s: &str) -> Result<Vector, String> {
    s.split(',').map(parse_order).collect::<Result<Vec<_>, _>>().map(Vector)
}

#[derive(Args, Debug)]
pub struct MqArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Column name or 0-based index.
    #[arg(long, default_value = "0")]
    pub col: String,
    #[arg(long, value_parser = parse_loss)]
    pub loss: LossSpec<f64>,
    #[arg(long, value_parser = parse_order)]
    pub alpha: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DepthArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Points to evaluate, one per row, same columns as the input.
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long, value_parser = parse_loss)]
    pub loss: LossSpec<f64>,
    /// Size of the direction grid.
    #[arg(long, conflicts_with = "optimize")]
    pub directions: Option<usize>,
    /// Exact or optimized depth instead of a grid: the great-circle optimizer
    /// for quadratic loss, the exact sweep for absolute loss in the plane.
    #[arg(long)]
    pub optimize: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RegionArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// One order, or a comma-separated list for nested regions.
    #[arg(long, value_parser = parse_orders)]
    pub alpha: Vector,
    #[arg(long, value_parser = parse_loss)]
    pub loss: LossSpec<f64>,
    #[arg(long, default_value_t = mdepth::region::REGION_DIRECTIONS)]
    pub directions: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also draw the regions over the data.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MedianArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_loss)]
    pub loss: LossSpec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum RiskCheck {
    Translation,
    Homogeneity,
    Monotonicity,
    Subadditivity,
    Superadditivity,
}

#[derive(Args, Debug)]
pub struct RiskArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_order)]
    pub alpha: f64,
    /// Direction, e.g. "1,0.5"; normalized before use.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub u: Option<Vector>,
    /// Upper envelope over this many directions of the positive quadrant.
    #[arg(long, conflicts_with = "check")]
    pub envelope: Option<usize>,
    /// Run one coherency check along `--u`.
    #[arg(long, value_enum)]
    pub check: Option<RiskCheck>,
    /// Second sample for monotonicity and additivity checks.
    #[arg(long)]
    pub other: Option<PathBuf>,
    /// Shift vector for the translation check.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub shift: Option<Vector>,
    /// Factor for the homogeneity check.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RegressArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Covariate columns, comma-separated names or indices; may be empty.
    #[arg(long, default_value = "")]
    pub xcols: String,
    /// Exactly two response columns.
    #[arg(long)]
    pub ycols: String,
    #[arg(long, value_parser = parse_order)]
    pub alpha: f64,
    /// Covariate value(s) at which to build a region; repeat for several.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub at: Vec<Vector>,
    /// `linear`, or `local:H[:gaussian|epanechnikov]` with bandwidth H.
    #[arg(long, default_value = "linear")]
    pub engine: String,
    #[arg(long, default_value_t = mdepth::regression::CONDITIONAL_DIRECTIONS)]
    pub directions: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum Model {
    Cigar,
    Hetero,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MeantestArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub mu0: Vector,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code. Errors go to stderr as one JSON object.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => return fail(&CliError::Usage(e.render().to_string().trim().to_string())),
    };
    match configure_threads().and_then(|_| execute(cli.command)) {
        Ok(()) => 0,
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> i32 {
    eprintln!("{}", e.to_json());
    e.exit_code()
}

/// Applies `MDEPTH_THREADS` (0 or unset: one thread per core).
fn configure_threads() -> CliResult<()> {
    let n = match std::env::var("MDEPTH_THREADS") {
        Ok(v) => {
            v.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("MDEPTH_THREADS=`{v}` is not a count")))?
        }
        Err(_) => 0,
    };
    // Fails only when the pool already exists, e.g. on a second call in one
    // process; the existing pool is kept.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::Mq(a) => mq(a),
        Command::Depth(a) => depth(a),
        Command::Region(a) => region(a),
        Command::Median(a) => median(a),
        Command::Risk(a) => risk_cmd(a),
        Command::Regress(a) => regress(a),
        Command::Simulate(a) => simulate(a),
        Command::Meantest(a) => meantest(a),
    }
}

fn order(a: f64) -> Order<f64> {
    Order::new(a).expect("validated by the parser")
}

fn mq(a: MqArgs) -> CliResult<()> {
    let table = read_csv(&a.input)?;
    let k = table.column_index(&a.col)?;
    let series = Series::new(table.column(k))?;
    let theta = series.m_quantile(&a.loss, order(a.alpha));
    let out = QuantileJson {
        column: table.headers[k].clone(),
        loss: a.loss.to_string(),
        alpha: a.alpha,
        theta,
        n: series.len(),
    };
    emit_json(&out, a.out.as_deref())
}

fn depth(a: DepthArgs) -> CliResult<()> {
    let sample = read_csv(&a.input)?.to_sample()?;
    let points = read_csv(&a.points)?;
    if points.ncols() != sample.dim() {
        return Err(CliError::Data(format!("points have {} columns, data has {}", points.ncols(), sample.dim())));
    }
    let rows: Vec<Vec<f64>> = (0..points.nrows()).map(|i| points.row(i).to_vec()).collect();
    let results = if a.optimize {
        match (a.loss, sample.dim()) {
            (LossSpec::Quadratic, _) => {
                let opts = ExpectileDepthOptions::default();
                rows.iter()
                    .map(|z| {
                        let r = expectile_depth(&sample, z, &opts)?;
                        Ok(depth_json(z, &r, "optimize"))
                    })
                    .collect::<CliResult<Vec<_>>>()?
            }
            (LossSpec::Absolute, 2) => rows
                .iter()
                .map(|z| {
                    let v = tukey_depth_2d_exact(&sample, z)?;
                    Ok(DepthJson {
                        point: z.clone(),
                        depth: v,
                        argmin_u: Vec::new(),
                        method: "exact",
                        evaluations: 0,
                        converged: true,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?,
            _ => {
                return Err(CliError::Usage(
                    "--optimize supports quadratic loss, or absolute loss for bivariate data".into(),
                ))
            }
        }
    } else {
        let l = a.directions.unwrap_or(mdepth::region::REGION_DIRECTIONS);
        if l == 0 {
            return Err(CliError::Usage("--directions must be positive".into()));
        }
        let grid = directions::grid(sample.dim(), l);
        mdepth_grid_many(&sample, &a.loss, &rows, &grid)?
            .iter()
            .zip(&rows)
            .map(|(r, z)| depth_json(z, r, "grid"))
            .collect()
    };
    emit_json(&results, a.out.as_deref())
}

fn depth_json(z: &[f64], r: &mdepth::DepthResult<f64>, method: &'static str) -> DepthJson {
    DepthJson {
        point: z.to_vec(),
        depth: r.value,
        argmin_u: r.argmin_u.as_slice().to_vec(),
        method,
        evaluations: r.evals,
        converged: r.converged,
    }
}

fn bivariate(table: &Table) -> CliResult<Sample<f64>> {
    if table.ncols() != 2 {
        return Err(CliError::Data(format!("need exactly 2 columns, got {}", table.ncols())));
    }
    table.to_sample()
}

fn region(a: RegionArgs) -> CliResult<()> {
    let sample = bivariate(&read_csv(&a.input)?)?;
    if a.directions < 3 {
        return Err(CliError::Usage("--directions must be at least 3".into()));
    }
    let alphas = a.alpha.0;
    let regions = alphas
        .iter()
        .map(|&al| depth_region_2d(&sample, &a.loss, order(al), a.directions))
        .collect::<mdepth::Result<Vec<_>>>()?;
    let json: Vec<RegionJson> =
        regions.iter().zip(&alphas).map(|(r, &al)| RegionJson::new(r, a.loss.to_string(), al)).collect();
    if let Some(path) = &a.svg {
        write_regions_svg(&regions, &sample, path)?;
    }
    emit_json(&json, a.out.as_deref())
}

fn median(a: MedianArgs) -> CliResult<()> {
    let sample = read_csv(&a.input)?.to_sample()?;
    let m = m_median(&sample, &a.loss, &MedianOptions::default())?;
    emit_json(&MedianJson { loss: a.loss.to_string(), median: m }, a.out.as_deref())
}

fn direction(v: Option<Vector>, d: usize) -> CliResult<Direction<f64>> {
    let v = v.ok_or_else(|| CliError::Usage("--u is required here".into()))?.0;
    if v.len() != d {
        return Err(CliError::Usage(format!("--u has {} entries, data has {d} columns", v.len())));
    }
    Direction::new(v).map_err(|e| CliError::Usage(e.to_string()))
}

fn risk_cmd(a: RiskArgs) -> CliResult<()> {
    let x = read_csv(&a.input)?.to_sample()?;
    let o = order(a.alpha);
    if let Some(l) = a.envelope {
        if x.dim() != 2 {
            return Err(CliError::Data("upper envelopes need bivariate data".into()));
        }
        if l < 2 {
            return Err(CliError::Usage("--envelope needs at least 2 directions".into()));
        }
        let env = risk::upper_envelope_2d(&x, o, l)?;
        return emit_json(&RegionJson::new(&env, LossSpec::<f64>::Quadratic.to_string(), a.alpha), a.out.as_deref());
    }
    let u = direction(a.u, x.dim())?;
    let Some(check) = a.check else {
        let h = risk::risk_halfspace(&x, o, &u)?;
        return emit_json(
            &RiskHalfspaceJson { alpha: a.alpha, u: h.u.as_slice().to_vec(), theta: h.theta },
            a.out.as_deref(),
        );
    };
    let other = || -> CliResult<Sample<f64>> {
        let p = a.other.as_deref().ok_or_else(|| CliError::Usage("--other is required for this check".into()))?;
        read_csv(p)?.to_sample()
    };
    let (name, report) = match check {
        RiskCheck::Translation => {
            let c = a.shift.clone().ok_or_else(|| CliError::Usage("--shift is required for translation".into()))?.0;
            if c.len() != x.dim() {
                return Err(CliError::Usage(format!("--shift has {} entries, data has {} columns", c.len(), x.dim())));
            }
            ("translation", risk::check_translation(&x, &c, o, &u)?)
        }
        RiskCheck::Homogeneity => {
            let l = a.lambda.ok_or_else(|| CliError::Usage("--lambda is required for homogeneity".into()))?;
            if !(l > 0.0 && l.is_finite()) {
                return Err(CliError::Usage("--lambda must be positive".into()));
            }
            ("homogeneity", risk::check_homogeneity(&x, l, o, &u)?)
        }
        RiskCheck::Monotonicity => ("monotonicity", risk::check_monotonicity(&x, &other()?, o, &u)?),
        RiskCheck::Subadditivity => ("subadditivity", risk::check_subadditivity(&x, &other()?, o, &u)?),
        RiskCheck::Superadditivity => ("superadditivity", risk::check_superadditivity(&x, &other()?, o, &u)?),
    };
    emit_json(&RiskReportJson::new(name, &report), a.out.as_deref())
}

fn parse_engine(s: &str) -> CliResult<Engine<f64>> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    match parts.as_slice() {
        ["linear"] => Ok(Engine::Linear),
        ["local", h, rest @ ..] if rest.len() <= 1 => {
            let bandwidth: f64 = h
                .parse()
                .ok()
                .filter(|v: &f64| *v > 0.0 && v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("bandwidth `{h}` must be a positive number")))?;
            let kernel = match rest.first().copied() {
                None | Some("gaussian") => Kernel::Gaussian,
                Some("epanechnikov") => Kernel::Epanechnikov,
                Some(k) => return Err(CliError::Usage(format!("unknown kernel `{k}`"))),
            };
            Ok(Engine::Local { bandwidth, kernel })
        }
        _ => Err(CliError::Usage(format!("unknown engine `{s}`; use linear or local:H"))),
    }
}

fn columns(table: &Table, spec: &str) -> CliResult<Vec<usize>> {
    spec.split(',').filter(|t| !t.trim().is_empty()).map(|t| table.column_index(t)).collect()
}

fn regress(a: RegressArgs) -> CliResult<()> {
    let engine = parse_engine(&a.engine)?;
    let table = read_csv(&a.input)?;
    let xcols = columns(&table, &a.xcols)?;
    let ycols = columns(&table, &a.ycols)?;
    if ycols.len() != 2 {
        return Err(CliError::Usage(format!("--ycols needs 2 columns, got {}", ycols.len())));
    }
    if a.directions < 3 {
        return Err(CliError::Usage("--directions must be at least 3".into()));
    }
    let p = xcols.len();
    let at: Vec<Vec<f64>> =
        if a.at.is_empty() && p == 0 { vec![Vec::new()] } else { a.at.iter().map(|v| v.0.clone()).collect() };
    if at.is_empty() {
        return Err(CliError::Usage("--at is required when covariates are given".into()));
    }
    if let Some(x) = at.iter().find(|x| x.len() != p) {
        return Err(CliError::Usage(format!("--at value has {} entries, expected {p}", x.len())));
    }
    let responses = Sample::from_flat(table.nrows(), 2, table.select(&ycols))?;
    let data = RegressionData::new(p, table.select(&xcols), responses)?;
    let o = order(a.alpha);
    let out = at
        .iter()
        .map(|x| {
            let r = conditional_region_2d(&data, o, x, a.directions, &engine)?;
            Ok(ConditionalRegionJson {
                x: x.clone(),
                alpha: a.alpha,
                engine: a.engine.trim().to_string(),
                empty: r.is_empty(),
                clipped: r.is_clipped(),
                vertices: r.vertices.clone(),
                halfspaces: r.halfspaces.iter().map(HalfspaceJson::from).collect(),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    emit_json(&out, a.out.as_deref())
}

/// Table produced by `simulate`.
pub fn simulate_table(model: Model, n: usize, seed: u64) -> CliResult<Table> {
    match model {
        Model::Cigar => {
            let s = simulate_cigar::<f64>(n, seed)?;
            Table::new(vec!["x".into(), "y".into()], s.as_flat().to_vec())
        }
        Model::Hetero => {
            let d = simulate_hetero::<f64>(n, seed)?;
            let mut data = Vec::with_capacity(3 * n);
            for i in 0..d.len() {
                data.push(d.covariate_row(i)[0]);
                data.extend_from_slice(d.responses().row(i));
            }
            Table::new(vec!["x".into(), "y1".into(), "y2".into()], data)
        }
    }
}

fn simulate(a: SimulateArgs) -> CliResult<()> {
    let table = simulate_table(a.model, a.n, a.seed)?;
    match &a.out {
        Some(p) => write_csv(&table, p),
        None => write_csv_to(&table, std::io::stdout().lock()).map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn meantest(a: MeantestArgs) -> CliResult<()> {
    let sample = read_csv(&a.input)?.to_sample()?;
    let mu0 = a.mu0.0;
    if mu0.len() != sample.dim() {
        return Err(CliError::Usage(format!("--mu0 has {} entries, data has {} columns", mu0.len(), sample.dim())));
    }
    let r = expectile_depth(&sample, &mu0, &ExpectileDepthOptions::default())?;
    let out = MeanTestJson {
        mu0,
        depth: r.value,
        statistic: 0.5 - r.value,
        argmin_u: r.argmin_u.as_slice().to_vec(),
        n: sample.len(),
    };
    emit_json(&out, a.out.as_deref())
}
