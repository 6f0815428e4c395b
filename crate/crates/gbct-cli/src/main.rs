//! Batch front end for the gbct library.
//!
//! Subcommands: `fit` (cluster a CSV), `gen` (synthetic datasets), `eval`
//! (ACC/NMI between label files), `plot` (scatter SVG), `bench` (timing
//! ladder). stdout carries machine-readable results only; diagnostics go
//! to stderr. Exit codes: 0 success, 1 file or parse trouble, 2 invalid
//! parameters or degenerate clustering inputs.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gbct::generate::{generate, GenSpec};
use gbct::{ball, cluster, dataset, metrics, svg};
use gbct::{fit, Error, FitConfig, FitReport, KChoice, SplitConfig, SplitPolicy};

#[derive(Parser)]
#[command(name = "gbct", version, about = "Granular-ball clustering toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a CSV dataset and write one label per row.
    Fit(FitArgs),
    /// Write a labeled synthetic dataset as CSV.
    Gen(GenArgs),
    /// Print ACC and NMI between a predicted and a true label file.
    Eval(EvalArgs),
    /// Render a dataset as a scatter SVG.
    Plot(PlotArgs),
    /// Time the full pipeline over a fixed size ladder; print CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct FitArgs {
    /// Input CSV; a header row is detected automatically.
    #[arg(long)]
    input: PathBuf,
    /// Where to write the per-row cluster labels.
    #[arg(long)]
    output: PathBuf,
    /// Cluster count; omit to detect it from the merge trace.
    #[arg(long, conflicts_with = "adaptive")]
    k: Option<usize>,
    /// Detect the cluster count automatically (default when --k is absent).
    #[arg(long)]
    adaptive: bool,
    /// Consistency a ball needs to stop splitting, in (0, 1).
    #[arg(long, default_value_t = 0.70)]
    threshold: f64,
    /// Rule for accepting a binary split.
    #[arg(long, value_enum, default_value_t = PolicyArg::Both)]
    split_policy: PolicyArg,
    /// Balls below this multiple of the average density count as noise.
    #[arg(long, default_value_t = 0.2)]
    noise_factor: f64,
    /// Merge-distance jump ratio that marks the adaptive knee.
    #[arg(long, default_value_t = 2.0)]
    jump_factor: f64,
    /// Seed for coarse division and splitting.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Rescale features to zero mean and unit variance before fitting.
    #[arg(long)]
    standardize: bool,
    /// Zero-based column holding ground-truth labels to strip first.
    #[arg(long)]
    label_col: Option<usize>,
    /// Also write the per-round merge trace CSV here.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Dataset family to generate.
    #[arg(long, value_enum)]
    shape: ShapeArg,
    /// Number of points.
    #[arg(long)]
    n: usize,
    /// Moon/circle/spiral jitter, or blob standard deviation.
    #[arg(long, default_value_t = 0.05)]
    jitter: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Where to write the CSV (feature columns plus a label column).
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Predicted label file, one integer per line.
    pred: PathBuf,
    /// Ground-truth label file, one integer per line.
    truth: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    /// Input CSV; a header row is detected automatically.
    #[arg(long)]
    input: PathBuf,
    /// Where to write the SVG.
    #[arg(long)]
    output: PathBuf,
    /// Two comma-separated dimensions to plot, e.g. --dims 0,2.
    /// Required when the data has more than two dimensions.
    #[arg(long)]
    dims: Option<String>,
    /// Zero-based column holding labels used to color the points.
    #[arg(long)]
    label_col: Option<usize>,
    /// Overlay the granular-ball outlines on top of the points.
    #[arg(long)]
    balls: bool,
    /// Consistency threshold for the overlay's splitting pass.
    #[arg(long, default_value_t = 0.70)]
    threshold: f64,
    /// Seed for the overlay's splitting pass.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Dataset family for the ladder.
    #[arg(long, value_enum, default_value_t = ShapeArg::Blobs)]
    shape: ShapeArg,
    /// Moon/circle/spiral jitter, or blob standard deviation.
    #[arg(long, default_value_t = 0.5)]
    jitter: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    /// Accept when both children beat the parent's density.
    Both,
    /// Accept when either child beats the parent's density.
    Either,
    /// Accept when both children beat the parent's consistency.
    Consistent,
}

impl From<PolicyArg> for SplitPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Both => SplitPolicy::BothChildrenDenser,
            PolicyArg::Either => SplitPolicy::EitherChildDenser,
            PolicyArg::Consistent => SplitPolicy::ChildrenConsistent,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum ShapeArg {
    Moons,
    Circles,
    Blobs,
    Spiral,
}

impl ShapeArg {
    fn to_spec(self, jitter: f64) -> GenSpec {
        match self {
            ShapeArg::Moons => GenSpec::Moons { jitter },
            ShapeArg::Circles => GenSpec::Circles { rings: 2, jitter },
            ShapeArg::Blobs => GenSpec::Blobs { centers: blob_corners(), std: jitter },
            ShapeArg::Spiral => GenSpec::Spiral { turns: 2.0, jitter },
        }
    }
}

// Equilateral triangle wide enough that blobs stay separated at the
// default jitter scales.
fn blob_corners() -> Vec<Vec<f64>> {
    vec![vec![8.0, 0.0], vec![-4.0, 6.928], vec![-4.0, -6.928]]
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: Cli) -> gbct::Result<()> {
    match cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Plot(args) => cmd_plot(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

// Exit 1: the input files are unusable. Exit 2: the parameters or the
// data shape make the requested clustering impossible.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io { .. }
        | Error::RaggedRow { .. }
        | Error::BadCell { .. }
        | Error::LabelColumnOutOfRange { .. }
        | Error::EmptyInput(_)
        | Error::LengthMismatch { .. } => 1,
        Error::InvalidParameter(_)
        | Error::TooFewMembers { .. }
        | Error::TooFewBalls(_)
        | Error::Degenerate(_)
        | Error::KUnreachable { .. } => 2,
    }
}

fn cmd_fit(args: FitArgs) -> gbct::Result<()> {
    let has_header = sniff_header(&args.input)?;
    let ds = dataset::load_csv(&args.input, has_header, args.label_col)?;
    let cfg = FitConfig {
        split: SplitConfig {
            consistency_threshold: args.threshold,
            split_acceptance: args.split_policy.into(),
            seed: args.seed,
            ..SplitConfig::default()
        },
        k: match args.k {
            Some(k) => KChoice::Fixed(k),
            None => KChoice::Adaptive,
        },
        noise_factor: args.noise_factor,
        jump_factor: args.jump_factor,
        standardize: args.standardize,
    };
    let report = fit(&ds, &cfg)?;
    dataset::save_labels_csv(&args.output, &report.clustering.point_labels)?;
    if let Some(path) = &args.trace_out {
        write_text(path, &cluster::trace_csv(&report.clustering.trace))?;
    }
    println!("{}", fit_line(&report, args.k.is_none()));
    eprintln!("wrote {} labels to {}", report.n, args.output.display());
    Ok(())
}

fn fit_line(report: &FitReport, adaptive: bool) -> String {
    let mut line = format!(
        "n={} d={} m={} k={} noise_balls={} split_ms={:.3} merge_ms={:.3} total_ms={:.3}",
        report.n,
        report.dim,
        report.m,
        report.k,
        report.noise_balls,
        report.split_ms,
        report.merge_ms,
        report.total_ms,
    );
    if adaptive {
        match &report.knee {
            Some(knee) => {
                let _ = write!(line, " knee=round{}:{:.3}", knee.round_index, knee.ratio);
            }
            None => line.push_str(" knee=none"),
        }
    }
    line
}

fn cmd_gen(args: GenArgs) -> gbct::Result<()> {
    let spec = args.shape.to_spec(args.jitter);
    let ds = generate(&spec, args.n, args.seed)?;
    dataset::save_csv(&args.output, &ds)?;
    eprintln!(
        "wrote {} points in {} clusters to {}",
        ds.len(),
        spec.cluster_count(),
        args.output.display()
    );
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> gbct::Result<()> {
    let pred = dataset::load_labels_csv(&args.pred)?;
    let truth = dataset::load_labels_csv(&args.truth)?;
    let acc = metrics::accuracy(&pred, &truth)?;
    let nmi = metrics::nmi(&pred, &truth)?;
    println!("ACC {acc:.6}");
    println!("NMI {nmi:.6}");
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> gbct::Result<()> {
    let has_header = sniff_header(&args.input)?;
    let ds = dataset::load_csv(&args.input, has_header, args.label_col)?;
    let dims = match &args.dims {
        Some(text) => parse_dims(text)?,
        None if ds.dim() == 2 => (0, 1),
        None => {
            return Err(Error::InvalidParameter(format!(
                "plotting {}-dimensional data needs --dims i,j",
                ds.dim()
            )))
        }
    };
    let labels: Vec<i32> = match ds.labels() {
        Some(l) => l.to_vec(),
        None => vec![0; ds.len()],
    };
    let balls = if args.balls {
        let cfg = SplitConfig {
            consistency_threshold: args.threshold,
            seed: args.seed,
            ..SplitConfig::default()
        };
        let coarse = ball::coarse_divide(&ds, &cfg)?;
        Some(ball::split_all(&ds, coarse, &cfg)?)
    } else {
        None
    };
    let opts = svg::PlotOptions { dims, balls: args.balls, ..svg::PlotOptions::default() };
    let markup = svg::scatter_svg(&ds, &labels, balls.as_ref(), &opts)?;
    write_text(&args.output, &markup)?;
    eprintln!("wrote plot to {}", args.output.display());
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> gbct::Result<()> {
    let spec = args.shape.to_spec(args.jitter);
    let k = KChoice::Fixed(spec.cluster_count());
    println!("n,m,split_ms,merge_ms,total_ms");
    for &n in &[1000usize, 2000, 4000, 8000] {
        let ds = generate(&spec, n, args.seed)?;
        let cfg = FitConfig {
            split: SplitConfig { seed: args.seed, ..SplitConfig::default() },
            k,
            ..FitConfig::default()
        };
        let report = fit(&ds, &cfg)?;
        println!(
            "{},{},{:.3},{:.3},{:.3}",
            n, report.m, report.split_ms, report.merge_ms, report.total_ms
        );
    }
    Ok(())
}

// A line whose cells all parse as finite numbers is data, anything else
// is a header.
fn sniff_header(path: &Path) -> gbct::Result<bool> {
    let file = fs::File::open(path).map_err(|source| Error::Io { path: path.into(), source })?;
    let mut first = String::new();
    BufReader::new(file)
        .read_line(&mut first)
        .map_err(|source| Error::Io { path: path.into(), source })?;
    let line = first.trim_end_matches(['\r', '\n']);
    if line.is_empty() {
        return Ok(false);
    }
    Ok(!line.split(',').all(|cell| cell.trim().parse::<f64>().is_ok()))
}

fn parse_dims(text: &str) -> gbct::Result<(usize, usize)> {
    let bad =
        || Error::InvalidParameter(format!("--dims wants i,j with two indices, got {text:?}"));
    let mut parts = text.split(',');
    let x = parts.next().and_then(|p| p.trim().parse().ok()).ok_or_else(bad)?;
    let y = parts.next().and_then(|p| p.trim().parse().ok()).ok_or_else(bad)?;
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok((x, y))
}

fn write_text(path: &Path, text: &str) -> gbct::Result<()> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.into(), source })
}
