use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use planar_limits::electric::{effective_resistance, Flow, Network};
use planar_limits::experiment::{run_experiment, ExperimentRecipe};
use planar_limits::generators;
use planar_limits::graph::io::{graph_to_json, network_from_json, network_to_json};
use planar_limits::graph::PlanarGraph;
use planar_limits::limits::{ball_histogram, degree_tail, tv_distance, RootMode, TailScale, TailStatistic};
use planar_limits::pack::{pack_triangulation, supported_points, to_svg, PointCloud, SvgOptions};
use planar_limits::startree::{lift_flow, star_tree_transform};
use planar_limits::walks::{avoidance_exact_curve, avoidance_probability_with, StartLaw};

/// Planar graphs, their local limits, and recurrence experiments.
#[derive(Parser)]
#[command(name = "pll", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph or network as JSON.
    Gen(GenArgs),
    /// Circle-pack a disk triangulation.
    Pack(PackArgs),
    /// Effective resistance between two vertex sets.
    Reff(ReffArgs),
    /// Random-walk avoidance probabilities.
    #[command(subcommand)]
    Walk(WalkCommand),
    /// Star-tree transform, optionally lifting a flow.
    Startree(StartreeArgs),
    /// Count (δ, s)-supported points of a point cloud.
    Supported(SupportedArgs),
    /// Ball histograms and degree tails under random rootings.
    #[command(subcommand)]
    Limit(LimitCommand),
    /// Run an experiment recipe.
    Experiment {
        /// Recipe JSON file.
        recipe: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Path,
    Cycle,
    Grid,
    BinaryTree,
    TriangularDisk,
    Flip,
    RandomPlanar,
    RandomNetwork,
    Sharpness,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Vertex count (path, cycle, flip, random-planar, random-network) or side (grid).
    #[arg(long)]
    n: Option<usize>,
    /// Height (binary-tree, sharpness).
    #[arg(long)]
    h: Option<usize>,
    /// Radius (triangular-disk).
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Flip steps; defaults to 20 n.
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    degree_cap: Option<usize>,
    /// Fraction of non-tree edges kept (random-planar).
    #[arg(long, default_value_t = 0.5)]
    keep: f64,
    /// Extra-edge probability (random-network).
    #[arg(long, default_value_t = 0.2)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PackArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Outer-face vertices; defaults to the longest face.
    #[arg(long, value_delimiter = ',')]
    boundary: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    boundary_radius: f64,
    /// Normalize at this vertex and highlight it.
    #[arg(long)]
    root: Option<usize>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Draw tangency edges in the SVG.
    #[arg(long)]
    edges: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReffArgs {
    #[arg(long, alias = "in")]
    net: PathBuf,
    #[arg(long = "A", value_delimiter = ',', required = true)]
    a: Vec<usize>,
    #[arg(long = "Z", value_delimiter = ',', required = true)]
    z: Vec<usize>,
}

#[derive(Subcommand)]
enum WalkCommand {
    /// Monte Carlo estimate with a Wilson 95% interval.
    Avoid(AvoidArgs),
    /// Exact values by absorbing-chain iteration (small graphs).
    Exact {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "T", value_delimiter = ',', required = true)]
        horizons: Vec<usize>,
    },
}

#[derive(Args)]
struct AvoidArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// One horizon gives JSON; several give CSV.
    #[arg(long = "T", value_delimiter = ',', required = true)]
    horizons: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `uniform`, `stationary`, or a vertex id.
    #[arg(long, default_value = "uniform")]
    start: String,
}

#[derive(Args)]
struct StartreeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flow JSON `{"values": [...], "sources": [...], "sinks": [...]}` on the input graph.
    #[arg(long)]
    lift_flow: Option<PathBuf>,
}

#[derive(Args)]
struct SupportedArgs {
    /// JSON array of `[x, y]` points.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    s: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Uniform,
    Stationary,
}

impl From<ModeArg> for RootMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Uniform => RootMode::Uniform,
            ModeArg::Stationary => RootMode::Stationary,
        }
    }
}

#[derive(Args)]
struct Sampling {
    #[arg(long, value_enum, default_value = "uniform")]
    mode: ModeArg,
    /// Exact law over all roots instead of sampling.
    #[arg(long, conflicts_with = "samples")]
    census: bool,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum LimitCommand {
    /// Histogram of canonical ball codes.
    Hist {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Total variation distance between the ball laws of two graphs.
    Tv {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Exact exceedance curve `P(X >= k)` as CSV; the log-linear fit goes to stderr.
    Tail {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "uniform")]
        mode: ModeArg,
        #[arg(long)]
        neighbor_max: bool,
        /// Fit against `k^beta` instead of `k`.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = 1)]
        k_min: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            if !body.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn load_network(path: &Path) -> Result<(Network, Option<usize>)> {
    Ok(network_from_json(&read(path)?)?)
}

fn load_graph(path: &Path) -> Result<PlanarGraph> {
    Ok(load_network(path)?.0.graph().clone())
}

/// `x` with 12 significant digits.
fn significant12(x: f64) -> String {
    if !x.is_finite() {
        return if x > 0.0 { "inf".into() } else { x.to_string() };
    }
    if x == 0.0 {
        return "0.00000000000".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    format!("{x:.*}", (11 - magnitude).max(0) as usize)
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.with_context(|| format!("--{flag} is required for this family"))
}

fn gen(args: &GenArgs) -> Result<bool> {
    use FamilyArg::*;
    let body = match args.family {
        Path => graph_to_json(&generators::path(need(args.n, "n")?)?, Some(0)),
        Cycle => graph_to_json(&generators::cycle(need(args.n, "n")?)?, Some(0)),
        Grid => graph_to_json(&generators::grid(need(args.n, "n")?)?, Some(0)),
        BinaryTree => graph_to_json(&generators::binary_tree(need(args.h, "h")?)?, Some(0)),
        TriangularDisk => graph_to_json(&generators::triangular_disk(need(args.r, "r")?)?, Some(0)),
        Flip => {
            let n = need(args.n, "n")?;
            let steps = args.steps.unwrap_or(20 * n as u64);
            let g = generators::flip_mcmc_triangulation_capped(n, steps, args.seed, args.degree_cap)?;
            graph_to_json(&g, Some(0))
        }
        RandomPlanar => graph_to_json(&generators::random_planar(need(args.n, "n")?, args.keep, args.seed)?, Some(0)),
        RandomNetwork => network_to_json(&generators::random_network(need(args.n, "n")?, args.p, args.seed)?, Some(0)),
        Sharpness => {
            let s = generators::sharpness_graph(need(args.h, "h")?, args.alpha)?;
            network_to_json(&s.network, Some(s.root))
        }
    };
    emit(args.out.as_deref(), &body)?;
    Ok(true)
}

fn pack(args: &PackArgs) -> Result<bool> {
    let g = load_graph(&args.input)?;
    let boundary = if args.boundary.is_empty() {
        g.faces().into_iter().max_by_key(|f| f.len()).unwrap_or_default()
    } else {
        args.boundary.clone()
    };
    let radii: Vec<(usize, f64)> = boundary.iter().map(|&v| (v, args.boundary_radius)).collect();
    let mut p = pack_triangulation(&g, &radii)?;
    if let Some(root) = args.root {
        p = p.normalize_at_root(root)?;
    }
    let (angle, tangency, overlap) = (p.angle_error, p.tangency_error(), p.overlap_error());
    eprintln!(
        "iterations {} angle error {angle:.3e} tangency error {tangency:.3e} overlap {overlap:.3e}",
        p.iterations
    );
    if let Some(svg) = &args.svg {
        let opts = SvgOptions {
            root: args.root,
            edges: args.edges,
        };
        fs::write(svg, to_svg(&p, &opts)).with_context(|| format!("writing {}", svg.display()))?;
    }
    emit(args.out.as_deref(), &p.to_json())?;
    Ok(angle <= 1e-8 && tangency <= 1e-6 * p.radii.iter().cloned().fold(1.0, f64::max))
}

fn reff(args: &ReffArgs) -> Result<bool> {
    let (net, _) = load_network(&args.net)?;
    let r = effective_resistance(&net, &args.a, &args.z)?;
    println!("{}", significant12(r));
    Ok(true)
}

fn walk(cmd: &WalkCommand) -> Result<bool> {
    match cmd {
        WalkCommand::Avoid(a) => {
            let (net, _) = load_network(&a.input)?;
            let law = match a.start.as_str() {
                "uniform" => StartLaw::Uniform,
                "stationary" => StartLaw::Stationary,
                v => StartLaw::Fixed(v.parse().with_context(|| format!("bad --start `{v}`"))?),
            };
            let estimates = a
                .horizons
                .iter()
                .map(|&t| avoidance_probability_with(&net, law, t, a.trials, a.seed).map(|e| (t, e)))
                .collect::<planar_limits::Result<Vec<_>>>()?;
            if let [(_, e)] = estimates.as_slice() {
                println!("{}", json!({ "phi": e.phi, "ci": [e.ci.0, e.ci.1], "trials": e.trials }));
            } else {
                let mut w = csv::Writer::from_writer(std::io::stdout());
                w.write_record(["T", "phi", "ci_low", "ci_high", "trials", "phi_log_t"])?;
                for (t, e) in estimates {
                    w.write_record([
                        t.to_string(),
                        e.phi.to_string(),
                        e.ci.0.to_string(),
                        e.ci.1.to_string(),
                        e.trials.to_string(),
                        (e.phi * (t as f64).ln()).to_string(),
                    ])?;
                }
                w.flush()?;
            }
        }
        WalkCommand::Exact { input, horizons } => {
            let (net, _) = load_network(input)?;
            let t_max = *horizons.iter().max().expect("required");
            let curve = avoidance_exact_curve(&net, t_max)?;
            let phi: Vec<f64> = horizons.iter().map(|&t| curve[t - 1]).collect();
            println!("{}", json!({ "T": horizons, "phi": phi }));
        }
    }
    Ok(true)
}

fn startree(args: &StartreeArgs) -> Result<bool> {
    let g = load_graph(&args.input)?;
    let st = star_tree_transform(&g);
    let mut ok = true;
    if let Err(msg) = st.audit(&g) {
        eprintln!("audit failed: {msg}");
        ok = false;
    }
    if let Some(out) = &args.out {
        fs::write(out, st.to_json()).with_context(|| format!("writing {}", out.display()))?;
    }
    if let Some(path) = &args.lift_flow {
        let theta: Flow = serde_json::from_str(&read(path)?).context("parsing flow JSON")?;
        let lifted = lift_flow(&g, &theta, &st)?;
        let bound = lifted.energy_lifted <= 4.0 * lifted.energy * (1.0 + 1e-12);
        ok &= bound && lifted.exact_conservation;
        println!(
            "{}",
            json!({
                "energy": lifted.energy,
                "energy_subdivided": lifted.energy_subdivided,
                "energy_lifted": lifted.energy_lifted,
                "exact_conservation": lifted.exact_conservation,
                "root_divergence_error": lifted.root_divergence_error,
                "bound_4x": bound,
            })
        );
    } else if args.out.is_none() {
        println!("{}", st.to_json());
    }
    Ok(ok)
}

fn supported(args: &SupportedArgs) -> Result<bool> {
    let points: Vec<[f64; 2]> = serde_json::from_str(&read(&args.input)?).context("parsing points")?;
    let cloud = PointCloud::new(points)?;
    let s = supported_points(&cloud, args.delta, args.s)?;
    println!("{}", serde_json::to_string(&s)?);
    Ok(true)
}

fn histogram(g: &PlanarGraph, r: usize, s: &Sampling) -> Result<planar_limits::limits::BallHistogram> {
    let samples = (!s.census).then_some(s.samples);
    Ok(ball_histogram(g, r, samples, s.mode.into(), s.seed)?)
}

fn limit(cmd: &LimitCommand) -> Result<bool> {
    match cmd {
        LimitCommand::Hist { input, r, sampling } => {
            let h = histogram(&load_graph(input)?, *r, sampling)?;
            println!("{}", h.to_json());
        }
        LimitCommand::Tv {
            input,
            other,
            r,
            sampling,
        } => {
            let a = histogram(&load_graph(input)?, *r, sampling)?;
            let b = histogram(&load_graph(other)?, *r, sampling)?;
            println!("{}", json!({ "r": r, "tv": tv_distance(&a, &b)? }));
        }
        LimitCommand::Tail {
            input,
            mode,
            neighbor_max,
            beta,
            k_min,
        } => {
            let stat = if *neighbor_max {
                TailStatistic::NeighborMax
            } else {
                TailStatistic::Degree
            };
            let tail = degree_tail(&load_graph(input)?, (*mode).into(), stat)?;
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["k", "exceedance", "count"])?;
            for (k, p, c) in &tail.exceedance {
                w.write_record([k.to_string(), p.to_string(), c.to_string()])?;
            }
            w.flush()?;
            let scale = beta.map_or(TailScale::Linear, TailScale::Power);
            match tail.fit(scale, *k_min) {
                Ok(f) => eprintln!("fit: slope {} intercept {} r2 {} ({} points)", f.slope, f.intercept, f.r2, f.points),
                Err(e) => eprintln!("fit unavailable: {e}"),
            }
        }
    }
    Ok(true)
}

fn experiment(path: &Path) -> Result<bool> {
    let recipe = ExperimentRecipe::from_path(path)?;
    let report = run_experiment(&recipe)?;
    for (name, ok) in &report.audits {
        eprintln!("{} {name}", if *ok { "pass" } else { "FAIL" });
    }
    let mut written = vec![recipe.output.csv.display().to_string(), recipe.output.json.display().to_string()];
    if let (Some(svg), Some(_)) = (&recipe.output.svg, &report.svg) {
        written.push(svg.display().to_string());
    }
    eprintln!("wrote {}", written.join(", "));
    Ok(report.pass())
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("PLL_THREADS") {
        let n: usize = v.parse().with_context(|| format!("PLL_THREADS=`{v}` is not a number"))?;
        if n == 0 {
            bail!("PLL_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Pack(a) => pack(a),
        Command::Reff(a) => reff(a),
        Command::Walk(c) => walk(c),
        Command::Startree(a) => startree(a),
        Command::Supported(a) => supported(a),
        Command::Limit(c) => limit(c),
        Command::Experiment { recipe } => experiment(recipe),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::significant12;

    #[test]
    fn twelve_digits() {
        assert_eq!(significant12(2.0), "2.00000000000");
        assert_eq!(significant12(1.0 / 3.0), "0.333333333333");
        assert_eq!(significant12(1234.5), "1234.50000000");
        assert_eq!(significant12(f64::INFINITY), "inf");
    }
}
