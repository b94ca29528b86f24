//! Command-line driver: analytic queries, trajectory computation, episode
//! simulation, and figure reproduction.
//!
//! Exit codes: 0 success, 2 invalid input, 3 infeasible configuration,
//! 4 internal error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use explanation_search::belief::{
    benefit_trajectory, myopic_stop_time, CostFunction, OverlapPrior,
};
use explanation_search::error::Error;
use explanation_search::experiments::{
    monte_carlo, reproduce_figure1, reproduce_figure2, ExperimentConfig,
};
use explanation_search::report;
use explanation_search::{analytic, Result};

#[derive(Parser)]
#[command(name = "explain", version, about = "Explanation-as-search simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected success time and pmf summary for a complete graph
    ExpectedTime {
        /// Explainer graph size N_R
        #[arg(long = "n-r")]
        n_r: usize,
        /// Overlap size N_K
        #[arg(long = "n-k")]
        n_k: usize,
        /// Also write the full pmf as CSV
        #[arg(long)]
        pmf_csv: Option<PathBuf>,
    },
    /// Expected-benefit trajectory and myopic stop time
    Trajectory(TrajectoryArgs),
    /// Run a Monte Carlo experiment from a JSON config file
    Simulate {
        /// Experiment config (JSON)
        #[arg(long)]
        config: PathBuf,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Reproduce the benefit-dynamics figures (1: uniform prior per graph
    /// size; 2: truncated-normal prior per variance-to-mean ratio)
    Figures(FiguresArgs),
}

#[derive(Args)]
struct TrajectoryArgs {
    /// Prior family: uniform | truncated-normal | point-mass
    #[arg(long, default_value = "uniform")]
    prior: String,
    /// Prior mean (truncated-normal only)
    #[arg(long)]
    mean: Option<f64>,
    /// Prior variance (truncated-normal only)
    #[arg(long)]
    variance: Option<f64>,
    /// Point-mass location (point-mass only)
    #[arg(long)]
    at: Option<usize>,
    #[arg(long = "n-r")]
    n_r: usize,
    /// One-time benefit B
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Cost shape: constant | linear
    #[arg(long, default_value = "constant")]
    cost: String,
    /// Cost rate c
    #[arg(long, default_value_t = 0.0)]
    c: f64,
    /// Horizon; defaults to N_R - 1
    #[arg(long)]
    t_max: Option<usize>,
    /// Write the trajectory CSV here (stdout summary otherwise)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FiguresArgs {
    /// Which figure: 1 or 2
    which: u8,
    /// Graph sizes for figure 1 (comma separated)
    #[arg(long = "n-r", value_delimiter = ',', num_args = 1..)]
    n_r: Option<Vec<usize>>,
    /// Prior mean for figure 2
    #[arg(long, default_value_t = 10.0)]
    mean: f64,
    /// Variance-to-mean ratios for figure 2 (comma separated)
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    ratios: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long)]
    t_max: Option<usize>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn build_prior(args: &TrajectoryArgs) -> Result<OverlapPrior> {
    match args.prior.as_str() {
        "uniform" => OverlapPrior::uniform(args.n_r),
        "truncated-normal" => {
            let mean = args.mean.ok_or_else(|| {
                Error::InvalidArgument("--mean is required for a truncated-normal prior".into())
            })?;
            let variance = args.variance.ok_or_else(|| {
                Error::InvalidArgument("--variance is required for a truncated-normal prior".into())
            })?;
            OverlapPrior::truncated_normal(mean, variance, args.n_r - 1)
        }
        "point-mass" => {
            let at = args.at.ok_or_else(|| {
                Error::InvalidArgument("--at is required for a point-mass prior".into())
            })?;
            OverlapPrior::point_mass(at, args.n_r - 1)
        }
        other => Err(Error::InvalidArgument(format!("unknown prior '{other}'"))),
    }
}

fn build_cost(args: &TrajectoryArgs) -> Result<CostFunction> {
    let cost = match args.cost.as_str() {
        "constant" => CostFunction::Constant { c: args.c },
        "linear" => CostFunction::Linear { c: args.c },
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown cost shape '{other}'"
            )))
        }
    };
    cost.validate()?;
    Ok(cost)
}

fn cmd_expected_time(n_r: usize, n_k: usize, pmf_csv: Option<&Path>) -> Result<()> {
    let expected = analytic::expected_explanation_time(n_r, n_k)?;
    let dist = analytic::time_pmf(n_r, n_k)?;
    println!("E(T) = {expected}");
    println!(
        "pmf support t = 1..{}, mean {}, variance {}",
        dist.support_max(),
        dist.mean(),
        dist.variance()
    );
    if let Some(path) = pmf_csv {
        report::write_file(path, &report::pmf_csv(dist.pmf()))?;
        println!("pmf written to {}", path.display());
    }
    Ok(())
}

fn cmd_trajectory(args: &TrajectoryArgs) -> Result<()> {
    if args.n_r < 2 {
        return Err(Error::InvalidArgument("graph size must be >= 2".into()));
    }
    let prior = build_prior(args)?;
    let cost = build_cost(args)?;
    let t_max = args.t_max.unwrap_or(args.n_r - 1);
    let trajectory = benefit_trajectory(&prior, args.n_r, args.b, t_max)?;
    let csv = report::trajectory_csv(&trajectory, Some(&cost));
    match &args.out {
        Some(path) => {
            report::write_file(path, &csv)?;
            println!("trajectory written to {}", path.display());
        }
        None => print!("{csv}"),
    }
    match myopic_stop_time(&prior, args.n_r, args.b, &cost)? {
        Some(t) => println!("myopic stop time: {t}"),
        None => println!("myopic stop time: none (worth continuing to exhaustion)"),
    }
    Ok(())
}

fn cmd_simulate(config_path: &Path, out_dir: &Path) -> Result<()> {
    let text = fs::read_to_string(config_path)?;
    let config: ExperimentConfig =
        serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))?;
    config.validate()?;
    let output = monte_carlo(&config)?;
    fs::create_dir_all(out_dir)?;
    report::write_file(&out_dir.join("summary.csv"), &report::summary_csv(&output.summary))?;
    report::write_file(
        &out_dir.join("episodes.csv"),
        &report::episodes_csv(&output.episodes),
    )?;
    report::write_file(&out_dir.join("manifest.json"), &report::manifest_json(&config)?)?;
    println!(
        "{} reps: {} explained, {} abandoned, {} exhausted (outputs in {})",
        output.summary.reps,
        output.summary.explained,
        output.summary.abandoned,
        output.summary.exhausted,
        out_dir.display()
    );
    Ok(())
}

fn cmd_figures(args: &FiguresArgs) -> Result<()> {
    fs::create_dir_all(&args.out)?;
    let (curves, name, title) = match args.which {
        1 => {
            let sizes = args
                .n_r
                .clone()
                .unwrap_or_else(|| vec![50, 100, 200, 300]);
            let t_max = args.t_max.unwrap_or(usize::MAX);
            (
                reproduce_figure1(&sizes, args.b, t_max)?,
                "figure1",
                "Expected benefit over time, uniform prior",
            )
        }
        2 => {
            let ratios = args.ratios.clone().unwrap_or_else(|| vec![0.5, 1.0, 2.0, 5.0]);
            let t_max = args.t_max.unwrap_or(250);
            (
                reproduce_figure2(300, args.mean, &ratios, args.b, t_max)?,
                "figure2",
                "Expected benefit over time, truncated-normal prior",
            )
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "figure must be 1 or 2, got {other}"
            )))
        }
    };
    let csv_path = args.out.join(format!("{name}.csv"));
    let svg_path = args.out.join(format!("{name}.svg"));
    report::write_file(&csv_path, &report::figure_csv(&curves))?;
    report::write_file(&svg_path, &report::figure_svg(&curves, title))?;
    println!(
        "{} curves written to {} and {}",
        curves.len(),
        csv_path.display(),
        svg_path.display()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::ExpectedTime { n_r, n_k, pmf_csv } => {
            cmd_expected_time(*n_r, *n_k, pmf_csv.as_deref())
        }
        Command::Trajectory(args) => cmd_trajectory(args),
        Command::Simulate { config, out } => cmd_simulate(config, out),
        Command::Figures(args) => cmd_figures(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::InvalidArgument(_) | Error::InvalidState(_) => ExitCode::from(2),
                Error::InfeasiblePlacement(_) => ExitCode::from(3),
                _ => ExitCode::from(4),
            }
        }
    }
}
