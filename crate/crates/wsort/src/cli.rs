//! Command-line interface.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime failure, 3 invariant
//! violation detected.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::dislocation_bounds;
use crate::harness::{
    estimate_swap_probability, format_trial, run_experiment, run_invariant_suite, run_traced,
    run_trial_with_min_window, Algorithm, BackendChoice, ExperimentConfig, HarnessError,
    InputDistribution, REFERENCE_MIN_WINDOW,
};
use crate::metrics;
use crate::sort::TraceLevel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "wsort",
    version,
    about = "Sorting under recurrent random comparison errors",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a single seeded sort and print its dislocation report
    Sort(SortArgs),
    /// Run a full (n, p) grid of seeded trials and write CSV results
    Experiment(ExperimentArgs),
    /// Run traced sorts and verify every per-run bound
    Invariants(InvariantArgs),
    /// Estimate the pairwise inversion rate against its universal floor
    LowerBound(LowerBoundArgs),
    /// Print the dislocation guarantees for given parameters
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    WindowSort,
    BaselineMergeSort,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(value: AlgorithmArg) -> Self {
        match value {
            AlgorithmArg::WindowSort => Algorithm::WindowSort,
            AlgorithmArg::BaselineMergeSort => Algorithm::BaselineMergeSort,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BackendArg {
    Auto,
    Dense,
    Prf,
}

impl From<BackendArg> for BackendChoice {
    fn from(value: BackendArg) -> Self {
        match value {
            BackendArg::Auto => BackendChoice::Auto,
            BackendArg::Dense => BackendChoice::Dense,
            BackendArg::Prf => BackendChoice::Prf,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputArg {
    Uniform,
    Identity,
}

impl From<InputArg> for InputDistribution {
    fn from(value: InputArg) -> Self {
        match value {
            InputArg::Uniform => InputDistribution::UniformRandom,
            InputArg::Identity => InputDistribution::Identity,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TraceArg {
    Off,
    Full,
}

impl From<TraceArg> for TraceLevel {
    fn from(value: TraceArg) -> Self {
        match value {
            TraceArg::Off => TraceLevel::Off,
            TraceArg::Full => TraceLevel::Full,
        }
    }
}

#[derive(Debug, Args)]
struct SortArgs {
    /// Number of elements
    #[arg(long)]
    n: usize,
    /// Comparison error probability, 0 <= p < 1/2
    #[arg(long)]
    p: f64,
    /// Trial seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Window shrink rate
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::WindowSort)]
    algorithm: AlgorithmArg,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    backend: BackendArg,
    #[arg(long, value_enum, default_value_t = InputArg::Uniform)]
    input: InputArg,
    /// `full` additionally verifies the per-iteration bounds
    #[arg(long, value_enum, default_value_t = TraceArg::Off)]
    trace: TraceArg,
    /// Window sizes below this never run (2 matches the reference
    /// measurements, 1 runs the full schedule)
    #[arg(long, default_value_t = REFERENCE_MIN_WINDOW)]
    min_window: f64,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Config file with one `key = value` per line; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Element counts, comma separated
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Error probabilities, comma separated
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Trials per (n, p) cell
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed; trial seeds derive from (seed, n, p, trial)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    algorithm: Option<AlgorithmArg>,
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    #[arg(long, value_enum)]
    input: Option<InputArg>,
    /// Trial CSV path; aggregates land next to it with an `.agg` infix
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    trace: Option<TraceArg>,
    /// Window sizes below this never run (2 matches the reference
    /// measurements, 1 runs the full schedule)
    #[arg(long)]
    min_window: Option<f64>,
}

#[derive(Debug, Args)]
struct InvariantArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![64usize, 256])]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.015625, 0.03125, 0.125])]
    p: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Traced runs per (n, p) cell
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    backend: BackendArg,
}

#[derive(Debug, Args)]
struct LowerBoundArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    /// True-rank distance of the probed pairs
    #[arg(long, default_value_t = 1)]
    gap: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::WindowSort)]
    algorithm: AlgorithmArg,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
}

/// Parses `argv` and runs the selected subcommand, returning the process
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_RUNTIME
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, HarnessError> {
    match cli.command {
        Command::Sort(args) => cmd_sort(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Invariants(args) => cmd_invariants(args),
        Command::LowerBound(args) => cmd_lower_bound(args),
        Command::Bounds(args) => cmd_bounds(args),
    }
}

fn cmd_sort(args: SortArgs) -> Result<i32, HarnessError> {
    if TraceLevel::from(args.trace) == TraceLevel::Full
        && Algorithm::from(args.algorithm) == Algorithm::WindowSort
    {
        let trace = run_traced(
            args.n,
            args.p,
            args.alpha,
            args.seed,
            args.input.into(),
            args.backend.into(),
            args.min_window,
        )?;
        for (i, rec) in trace.records.iter().enumerate() {
            let moved = rec
                .sigma_before
                .positions()
                .iter()
                .zip(rec.sigma_after.positions())
                .map(|(&before, after)| before.abs_diff(after))
                .max()
                .unwrap_or(0);
            println!("iteration {i}: w={} max_movement={moved}", rec.window);
        }
        let report = metrics::dislocation(&trace.output);
        println!(
            "max_dislocation={} total_dislocation={} mean_dislocation={}",
            report.max, report.total, report.mean
        );
        println!("comparisons={}", trace.comparisons);
        if let Err(violation) = trace.check_invariants() {
            eprintln!("{violation}");
            return Ok(EXIT_INVARIANT);
        }
        return Ok(EXIT_OK);
    }
    let result = run_trial_with_min_window(
        args.n,
        args.p,
        args.alpha,
        args.seed,
        args.algorithm.into(),
        args.input.into(),
        args.backend.into(),
        args.min_window,
    )?;
    println!("{}", format_trial(&result));
    Ok(EXIT_OK)
}

fn cmd_experiment(args: ExperimentArgs) -> Result<i32, HarnessError> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_config_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(n) = args.n {
        config.n_values = n;
    }
    if let Some(p) = args.p {
        config.p_values = p;
    }
    if let Some(alpha) = args.alpha {
        config.alpha = alpha;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(algorithm) = args.algorithm {
        config.algorithm = algorithm.into();
    }
    if let Some(backend) = args.backend {
        config.backend = backend.into();
    }
    if let Some(input) = args.input {
        config.input_distribution = input.into();
    }
    if let Some(out) = args.out {
        config.output_path = Some(out);
    }
    if let Some(trace) = args.trace {
        config.trace = trace.into();
    }
    if let Some(min_window) = args.min_window {
        config.min_window = min_window;
    }
    let summary = run_experiment(&config)?;
    println!(
        "{:>8} {:>12} {:>7} {:>22} {:>18} {:>12}",
        "n", "p", "trials", "mean_dislocation", "max/log2(n)", "stddev"
    );
    for cell in &summary.aggregates {
        println!(
            "{:>8} {:>12} {:>7} {:>22.6} {:>18.6} {:>12.6}",
            cell.n,
            cell.p,
            cell.trials,
            cell.mean_of_mean_dislocation,
            cell.mean_max_over_log2n,
            cell.stddev_mean_dislocation
        );
    }
    if let Some(path) = &config.output_path {
        println!(
            "wrote {} and {}",
            path.display(),
            crate::harness::aggregate_path(path).display()
        );
    }
    Ok(EXIT_OK)
}

fn cmd_invariants(args: InvariantArgs) -> Result<i32, HarnessError> {
    let report = run_invariant_suite(
        &args.n,
        &args.p,
        args.alpha,
        args.trials,
        args.seed,
        args.backend.into(),
    )?;
    println!(
        "{} traced runs, {} bound violations",
        report.runs,
        report.violations.len()
    );
    println!(
        "{} runs satisfied the low-error condition, {} of them broke the 9w* cap",
        report.conditional_runs,
        report.conditional_violations.len()
    );
    for violation in report
        .violations
        .iter()
        .chain(&report.conditional_violations)
    {
        eprintln!("{violation}");
    }
    Ok(if report.is_clean() {
        EXIT_OK
    } else {
        EXIT_INVARIANT
    })
}

fn cmd_lower_bound(args: LowerBoundArgs) -> Result<i32, HarnessError> {
    let estimate = estimate_swap_probability(
        args.n,
        args.p,
        args.gap,
        args.trials,
        args.seed,
        args.algorithm.into(),
    )?;
    println!(
        "n={} p={} gap={} trials={} pairs_per_trial={}",
        estimate.n, estimate.p, estimate.gap, estimate.trials, estimate.pairs_per_trial
    );
    println!(
        "empirical_inversion_rate={} (std_error={})",
        estimate.empirical, estimate.std_error
    );
    println!("universal_lower_bound={}", estimate.lower_bound);
    // Undershooting the floor by more than noise allows means a broken
    // sorter or oracle, not a falsified bound.
    if estimate.empirical < estimate.lower_bound - 3.0 * estimate.std_error {
        eprintln!("empirical rate is more than 3 standard errors below the universal bound");
        return Ok(EXIT_INVARIANT);
    }
    Ok(EXIT_OK)
}

fn cmd_bounds(args: BoundsArgs) -> Result<i32, HarnessError> {
    let report = dislocation_bounds(args.n, args.p, args.alpha)?;
    println!("{report}");
    Ok(EXIT_OK)
}
