//! Seeded Monte Carlo experiment runner.
//!
//! A grid of `(n, p)` cells, each running a fixed number of independently
//! seeded trials. Trial seeds are derived by hashing
//! `(master_seed, n, p, trial_index)`, so adding cells to a grid never
//! perturbs the random streams of existing cells and any cell can be
//! reproduced in isolation. Trials run concurrently; results are assembled
//! in deterministic `(n, p, trial)` order regardless of completion order.
//!
//! # Schedule termination
//!
//! By default the harness truncates the window schedule below
//! [`REFERENCE_MIN_WINDOW`] (window size 2): the published measurement
//! tables this harness reproduces were generated by a loop that never ran
//! the window-size-1 iteration, and the per-cell means shift by 10-25%
//! between the two terminations. Set `min_window = 1.0` in the config to run
//! the full textbook schedule instead.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{self, BoundsError};
use crate::metrics::{self, DislocationReport};
use crate::noise::{build_comparison_table, Backend, NoiseError};
use crate::perm::Permutation;
use crate::rng::{hash2, hash3};
use crate::sort::{
    baseline_merge_sort_noisy, window_schedule, window_sort, window_sort_scheduled,
    InvariantViolation, SortError, SortTrace, TraceLevel,
};

/// Schedule floor that reproduces the reference measurement tables: the
/// sort stops before the window-size-1 iteration.
pub const REFERENCE_MIN_WINDOW: f64 = 2.0;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Invariant(#[from] InvariantViolation),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] io::Error),
}

/// Which sorter a trial runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    #[default]
    WindowSort,
    BaselineMergeSort,
}

/// How the input permutation of each trial is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputDistribution {
    /// Seeded uniform shuffle, independent of the error table's seed.
    #[default]
    UniformRandom,
    Identity,
}

/// Oracle backend selection; `Auto` picks dense whenever it fits the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BackendChoice {
    #[default]
    Auto,
    Dense,
    Prf,
}

impl BackendChoice {
    fn resolve(self, n: usize) -> Backend {
        match self {
            BackendChoice::Auto => Backend::auto(n),
            BackendChoice::Dense => Backend::DenseTable,
            BackendChoice::Prf => Backend::PairwisePrf,
        }
    }
}

/// Grid description for [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_values: Vec<usize>,
    pub p_values: Vec<f64>,
    pub alpha: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub algorithm: Algorithm,
    pub input_distribution: InputDistribution,
    pub backend: BackendChoice,
    /// Trial CSV destination; the aggregate CSV lands next to it with an
    /// `.agg` infix. `None` keeps results in memory only.
    pub output_path: Option<PathBuf>,
    pub trace: TraceLevel,
    /// Window sizes below this never run; see the module docs.
    pub min_window: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_values: Vec::new(),
            p_values: Vec::new(),
            alpha: 0.5,
            trials: 100,
            master_seed: 0,
            algorithm: Algorithm::WindowSort,
            input_distribution: InputDistribution::UniformRandom,
            backend: BackendChoice::Auto,
            output_path: None,
            trace: TraceLevel::Off,
            min_window: REFERENCE_MIN_WINDOW,
        }
    }
}

/// Measurements of one seeded run.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
    pub trial_index: usize,
    pub seed: u64,
    pub max_dislocation: usize,
    pub total_dislocation: u64,
    pub mean_dislocation: f64,
    pub comparisons: u64,
    pub elapsed: Duration,
}

/// Per-cell aggregate over all trials.
#[derive(Debug, Clone, PartialEq)]
pub struct CellAggregate {
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
    pub trials: usize,
    pub mean_of_mean_dislocation: f64,
    /// Mean over trials of `max_dislocation / log2(n)`.
    pub mean_max_over_log2n: f64,
    /// Sample standard deviation of the per-trial mean dislocation.
    pub stddev_mean_dislocation: f64,
    pub mean_comparisons: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub trials: Vec<TrialResult>,
    pub aggregates: Vec<CellAggregate>,
}

impl ExperimentSummary {
    pub fn cell(&self, n: usize, p: f64) -> Option<&CellAggregate> {
        self.aggregates.iter().find(|a| a.n == n && a.p == p)
    }
}

/// Reproducible trial seed: a keyed hash of `(master_seed, n, p, trial)`.
pub fn trial_seed(master_seed: u64, n: usize, p: f64, trial_index: usize) -> u64 {
    hash3(master_seed, n as u64, p.to_bits(), trial_index as u64)
}

// Sub-stream tags so the error table and the input permutation are seeded
// independently from the same trial seed.
const TABLE_STREAM: u64 = 1;
const INPUT_STREAM: u64 = 2;

fn table_seed(seed: u64) -> u64 {
    hash2(seed, TABLE_STREAM, 0)
}

fn input_seed(seed: u64) -> u64 {
    hash2(seed, INPUT_STREAM, 0)
}

fn draw_input(n: usize, distribution: InputDistribution, seed: u64) -> Permutation {
    match distribution {
        InputDistribution::UniformRandom => Permutation::random(n, input_seed(seed)),
        InputDistribution::Identity => Permutation::identity(n),
    }
}

fn truncated_sort(
    input: &Permutation,
    table: &crate::noise::ComparisonTable,
    alpha: f64,
    min_window: f64,
    trace: TraceLevel,
) -> Result<SortTrace, HarnessError> {
    if input.len() < 2 {
        return Ok(window_sort(input, table, alpha, trace)?);
    }
    let schedule = window_schedule(input.len(), alpha)?.truncate_below(min_window);
    Ok(window_sort_scheduled(input, table, &schedule, trace)?)
}

#[allow(clippy::too_many_arguments)]
fn run_seeded_trial(
    n: usize,
    p: f64,
    alpha: f64,
    seed: u64,
    trial_index: usize,
    algorithm: Algorithm,
    input_distribution: InputDistribution,
    backend: BackendChoice,
    trace: TraceLevel,
    min_window: f64,
) -> Result<TrialResult, HarnessError> {
    let started = Instant::now();
    let table = build_comparison_table(n, p, table_seed(seed), backend.resolve(n))?;
    let input = draw_input(n, input_distribution, seed);
    let output = match algorithm {
        Algorithm::WindowSort => {
            let run = truncated_sort(&input, &table, alpha, min_window, trace)?;
            if trace == TraceLevel::Full {
                run.check_invariants()?;
            }
            run.output
        }
        Algorithm::BaselineMergeSort => baseline_merge_sort_noisy(&input, &table)?,
    };
    let elapsed = started.elapsed();
    let report: DislocationReport = metrics::dislocation(&output);
    Ok(TrialResult {
        n,
        p,
        alpha,
        trial_index,
        seed,
        max_dislocation: report.max,
        total_dislocation: report.total,
        mean_dislocation: report.mean,
        comparisons: table.comparisons(),
        elapsed,
    })
}

/// Runs one seeded trial with the reference schedule termination: builds the
/// table, draws the input, sorts, and measures dislocation. Deterministic
/// given all arguments (except the elapsed wall time).
pub fn run_trial(
    n: usize,
    p: f64,
    alpha: f64,
    seed: u64,
    algorithm: Algorithm,
    input_distribution: InputDistribution,
    backend: BackendChoice,
) -> Result<TrialResult, HarnessError> {
    run_trial_with_min_window(
        n,
        p,
        alpha,
        seed,
        algorithm,
        input_distribution,
        backend,
        REFERENCE_MIN_WINDOW,
    )
}

/// [`run_trial`] with an explicit schedule floor.
#[allow(clippy::too_many_arguments)]
pub fn run_trial_with_min_window(
    n: usize,
    p: f64,
    alpha: f64,
    seed: u64,
    algorithm: Algorithm,
    input_distribution: InputDistribution,
    backend: BackendChoice,
    min_window: f64,
) -> Result<TrialResult, HarnessError> {
    run_seeded_trial(
        n,
        p,
        alpha,
        seed,
        0,
        algorithm,
        input_distribution,
        backend,
        TraceLevel::Off,
        min_window,
    )
}

/// Fully traced single run for diagnostics; same seeding as [`run_trial`].
pub fn run_traced(
    n: usize,
    p: f64,
    alpha: f64,
    seed: u64,
    input_distribution: InputDistribution,
    backend: BackendChoice,
    min_window: f64,
) -> Result<SortTrace, HarnessError> {
    let table = build_comparison_table(n, p, table_seed(seed), backend.resolve(n))?;
    let input = draw_input(n, input_distribution, seed);
    truncated_sort(&input, &table, alpha, min_window, TraceLevel::Full)
}

fn validate_config(config: &ExperimentConfig) -> Result<(), HarnessError> {
    if config.n_values.is_empty() {
        return Err(HarnessError::Config("n_values must not be empty".into()));
    }
    if config.p_values.is_empty() {
        return Err(HarnessError::Config("p_values must not be empty".into()));
    }
    if let Some(&n) = config.n_values.iter().find(|&&n| n < 2) {
        return Err(HarnessError::Config(format!(
            "every n must be at least 2, got {n}"
        )));
    }
    if config.trials == 0 {
        return Err(HarnessError::Config("trials must be at least 1".into()));
    }
    if config.min_window.is_nan() || config.min_window < 1.0 {
        return Err(HarnessError::Config(format!(
            "min_window must be at least 1, got {}",
            config.min_window
        )));
    }
    Ok(())
}

/// Runs the full grid: every `(n, p)` cell for `config.trials` trials,
/// concurrently, then writes the trial and aggregate CSV files when an
/// output path is configured.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary, HarnessError> {
    validate_config(config)?;
    let mut specs = Vec::new();
    for &n in &config.n_values {
        for &p in &config.p_values {
            for trial in 0..config.trials {
                specs.push((n, p, trial));
            }
        }
    }
    let trials: Vec<TrialResult> = specs
        .par_iter()
        .map(|&(n, p, trial)| {
            run_seeded_trial(
                n,
                p,
                config.alpha,
                trial_seed(config.master_seed, n, p, trial),
                trial,
                config.algorithm,
                config.input_distribution,
                config.backend,
                config.trace,
                config.min_window,
            )
        })
        .collect::<Result<_, _>>()?;

    let mut aggregates = Vec::new();
    for &n in &config.n_values {
        for &p in &config.p_values {
            let cell: Vec<&TrialResult> = trials.iter().filter(|t| t.n == n && t.p == p).collect();
            aggregates.push(aggregate_cell(n, p, config.alpha, &cell));
        }
    }

    let summary = ExperimentSummary { trials, aggregates };
    if let Some(path) = &config.output_path {
        let mut trial_file = BufWriter::new(File::create(path)?);
        write_trial_csv(&mut trial_file, config, &summary.trials)?;
        trial_file.flush()?;
        let mut agg_file = BufWriter::new(File::create(aggregate_path(path))?);
        write_aggregate_csv(&mut agg_file, &summary.aggregates)?;
        agg_file.flush()?;
    }
    Ok(summary)
}

fn aggregate_cell(n: usize, p: f64, alpha: f64, cell: &[&TrialResult]) -> CellAggregate {
    let count = cell.len();
    let log2n = (n as f64).log2();
    let means: Vec<f64> = cell.iter().map(|t| t.mean_dislocation).collect();
    let mean_of_means = means.iter().sum::<f64>() / count as f64;
    let mean_max_over_log2n = cell
        .iter()
        .map(|t| t.max_dislocation as f64 / log2n)
        .sum::<f64>()
        / count as f64;
    let stddev = if count > 1 {
        let var = means
            .iter()
            .map(|m| (m - mean_of_means) * (m - mean_of_means))
            .sum::<f64>()
            / (count - 1) as f64;
        var.sqrt()
    } else {
        0.0
    };
    let mean_comparisons = cell.iter().map(|t| t.comparisons as f64).sum::<f64>() / count as f64;
    CellAggregate {
        n,
        p,
        alpha,
        trials: count,
        mean_of_mean_dislocation: mean_of_means,
        mean_max_over_log2n,
        stddev_mean_dislocation: stddev,
        mean_comparisons,
    }
}

/// `results.csv` gets its aggregates in `results.agg.csv`.
pub fn aggregate_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.agg.{}", ext.to_string_lossy()),
        None => format!("{stem}.agg"),
    };
    path.with_file_name(name)
}

fn format_ms(elapsed: Duration) -> f64 {
    elapsed.as_secs_f64() * 1000.0
}

/// One row per trial. `elapsed_ms` is the last column and is the only
/// nondeterministic one; reproducibility checks strip it.
pub fn write_trial_csv(
    out: &mut impl Write,
    config: &ExperimentConfig,
    trials: &[TrialResult],
) -> io::Result<()> {
    writeln!(out, "# window sort trial results")?;
    writeln!(
        out,
        "# input distribution: {}; trial seed = hash(master_seed, n, p, trial)",
        match config.input_distribution {
            InputDistribution::UniformRandom => "uniform random",
            InputDistribution::Identity => "identity",
        }
    )?;
    writeln!(
        out,
        "# schedule truncated below window size {} (1 = full schedule)",
        config.min_window
    )?;
    writeln!(
        out,
        "# elapsed_ms is wall clock and excluded from reproducibility comparisons"
    )?;
    writeln!(
        out,
        "n,p,alpha,trial,seed,max_dislocation,total_dislocation,mean_dislocation,comparisons,elapsed_ms"
    )?;
    for t in trials {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            t.n,
            t.p,
            t.alpha,
            t.trial_index,
            t.seed,
            t.max_dislocation,
            t.total_dislocation,
            t.mean_dislocation,
            t.comparisons,
            format_ms(t.elapsed)
        )?;
    }
    Ok(())
}

/// One row per `(n, p)` cell.
pub fn write_aggregate_csv(out: &mut impl Write, aggregates: &[CellAggregate]) -> io::Result<()> {
    writeln!(out, "# window sort cell aggregates")?;
    writeln!(out, "# max-dislocation normalization divides by log2(n)")?;
    writeln!(
        out,
        "# stddev_mean_dislocation is the sample standard deviation over per-trial means"
    )?;
    writeln!(
        out,
        "n,p,alpha,trials,mean_of_mean_dislocation,mean_max_over_log2n,stddev_mean_dislocation"
    )?;
    for a in aggregates {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            a.n,
            a.p,
            a.alpha,
            a.trials,
            a.mean_of_mean_dislocation,
            a.mean_max_over_log2n,
            a.stddev_mean_dislocation
        )?;
    }
    Ok(())
}

/// Renders both CSVs to strings (trial file, aggregate file).
pub fn render_csv(config: &ExperimentConfig, summary: &ExperimentSummary) -> (String, String) {
    let mut trial_bytes = Vec::new();
    write_trial_csv(&mut trial_bytes, config, &summary.trials).expect("writing to memory");
    let mut agg_bytes = Vec::new();
    write_aggregate_csv(&mut agg_bytes, &summary.aggregates).expect("writing to memory");
    (
        String::from_utf8(trial_bytes).expect("csv is utf-8"),
        String::from_utf8(agg_bytes).expect("csv is utf-8"),
    )
}

impl ExperimentConfig {
    /// Parses the flat `key = value` config format. Unknown keys are
    /// rejected; `#` starts a comment line.
    pub fn from_config_str(text: &str) -> Result<Self, HarnessError> {
        let mut config = ExperimentConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let line_no = idx + 1;
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("line {line_no}: expected `key = value`"))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                HarnessError::Config(format!("line {line_no}: invalid {what}: `{value}`"))
            };
            match key {
                "n_values" => {
                    config.n_values = value
                        .split(',')
                        .map(|v| v.trim().parse::<usize>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad("n_values"))?;
                }
                "p_values" => {
                    config.p_values = value
                        .split(',')
                        .map(|v| v.trim().parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad("p_values"))?;
                }
                "alpha" => config.alpha = value.parse().map_err(|_| bad("alpha"))?,
                "trials" => config.trials = value.parse().map_err(|_| bad("trials"))?,
                "master_seed" => {
                    config.master_seed = value.parse().map_err(|_| bad("master_seed"))?
                }
                "algorithm" => {
                    config.algorithm = match value {
                        "window-sort" => Algorithm::WindowSort,
                        "baseline-merge-sort" => Algorithm::BaselineMergeSort,
                        _ => return Err(bad("algorithm")),
                    }
                }
                "input_distribution" => {
                    config.input_distribution = match value {
                        "uniform" => InputDistribution::UniformRandom,
                        "identity" => InputDistribution::Identity,
                        _ => return Err(bad("input_distribution")),
                    }
                }
                "backend" => {
                    config.backend = match value {
                        "auto" => BackendChoice::Auto,
                        "dense" => BackendChoice::Dense,
                        "prf" => BackendChoice::Prf,
                        _ => return Err(bad("backend")),
                    }
                }
                "output_path" => config.output_path = Some(PathBuf::from(value)),
                "min_window" => config.min_window = value.parse().map_err(|_| bad("min_window"))?,
                "trace" => {
                    config.trace = match value {
                        "off" => TraceLevel::Off,
                        "full" => TraceLevel::Full,
                        _ => return Err(bad("trace")),
                    }
                }
                unknown => {
                    return Err(HarnessError::Config(format!(
                        "line {line_no}: unknown key `{unknown}`"
                    )))
                }
            }
        }
        Ok(config)
    }

    pub fn from_config_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_config_str(&text)
    }
}

/// Empirical estimate of how often a fixed set of rank pairs at distance
/// `gap` comes out inverted, next to the universal lower bound.
#[derive(Debug, Clone)]
pub struct SwapEstimate {
    pub n: usize,
    pub p: f64,
    pub gap: usize,
    pub trials: usize,
    pub pairs_per_trial: usize,
    pub inverted: u64,
    pub empirical: f64,
    pub lower_bound: f64,
    /// Binomial standard error of `empirical` over `trials * pairs` samples.
    pub std_error: f64,
}

impl SwapEstimate {
    /// Lower edge of the one-sided confidence interval at `z` standard errors.
    pub fn lower_confidence(&self, z: f64) -> f64 {
        self.empirical - z * self.std_error
    }
}

/// Runs `trials` seeded instances and measures the inversion rate of the
/// disjoint pairs `(0, gap), (2 gap, 3 gap), ...` in the output.
pub fn estimate_swap_probability(
    n: usize,
    p: f64,
    gap: usize,
    trials: usize,
    master_seed: u64,
    algorithm: Algorithm,
) -> Result<SwapEstimate, HarnessError> {
    if gap < 1 || gap >= n {
        return Err(HarnessError::Config(format!(
            "gap must satisfy 1 <= gap < n, got gap = {gap}, n = {n}"
        )));
    }
    if trials < 100 {
        return Err(HarnessError::Config(format!(
            "at least 100 trials needed for a meaningful estimate, got {trials}"
        )));
    }
    let lower_bound = bounds::swap_probability_lower_bound(p, gap)?;
    let pairs: Vec<(usize, usize)> = (0..)
        .step_by(2 * gap)
        .map(|x| (x, x + gap))
        .take_while(|&(_, y)| y < n)
        .collect();
    let inverted: u64 = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<u64, HarnessError> {
            let seed = trial_seed(master_seed, n, p, trial);
            let table = build_comparison_table(n, p, table_seed(seed), Backend::auto(n))?;
            let input = draw_input(n, InputDistribution::UniformRandom, seed);
            let output = match algorithm {
                Algorithm::WindowSort => {
                    truncated_sort(&input, &table, 0.5, REFERENCE_MIN_WINDOW, TraceLevel::Off)?
                        .output
                }
                Algorithm::BaselineMergeSort => baseline_merge_sort_noisy(&input, &table)?,
            };
            let positions = output.positions();
            Ok(pairs
                .iter()
                .filter(|&&(x, y)| positions[x] > positions[y])
                .count() as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let samples = (trials * pairs.len()) as f64;
    let empirical = inverted as f64 / samples;
    let std_error = (empirical * (1.0 - empirical) / samples).sqrt();
    Ok(SwapEstimate {
        n,
        p,
        gap,
        trials,
        pairs_per_trial: pairs.len(),
        inverted,
        empirical,
        lower_bound,
        std_error,
    })
}

/// Outcome of a traced invariant sweep over a `(n, p)` grid.
#[derive(Debug, Clone, Default)]
pub struct InvariantReport {
    pub runs: usize,
    /// Per-iteration bound or chaining failures. Always empty unless the
    /// implementation is broken.
    pub violations: Vec<String>,
    /// Runs whose error table satisfied the low-error condition down to
    /// window size `2 * w_star` (`w_star` = smallest scheduled size >= 8).
    pub conditional_runs: usize,
    /// Conditional runs whose final max dislocation exceeded `9 * w_star`.
    pub conditional_violations: Vec<String>,
}

impl InvariantReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.conditional_violations.is_empty()
    }
}

/// Runs fully traced sorts across the grid and checks every per-run bound,
/// plus the conditional guarantee `max dislocation <= 9 w_star` on runs whose
/// table happens to satisfy the low-error condition.
pub fn run_invariant_suite(
    n_values: &[usize],
    p_values: &[f64],
    alpha: f64,
    trials: usize,
    master_seed: u64,
    backend: BackendChoice,
) -> Result<InvariantReport, HarnessError> {
    let mut report = InvariantReport::default();
    for &n in n_values {
        for &p in p_values {
            let sizes = window_schedule(n, alpha)?.sizes().to_vec();
            let w_star = sizes
                .iter()
                .copied()
                .filter(|&w| w >= 8.0)
                .fold(f64::INFINITY, f64::min);
            for trial in 0..trials {
                let seed = trial_seed(master_seed, n, p, trial);
                let table = build_comparison_table(n, p, table_seed(seed), backend.resolve(n))?;
                let input = draw_input(n, InputDistribution::UniformRandom, seed);
                let trace = window_sort(&input, &table, alpha, TraceLevel::Full)?;
                report.runs += 1;
                if let Err(violation) = trace.check_invariants() {
                    report
                        .violations
                        .push(format!("n = {n}, p = {p}, trial {trial}: {violation}"));
                }
                if p == 0.0 && !trace.output.is_identity() {
                    report.violations.push(format!(
                        "n = {n}, trial {trial}: zero-noise run did not sort"
                    ));
                }
                if w_star.is_finite() && metrics::error_condition_holds(&table, &sizes, w_star) {
                    report.conditional_runs += 1;
                    let max = metrics::dislocation(&trace.output).max;
                    if max as f64 > 9.0 * w_star {
                        report.conditional_violations.push(format!(
                            "n = {n}, p = {p}, trial {trial}: max dislocation {max} \
                             exceeds 9 w* = {}",
                            9.0 * w_star
                        ));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Human-readable block for one trial, used by the CLI.
pub fn format_trial(result: &TrialResult) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "n={} p={} alpha={} seed={}",
        result.n, result.p, result.alpha, result.seed
    );
    let _ = writeln!(
        out,
        "max_dislocation={} total_dislocation={} mean_dislocation={}",
        result.max_dislocation, result.total_dislocation, result.mean_dislocation
    );
    let _ = write!(
        out,
        "comparisons={} elapsed_ms={:.3}",
        result.comparisons,
        format_ms(result.elapsed)
    );
    out
}
