//! Window sort: iterative sorting under recurrent comparison errors.
//!
//! Each iteration compares every element against the occupants of the `2w`
//! positions on each side of it, turns the win counts into a rank estimate,
//! re-places all elements by that estimate with a stable counting sort, and
//! shrinks the window by the rate `alpha` (1/2 in the standard schedule)
//! until it drops below 1.
//!
//! The window size is carried as an exact real through the schedule and only
//! floored at the point of use, so non-power-of-two `n` and shrink rates
//! other than 1/2 keep the full schedule length.

use thiserror::Error;

use crate::noise::{ComparisonTable, Outcome};
use crate::perm::Permutation;

#[derive(Debug, Error)]
pub enum SortError {
    #[error("shrink rate must satisfy 1/2 <= alpha < 1, got {0}")]
    InvalidAlpha(f64),
    #[error("window schedule needs at least 2 elements, got {0}")]
    TooFewElements(usize),
    #[error("permutation has {perm} elements but the table covers {table}")]
    DimensionMismatch { perm: usize, table: usize },
}

/// A provable per-run bound failed; indicates an implementation bug, not bad
/// luck with the error table.
#[derive(Debug, Clone, Error)]
#[error("invariant violation: {0}")]
pub struct InvariantViolation(pub String);

/// How much per-iteration state [`window_sort`] retains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceLevel {
    /// Final permutation and counters only.
    #[default]
    Off,
    /// Every iteration's window, wins, ranks, and permutations.
    Full,
}

/// The decreasing sequence of window sizes, starting at `n/2` and shrinking
/// by `alpha` while the size stays at least 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSchedule {
    alpha: f64,
    sizes: Vec<f64>,
}

impl WindowSchedule {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sizes(&self) -> &[f64] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Drops sizes below `floor`. A nonempty schedule keeps at least its
    /// first iteration so tiny inputs still get sorted.
    ///
    /// Termination at `floor = 2` (the run with window size 1 never happens)
    /// is what the reference measurement campaign used; see the experiment
    /// harness.
    pub fn truncate_below(mut self, floor: f64) -> WindowSchedule {
        if self.sizes.len() > 1 {
            let keep = self.sizes.iter().take_while(|&&w| w >= floor).count();
            self.sizes.truncate(keep.max(1));
        }
        self
    }
}

fn validate_alpha(alpha: f64) -> Result<(), SortError> {
    if (0.5..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(SortError::InvalidAlpha(alpha))
    }
}

/// Builds the window schedule `n/2, alpha*n/2, ...` down to the last value
/// that is still at least 1.
pub fn window_schedule(n: usize, alpha: f64) -> Result<WindowSchedule, SortError> {
    validate_alpha(alpha)?;
    if n < 2 {
        return Err(SortError::TooFewElements(n));
    }
    let mut sizes = Vec::new();
    let mut w = n as f64 / 2.0;
    while w >= 1.0 {
        sizes.push(w);
        w *= alpha;
    }
    Ok(WindowSchedule { alpha, sizes })
}

/// Number of positions examined on each side of an element: `floor(2w)`.
#[inline]
fn window_side(w: f64) -> usize {
    (2.0 * w).floor() as usize
}

/// Win counts for one iteration, indexed by element.
///
/// `wins[x]` is the number of comparisons the oracle reports `x` winning
/// against occupants of positions within `floor(2w)` of `x`'s. Each unordered
/// in-window pair is queried once and the fixed outcome credited to exactly
/// one endpoint.
pub fn compute_wins(sigma: &Permutation, table: &ComparisonTable, w: f64) -> Vec<usize> {
    debug_assert!(w >= 1.0);
    let n = sigma.len();
    let order = sigma.order();
    let side = window_side(w);
    let mut wins = vec![0usize; n];
    for l in 0..n {
        let hi = (l + side).min(n.saturating_sub(1));
        for r in l + 1..=hi {
            match table.compare(order[l], order[r]) {
                Outcome::XGreater => wins[order[l]] += 1,
                Outcome::YGreater => wins[order[r]] += 1,
            }
        }
    }
    wins
}

/// Rank estimates for one iteration, indexed by element:
/// `max(position - floor(2w), 0) + wins`.
pub fn compute_ranks(sigma: &Permutation, wins: &[usize], w: f64) -> Vec<usize> {
    let n = sigma.len();
    assert_eq!(wins.len(), n, "one win count per element");
    let side = window_side(w);
    let mut ranks = vec![0usize; n];
    for (l, &x) in sigma.order().iter().enumerate() {
        ranks[x] = l.saturating_sub(side) + wins[x];
    }
    ranks
}

/// Stable placement by non-decreasing computed rank; ties keep the current
/// relative order. Counting sort over the rank key space, O(n + max_rank).
pub fn place_by_rank(sigma: &Permutation, ranks: &[usize]) -> Permutation {
    let n = sigma.len();
    assert_eq!(ranks.len(), n, "one rank per element");
    let max_key = sigma.order().iter().map(|&x| ranks[x]).max().unwrap_or(0);
    let mut starts = vec![0usize; max_key + 2];
    for &x in sigma.order() {
        starts[ranks[x] + 1] += 1;
    }
    for k in 1..starts.len() {
        starts[k] += starts[k - 1];
    }
    let mut out = vec![0usize; n];
    for &x in sigma.order() {
        out[starts[ranks[x]]] = x;
        starts[ranks[x]] += 1;
    }
    Permutation::from_order_unchecked(out)
}

/// One iteration's snapshot: window size, per-element wins and ranks, and the
/// permutations before and after placement.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub window: f64,
    pub wins: Vec<usize>,
    pub computed_rank: Vec<usize>,
    pub sigma_before: Permutation,
    pub sigma_after: Permutation,
}

impl IterationRecord {
    /// Per-iteration bounds that hold for every table and every input:
    /// wins fit the window, the computed rank stays within `2w` of both the
    /// old and the new position, and no element moves more than `4w`.
    pub fn check_bounds(&self) -> Result<(), InvariantViolation> {
        let w = self.window;
        let n = self.sigma_before.len();
        let side = window_side(w);
        let pos_before = self.sigma_before.positions();
        let pos_after = self.sigma_after.positions();
        for x in 0..n {
            let win_cap = (2 * side).min(n - 1);
            if self.wins[x] > win_cap {
                return Err(InvariantViolation(format!(
                    "wins({x}) = {} exceeds window capacity {win_cap} at w = {w}",
                    self.wins[x]
                )));
            }
            let rank = self.computed_rank[x] as f64;
            let before = pos_before[x] as f64;
            let after = pos_after[x] as f64;
            if (rank - before).abs() > 2.0 * w {
                return Err(InvariantViolation(format!(
                    "|computed_rank({x}) - position_before| = {} > 2w = {} at w = {w}",
                    (rank - before).abs(),
                    2.0 * w
                )));
            }
            if (rank - after).abs() > 2.0 * w {
                return Err(InvariantViolation(format!(
                    "offset |computed_rank({x}) - position_after| = {} > 2w = {} at w = {w}",
                    (rank - after).abs(),
                    2.0 * w
                )));
            }
            if (before - after).abs() > 4.0 * w {
                return Err(InvariantViolation(format!(
                    "element {x} moved {} positions, more than 4w = {} at w = {w}",
                    (before - after).abs(),
                    4.0 * w
                )));
            }
        }
        Ok(())
    }
}

/// Full record of one sort: per-iteration snapshots (when traced), the final
/// permutation, and how many oracle queries the run consumed.
#[derive(Debug, Clone)]
pub struct SortTrace {
    pub alpha: f64,
    /// Empty unless the run was traced with [`TraceLevel::Full`].
    pub records: Vec<IterationRecord>,
    pub output: Permutation,
    pub comparisons: u64,
}

impl SortTrace {
    /// Verifies every traced iteration's bounds, the chaining of snapshots,
    /// and the cumulative movement bound `4w / (1 - alpha)` (`8w` for the
    /// standard halving schedule) from each iteration to the final output.
    pub fn check_invariants(&self) -> Result<(), InvariantViolation> {
        for (i, rec) in self.records.iter().enumerate() {
            rec.check_bounds()
                .map_err(|e| InvariantViolation(format!("iteration {i}: {e}")))?;
            if i + 1 < self.records.len() && rec.sigma_after != self.records[i + 1].sigma_before {
                return Err(InvariantViolation(format!(
                    "iteration {i} output does not chain into iteration {}",
                    i + 1
                )));
            }
        }
        if let Some(last) = self.records.last() {
            if last.sigma_after != self.output {
                return Err(InvariantViolation(
                    "final permutation differs from last traced iteration".into(),
                ));
            }
        }
        let final_pos = self.output.positions();
        for (i, rec) in self.records.iter().enumerate() {
            let limit = 4.0 * rec.window / (1.0 - self.alpha);
            let start_pos = rec.sigma_before.positions();
            for x in 0..start_pos.len() {
                let moved = (final_pos[x] as f64 - start_pos[x] as f64).abs();
                if moved > limit {
                    return Err(InvariantViolation(format!(
                        "element {x} moved {moved} from iteration {i} (w = {}) to the end, \
                         limit {limit}",
                        rec.window
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Runs window sort on `input` against the fixed outcomes in `table`,
/// iterating the full schedule from `n/2` down to the last size at least 1.
///
/// With `p = 0` the output is fully sorted for every input and every alpha.
/// Identical `(input, table, alpha)` always produce identical traces. The
/// comparison count is read off the table's counter, so the table must not
/// serve other runs concurrently if the count matters.
pub fn window_sort(
    input: &Permutation,
    table: &ComparisonTable,
    alpha: f64,
    trace_level: TraceLevel,
) -> Result<SortTrace, SortError> {
    validate_alpha(alpha)?;
    if input.len() < 2 {
        if table.n() != input.len() {
            return Err(SortError::DimensionMismatch {
                perm: input.len(),
                table: table.n(),
            });
        }
        return Ok(SortTrace {
            alpha,
            records: Vec::new(),
            output: input.clone(),
            comparisons: 0,
        });
    }
    let schedule = window_schedule(input.len(), alpha)?;
    window_sort_scheduled(input, table, &schedule, trace_level)
}

/// [`window_sort`] over an explicit schedule, e.g. one truncated with
/// [`WindowSchedule::truncate_below`].
pub fn window_sort_scheduled(
    input: &Permutation,
    table: &ComparisonTable,
    schedule: &WindowSchedule,
    trace_level: TraceLevel,
) -> Result<SortTrace, SortError> {
    if table.n() != input.len() {
        return Err(SortError::DimensionMismatch {
            perm: input.len(),
            table: table.n(),
        });
    }
    let start = table.comparisons();
    let mut sigma = input.clone();
    let mut records = Vec::new();
    for &w in schedule.sizes() {
        let wins = compute_wins(&sigma, table, w);
        let ranks = compute_ranks(&sigma, &wins, w);
        let next = place_by_rank(&sigma, &ranks);
        if trace_level == TraceLevel::Full {
            records.push(IterationRecord {
                window: w,
                wins,
                computed_rank: ranks,
                sigma_before: sigma,
                sigma_after: next.clone(),
            });
        }
        sigma = next;
    }
    Ok(SortTrace {
        alpha: schedule.alpha(),
        records,
        output: sigma,
        comparisons: table.comparisons() - start,
    })
}

/// Plain stable merge sort driven by the same noisy oracle. Comparison
/// baseline only; its output feeds the side-by-side dislocation statistics.
pub fn baseline_merge_sort_noisy(
    input: &Permutation,
    table: &ComparisonTable,
) -> Result<Permutation, SortError> {
    if table.n() != input.len() {
        return Err(SortError::DimensionMismatch {
            perm: input.len(),
            table: table.n(),
        });
    }
    let mut items = input.order().to_vec();
    let mut buf = items.clone();
    merge_sort_rec(&mut items, &mut buf, table);
    Ok(Permutation::from_order_unchecked(items))
}

fn merge_sort_rec(v: &mut [usize], buf: &mut [usize], table: &ComparisonTable) {
    let n = v.len();
    if n <= 1 {
        return;
    }
    let mid = n / 2;
    merge_sort_rec(&mut v[..mid], &mut buf[..mid], table);
    merge_sort_rec(&mut v[mid..], &mut buf[mid..], table);
    buf[..n].copy_from_slice(v);
    let (left, right) = buf[..n].split_at(mid);
    let (mut i, mut j) = (0, 0);
    for slot in v.iter_mut() {
        if i < left.len()
            && (j >= right.len() || table.compare(left[i], right[j]) != Outcome::XGreater)
        {
            *slot = left[i];
            i += 1;
        } else {
            *slot = right[j];
            j += 1;
        }
    }
}
