//! Dislocation statistics and per-run diagnostic conditions.
//!
//! The dislocation of an element is the absolute difference between its
//! position in a permutation and its true rank; the total and maximum over
//! all elements are the two quality measures everything here reports.

use thiserror::Error;

use crate::noise::ComparisonTable;
use crate::perm::Permutation;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("pair must be given as true ranks x < y, got ({x}, {y})")]
    NotAnOrderedPair { x: usize, y: usize },
}

/// Per-element and aggregate dislocation of one permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct DislocationReport {
    /// `per_element[x] = |position_of(x) - x|`.
    pub per_element: Vec<usize>,
    pub max: usize,
    pub total: u64,
    /// `total / n`; the per-element average.
    pub mean: f64,
}

/// Measures how far every element sits from its true rank.
pub fn dislocation(perm: &Permutation) -> DislocationReport {
    let positions = perm.positions();
    let per_element: Vec<usize> = positions
        .iter()
        .enumerate()
        .map(|(x, &pos)| pos.abs_diff(x))
        .collect();
    let max = per_element.iter().copied().max().unwrap_or(0);
    let total: u64 = per_element.iter().map(|&d| d as u64).sum();
    let mean = if perm.is_empty() {
        0.0
    } else {
        total as f64 / perm.len() as f64
    };
    DislocationReport {
        per_element,
        max,
        total,
        mean,
    }
}

/// Condition (*) per element: dislocation at most the window size `w`.
pub fn check_star(perm: &Permutation, w: f64) -> Vec<bool> {
    perm.positions()
        .iter()
        .enumerate()
        .map(|(x, &pos)| pos.abs_diff(x) as f64 <= w)
        .collect()
}

/// Whether elements `x < y` appear in the wrong relative order.
pub fn pair_inverted(perm: &Permutation, x: usize, y: usize) -> Result<bool, MetricsError> {
    if x >= y || y >= perm.len() {
        return Err(MetricsError::NotAnOrderedPair { x, y });
    }
    let positions = perm.positions();
    Ok(positions[x] > positions[y])
}

/// Whether the low-error condition `|err(x, w)| <= w/4` holds for every
/// element and every scheduled window size at least `2 * w_star`.
///
/// When it does, a traced run is guaranteed a final maximum dislocation of at
/// most `9 * w_star`; see the conditional check in the acceptance suite.
pub fn error_condition_holds(
    table: &ComparisonTable,
    scheduled_sizes: &[f64],
    w_star: f64,
) -> bool {
    scheduled_sizes
        .iter()
        .filter(|&&w| w >= 2.0 * w_star)
        .all(|&w| (0..table.n()).all(|x| table.error_set_size(x, w) as f64 <= w / 4.0))
}
