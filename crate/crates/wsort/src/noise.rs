//! The recurrent comparison-error oracle.
//!
//! Every unordered pair gets a fixed outcome at construction time: wrong with
//! probability `p`, independently across pairs, and the outcome never changes
//! no matter how often the pair is re-queried. Two backends realize the same
//! keyed-hash family:
//!
//! * `DenseTable` materializes one flip bit per pair in a triangular bit
//!   table (fast lookups, memory-capped),
//! * `PairwisePrf` recomputes the hash on demand (O(1) memory, any `n`).
//!
//! Because both backends draw each pair's flip bit from the identical hash of
//! `(seed, min(x,y), max(x,y))`, they produce bit-identical outcomes for the
//! same `(n, p, seed)`.

use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::rng::hash2;

/// Pairs beyond this bit budget must use the PRF backend
/// (2^29 bits = 64 MiB, i.e. n up to 2^15 elements).
pub const DENSE_BIT_CAP: usize = 1 << 29;

#[derive(Debug, Error)]
pub enum NoiseError {
    #[error("error probability must satisfy 0 <= p < 1/2, got {0}")]
    ProbabilityOutOfRange(f64),
    #[error("element count must be at least 1")]
    EmptyUniverse,
    #[error("dense table for n = {n} needs {bits} bits (cap {cap}); use the PairwisePrf backend")]
    DenseTableTooLarge { n: usize, bits: usize, cap: usize },
}

/// Storage strategy for the fixed pairwise outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    DenseTable,
    PairwisePrf,
}

impl Backend {
    /// Dense when it fits under [`DENSE_BIT_CAP`], PRF otherwise.
    pub fn auto(n: usize) -> Backend {
        if pair_count(n) <= DENSE_BIT_CAP {
            Backend::DenseTable
        } else {
            Backend::PairwisePrf
        }
    }
}

/// Parameters that fully determine an oracle's outcomes.
#[derive(Debug, Clone, Copy)]
pub struct ErrorModel {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub backend: Backend,
}

/// Result of one comparison, as reported by the (possibly lying) oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    XGreater,
    YGreater,
}

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Triangular index of the unordered pair `lo < hi`.
#[inline]
fn pair_index(lo: usize, hi: usize) -> usize {
    hi * (hi - 1) / 2 + lo
}

/// The recurrent-error oracle: immutable after construction, safe to query
/// from many threads. The comparison counter is the only mutable state.
#[derive(Debug)]
pub struct ComparisonTable {
    model: ErrorModel,
    /// `floor(p * 2^64)`; a pair is flipped iff its hash lands below this.
    /// Exact because scaling an f64 by a power of two never rounds.
    threshold: u64,
    /// Flip bits for the dense backend, one per unordered pair.
    bits: Option<Vec<u64>>,
    comparisons: AtomicU64,
}

/// Builds the oracle for `n` elements with per-pair error probability `p`.
pub fn build_comparison_table(
    n: usize,
    p: f64,
    seed: u64,
    backend: Backend,
) -> Result<ComparisonTable, NoiseError> {
    if n == 0 {
        return Err(NoiseError::EmptyUniverse);
    }
    if !(0.0..0.5).contains(&p) {
        return Err(NoiseError::ProbabilityOutOfRange(p));
    }
    let threshold = (p * 18_446_744_073_709_551_616.0) as u64; // p * 2^64
    let bits = match backend {
        Backend::PairwisePrf => None,
        Backend::DenseTable => {
            let pairs = pair_count(n);
            if pairs > DENSE_BIT_CAP {
                return Err(NoiseError::DenseTableTooLarge {
                    n,
                    bits: pairs,
                    cap: DENSE_BIT_CAP,
                });
            }
            let mut words = vec![0u64; pairs.div_ceil(64)];
            if threshold > 0 {
                for hi in 1..n {
                    for lo in 0..hi {
                        if hash2(seed, lo as u64, hi as u64) < threshold {
                            let idx = pair_index(lo, hi);
                            words[idx / 64] |= 1 << (idx % 64);
                        }
                    }
                }
            }
            Some(words)
        }
    };
    Ok(ComparisonTable {
        model: ErrorModel {
            n,
            p,
            seed,
            backend,
        },
        threshold,
        bits,
        comparisons: AtomicU64::new(0),
    })
}

impl ComparisonTable {
    /// Dense oracle with exactly the given unordered pairs flipped and every
    /// other pair truthful. Used to stage hand-crafted error patterns.
    pub fn from_flipped_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, NoiseError> {
        let mut table = build_comparison_table(n, 0.0, 0, Backend::DenseTable)?;
        let words = table.bits.as_mut().expect("dense backend has bits");
        for &(x, y) in pairs {
            assert!(x != y && x < n && y < n, "invalid pair ({x}, {y})");
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            let idx = pair_index(lo, hi);
            words[idx / 64] |= 1 << (idx % 64);
        }
        Ok(table)
    }

    pub fn n(&self) -> usize {
        self.model.n
    }

    pub fn model(&self) -> &ErrorModel {
        &self.model
    }

    /// Total `compare` calls served so far.
    pub fn comparisons(&self) -> u64 {
        self.comparisons.load(Ordering::Relaxed)
    }

    /// Whether the fixed outcome of `{x, y}` contradicts the true order.
    #[inline]
    pub fn pair_flipped(&self, x: usize, y: usize) -> bool {
        debug_assert!(x != y && x < self.model.n && y < self.model.n);
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        match &self.bits {
            Some(words) => {
                let idx = pair_index(lo, hi);
                words[idx / 64] >> (idx % 64) & 1 == 1
            }
            None => {
                self.threshold > 0 && hash2(self.model.seed, lo as u64, hi as u64) < self.threshold
            }
        }
    }

    /// The fixed outcome for `(x, y)`: `XGreater` iff the oracle claims
    /// `x > y`. Repeating the call always returns the same answer and bumps
    /// the comparison counter each time.
    ///
    /// Panics if `x == y` or either element is out of range; callers own
    /// that contract.
    #[inline]
    pub fn compare(&self, x: usize, y: usize) -> Outcome {
        assert!(
            x != y && x < self.model.n && y < self.model.n,
            "compare({x}, {y}) out of contract for n = {}",
            self.model.n
        );
        self.comparisons.fetch_add(1, Ordering::Relaxed);
        if (x > y) != self.pair_flipped(x, y) {
            Outcome::XGreater
        } else {
            Outcome::YGreater
        }
    }

    /// `|err(x, w)|`: among elements whose true rank lies within `4w` of
    /// `x`'s, how many have a flipped outcome against `x`. Ranks are clipped
    /// to the element universe. Not counted as comparisons.
    pub fn error_set_size(&self, x: usize, w: f64) -> usize {
        assert!(x < self.model.n, "element {x} out of range");
        assert!(w > 0.0, "window size must be positive, got {w}");
        let radius = (4.0 * w).floor();
        let n = self.model.n;
        let lo = if radius >= x as f64 {
            0
        } else {
            x - radius as usize
        };
        let hi = if radius >= (n - 1 - x) as f64 {
            n - 1
        } else {
            x + radius as usize
        };
        (lo..=hi)
            .filter(|&y| y != x && self.pair_flipped(x, y))
            .count()
    }
}
