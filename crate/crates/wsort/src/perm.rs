//! Permutations of the ranks `0..n-1`.
//!
//! Elements are identified with their true ranks, so a permutation is both
//! the thing being sorted and the ground truth to measure against: with zero
//! comparison errors the sorted output is exactly the identity.

use thiserror::Error;

use crate::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum PermutationError {
    #[error("sequence of length {len} is not a permutation of 0..{len}")]
    NotAPermutation { len: usize },
}

/// An arrangement of the `n` distinct ranks `0..n-1`.
///
/// `order[pos]` is the element (= true rank) sitting at position `pos`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    /// The sorted arrangement `[0, 1, ..., n-1]`.
    pub fn identity(n: usize) -> Self {
        Permutation {
            order: (0..n).collect(),
        }
    }

    /// Uniformly random arrangement via a seeded Fisher-Yates shuffle.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = SplitMix64::new(seed);
        for i in (1..n).rev() {
            let j = rng.below(i as u64 + 1) as usize;
            order.swap(i, j);
        }
        Permutation { order }
    }

    /// Validates that `order` contains each of `0..order.len()` exactly once.
    pub fn from_order(order: Vec<usize>) -> Result<Self, PermutationError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &x in &order {
            if x >= n || seen[x] {
                return Err(PermutationError::NotAPermutation { len: n });
            }
            seen[x] = true;
        }
        Ok(Permutation { order })
    }

    /// Construction for values already known to be a permutation
    /// (e.g. counting-sort output).
    pub(crate) fn from_order_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(Permutation::from_order(order.clone()).is_ok());
        Permutation { order }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Element at each position.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Inverse view: `positions()[element]` is the position of `element`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0usize; self.order.len()];
        for (p, &x) in self.order.iter().enumerate() {
            pos[x] = p;
        }
        pos
    }

    pub fn is_identity(&self) -> bool {
        self.order.iter().enumerate().all(|(p, &x)| p == x)
    }
}
