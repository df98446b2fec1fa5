//! Sorting under recurrent random comparison errors.
//!
//! Every comparison between two elements has a fixed outcome, wrong with
//! probability `p` independently per pair, and repeating the comparison never
//! changes the answer. The window sort in [`sort`] tolerates this noise by
//! comparing each element only against a shrinking window of neighbors and
//! re-placing elements by locally computed ranks; [`metrics`] measures output
//! quality as per-element dislocation, [`bounds`] evaluates the closed-form
//! guarantees, [`noise`] serves the seeded error oracle, and [`harness`]
//! runs reproducible Monte Carlo experiment grids over all of it.

pub mod bounds;
pub mod cli;
pub mod harness;
pub mod metrics;
pub mod noise;
pub mod perm;
mod rng;
pub mod sort;

pub use noise::{build_comparison_table, Backend, ComparisonTable, ErrorModel, Outcome};
pub use perm::Permutation;
pub use sort::{window_schedule, window_sort, SortTrace, TraceLevel};
