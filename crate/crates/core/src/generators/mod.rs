//! Sequences with prescribed noise.
//!
//! Samplers for Bernoulli and Markov laws, the interleaving of two sequences
//! along a set of positions, and the block concatenation that switches
//! between the laws [`rauzy_u_law`] according to an indicator table.

mod blocks;
mod partition;
mod prob;
mod sample;

pub use blocks::{block_concat, BlockConcat, BlockSchedule, IndicatorFamily};
pub use partition::{interleave, MembershipSet, ProgressionPartition};
pub use prob::{ProbVector, PROB_SUM_TOL};
pub use sample::{bernoulli_seq, markov_seq, rauzy_u, rauzy_u_law};
