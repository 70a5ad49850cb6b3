//! Rauzy noise of base-b digit sequences.
//!
//! The noise of a sequence measures how badly the best finite-memory block
//! predictor fares on it: normal sequences have the maximal noise
//! `(b-1)/b`, sequences that preserve normality under addition have noise 0.
//!
//! The crate is split into:
//!
//! - [`digitseq`]: digit sequences, deterministic sources and the digit file format.
//! - [`predictor`]: block functions, exact `beta_ell` via context counting, noise
//!   profiles and the brute-force oracle.
//! - [`generators`]: sequences with prescribed noise (Bernoulli, interleaving,
//!   fast-growing block concatenation).
//! - [`codec`]: the periodic marker code that lowers upper noise below the
//!   payload density while keeping the payload digits.
//! - [`measures`]: k-step Markov measures, their entropy and noise, the
//!   constrained entropy maximizer and Hausdorff dimension bound curves.

pub mod codec;
pub mod digitseq;
pub mod error;
pub mod generators;
pub mod measures;
pub mod predictor;
pub mod rng;

pub use digitseq::{DigitSeq, SeqSource};
pub use error::{Error, Result};
pub use predictor::{Beta, BlockFunction, NoiseProfile, Orientation, Predictor};

/// Version of every JSON document this crate emits.
pub const SCHEMA_VERSION: u32 = 1;
