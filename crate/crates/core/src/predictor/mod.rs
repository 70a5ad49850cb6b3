//! Block predictors and the noise functional.
//!
//! A block function of width `ℓ` maps every length-`ℓ` word to a digit. For a
//! sequence `x`, `beta_E(x, N)` is the fraction of `N` scored positions where
//! the block function mispredicts, and `beta_ell(x, N)` is the minimum over all
//! `b^(b^ℓ)` block functions of width `ℓ`.
//!
//! Scoring convention: the `N` scored positions are the first `N` positions
//! whose full context lies inside the sequence.
//!
//! - [`Orientation::PredictPrevious`]: position `n` in `0..N` is predicted
//!   from `x[n+1..=n+ℓ]`.
//! - [`Orientation::PredictNext`]: position `n` in `ℓ..ℓ+N` is predicted from
//!   `x[n-ℓ..n]`.
//!
//! Either way `N <= len - ℓ`, and the value is the exact ratio
//! `mismatches / N`.

mod context;
mod oracle;
mod profile;

pub use context::ContextTable;
pub use oracle::{beta_ell_bruteforce, block_function_count, DEFAULT_ENUMERATION_CAP};
pub use profile::{
    classify, default_grid, noise_profile, Classification, EllEstimate, NoiseProfile, ProfileEntry, ProfileOptions,
    DEFAULT_TAIL_FRACTION,
};

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::digitseq::DigitSeq;
use crate::error::{domain, Result};

/// Which neighbour block a predictor reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// Predict `c_n` from the following digits `c_{n+1}, ..., c_{n+ℓ}`.
    PredictPrevious,
    /// Predict `c_n` from the preceding digits `c_{n-ℓ}, ..., c_{n-1}`.
    PredictNext,
}

impl Orientation {
    /// Indices of the first `n` scored positions for width `ell`.
    pub fn scored_positions(self, ell: usize, n: usize) -> Range<usize> {
        match self {
            Orientation::PredictPrevious => 0..n,
            Orientation::PredictNext => ell..ell + n,
        }
    }

    /// Start of the context window for the digit at `pos`.
    #[inline]
    pub fn context_start(self, ell: usize, pos: usize) -> usize {
        match self {
            Orientation::PredictPrevious => pos + 1,
            Orientation::PredictNext => pos - ell,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::PredictPrevious => "predict-previous",
            Orientation::PredictNext => "predict-next",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Orientation {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "predict-previous" | "previous" => Ok(Orientation::PredictPrevious),
            "predict-next" | "next" => Ok(Orientation::PredictNext),
            _ => Err(domain(format!("unknown orientation {s:?}"))),
        }
    }
}

/// Number of positions with a full width-`ell` context.
pub fn usable_len(len: usize, ell: usize) -> usize {
    len.saturating_sub(ell)
}

/// Exact misprediction rate `mismatches / scored`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Beta {
    pub mismatches: u64,
    pub scored: u64,
}

impl Beta {
    pub fn value(&self) -> f64 {
        if self.scored == 0 {
            0.0
        } else {
            self.mismatches as f64 / self.scored as f64
        }
    }
}

impl PartialOrd for Beta {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        // cross-multiplied comparison of the two ratios
        let l = u128::from(self.mismatches) * u128::from(other.scored);
        let r = u128::from(other.mismatches) * u128::from(self.scored);
        Some(l.cmp(&r))
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} ({:.6})", self.mismatches, self.scored, self.value())
    }
}

/// Anything that guesses one digit from a fixed-width context.
pub trait Predictor {
    fn base(&self) -> u32;
    fn width(&self) -> usize;
    fn predict(&self, context: &[u8]) -> u8;
}

/// Index of a word when read as a base-`base` numeral, first digit most
/// significant.
#[inline]
pub fn word_index(word: &[u8], base: u32) -> usize {
    word.iter().fold(0usize, |acc, &d| acc * base as usize + d as usize)
}

/// `base^exp` if it fits in `u128`.
pub(crate) fn checked_pow(base: u32, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(u128::from(base))?;
    }
    Some(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Table {
    /// One entry per word, indexed by [`word_index`].
    Dense(Vec<u8>),
    /// Listed words, every other word maps to `default`.
    Sparse { map: HashMap<Vec<u8>, u8>, default: u8 },
}

/// A total map from length-`width` words to digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockFunction {
    base: u32,
    width: usize,
    table: Table,
}

/// Largest dense table a block function materializes.
const DENSE_WORDS_MAX: u128 = 1 << 24;

impl BlockFunction {
    pub fn constant(base: u32, width: usize, digit: u8) -> Result<Self> {
        check_shape(base, width, digit)?;
        Ok(Self {
            base,
            width,
            table: Table::Sparse {
                map: HashMap::new(),
                default: digit,
            },
        })
    }

    /// Dense table indexed by [`word_index`]; needs exactly `base^width` entries.
    pub fn from_table(base: u32, width: usize, table: Vec<u8>) -> Result<Self> {
        check_shape(base, width, 0)?;
        if checked_pow(base, width) != Some(table.len() as u128) {
            return Err(domain(format!(
                "table has {} entries, need {base}^{width}",
                table.len()
            )));
        }
        if let Some(&d) = table.iter().find(|&&d| u32::from(d) >= base) {
            return Err(domain(format!("table output {d} out of range for base {base}")));
        }
        Ok(Self {
            base,
            width,
            table: Table::Dense(table),
        })
    }

    /// Tabulates `f` over every word. Refuses tables above 2^24 words.
    pub fn from_fn(base: u32, width: usize, f: impl Fn(&[u8]) -> u8) -> Result<Self> {
        check_shape(base, width, 0)?;
        let words = checked_pow(base, width)
            .filter(|&w| w <= DENSE_WORDS_MAX)
            .ok_or_else(|| domain(format!("{base}^{width} words is too many to tabulate")))?;
        let mut word = vec![0u8; width];
        let mut table = Vec::with_capacity(words as usize);
        for _ in 0..words {
            table.push(f(&word));
            increment(&mut word, base);
        }
        Self::from_table(base, width, table)
    }

    /// Explicit outputs for some words, `default` elsewhere.
    pub fn from_entries(base: u32, width: usize, entries: HashMap<Vec<u8>, u8>, default: u8) -> Result<Self> {
        check_shape(base, width, default)?;
        for (w, &d) in &entries {
            if w.len() != width || w.iter().any(|&x| u32::from(x) >= base) || u32::from(d) >= base {
                return Err(domain("block function entry has the wrong shape"));
            }
        }
        Ok(Self {
            base,
            width,
            table: Table::Sparse { map: entries, default },
        })
    }
}

/// Odometer increment, last position fastest (matches [`word_index`]).
pub(crate) fn increment(word: &mut [u8], base: u32) {
    for d in word.iter_mut().rev() {
        if u32::from(*d) + 1 < base {
            *d += 1;
            return;
        }
        *d = 0;
    }
}

fn check_shape(base: u32, width: usize, digit: u8) -> Result<()> {
    crate::digitseq::check_base(base)?;
    if width == 0 {
        return Err(domain("block function width must be at least 1"));
    }
    if u32::from(digit) >= base {
        return Err(domain(format!("digit {digit} out of range for base {base}")));
    }
    Ok(())
}

impl Predictor for BlockFunction {
    fn base(&self) -> u32 {
        self.base
    }

    fn width(&self) -> usize {
        self.width
    }

    fn predict(&self, context: &[u8]) -> u8 {
        debug_assert_eq!(context.len(), self.width);
        match &self.table {
            Table::Dense(t) => t[word_index(context, self.base)],
            Table::Sparse { map, default } => map.get(context).copied().unwrap_or(*default),
        }
    }
}

fn check_window(x: &DigitSeq, base: u32, ell: usize, n: usize) -> Result<()> {
    if base != x.base() {
        return Err(domain(format!(
            "predictor base {base} does not match sequence base {}",
            x.base()
        )));
    }
    if ell == 0 {
        return Err(domain("width must be at least 1"));
    }
    let usable = usable_len(x.len(), ell);
    if n > usable {
        return Err(domain(format!(
            "N = {n} exceeds the {usable} positions with a full width-{ell} context"
        )));
    }
    Ok(())
}

/// Misprediction rate of a fixed predictor over the first `n` scored positions.
pub fn beta_e<P: Predictor + ?Sized>(x: &DigitSeq, e: &P, n: usize, orientation: Orientation) -> Result<Beta> {
    let ell = e.width();
    check_window(x, e.base(), ell, n)?;
    let d = x.digits();
    let mismatches = orientation
        .scored_positions(ell, n)
        .filter(|&pos| {
            let s = orientation.context_start(ell, pos);
            e.predict(&d[s..s + ell]) != d[pos]
        })
        .count() as u64;
    Ok(Beta {
        mismatches,
        scored: n as u64,
    })
}

/// Minimal misprediction rate over every block function of width `ell`,
/// together with a minimizing block function.
///
/// The minimum splits over contexts: each context independently takes its
/// most frequent following (or preceding) digit, smallest digit on ties.
pub fn beta_ell(x: &DigitSeq, ell: usize, n: usize, orientation: Orientation) -> Result<(Beta, BlockFunction)> {
    check_window(x, x.base(), ell, n)?;
    let mut table = ContextTable::new(x.base(), ell);
    table.count(x.digits(), orientation, orientation.scored_positions(ell, n));
    Ok((table.beta(), table.witness()))
}
