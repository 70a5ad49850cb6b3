//! A periodic code that hides a payload inside a predictable sequence.
//!
//! Positions are grouped in blocks of length `ell + k`; the last `k` digits
//! of each block carry a payload `s`, read as the integer `i = Σ s_j b^j`.
//! The first `ell` digits are zeros followed by the start of the canonical
//! sequence `t_0 t_1 t_2 ...`, placed so that the payload lands exactly on
//! the `b_i` field of cycle `t_i`. A fixed width-`w` predictor then misses at
//! most two digits per block, whatever the payload.
//!
//! Cycle `t_i = c(b_i) 0 b_i 0 11111` where `b_i` is the `k`-digit base-`b`
//! expansion of `i` and `c(b_i)` spells the `p`-bit binary expansion of `i`
//! with `0 -> 11001`, `1 -> 11011` (least significant digits first
//! throughout).

mod build;
mod canonical;

pub use build::{build_v, decode_block, encode_block, payload_track, verify_block_errors, CodecReport};
pub use canonical::CanonicalPredictor;

use serde::{Deserialize, Serialize};

use crate::digitseq::check_base;
use crate::error::{domain, Result};
use crate::predictor::checked_pow;

/// Largest supported number of payload values `b^k`.
pub const MAX_PAYLOADS: u64 = 1 << 20;

const CODE_ZERO: [u8; 5] = [1, 1, 0, 0, 1];
const CODE_ONE: [u8; 5] = [1, 1, 0, 1, 1];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodecParams {
    base: u32,
    k: usize,
    ell: usize,
    p: usize,
    w: usize,
}

/// Number of bits `p = ceil(k log2 b) + 1`, computed exactly.
fn bit_width(payloads: u64) -> usize {
    // ceil(log2 n) is the bit length of n - 1
    (64 - (payloads - 1).leading_zeros()) as usize + 1
}

impl CodecParams {
    /// Checks `ell > 10 k b^k`, `k (b-1)/b > 2`, and that every run of
    /// cycles leaves at least `w` leading zeros in its block.
    pub fn new(base: u32, k: usize, ell: usize) -> Result<Self> {
        let params = Self::shape(base, k)?;
        let params = CodecParams { ell, ..params };
        let floor = params.ell_floor();
        if (ell as u64) <= floor {
            return Err(domain(format!("ell = {ell} must exceed 10 k b^k = {floor}")));
        }
        let longest = params.run_len(params.payload_count() - 1);
        if ell < longest + params.w {
            return Err(domain(format!(
                "ell = {ell} leaves fewer than w = {} zeros before the longest run ({longest} digits); need ell >= {}",
                params.w,
                longest + params.w
            )));
        }
        Ok(params)
    }

    /// Smallest admissible `ell`.
    pub fn with_default_ell(base: u32, k: usize) -> Result<Self> {
        let params = Self::shape(base, k)?;
        let longest = params.run_len(params.payload_count() - 1);
        let ell = (params.ell_floor() as usize + 1).max(longest + params.w);
        Self::new(base, k, ell)
    }

    fn shape(base: u32, k: usize) -> Result<Self> {
        check_base(base)?;
        if k == 0 || (k as u64) * u64::from(base - 1) <= 2 * u64::from(base) {
            return Err(domain(format!("need k (b-1)/b > 2, got k = {k}, b = {base}")));
        }
        let payloads = checked_pow(base, k)
            .filter(|&n| n <= u128::from(MAX_PAYLOADS))
            .ok_or_else(|| domain(format!("b^k = {base}^{k} exceeds {MAX_PAYLOADS}")))? as u64;
        let p = bit_width(payloads);
        Ok(Self {
            base,
            k,
            ell: 0,
            p,
            w: 2 * (5 * p + k + 8),
        })
    }

    fn ell_floor(&self) -> u64 {
        10 * self.k as u64 * self.payload_count() as u64
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn block_len(&self) -> usize {
        self.ell + self.k
    }

    pub fn cycle_len(&self) -> usize {
        5 * self.p + self.k + 7
    }

    pub fn payload_count(&self) -> usize {
        (self.base as usize).pow(self.k as u32)
    }

    /// Density `k / (ell + k)` of the payload positions.
    pub fn density(&self) -> f64 {
        self.k as f64 / self.block_len() as f64
    }

    /// Length of `t_0 ... t_{i-1} c(b_i) 0`, the part of the run before the payload.
    pub fn run_len(&self, i: usize) -> usize {
        i * self.cycle_len() + 5 * self.p + 1
    }

    /// Integer value of a payload word, least significant digit first.
    pub fn payload_value(&self, payload: &[u8]) -> Result<usize> {
        if payload.len() != self.k {
            return Err(domain(format!(
                "payload has {} digits, expected {}",
                payload.len(),
                self.k
            )));
        }
        if let Some(&d) = payload.iter().find(|&&d| u32::from(d) >= self.base) {
            return Err(domain(format!("digit {d} out of range for base {}", self.base)));
        }
        Ok(payload
            .iter()
            .rev()
            .fold(0, |acc, &d| acc * self.base as usize + d as usize))
    }

    /// The `k` base-`b` digits of `i`, least significant first.
    pub fn payload_digits(&self, mut i: usize) -> Vec<u8> {
        (0..self.k)
            .map(|_| {
                let d = i % self.base as usize;
                i /= self.base as usize;
                d as u8
            })
            .collect()
    }
}

/// LSB-first binary digits of the payload's value, padded to `p` bits.
pub fn bin_rep(payload: &[u8], base: u32, p: usize) -> Result<Vec<u8>> {
    check_base(base)?;
    if let Some(&d) = payload.iter().find(|&&d| u32::from(d) >= base) {
        return Err(domain(format!("digit {d} out of range for base {base}")));
    }
    let value = payload
        .iter()
        .rev()
        .try_fold(0u128, |acc, &d| {
            acc.checked_mul(u128::from(base))?.checked_add(u128::from(d))
        })
        .filter(|&v| p >= 128 || v >> p == 0)
        .ok_or_else(|| domain(format!("payload value does not fit in {p} bits")))?;
    Ok((0..p)
        .map(|j| if j < 128 { ((value >> j) & 1) as u8 } else { 0 })
        .collect())
}

/// Replaces each bit with its 5-digit code word.
pub fn expand_c(bits: &[u8]) -> Vec<u8> {
    bits.iter()
        .flat_map(|&bit| if bit == 0 { CODE_ZERO } else { CODE_ONE })
        .collect()
}
