use rayon::prelude::*;
use serde::Serialize;

use super::{CanonicalPredictor, CodecParams};
use crate::digitseq::DigitSeq;
use crate::error::{domain, Error, Result};
use crate::predictor::{beta_ell, Orientation, Predictor};

/// The first `ell` digits of a block carrying `payload`: zeros, then
/// `t_0 ... t_{i-1} c(b_i) 0`, so that `b_i` falls on the payload positions.
pub fn encode_block(payload: &[u8], params: &CodecParams) -> Result<Vec<u8>> {
    let i = params.payload_value(payload)?;
    let run = params.run_len(i);
    let zeros = params
        .ell()
        .checked_sub(run)
        .ok_or_else(|| Error::Internal(format!("run of {run} digits does not fit in ell = {}", params.ell())))?;
    let mut out = vec![0; zeros];
    out.extend(CanonicalPredictor::new(*params).canonical_slice(0, run));
    Ok(out)
}

/// Recovers the payload from the first `ell` digits of a block, using only
/// where the run starts.
pub fn decode_block(segment: &[u8], params: &CodecParams) -> Result<Vec<u8>> {
    if segment.len() != params.ell() {
        return Err(domain(format!(
            "segment has {} digits, expected {}",
            segment.len(),
            params.ell()
        )));
    }
    let start = segment
        .iter()
        .position(|&d| d != 0)
        .ok_or_else(|| domain("segment carries no run"))?;
    let tail = (params.ell() - start)
        .checked_sub(5 * params.p() + 1)
        .filter(|t| t % params.cycle_len() == 0)
        .ok_or_else(|| domain(format!("run of {} digits has no valid length", params.ell() - start)))?;
    let i = tail / params.cycle_len();
    if i >= params.payload_count() {
        return Err(domain(format!("run encodes {i}, beyond b^k")));
    }
    let canonical = CanonicalPredictor::new(*params).canonical_slice(0, params.run_len(i));
    if segment[start..] != canonical[..] {
        return Err(domain("run is not canonical"));
    }
    Ok(params.payload_digits(i))
}

fn check_len(u: &DigitSeq, params: &CodecParams, n_blocks: usize) -> Result<usize> {
    if u.base() != params.base() {
        return Err(domain(format!(
            "sequence base {} differs from codec base {}",
            u.base(),
            params.base()
        )));
    }
    let needed = n_blocks * params.block_len();
    if u.len() < needed {
        return Err(Error::Length {
            needed,
            available: u.len(),
        });
    }
    Ok(needed)
}

/// The first `n_blocks` blocks of `v`: each block keeps `u` on its last `k`
/// positions and carries [`encode_block`] of them before that.
pub fn build_v(u: &DigitSeq, params: &CodecParams, n_blocks: usize) -> Result<DigitSeq> {
    let total = check_len(u, params, n_blocks)?;
    let (ell, len) = (params.ell(), params.block_len());
    let blocks: Vec<Vec<u8>> = u.digits()[..total]
        .par_chunks(len)
        .map(|block| {
            let mut out = encode_block(&block[ell..], params)?;
            out.extend_from_slice(&block[ell..]);
            Ok(out)
        })
        .collect::<Result<_>>()?;
    DigitSeq::new(params.base(), blocks.concat())
}

/// `u` on the payload positions and 0 elsewhere, over `n_blocks` blocks.
pub fn payload_track(u: &DigitSeq, params: &CodecParams, n_blocks: usize) -> Result<DigitSeq> {
    let total = check_len(u, params, n_blocks)?;
    let ell = params.ell();
    let digits = u.digits()[..total]
        .iter()
        .enumerate()
        .map(|(pos, &d)| if pos % params.block_len() >= ell { d } else { 0 })
        .collect();
    DigitSeq::new(params.base(), digits)
}

/// For each block, the number of positions `q` with `q >= w` whose digit
/// differs from the canonical predictor's guess from `v[q-w..q]`.
pub fn verify_block_errors(v: &DigitSeq, params: &CodecParams, n_blocks: usize) -> Result<Vec<u32>> {
    check_len(v, params, n_blocks)?;
    let e = CanonicalPredictor::new(*params);
    let (w, len) = (params.w(), params.block_len());
    let d = v.digits();
    Ok((0..n_blocks)
        .into_par_iter()
        .map(|n| {
            (n * len..(n + 1) * len)
                .filter(|&q| q >= w && e.predict(&d[q - w..q]) != d[q])
                .count() as u32
        })
        .collect())
}

/// Outcome of running the code on a payload sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodecReport {
    pub schema_version: u32,
    pub params: CodecParams,
    pub n_blocks: usize,
    pub errors_per_block: Vec<u32>,
    /// `histogram[c]` blocks had exactly `c` errors.
    pub error_histogram: Vec<u64>,
    pub max_errors: u32,
    /// Positions scored: `n_blocks (ell + k) - w`.
    pub scored: u64,
    /// Misprediction rate of the canonical predictor on `v`.
    pub beta_e: f64,
    /// Least misprediction rate of any width-`w` block function on `v`.
    pub beta_w: f64,
    /// The same for the payload track.
    pub payload_beta_w: f64,
    /// `2 / (ell + k)`.
    pub error_bound: f64,
    /// `d (b-1)/b` with `d = k / (ell + k)`.
    pub payload_noise: f64,
}

impl CodecReport {
    /// Builds `v` from `u` and measures it, predicting each digit from the
    /// `w` digits before it.
    pub fn run(u: &DigitSeq, params: &CodecParams, n_blocks: usize) -> Result<(DigitSeq, CodecReport)> {
        let v = build_v(u, params, n_blocks)?;
        let track = payload_track(u, params, n_blocks)?;
        let errors = verify_block_errors(&v, params, n_blocks)?;
        let max_errors = errors.iter().copied().max().unwrap_or(0);
        let mut error_histogram = vec![0u64; max_errors as usize + 1];
        for &c in &errors {
            error_histogram[c as usize] += 1;
        }
        let w = params.w();
        let scored = v
            .len()
            .checked_sub(w)
            .ok_or_else(|| domain("need more than w digits"))?;
        let total_errors: u64 = errors.iter().map(|&c| u64::from(c)).sum();
        let (beta_w, _) = beta_ell(&v, w, scored, Orientation::PredictNext)?;
        let (payload_beta_w, _) = beta_ell(&track, w, scored, Orientation::PredictNext)?;
        let b = f64::from(params.base());
        let report = CodecReport {
            schema_version: crate::SCHEMA_VERSION,
            params: *params,
            n_blocks,
            errors_per_block: errors,
            error_histogram,
            max_errors,
            scored: scored as u64,
            beta_e: total_errors as f64 / scored as f64,
            beta_w: beta_w.value(),
            payload_beta_w: payload_beta_w.value(),
            error_bound: 2.0 / params.block_len() as f64,
            payload_noise: params.density() * (b - 1.0) / b,
        };
        Ok((v, report))
    }
}
