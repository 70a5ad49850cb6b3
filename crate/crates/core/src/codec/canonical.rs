use super::{CodecParams, CODE_ONE, CODE_ZERO};
use crate::predictor::Predictor;

const MARKER: usize = 5;

/// The width-`w` block function that follows canonical runs.
///
/// Positions of the canonical sequence `t_0 t_1 ... t_{b^k - 1}` are indexed
/// from 0; every negative position is treated as a 0, which models the zeros
/// that precede each run inside a block.
///
/// On a window `s`:
/// - if `s` is all zeros, predict 0;
/// - if the first nonzero digit sits at or right of the midpoint, align the
///   run starting there with `t_0`;
/// - otherwise, for each start `q` of five consecutive 1s (left to right),
///   read the cycle beside it (to the right if `q < w/2`, else to the left),
///   recover its index from the `b_i` field and align the window with it.
///
/// An alignment is accepted only if every digit of the window agrees with
/// the canonical sequence there; the prediction is then the canonical digit
/// that follows. Without an accepted alignment the prediction is 0.
#[derive(Debug, Clone)]
pub struct CanonicalPredictor {
    params: CodecParams,
    /// `b^j` for `j < k`.
    powers: Vec<usize>,
}

impl CanonicalPredictor {
    pub fn new(params: CodecParams) -> Self {
        let powers = (0..params.k())
            .map(|j| (params.base() as usize).pow(j as u32))
            .collect();
        Self { params, powers }
    }

    pub fn params(&self) -> &CodecParams {
        &self.params
    }

    /// Total length of `t_0 ... t_{b^k - 1}`.
    pub fn canonical_len(&self) -> usize {
        self.params.payload_count() * self.params.cycle_len()
    }

    /// Canonical digit at `pos`: 0 before the start, `None` past the end.
    pub fn canonical_digit(&self, pos: i64) -> Option<u8> {
        if pos < 0 {
            return Some(0);
        }
        let pos = pos as usize;
        if pos >= self.canonical_len() {
            return None;
        }
        let c = &self.params;
        let (i, off) = (pos / c.cycle_len(), pos % c.cycle_len());
        let a_len = 5 * c.p();
        let digit = if off < a_len {
            let code = if (i >> (off / 5)) & 1 == 0 { CODE_ZERO } else { CODE_ONE };
            code[off % 5]
        } else if off == a_len || off == a_len + 1 + c.k() {
            0
        } else if off <= a_len + c.k() {
            ((i / self.powers[off - a_len - 1]) % c.base() as usize) as u8
        } else {
            1
        };
        Some(digit)
    }

    /// Canonical digits in `[start, start + len)`.
    pub fn canonical_slice(&self, start: usize, len: usize) -> Vec<u8> {
        (start..start + len)
            .map(|pos| {
                self.canonical_digit(pos as i64)
                    .expect("slice within the canonical sequence")
            })
            .collect()
    }

    /// If window index 0 corresponds to canonical position `align` and the
    /// whole window agrees, the canonical digit after the window.
    fn follow(&self, s: &[u8], align: i64) -> Option<u8> {
        let agrees = s
            .iter()
            .enumerate()
            .all(|(j, &d)| self.canonical_digit(align + j as i64) == Some(d));
        if agrees {
            self.canonical_digit(align + s.len() as i64)
        } else {
            None
        }
    }

    /// Alignment implied by a cycle whose first digit sits at window index
    /// `start`, or `None` if the cycle's fields do not fit in the window.
    fn cycle_alignment(&self, s: &[u8], start: i64) -> Option<i64> {
        let c = &self.params;
        let b_field = start + 5 * c.p() as i64 + 1;
        if start < 0 || b_field + c.k() as i64 > s.len() as i64 {
            return None;
        }
        let b_field = b_field as usize;
        let i: usize = s[b_field..b_field + c.k()]
            .iter()
            .zip(&self.powers)
            .map(|(&d, &pw)| d as usize * pw)
            .sum();
        Some((i * c.cycle_len()) as i64 - start)
    }

    fn marker_starts(s: &[u8]) -> impl Iterator<Item = usize> + '_ {
        let mut run = 0usize;
        s.iter().enumerate().filter_map(move |(j, &d)| {
            run = if d == 1 { run + 1 } else { 0 };
            (run >= MARKER).then(|| j + 1 - MARKER)
        })
    }
}

impl Predictor for CanonicalPredictor {
    fn base(&self) -> u32 {
        self.params.base()
    }

    fn width(&self) -> usize {
        self.params.w()
    }

    fn predict(&self, s: &[u8]) -> u8 {
        let w = s.len();
        let Some(first) = s.iter().position(|&d| d != 0) else {
            return 0;
        };
        if 2 * first >= w {
            return self.follow(s, -(first as i64)).unwrap_or(0);
        }
        let to_marker = (5 * self.params.p() + self.params.k() + 2) as i64;
        for q in Self::marker_starts(s) {
            let start = if 2 * q < w {
                q as i64 + MARKER as i64
            } else {
                q as i64 - to_marker
            };
            if let Some(next) = self.cycle_alignment(s, start).and_then(|align| self.follow(s, align)) {
                return next;
            }
        }
        0
    }
}
