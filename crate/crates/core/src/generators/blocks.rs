use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sample::rauzy_u;
use crate::digitseq::DigitSeq;
use crate::error::{domain, Result};
use crate::rng::derive_seed;

/// Block boundaries `a_1 = 1 < a_2 < ...` with `a_{j+1} = a_j (j^2 + 1)`;
/// block `B_j` is `[a_j, a_{j+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSchedule {
    /// `a[j - 1] = a_j`.
    a: Vec<u64>,
}

impl BlockSchedule {
    /// `a_1, ..., a_{j_max}`, which delimit the blocks `B_1, ..., B_{j_max - 1}`.
    pub fn growth(j_max: usize) -> Result<Self> {
        if j_max < 2 {
            return Err(domain("a schedule needs j_max >= 2"));
        }
        let mut a = vec![1u64];
        for j in 1..j_max as u64 {
            let next = j
                .checked_mul(j)
                .and_then(|jj| a[a.len() - 1].checked_mul(jj + 1))
                .filter(|&v| usize::try_from(v).is_ok())
                .ok_or_else(|| domain(format!("schedule overflows at j = {}", j + 1)))?;
            a.push(next);
        }
        Ok(Self { a })
    }

    pub fn a(&self, j: usize) -> u64 {
        self.a[j - 1]
    }

    pub fn boundaries(&self) -> &[u64] {
        &self.a
    }

    pub fn block_count(&self) -> usize {
        self.a.len() - 1
    }

    pub fn block(&self, j: usize) -> Range<u64> {
        self.a(j)..self.a(j + 1)
    }

    /// Length of the sequence covering position 0 and every block.
    pub fn total_len(&self) -> u64 {
        self.a[self.a.len() - 1]
    }
}

/// A finite table of indicator sequences `x_i(j)`; entries outside the
/// table are 0.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IndicatorFamily {
    rows: Vec<Vec<bool>>,
}

impl IndicatorFamily {
    pub fn zeros() -> Self {
        Self::default()
    }

    pub fn from_rows(rows: Vec<Vec<bool>>) -> Self {
        Self { rows }
    }

    pub fn from_fn(i_max: usize, j_max: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        Self {
            rows: (0..i_max).map(|i| (0..j_max).map(|j| f(i, j)).collect()).collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows.get(i).and_then(|r| r.get(j)).copied().unwrap_or(false)
    }

    /// `m(j) = min{ j, min{ i : x_i(j) = 1 } }`.
    pub fn m(&self, j: usize) -> usize {
        (0..j).find(|&i| self.get(i, j)).unwrap_or(j)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockInfo {
    pub j: usize,
    pub start: u64,
    pub end: u64,
    pub m: usize,
    /// Index passed to [`super::rauzy_u_law`]; `m` raised to at least 1.
    pub law_index: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockConcat {
    pub seq: DigitSeq,
    pub schedule: BlockSchedule,
    pub blocks: Vec<BlockInfo>,
}

/// Position 0 holds digit 0 and block `B_j` holds a fresh
/// [`rauzy_u`]`(max(m(j), 1), s)` sample seeded by `derive_seed(seed, j)`.
///
/// Blocks are generated in parallel; each depends only on its own law and
/// seed, so the result equals sequential generation.
pub fn block_concat(x: &IndicatorFamily, s: f64, base: u32, j_max: usize, seed: u64) -> Result<BlockConcat> {
    let schedule = BlockSchedule::growth(j_max)?;
    let blocks: Vec<BlockInfo> = (1..=schedule.block_count())
        .map(|j| {
            let m = x.m(j);
            BlockInfo {
                j,
                start: schedule.a(j),
                end: schedule.a(j + 1),
                m,
                law_index: m.max(1) as u64,
                seed: derive_seed(seed, j as u64),
            }
        })
        .collect();
    let parts: Vec<DigitSeq> = blocks
        .par_iter()
        .map(|blk| rauzy_u(blk.law_index, s, base, (blk.end - blk.start) as usize, blk.seed))
        .collect::<Result<_>>()?;
    let mut digits = Vec::with_capacity(schedule.total_len() as usize);
    digits.push(0);
    for part in parts {
        digits.extend_from_slice(part.digits());
    }
    Ok(BlockConcat {
        seq: DigitSeq::new(base, digits)?,
        schedule,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predictor::{beta_ell, Orientation};

    #[test]
    fn schedule_values() {
        let s = BlockSchedule::growth(7).unwrap();
        assert_eq!(s.boundaries(), [1, 2, 10, 100, 1700, 44_200, 1_635_400]);
        for j in 1..s.block_count() {
            assert!(s.a(j + 1) as f64 / s.a(j) as f64 > (j * j) as f64);
        }
        assert_eq!(s.block(3), 10..100);
        assert!(BlockSchedule::growth(1).is_err());
        assert!(BlockSchedule::growth(40).is_err());
    }

    #[test]
    fn m_examples() {
        let zeros = IndicatorFamily::zeros();
        assert!((1..20).all(|j| zeros.m(j) == j));
        let first_row = IndicatorFamily::from_fn(1, 20, |_, _| true);
        assert!((1..20).all(|j| first_row.m(j) == 0));
        let x = IndicatorFamily::from_fn(5, 20, |i, j| i == 3 && j % 2 == 0);
        assert_eq!((x.m(2), x.m(4), x.m(5)), (2, 3, 5));
    }

    #[test]
    fn blocks_replay_from_their_seed() {
        let x = IndicatorFamily::from_fn(3, 6, |i, j| i == 2 && j == 4);
        let out = block_concat(&x, 0.1, 3, 6, 11).unwrap();
        assert_eq!(out.seq.len() as u64, out.schedule.total_len());
        assert_eq!(out.seq.digits()[0], 0);
        for blk in &out.blocks {
            let alone = rauzy_u(blk.law_index, 0.1, 3, (blk.end - blk.start) as usize, blk.seed).unwrap();
            assert_eq!(&out.seq.digits()[blk.start as usize..blk.end as usize], alone.digits());
        }
        assert_eq!(out.blocks[3].m, 2);
        assert_eq!(block_concat(&x, 0.1, 3, 6, 11).unwrap(), out);
    }

    #[test]
    fn noise_trends_down_across_blocks() {
        let out = block_concat(&IndicatorFamily::zeros(), 0.2, 2, 6, 5).unwrap();
        let ends: Vec<usize> = out.blocks.iter().skip(2).map(|b| b.end as usize).collect();
        let betas: Vec<f64> = ends
            .iter()
            .map(|&e| {
                beta_ell(&out.seq.prefix(e), 1, e - 1, Orientation::PredictPrevious)
                    .unwrap()
                    .0
                    .value()
            })
            .collect();
        for w in betas.windows(2) {
            assert!(w[1] < w[0], "{betas:?}");
        }
        assert!(betas.iter().all(|&b| b > 0.2 - 0.01));
    }
}
