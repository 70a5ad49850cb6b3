//! Per-context digit counts.
//!
//! The infimum over all block functions decomposes by context, so `beta_ell`
//! only needs, for every context word, how often each digit was scored under
//! it. Tables over disjoint position ranges merge by pointwise addition,
//! which lets long sequences be counted in chunks.

use std::collections::HashMap;
use std::ops::Range;

use super::{checked_pow, word_index, Beta, BlockFunction, Orientation};

/// Dense storage is used while `base^(width+1)` stays below this.
const DENSE_CELLS_MAX: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Store {
    /// `counts[ctx * base + digit]`.
    Dense(Vec<u64>),
    /// Context packed as a base-b numeral.
    Packed(HashMap<u128, Vec<u64>>),
    /// Contexts too long to pack.
    Wide(HashMap<Box<[u8]>, Vec<u64>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextTable {
    base: u32,
    width: usize,
    total: u64,
    store: Store,
}

impl ContextTable {
    pub fn new(base: u32, width: usize) -> Self {
        let store = match checked_pow(base, width + 1) {
            Some(cells) if cells <= DENSE_CELLS_MAX => Store::Dense(vec![0; cells as usize]),
            _ if checked_pow(base, width).is_some() => Store::Packed(HashMap::new()),
            _ => Store::Wide(HashMap::new()),
        };
        Self {
            base,
            width,
            total: 0,
            store,
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of scored positions counted so far.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Counts the scored positions `positions` of `digits`. Every position
    /// must have its full context inside `digits`.
    pub fn count(&mut self, digits: &[u8], orientation: Orientation, positions: Range<usize>) {
        if positions.is_empty() {
            return;
        }
        let (b, ell) = (self.base as usize, self.width);
        self.total += positions.len() as u64;
        match &mut self.store {
            Store::Dense(counts) => {
                let modulus = b.pow(ell as u32);
                let first = orientation.context_start(ell, positions.start);
                // index of the window that ends just before the first new digit
                let mut idx = word_index(&digits[first..first + ell - 1], self.base);
                for pos in positions {
                    let s = orientation.context_start(ell, pos);
                    idx = (idx * b + digits[s + ell - 1] as usize) % modulus;
                    counts[idx * b + digits[pos] as usize] += 1;
                }
            }
            Store::Packed(map) => {
                let modulus = checked_pow(self.base, ell).expect("packed width fits");
                let first = orientation.context_start(ell, positions.start);
                let mut key = digits[first..first + ell - 1]
                    .iter()
                    .fold(0u128, |acc, &d| acc * b as u128 + u128::from(d));
                for pos in positions {
                    let s = orientation.context_start(ell, pos);
                    // (key mod base^(ell-1)) * base keeps the product below base^ell
                    key = (key % (modulus / b as u128)) * b as u128 + u128::from(digits[s + ell - 1]);
                    map.entry(key).or_insert_with(|| vec![0; b])[digits[pos] as usize] += 1;
                }
            }
            Store::Wide(map) => {
                for pos in positions {
                    let s = orientation.context_start(ell, pos);
                    let ctx = &digits[s..s + ell];
                    match map.get_mut(ctx) {
                        Some(c) => c[digits[pos] as usize] += 1,
                        None => {
                            let mut c = vec![0; b];
                            c[digits[pos] as usize] = 1;
                            map.insert(ctx.into(), c);
                        }
                    }
                }
            }
        }
    }

    /// Pointwise addition of counts. Panics on a shape mismatch.
    pub fn merge(&mut self, other: &ContextTable) {
        assert_eq!(
            (self.base, self.width),
            (other.base, other.width),
            "table shape mismatch"
        );
        self.total += other.total;
        match (&mut self.store, &other.store) {
            (Store::Dense(a), Store::Dense(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            (Store::Packed(a), Store::Packed(b)) => merge_maps(a, b),
            (Store::Wide(a), Store::Wide(b)) => merge_maps(a, b),
            _ => unreachable!("equal shapes imply equal storage"),
        }
    }

    /// Digit counts per context, for contexts seen at least once.
    fn rows(&self) -> Box<dyn Iterator<Item = &[u64]> + '_> {
        let b = self.base as usize;
        match &self.store {
            Store::Dense(c) => Box::new(c.chunks(b)),
            Store::Packed(m) => Box::new(m.values().map(Vec::as_slice)),
            Store::Wide(m) => Box::new(m.values().map(Vec::as_slice)),
        }
    }

    /// Positions the best block function gets right: sum over contexts of the
    /// largest digit count.
    pub fn correct(&self) -> u64 {
        self.rows().map(|r| r.iter().copied().max().unwrap_or(0)).sum()
    }

    pub fn beta(&self) -> Beta {
        Beta {
            mismatches: self.total - self.correct(),
            scored: self.total,
        }
    }

    /// A block function attaining [`ContextTable::beta`]: majority digit per
    /// context, smallest digit on ties, 0 on unseen contexts.
    pub fn witness(&self) -> BlockFunction {
        let (b, ell) = (self.base, self.width);
        match &self.store {
            Store::Dense(c) => {
                let table = c.chunks(b as usize).map(argmax).collect();
                BlockFunction::from_table(b, ell, table).expect("dense table is total")
            }
            Store::Packed(m) => {
                let entries = m.iter().map(|(&key, row)| (unpack(key, b, ell), argmax(row))).collect();
                BlockFunction::from_entries(b, ell, entries, 0).expect("valid entries")
            }
            Store::Wide(m) => {
                let entries = m.iter().map(|(k, row)| (k.to_vec(), argmax(row))).collect();
                BlockFunction::from_entries(b, ell, entries, 0).expect("valid entries")
            }
        }
    }
}

fn merge_maps<K: Clone + Eq + std::hash::Hash>(a: &mut HashMap<K, Vec<u64>>, b: &HashMap<K, Vec<u64>>) {
    for (k, row) in b {
        match a.get_mut(k) {
            Some(dst) => dst.iter_mut().zip(row).for_each(|(x, y)| *x += y),
            None => {
                a.insert(k.clone(), row.clone());
            }
        }
    }
}

/// First index of the maximum.
fn argmax(row: &[u64]) -> u8 {
    let mut best = 0;
    for (d, &c) in row.iter().enumerate() {
        if c > row[best] {
            best = d;
        }
    }
    best as u8
}

fn unpack(mut key: u128, base: u32, width: usize) -> Vec<u8> {
    let mut w = vec![0u8; width];
    for slot in w.iter_mut().rev() {
        *slot = (key % u128::from(base)) as u8;
        key /= u128::from(base);
    }
    w
}
