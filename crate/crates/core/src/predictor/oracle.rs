//! Literal enumeration of every block function of a given width.
//!
//! Independent of [`super::ContextTable`]: each candidate table is scored by
//! walking the scored positions. Only for cross-checking small cases.

use num_bigint::BigUint;

use super::{increment, usable_len, word_index, Beta, Orientation};
use crate::digitseq::DigitSeq;
use crate::error::{domain, Error, Result};

pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000;

/// Number of block functions of width `ell` over base `base`: `base^(base^ell)`.
pub fn block_function_count(base: u32, ell: usize) -> BigUint {
    let words = BigUint::from(base).pow(ell as u32);
    let mut count = BigUint::from(1u32);
    let mut i = BigUint::from(0u32);
    // words may be huge; bail out as soon as the count is astronomically large
    while i < words {
        count *= base;
        i += 1u32;
        if count.bits() > 256 {
            break;
        }
    }
    count
}

/// Minimum of `beta_E` over every block function of width `ell`.
pub fn beta_ell_bruteforce(x: &DigitSeq, ell: usize, n: usize, orientation: Orientation, cap: u64) -> Result<Beta> {
    let base = x.base();
    if ell == 0 {
        return Err(domain("width must be at least 1"));
    }
    let count = block_function_count(base, ell);
    if count > BigUint::from(cap) {
        let shown = if count.bits() > 256 {
            format!("more than 2^256 (= {base}^({base}^{ell}))")
        } else {
            count.to_string()
        };
        return Err(Error::EnumerationCap { count: shown, cap });
    }
    let usable = usable_len(x.len(), ell);
    if n > usable {
        return Err(domain(format!("N = {n} exceeds usable length {usable}")));
    }
    let d = x.digits();
    let scored: Vec<(usize, u8)> = orientation
        .scored_positions(ell, n)
        .map(|pos| {
            let s = orientation.context_start(ell, pos);
            (word_index(&d[s..s + ell], base), d[pos])
        })
        .collect();

    let words = (base as usize).pow(ell as u32);
    let mut table = vec![0u8; words];
    let mut best = u64::MAX;
    let total: u64 = count.try_into().expect("count is below the cap");
    for _ in 0..total {
        let miss = scored.iter().filter(|&&(w, t)| table[w] != t).count() as u64;
        best = best.min(miss);
        increment(&mut table, base);
    }
    Ok(Beta {
        mismatches: best,
        scored: n as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digitseq::uniform_random;
    use crate::predictor::beta_ell;

    #[test]
    fn counts() {
        assert_eq!(block_function_count(2, 2), BigUint::from(16u32));
        assert_eq!(block_function_count(3, 1), BigUint::from(27u32));
        assert_eq!(block_function_count(2, 4), BigUint::from(65536u32));
        assert!(block_function_count(2, 5) > BigUint::from(DEFAULT_ENUMERATION_CAP));
        assert!(block_function_count(10, 10).bits() > 256);
    }

    #[test]
    fn refuses_above_cap() {
        let x = uniform_random(2, 100, 0).unwrap();
        let err = beta_ell_bruteforce(&x, 5, 50, Orientation::PredictNext, DEFAULT_ENUMERATION_CAP);
        match err {
            Err(Error::EnumerationCap { count, .. }) => assert_eq!(count, "4294967296"),
            other => panic!("{other:?}"),
        }
        assert!(beta_ell_bruteforce(&x, 4, 50, Orientation::PredictNext, DEFAULT_ENUMERATION_CAP).is_ok());
    }

    #[test]
    fn equals_context_minimum_b2_l3() {
        let x = uniform_random(2, 131, 99).unwrap();
        for o in [Orientation::PredictPrevious, Orientation::PredictNext] {
            let brute = beta_ell_bruteforce(&x, 3, 128, o, DEFAULT_ENUMERATION_CAP).unwrap();
            let (fast, _) = beta_ell(&x, 3, 128, o).unwrap();
            assert_eq!(brute, fast);
        }
    }

    #[test]
    fn oracle_equivalence_all_small_shapes() {
        // every (b, ell) with b^(b^ell) <= 1e5, 200 random sequences each
        let shapes = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (4, 1), (5, 1), (6, 1)];
        for (b, ell) in shapes {
            for t in 0..200 {
                let len = 8 + (t * 37) % 249;
                let x = uniform_random(b, len, 1000 + t as u64).unwrap();
                let n = usable_len(len, ell);
                let o = if t % 2 == 0 {
                    Orientation::PredictPrevious
                } else {
                    Orientation::PredictNext
                };
                let brute = beta_ell_bruteforce(&x, ell, n, o, DEFAULT_ENUMERATION_CAP).unwrap();
                let (fast, _) = beta_ell(&x, ell, n, o).unwrap();
                assert_eq!(brute, fast, "b={b} ell={ell} trial={t}");
            }
        }
    }
}
