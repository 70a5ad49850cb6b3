//! Base-b digit sequences and the deterministic sources that produce them.

mod io;

pub use io::{format_digits, parse_digits, read_digits, write_digits};

use std::path::PathBuf;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::rng;

/// Largest supported base; digits are stored as bytes.
pub const MAX_BASE: u32 = 256;

/// A finite prefix of a base-b expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSeq {
    base: u32,
    digits: Vec<u8>,
}

impl DigitSeq {
    pub fn new(base: u32, digits: Vec<u8>) -> Result<Self> {
        check_base(base)?;
        if let Some((i, d)) = digits.iter().enumerate().find(|(_, &d)| u32::from(d) >= base) {
            return Err(domain(format!(
                "digit {d} at index {i} is out of range for base {base}"
            )));
        }
        Ok(Self { base, digits })
    }

    pub fn empty(base: u32) -> Result<Self> {
        Self::new(base, Vec::new())
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// The first `n` digits (or all of them if shorter).
    pub fn prefix(&self, n: usize) -> DigitSeq {
        DigitSeq {
            base: self.base,
            digits: self.digits[..n.min(self.digits.len())].to_vec(),
        }
    }

    pub fn reversed(&self) -> DigitSeq {
        let mut digits = self.digits.clone();
        digits.reverse();
        DigitSeq {
            base: self.base,
            digits,
        }
    }

    /// Empirical frequency of every digit value.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut counts = vec![0u64; self.base as usize];
        for &d in &self.digits {
            counts[d as usize] += 1;
        }
        let n = self.digits.len().max(1) as f64;
        counts.into_iter().map(|c| c as f64 / n).collect()
    }
}

pub(crate) fn check_base(base: u32) -> Result<()> {
    if !(2..=MAX_BASE).contains(&base) {
        return Err(domain(format!("base must lie in [2, {MAX_BASE}], got {base}")));
    }
    Ok(())
}

/// First `n` digits of the base-b expansion of `p/q` by integer long division.
///
/// Long division never produces a tail of `base-1` digits, so the result is
/// the expansion under the unique-expansion convention (`1/2` in base 2 is
/// `1,0,0,...`).
pub fn expand_rational(p: u64, q: u64, base: u32, n: usize) -> Result<DigitSeq> {
    check_base(base)?;
    if q == 0 {
        return Err(domain("denominator must be positive"));
    }
    if p >= q {
        return Err(domain(format!("need 0 <= p < q, got p={p}, q={q}")));
    }
    let (b, q) = (u128::from(base), u128::from(q));
    let mut r = u128::from(p);
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        r *= b;
        digits.push((r / q) as u8);
        r %= q;
    }
    Ok(DigitSeq { base, digits })
}

/// First `n` digits of the concatenation of the base-b representations of
/// 1, 2, 3, ...
pub fn champernowne(base: u32, n: usize) -> Result<DigitSeq> {
    check_base(base)?;
    let mut digits = Vec::with_capacity(n);
    let mut scratch = Vec::with_capacity(64);
    let mut k: u64 = 1;
    while digits.len() < n {
        scratch.clear();
        let mut m = k;
        while m > 0 {
            scratch.push((m % u64::from(base)) as u8);
            m /= u64::from(base);
        }
        digits.extend(scratch.iter().rev().take(n - digits.len()));
        k += 1;
    }
    Ok(DigitSeq { base, digits })
}

/// `n` i.i.d. uniform digits from the seeded generator in [`crate::rng`].
pub fn uniform_random(base: u32, n: usize, seed: u64) -> Result<DigitSeq> {
    check_base(base)?;
    let mut rng = rng::seeded(seed);
    let digits = (0..n).map(|_| rng.random_range(0..base) as u8).collect();
    Ok(DigitSeq { base, digits })
}

/// Where a digit sequence comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceKind {
    Rational { p: u64, q: u64 },
    File { path: PathBuf },
    Uniform { seed: u64 },
    Champernowne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqSource {
    #[serde(flatten)]
    pub kind: SourceKind,
    pub base: u32,
}

impl SeqSource {
    pub fn new(kind: SourceKind, base: u32) -> Result<Self> {
        check_base(base)?;
        if let SourceKind::Rational { p, q } = kind {
            if q == 0 || p >= q {
                return Err(domain(format!("rational source needs 0 <= p < q, got {p}/{q}")));
            }
        }
        Ok(Self { kind, base })
    }

    /// Produces `n` digits. A file source yields at most its own length and
    /// must agree with the declared base.
    pub fn take(&self, n: usize) -> Result<DigitSeq> {
        match &self.kind {
            SourceKind::Rational { p, q } => expand_rational(*p, *q, self.base, n),
            SourceKind::Uniform { seed } => uniform_random(self.base, n, *seed),
            SourceKind::Champernowne => champernowne(self.base, n),
            SourceKind::File { path } => Ok(read_digits(path, Some(self.base))?.prefix(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn multiplicative_period(base: u64, q: u64) -> usize {
        // q with every prime shared with the base removed
        let mut q = q;
        let mut g = gcd(q, base);
        while g > 1 {
            while q.is_multiple_of(g) {
                q /= g;
            }
            g = gcd(q, base);
        }
        if q == 1 {
            return 1;
        }
        let mut r = base % q;
        let mut ord = 1;
        while r != 1 {
            r = r * base % q;
            ord += 1;
        }
        ord
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    fn smallest_tail_period(d: &[u8], tail_start: usize) -> usize {
        let tail = &d[tail_start..];
        (1..=tail.len() / 2)
            .find(|&p| tail.iter().zip(&tail[p..]).all(|(a, b)| a == b))
            .unwrap()
    }

    #[test]
    fn rational_examples() {
        assert_eq!(expand_rational(1, 3, 10, 5).unwrap().digits(), &[3, 3, 3, 3, 3]);
        assert_eq!(expand_rational(1, 2, 2, 4).unwrap().digits(), &[1, 0, 0, 0]);
        assert_eq!(expand_rational(1, 7, 10, 6).unwrap().digits(), &[1, 4, 2, 8, 5, 7]);
        assert_eq!(expand_rational(0, 5, 10, 3).unwrap().digits(), &[0, 0, 0]);
        assert!(expand_rational(1, 0, 10, 3).is_err());
        assert!(expand_rational(3, 3, 10, 3).is_err());
    }

    #[test]
    fn rational_period_is_order_of_base() {
        // the eventual period equals the multiplicative order of b modulo the
        // part of q coprime to b (which divides phi(q), not q)
        for base in [2u32, 3, 10] {
            for q in 1..=50u64 {
                for p in [1u64, q / 2, q - 1] {
                    if p >= q || p == 0 {
                        continue;
                    }
                    let d = expand_rational(p, q, base, 600).unwrap();
                    let per = smallest_tail_period(d.digits(), 100);
                    let ord = multiplicative_period(u64::from(base), q);
                    assert_eq!(ord % per, 0, "p={p} q={q} base={base}");
                }
            }
        }
    }

    #[test]
    fn rational_has_no_top_digit_tail() {
        for base in 2..=10u32 {
            for q in 1..=40u64 {
                for p in 0..q {
                    let d = expand_rational(p, q, base, 400).unwrap();
                    let top = (base - 1) as u8;
                    let run = d.digits().iter().rev().take_while(|&&x| x == top).count();
                    assert!(run < (q as usize) * base as usize, "p={p} q={q} base={base}");
                }
            }
        }
    }

    #[test]
    fn champernowne_examples() {
        assert_eq!(
            champernowne(10, 11).unwrap().digits(),
            &[1, 2, 3, 4, 5, 6, 7, 8, 9, 1, 0]
        );
        assert_eq!(champernowne(2, 8).unwrap().digits(), &[1, 1, 0, 1, 1, 1, 0, 0]);
        assert!(champernowne(10, 0).unwrap().is_empty());
        assert_eq!(champernowne(16, 17).unwrap().digits()[15..], [1, 0]);
    }

    #[test]
    fn uniform_examples() {
        assert!(uniform_random(2, 0, 1).unwrap().is_empty());
        let a = uniform_random(2, 1_000_000, 7).unwrap();
        for f in a.frequencies() {
            assert!((0.498..=0.502).contains(&f), "{f}");
        }
        assert_eq!(a, uniform_random(2, 1_000_000, 7).unwrap());
        assert_ne!(a, uniform_random(2, 1_000_000, 8).unwrap());
        let d = uniform_random(7, 1000, 3).unwrap();
        assert!(d.digits().iter().all(|&x| x < 7));
    }

    #[test]
    fn invalid_digits_rejected() {
        assert!(DigitSeq::new(4, vec![0, 5]).is_err());
        assert!(DigitSeq::new(1, vec![]).is_err());
        assert!(DigitSeq::new(257, vec![]).is_err());
    }

    #[test]
    fn sources() {
        let s = SeqSource::new(SourceKind::Rational { p: 1, q: 3 }, 10).unwrap();
        assert_eq!(s.take(4).unwrap().digits(), &[3, 3, 3, 3]);
        assert!(SeqSource::new(SourceKind::Rational { p: 4, q: 3 }, 10).is_err());
        let s = SeqSource::new(SourceKind::Uniform { seed: 5 }, 3).unwrap();
        assert_eq!(s.take(100).unwrap(), uniform_random(3, 100, 5).unwrap());
    }
}
