use serde::{Deserialize, Serialize};

use crate::digitseq::DigitSeq;
use crate::error::{domain, Error, Result};

/// The progressions `I_i = { n : n ≡ 2^i - 1 (mod 2^(i+1)) }` for
/// `i < i_max`, together with the residual `{ n : n ≡ 2^i_max - 1 (mod 2^i_max) }`.
///
/// `n` lies in `I_i` exactly when `n + 1` has `i` trailing zero bits, so the
/// classes are disjoint and cover every natural number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionPartition {
    i_max: u32,
}

impl ProgressionPartition {
    pub fn new(i_max: u32) -> Result<Self> {
        if !(1..=63).contains(&i_max) {
            return Err(domain("i_max must lie in 1..=63"));
        }
        Ok(Self { i_max })
    }

    pub fn i_max(&self) -> u32 {
        self.i_max
    }

    /// `Some(i)` if `n ∈ I_i`, `None` for the residual.
    pub fn class_of(&self, n: u64) -> Option<u32> {
        let tz = (u128::from(n) + 1).trailing_zeros();
        (tz < self.i_max).then_some(tz)
    }

    /// Asymptotic density of `I_i`, or of the residual for `None`.
    pub fn density(&self, class: Option<u32>) -> f64 {
        match class {
            Some(i) => 0.5f64.powi(i as i32 + 1),
            None => 0.5f64.powi(self.i_max as i32),
        }
    }

    /// Members of `I_i` below `bound`.
    pub fn members(&self, i: u32, bound: u64) -> impl Iterator<Item = u64> {
        let step = 1u64 << (i + 1);
        let start = (1u64 << i) - 1;
        (start..bound).step_by(step as usize)
    }
}

/// A set of positions with decidable membership.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MembershipSet {
    All,
    Empty,
    /// A union of classes of a [`ProgressionPartition`].
    Progressions {
        i_max: u32,
        selected: Vec<u32>,
        #[serde(default)]
        residual: bool,
    },
    /// `n` is a member iff `mask[n mod mask.len()]`.
    Periodic {
        mask: Vec<bool>,
    },
}

impl MembershipSet {
    pub fn evens() -> Self {
        MembershipSet::Periodic {
            mask: vec![true, false],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MembershipSet::Progressions { i_max, selected, .. } => {
                ProgressionPartition::new(*i_max)?;
                if let Some(i) = selected.iter().find(|&&i| i >= *i_max) {
                    return Err(domain(format!("progression {i} is not below i_max = {i_max}")));
                }
                Ok(())
            }
            MembershipSet::Periodic { mask } if mask.is_empty() => Err(domain("periodic mask is empty")),
            _ => Ok(()),
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            MembershipSet::All => true,
            MembershipSet::Empty => false,
            MembershipSet::Progressions {
                i_max,
                selected,
                residual,
            } => match (ProgressionPartition { i_max: *i_max }).class_of(n) {
                Some(i) => selected.contains(&i),
                None => *residual,
            },
            MembershipSet::Periodic { mask } => mask[(n % mask.len() as u64) as usize],
        }
    }

    pub fn density(&self) -> f64 {
        match self {
            MembershipSet::All => 1.0,
            MembershipSet::Empty => 0.0,
            MembershipSet::Progressions {
                i_max,
                selected,
                residual,
            } => {
                let part = ProgressionPartition { i_max: *i_max };
                let mut d: f64 = selected.iter().map(|&i| part.density(Some(i))).sum();
                if *residual {
                    d += part.density(None);
                }
                d
            }
            MembershipSet::Periodic { mask } => mask.iter().filter(|&&m| m).count() as f64 / mask.len() as f64,
        }
    }
}

/// First `n` digits of the sequence that reads `x` on `set` and `y` off it:
/// if position `m` is the `k`-th member of `set` the output is `x[k]`,
/// otherwise it is `y[k]` for `m` the `k`-th non-member.
pub fn interleave(set: &MembershipSet, x: &DigitSeq, y: &DigitSeq, n: usize) -> Result<DigitSeq> {
    set.validate()?;
    if x.base() != y.base() {
        return Err(domain(format!("bases differ: {} and {}", x.base(), y.base())));
    }
    let (mut kx, mut ky) = (0usize, 0usize);
    let mut out = Vec::with_capacity(n);
    for m in 0..n {
        let (src, k) = if set.contains(m as u64) {
            (x, &mut kx)
        } else {
            (y, &mut ky)
        };
        let &d = src.digits().get(*k).ok_or(Error::Length {
            needed: *k + 1,
            available: src.len(),
        })?;
        out.push(d);
        *k += 1;
    }
    DigitSeq::new(x.base(), out)
}
