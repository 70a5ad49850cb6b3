//! Shift-invariant measures: k-step Markov entropy and noise, the
//! entropy-maximizing Bernoulli measure under a noise cap, and the Hausdorff
//! dimension bounds for the noise level sets.
//!
//! Probabilities are generic over [`Scalar`], implemented for `f64` and for
//! exact [`BigRational`]s. Everything except entropy is a polynomial in the
//! probabilities, so with rationals the noise of a measure is exact.
//! Entropies are in nats.

mod bounds;
mod markov;
mod search;
mod stationary;

pub use bounds::{bounds_csv, bounds_grid, dim_bounds, DimBounds};
pub use markov::{bernoulli_opt, binary_entropy, ratio, MarkovSpec, MarkovSpecJson};
pub use search::{markov_search, MAX_SEARCH_ORDER};
pub use stationary::stationary;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

use crate::error::{domain, Result};

pub trait Scalar: Clone + PartialOrd + Debug + Num + Signed + ToPrimitive + FromPrimitive + Send + Sync {
    fn to_f(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_usize_ratio(num: usize, den: usize) -> Self {
        Self::from_usize(num).expect("small integer") / Self::from_usize(den).expect("small integer")
    }

    /// `|self - other| <= tol`.
    fn near(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).abs().to_f() <= tol
    }
}

impl Scalar for f64 {}
impl Scalar for BigRational {}

/// Parses `"a/b"`, a decimal such as `"0.25"`, or an integer, exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || domain(format!("cannot parse {text:?} as a rational number"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, scale);
    Ok(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_rational(".1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("2").unwrap(), q(2, 1));
        assert_eq!(parse_rational("-0.5").unwrap(), q(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }
}
