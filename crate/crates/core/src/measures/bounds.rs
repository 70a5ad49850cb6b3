//! Hausdorff dimension bounds for the noise level sets.
//!
//! With `H` the binary entropy in nats and `s` in `[0, (b-1)/b]`:
//!
//! - `A_1(s)`, `A_2(s)`, `A_4(s)` and `L(s)` all have dimension 1;
//! - `A_3(s)` and `U(s)` lie between
//!   `lower(s) = H(s)/ln b + s ln(b-1)/ln b` and
//!   `upper_formula(s) = H(s)/ln b + s`.
//!
//! A dimension never exceeds 1, so the reported `upper` is
//! `min(1, upper_formula)`; the raw curve is kept alongside.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::markov::binary_entropy;
use crate::digitseq::check_base;
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimBounds {
    pub s: f64,
    /// Lower bound for `dim A_3(s)` and `dim U(s)`.
    pub lower: f64,
    /// Upper bound for `dim A_3(s)` and `dim U(s)`, capped at 1.
    pub upper: f64,
    /// `H(s)/ln b + s` before the cap.
    pub upper_formula: f64,
    pub a1: f64,
    pub a2: f64,
    pub a4: f64,
    pub l: f64,
}

pub fn dim_bounds(base: u32, s: f64) -> Result<DimBounds> {
    check_base(base)?;
    let b = f64::from(base);
    let top = (b - 1.0) / b;
    if !(0.0..=top).contains(&s) {
        return Err(domain(format!("s = {s} outside [0, {top}]")));
    }
    let ln_b = b.ln();
    let h = binary_entropy(s) / ln_b;
    let lower = h + s * (b - 1.0).ln() / ln_b;
    let upper_formula = h + s;
    Ok(DimBounds {
        s,
        lower,
        upper: upper_formula.min(1.0),
        upper_formula,
        a1: 1.0,
        a2: 1.0,
        a4: 1.0,
        l: 1.0,
    })
}

/// `g + 1` evenly spaced points from 0 to `(b-1)/b` inclusive.
pub fn bounds_grid(base: u32, g: usize) -> Result<Vec<DimBounds>> {
    check_base(base)?;
    if g == 0 {
        return Err(domain("grid needs at least one interval"));
    }
    let top = f64::from(base - 1) / f64::from(base);
    (0..=g)
        .map(|i| {
            let s = if i == g { top } else { top * i as f64 / g as f64 };
            dim_bounds(base, s)
        })
        .collect()
}

/// `s,lower,upper,A1,A2,A4,L` with a header line.
pub fn bounds_csv(rows: &[DimBounds]) -> String {
    let mut out = String::from("s,lower,upper,A1,A2,A4,L\n");
    for r in rows {
        writeln!(
            out,
            "{:.12},{:.12},{:.12},{},{},{},{}",
            r.s, r.lower, r.upper, r.a1, r.a2, r.a4, r.l
        )
        .expect("writing to a String");
    }
    out
}
