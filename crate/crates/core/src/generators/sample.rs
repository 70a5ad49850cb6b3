use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use super::ProbVector;
use crate::digitseq::{check_base, DigitSeq};
use crate::error::{domain, Error, Result};
use crate::measures::{MarkovSpec, Scalar};
use crate::rng;

fn weighted(weights: &[f64]) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(weights).map_err(|e| Error::Internal(format!("weights {weights:?}: {e}")))
}

/// `n` i.i.d. digits with law `pv`.
pub fn bernoulli_seq<T: Scalar>(pv: &ProbVector<T>, n: usize, seed: u64) -> Result<DigitSeq> {
    let dist = weighted(pv.to_f64().probs())?;
    let mut rng = rng::seeded(seed);
    let digits = (0..n).map(|_| dist.sample(&mut rng) as u8).collect();
    DigitSeq::new(pv.base(), digits)
}

/// `n` digits of a stationary k-step Markov chain: the first word is drawn
/// from `rho`, each later digit from the conditional given the previous k.
pub fn markov_seq<T: Scalar>(spec: &MarkovSpec<T>, n: usize, seed: u64) -> Result<DigitSeq> {
    let spec = spec.to_f64();
    let (b, k) = (spec.base(), spec.order());
    let n_states = spec.rho().len();
    let mut rng = rng::seeded(seed);

    let first = weighted(spec.rho())?.sample(&mut rng);
    let mut digits: Vec<u8> = (0..k)
        .rev()
        .map(|pos| ((first / (b as usize).pow(pos as u32)) % b as usize) as u8)
        .collect();
    digits.truncate(n);

    let rows: Vec<WeightedIndex<f64>> = (0..n_states)
        .map(|state| {
            let w: Vec<f64> = (0..b as u8).map(|d| *spec.conditional(state, d)).collect();
            weighted(&w)
        })
        .collect::<Result<_>>()?;

    let mut state = first;
    while digits.len() < n {
        let d = rows[state].sample(&mut rng);
        digits.push(d as u8);
        state = (state * b as usize) % n_states + d;
    }
    DigitSeq::new(b, digits)
}

/// The law with `p_0 = 1 - s - (1 - s - 1/b)/i`, the remaining mass split
/// evenly over the digits `1..b`. Its noise `1 - p_0` decreases to `s` as
/// `i` grows.
pub fn rauzy_u_law(i: u64, s: f64, base: u32) -> Result<ProbVector> {
    check_base(base)?;
    let b = f64::from(base);
    let top = (b - 1.0) / b;
    if i == 0 {
        return Err(domain("index i must be at least 1"));
    }
    if !(0.0..top).contains(&s) {
        return Err(domain(format!("s = {s} outside [0, {top})")));
    }
    let p0 = 1.0 - s - (1.0 - s - 1.0 / b) / i as f64;
    let rest = (1.0 - p0) / (b - 1.0);
    let mut p = vec![rest; base as usize];
    p[0] = p0;
    ProbVector::new(p)
}

/// `n` i.i.d. digits with law [`rauzy_u_law`]`(i, s, base)`.
pub fn rauzy_u(i: u64, s: f64, base: u32, n: usize, seed: u64) -> Result<DigitSeq> {
    bernoulli_seq(&rauzy_u_law(i, s, base)?, n, seed)
}
