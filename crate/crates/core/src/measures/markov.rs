use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::stationary::stationary;
use super::Scalar;
use crate::digitseq::check_base;
use crate::error::{domain, Result};
use crate::generators::ProbVector;
use crate::predictor::{checked_pow, increment, word_index};

/// Tolerance for the row-sum and `ρP = ρ` checks.
pub const SPEC_TOL: f64 = 1e-10;

/// Largest state space accepted (`base^order`).
const MAX_STATES: u128 = 1 << 12;

/// A k-step Markov measure: stationary distribution `rho` over length-k words
/// and a row-stochastic transition matrix `p` between overlapping words.
///
/// Word `B` has index [`word_index`]`(B)`; `p[B][B']` may be positive only
/// when `B'` is `B` shifted left by one digit with a new last digit.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovSpec<T = f64> {
    base: u32,
    order: usize,
    rho: Vec<T>,
    p: Vec<Vec<T>>,
}

fn states(base: u32, order: usize) -> Result<usize> {
    check_base(base)?;
    if order == 0 {
        return Err(domain("Markov order must be at least 1"));
    }
    checked_pow(base, order)
        .filter(|&n| n <= MAX_STATES)
        .map(|n| n as usize)
        .ok_or_else(|| domain(format!("{base}^{order} states is too many")))
}

/// Index of the word that follows `state` when digit `d` is appended.
#[inline]
fn successor(state: usize, d: u8, base: u32, n_states: usize) -> usize {
    (state * base as usize) % n_states + d as usize
}

impl<T: Scalar> MarkovSpec<T> {
    /// Validates every invariant: shapes, nonnegativity, stochastic rows,
    /// the overlap condition and stationarity of `rho`.
    pub fn new(base: u32, order: usize, rho: Vec<T>, p: Vec<Vec<T>>) -> Result<Self> {
        let n = states(base, order)?;
        if rho.len() != n || p.len() != n || p.iter().any(|r| r.len() != n) {
            return Err(domain(format!(
                "rho and P must be indexed by the {n} words of length {order}"
            )));
        }
        if rho.iter().chain(p.iter().flatten()).any(|x| x.is_negative()) {
            return Err(domain("probabilities must be nonnegative"));
        }
        let total = rho.iter().fold(T::zero(), |a, x| a + x.clone());
        if !total.near(&T::one(), SPEC_TOL) {
            return Err(domain(format!("rho sums to {}, not 1", total.to_f())));
        }
        for (i, row) in p.iter().enumerate() {
            let sum = row.iter().fold(T::zero(), |a, x| a + x.clone());
            if !sum.near(&T::one(), SPEC_TOL) {
                return Err(domain(format!("row {i} of P sums to {}, not 1", sum.to_f())));
            }
            for (j, x) in row.iter().enumerate() {
                let overlaps = (i * base as usize) % n == j - j % base as usize;
                if !overlaps && !x.is_zero() {
                    return Err(domain(format!("P[{i}][{j}] > 0 but the words do not overlap")));
                }
            }
        }
        for j in 0..n {
            let flow = (0..n).fold(T::zero(), |a, i| a + rho[i].clone() * p[i][j].clone());
            if !flow.near(&rho[j], SPEC_TOL) {
                return Err(domain(format!("rho is not stationary at word {j}")));
            }
        }
        Ok(Self { base, order, rho, p })
    }

    /// Builds the spec from next-digit conditionals `cond[B][d]`, solving for
    /// the stationary distribution.
    pub fn from_conditionals(base: u32, order: usize, cond: &[Vec<T>]) -> Result<Self> {
        let n = states(base, order)?;
        if cond.len() != n || cond.iter().any(|r| r.len() != base as usize) {
            return Err(domain("conditional table has the wrong shape"));
        }
        let mut p = vec![vec![T::zero(); n]; n];
        for (s, row) in cond.iter().enumerate() {
            for (d, x) in row.iter().enumerate() {
                p[s][successor(s, d as u8, base, n)] = x.clone();
            }
        }
        let rho = stationary(&p)?;
        Self::new(base, order, rho, p)
    }

    /// The i.i.d. measure with digit law `pv`, as a 1-step chain.
    pub fn bernoulli(pv: &ProbVector<T>) -> Result<Self> {
        let b = pv.base();
        let row = pv.probs().to_vec();
        Self::new(b, 1, row.clone(), vec![row; b as usize])
    }

    /// Uniform (maximal entropy) measure.
    pub fn uniform(base: u32, order: usize) -> Result<Self> {
        let n = states(base, order)?;
        let cond = vec![vec![T::from_usize_ratio(1, base as usize); base as usize]; n];
        let rho = vec![T::from_usize_ratio(1, n); n];
        let mut p = vec![vec![T::zero(); n]; n];
        for (s, row) in cond.iter().enumerate() {
            for (d, x) in row.iter().enumerate() {
                p[s][successor(s, d as u8, base, n)] = x.clone();
            }
        }
        Self::new(base, order, rho, p)
    }

    /// Point mass on the all-`digit` sequence.
    pub fn point_mass(base: u32, order: usize, digit: u8) -> Result<Self> {
        let n = states(base, order)?;
        if u32::from(digit) >= base {
            return Err(domain("digit out of range"));
        }
        let mut cond = vec![vec![T::zero(); base as usize]; n];
        for row in &mut cond {
            row[digit as usize] = T::one();
        }
        Self::from_conditionals(base, order, &cond)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rho(&self) -> &[T] {
        &self.rho
    }

    pub fn transition(&self) -> &[Vec<T>] {
        &self.p
    }

    /// Probability that digit `d` follows the word with index `state`.
    pub fn conditional(&self, state: usize, d: u8) -> &T {
        &self.p[state][successor(state, d, self.base, self.rho.len())]
    }

    /// `μ[word] = ρ(first k digits) · Π P(window_i, window_{i+1})`.
    pub fn block_prob(&self, word: &[u8]) -> Result<T> {
        let k = self.order;
        if word.len() < k {
            return Err(domain(format!(
                "word of length {} is shorter than the order {k}",
                word.len()
            )));
        }
        if word.iter().any(|&d| u32::from(d) >= self.base) {
            return Err(domain("word digit out of range"));
        }
        let mut state = word_index(&word[..k], self.base);
        let mut prob = self.rho[state].clone();
        for &d in &word[k..] {
            prob = prob * self.conditional(state, d).clone();
            state = successor(state, d, self.base, self.rho.len());
        }
        Ok(prob)
    }

    /// `1 - Σ_{B ∈ b^ell} max_d μ[d ⌢ B]` for `ell >= order`.
    ///
    /// The value does not depend on `ell` once `ell >= order`: for `B = B_k ⌢ R`,
    /// `μ[d ⌢ B] = μ[d ⌢ B_k] · w(B_k, R)` with a weight independent of `d` that
    /// sums to 1 over `R`.
    pub fn noise_at(&self, ell: usize) -> Result<T> {
        if ell < self.order {
            return Err(domain(format!("noise needs ell >= order {}", self.order)));
        }
        let words = checked_pow(self.base, ell)
            .filter(|&w| w <= 1 << 22)
            .ok_or_else(|| domain("too many words to sum over"))? as usize;
        let mut word = vec![0u8; ell + 1];
        let mut best_sum = T::zero();
        for _ in 0..words {
            let mut best = T::zero();
            for d in 0..self.base as u8 {
                word[0] = d;
                let m = self.block_prob(&word)?;
                if m > best {
                    best = m;
                }
            }
            best_sum = best_sum + best;
            increment(&mut word[1..], self.base);
        }
        Ok(T::one() - best_sum)
    }

    /// Noise of the measure, evaluated at `ell = order`.
    pub fn noise(&self) -> T {
        self.noise_at(self.order).expect("order-width sum is within limits")
    }

    /// `Σ_B ρ(B) Σ_B' -P(B,B') ln P(B,B')` in nats, with `0 ln 0 = 0`.
    pub fn entropy(&self) -> f64 {
        self.rho
            .iter()
            .zip(&self.p)
            .map(|(r, row)| r.to_f() * row.iter().map(|x| plogp(x.to_f())).sum::<f64>())
            .sum()
    }

    pub fn to_f64(&self) -> MarkovSpec<f64> {
        MarkovSpec {
            base: self.base,
            order: self.order,
            rho: self.rho.iter().map(Scalar::to_f).collect(),
            p: self.p.iter().map(|r| r.iter().map(Scalar::to_f).collect()).collect(),
        }
    }
}

fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// `H(s) = -s ln s - (1-s) ln(1-s)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(s: f64) -> f64 {
    plogp(s) + plogp(1.0 - s)
}

/// The entropy-maximizing digit law with noise at most `s`:
/// `p = (1-s, s/(b-1), ..., s/(b-1))`, entropy `H(s) + s ln(b-1)`.
pub fn bernoulli_opt<T: Scalar>(base: u32, s: &T) -> Result<(ProbVector<T>, f64)> {
    check_base(base)?;
    let b = base as usize;
    let max = T::from_usize_ratio(b - 1, b);
    if s.is_negative() || *s > max {
        return Err(domain(format!("noise level {} outside [0, (b-1)/b]", s.to_f())));
    }
    let rest = s.clone() / T::from_usize(b - 1).expect("small integer");
    let mut p = vec![rest; b];
    p[0] = T::one() - s.clone();
    let pv = ProbVector::new(p)?;
    let sf = s.to_f();
    let entropy = binary_entropy(sf) + sf * ((b - 1) as f64).ln();
    Ok((pv, entropy))
}

/// JSON form `{schema_version, base, order, rho, P}` with `f64` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovSpecJson {
    pub schema_version: u32,
    pub base: u32,
    #[serde(alias = "k")]
    pub order: usize,
    pub rho: Vec<f64>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<f64>>,
}

impl<T: Scalar> MarkovSpec<T> {
    pub fn to_json(&self) -> MarkovSpecJson {
        let f = self.to_f64();
        MarkovSpecJson {
            schema_version: crate::SCHEMA_VERSION,
            base: f.base,
            order: f.order,
            rho: f.rho,
            p: f.p,
        }
    }
}

impl TryFrom<MarkovSpecJson> for MarkovSpec<f64> {
    type Error = crate::Error;

    fn try_from(j: MarkovSpecJson) -> Result<Self> {
        MarkovSpec::new(j.base, j.order, j.rho, j.p)
    }
}

/// Convenience for exact specs built from small integer ratios.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::parse_rational;
    use proptest::prelude::*;

    fn two_state(a: f64, c: f64) -> Vec<Vec<f64>> {
        vec![vec![1.0 - a, a], vec![c, 1.0 - c]]
    }

    #[test]
    fn entropy_examples() {
        for b in 2..=5 {
            let u = MarkovSpec::<f64>::uniform(b, 1).unwrap();
            assert!((u.entropy() - f64::from(b).ln()).abs() < 1e-12);
            let z = MarkovSpec::<f64>::point_mass(b, 2, 0).unwrap();
            assert_eq!(z.entropy(), 0.0);
        }
        let pv = ProbVector::new(vec![0.75, 0.25]).unwrap();
        let m = MarkovSpec::bernoulli(&pv).unwrap();
        assert!((m.entropy() - 0.562_335_144_618_808_9).abs() < 1e-12);
        assert!((binary_entropy(0.25) - 0.562_335_144_618_808_9).abs() < 1e-15);
        assert!((binary_entropy(0.5) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
    }

    #[test]
    fn invariant_violations_rejected() {
        let bad_row = vec![vec![0.5, 0.4], vec![0.5, 0.5]];
        assert!(MarkovSpec::new(2, 1, vec![0.5, 0.5], bad_row).is_err());
        // rho not stationary for this P
        assert!(MarkovSpec::new(2, 1, vec![0.5, 0.5], two_state(0.1, 0.3)).is_err());
        // order 2: state 00 may only move to 00 or 01
        let mut p = vec![vec![0.0; 4]; 4];
        p[0][2] = 1.0;
        for (i, row) in p.iter_mut().enumerate().skip(1) {
            row[(i * 2) % 4] = 1.0;
        }
        assert!(MarkovSpec::new(2, 2, vec![0.25; 4], p).is_err());
    }

    #[test]
    fn block_prob_examples() {
        let u = MarkovSpec::<f64>::uniform(3, 2).unwrap();
        assert!((u.block_prob(&[2, 1]).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        assert!((u.block_prob(&[2, 1, 0]).unwrap() - 1.0 / 27.0).abs() < 1e-15);
        assert!(u.block_prob(&[1]).is_err());
        let m = MarkovSpec::from_conditionals(2, 1, &two_state(0.2, 0.6)).unwrap();
        assert_eq!(m.block_prob(&[1]).unwrap(), m.rho()[1]);
        let mut total = 0.0;
        let mut w = vec![0u8; 4];
        for _ in 0..16 {
            total += m.block_prob(&w).unwrap();
            increment(&mut w, 2);
        }
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn noise_examples() {
        for b in 2..=4 {
            let z = MarkovSpec::<BigRational>::point_mass(b, 1, 0).unwrap();
            assert_eq!(z.noise(), ratio(0, 1));
            let u = MarkovSpec::<BigRational>::uniform(b, 2).unwrap();
            assert_eq!(u.noise(), ratio(i64::from(b) - 1, i64::from(b)));
        }
        let pv = ProbVector::new(vec![ratio(3, 4), ratio(1, 4)]).unwrap();
        assert_eq!(MarkovSpec::bernoulli(&pv).unwrap().noise(), ratio(1, 4));
    }

    #[test]
    fn bernoulli_opt_examples() {
        let (p, h) = bernoulli_opt(4, &0.0f64).unwrap();
        assert_eq!(p.probs(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(h, 0.0);
        for b in 2..=10u32 {
            let top = f64::from(b - 1) / f64::from(b);
            let (p, h) = bernoulli_opt(b, &top).unwrap();
            assert!(p.probs().iter().all(|&x| (x - 1.0 / f64::from(b)).abs() < 1e-15));
            assert!((h - f64::from(b).ln()).abs() < 1e-12);
        }
        let (p, h) = bernoulli_opt(2, &ratio(1, 4)).unwrap();
        assert_eq!(p.probs(), &[ratio(3, 4), ratio(1, 4)]);
        assert!((h - binary_entropy(0.25)).abs() < 1e-15);
        assert!(bernoulli_opt(2, &0.6f64).is_err());
        assert!(bernoulli_opt(3, &-0.1f64).is_err());
    }

    #[test]
    fn bernoulli_opt_noise_is_exact() {
        for b in 2..=6u32 {
            for text in ["0", "0.1", "1/7", "0.25", "0.4"] {
                let s = parse_rational(text).unwrap();
                if s > ratio(i64::from(b) - 1, i64::from(b)) {
                    continue;
                }
                let (pv, h) = bernoulli_opt(b, &s).unwrap();
                let spec = MarkovSpec::bernoulli(&pv).unwrap();
                assert_eq!(spec.noise(), s, "b={b} s={text}");
                assert!((spec.entropy() - h).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stationary_two_state() {
        let (a, c) = (0.3, 0.1);
        let m = MarkovSpec::from_conditionals(2, 1, &two_state(a, c)).unwrap();
        assert!((m.rho()[0] - c / (a + c)).abs() < 1e-14);
        assert!((m.rho()[1] - a / (a + c)).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let m = MarkovSpec::from_conditionals(2, 2, &[vec![0.5, 0.5], vec![0.9, 0.1], vec![0.2, 0.8], vec![0.6, 0.4]])
            .unwrap();
        let text = serde_json::to_string(&m.to_json()).unwrap();
        let back: MarkovSpecJson = serde_json::from_str(&text).unwrap();
        assert_eq!(MarkovSpec::try_from(back).unwrap(), m);
    }

    /// H(X_n | X_1..X_{n-1}) for a mixture `t μ + (1-t) λ`, λ uniform.
    fn mixture_conditional_entropy(m: &MarkovSpec<f64>, t: f64, n: usize) -> f64 {
        let b = m.base();
        let block_entropy = |len: usize| {
            let mut w = vec![0u8; len];
            let mut h = 0.0;
            for _ in 0..b.pow(len as u32) {
                let q = t * m.block_prob(&w).unwrap() + (1.0 - t) * f64::from(b).powi(-(len as i32));
                h += plogp(q);
                increment(&mut w, b);
            }
            h
        };
        block_entropy(n) - block_entropy(n - 1)
    }

    fn random_conditionals(base: u32, order: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        let n = base.pow(order as u32) as usize;
        proptest::collection::vec(proptest::collection::vec(0.05f64..1.0, base as usize), n).prop_map(|rows| {
            rows.into_iter()
                .map(|r| {
                    let s: f64 = r.iter().sum();
                    r.into_iter().map(|x| x / s).collect()
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn noise_stable_past_order(cond in random_conditionals(2, 2)) {
            let m = MarkovSpec::from_conditionals(2, 2, &cond).unwrap();
            let a = m.noise_at(2).unwrap();
            let b = m.noise_at(3).unwrap();
            let c = m.noise_at(5).unwrap();
            prop_assert!((a - b).abs() < 1e-12 && (a - c).abs() < 1e-12);
        }

        #[test]
        fn noise_and_entropy_ranges(cond in random_conditionals(3, 1)) {
            let m = MarkovSpec::from_conditionals(3, 1, &cond).unwrap();
            let beta = m.noise();
            prop_assert!((-1e-12..=2.0 / 3.0 + 1e-12).contains(&beta));
            let h = m.entropy();
            prop_assert!((0.0..=3f64.ln() + 1e-12).contains(&h));
        }

        #[test]
        fn mixing_with_uniform_does_not_lower_entropy(cond in random_conditionals(2, 1), t in 0.0f64..1.0) {
            let m = MarkovSpec::from_conditionals(2, 1, &cond).unwrap();
            let h_mix = mixture_conditional_entropy(&m, t, 6);
            prop_assert!(h_mix >= m.entropy() - 1e-9, "{h_mix} < {}", m.entropy());
        }
    }

    #[test]
    fn noise_zero_iff_concentrated() {
        // the period-3 sequence 001001... (word 11 is transient) has noise 0
        let cond = vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0]];
        let m = MarkovSpec::from_conditionals(2, 2, &cond).unwrap();
        assert!(m.noise().abs() < 1e-15);
        // one mixed row reached with positive probability makes it positive
        let cond = vec![vec![0.5, 0.5], vec![1.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0]];
        let m = MarkovSpec::from_conditionals(2, 2, &cond).unwrap();
        assert!(m.noise() > 1e-3);
    }

    #[test]
    fn entropy_max_only_at_uniform() {
        let steps: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
        let log2 = 2f64.ln();
        for &a in &steps {
            for &c in &steps {
                let Ok(m) = MarkovSpec::from_conditionals(2, 1, &two_state(a, c)) else {
                    continue;
                };
                let uniform = (a - 0.5).abs() < 1e-12 && (c - 0.5).abs() < 1e-12;
                if uniform {
                    assert!((m.entropy() - log2).abs() < 1e-12);
                } else {
                    assert!(m.entropy() < log2 - 1e-6, "a={a} c={c}");
                }
            }
        }
    }
}
