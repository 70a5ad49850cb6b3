//! Numerical search for high-entropy k-step Markov measures under a noise cap.
//!
//! Projected coordinate ascent on the next-digit conditionals `cond[B][d]`:
//! a move shifts a fraction of one row's mass from digit `i` to digit `j`.
//! Feasible moves that raise the entropy are taken directly. A move that
//! raises the entropy but breaks the noise cap is paired with a second move,
//! whose size is found by bisection, that brings the noise back under the
//! cap. The Bernoulli maximizer seeds the search and is always feasible, so
//! the result never falls below it.

use super::markov::{bernoulli_opt, MarkovSpec};
use crate::digitseq::check_base;
use crate::error::{domain, Result};

pub const MAX_SEARCH_ORDER: usize = 3;
/// Slack on the noise constraint accepted during the search.
const FEASIBILITY_SLACK: f64 = 1e-12;
const MIN_STEP: f64 = 1e-9;

#[derive(Clone, Copy)]
struct Move {
    row: usize,
    from: usize,
    to: usize,
}

#[derive(Clone, Copy)]
struct Eval {
    entropy: f64,
    noise: f64,
}

struct Search {
    base: u32,
    order: usize,
    cap: f64,
    evals: usize,
    budget: usize,
}

impl Search {
    fn eval(&mut self, cond: &[Vec<f64>]) -> Option<Eval> {
        self.evals += 1;
        let m = MarkovSpec::from_conditionals(self.base, self.order, cond).ok()?;
        Some(Eval {
            entropy: m.entropy(),
            noise: m.noise(),
        })
    }

    fn feasible(&self, e: &Eval) -> bool {
        e.noise <= self.cap + FEASIBILITY_SLACK
    }

    fn exhausted(&self) -> bool {
        self.evals >= self.budget
    }
}

fn apply(cond: &[Vec<f64>], m: Move, amount: f64) -> Vec<Vec<f64>> {
    let mut c = cond.to_vec();
    let amount = amount.min(c[m.row][m.from]);
    c[m.row][m.from] -= amount;
    c[m.row][m.to] += amount;
    c
}

/// Best k-step Markov measure found with noise at most `s`, and its entropy
/// in nats. `budget` caps the number of candidate evaluations.
pub fn markov_search(base: u32, order: usize, s: f64, budget: usize) -> Result<(MarkovSpec<f64>, f64)> {
    check_base(base)?;
    if order == 0 || order > MAX_SEARCH_ORDER {
        return Err(domain(format!("search order must lie in 1..={MAX_SEARCH_ORDER}")));
    }
    let (seed, _) = bernoulli_opt(base, &s)?;
    let n_states = (base as usize).pow(order as u32);
    let mut cond = vec![seed.probs().to_vec(); n_states];
    let mut search = Search {
        base,
        order,
        cap: s,
        evals: 0,
        budget,
    };
    let mut best = search
        .eval(&cond)
        .ok_or_else(|| domain("Bernoulli seed does not define a stationary chain"))?;

    let b = base as usize;
    let moves: Vec<Move> = (0..n_states)
        .flat_map(|row| {
            (0..b).flat_map(move |from| {
                (0..b)
                    .filter(move |&to| to != from)
                    .map(move |to| Move { row, from, to })
            })
        })
        .collect();

    let mut step = 0.25;
    while step > MIN_STEP && !search.exhausted() {
        let mut improved = false;
        for &m1 in &moves {
            if search.exhausted() {
                break;
            }
            let amount = step * cond[m1.row][m1.from];
            if amount <= 0.0 {
                continue;
            }
            let c1 = apply(&cond, m1, amount);
            let Some(e1) = search.eval(&c1) else { continue };
            if e1.entropy <= best.entropy {
                continue;
            }
            if search.feasible(&e1) {
                cond = c1;
                best = e1;
                improved = true;
                continue;
            }
            // repair the noise with a second move
            for &m2 in &moves {
                if search.exhausted() {
                    break;
                }
                if (m2.row, m2.from, m2.to) == (m1.row, m1.from, m1.to) || c1[m2.row][m2.from] <= 0.0 {
                    continue;
                }
                let mut hi = c1[m2.row][m2.from];
                match search.eval(&apply(&c1, m2, hi)) {
                    Some(e) if search.feasible(&e) => {}
                    _ => continue,
                }
                let mut lo = 0.0;
                for _ in 0..30 {
                    let mid = 0.5 * (lo + hi);
                    match search.eval(&apply(&c1, m2, mid)) {
                        Some(e) if search.feasible(&e) => hi = mid,
                        _ => lo = mid,
                    }
                }
                let c2 = apply(&c1, m2, hi);
                if let Some(e2) = search.eval(&c2) {
                    if search.feasible(&e2) && e2.entropy > best.entropy {
                        cond = c2;
                        best = e2;
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }

    let spec = MarkovSpec::from_conditionals(base, order, &cond)?;
    debug_assert!(spec.noise() <= s + FEASIBILITY_SLACK);
    Ok((spec, best.entropy))
}
