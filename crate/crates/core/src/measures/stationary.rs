use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::Scalar;
use crate::error::{domain, Error, Result};

/// Stationary distribution of a row-stochastic matrix.
///
/// The support graph must have exactly one closed communicating class;
/// transient states get probability 0. The balance equations on the closed
/// class are solved by Gaussian elimination, exactly for rational input.
pub fn stationary<T: Scalar>(p: &[Vec<T>]) -> Result<Vec<T>> {
    let n = p.len();
    if n == 0 || p.iter().any(|r| r.len() != n) {
        return Err(domain("transition matrix must be square and non-empty"));
    }
    let mut g = DiGraph::<(), ()>::with_capacity(n, n * 2);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for (i, row) in p.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_zero() {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut component = vec![0usize; n];
    let sccs = tarjan_scc(&g);
    for (c, scc) in sccs.iter().enumerate() {
        for v in scc {
            component[v.index()] = c;
        }
    }
    let mut closed: Vec<Vec<usize>> = sccs
        .iter()
        .enumerate()
        .filter(|(c, scc)| scc.iter().all(|v| g.neighbors(*v).all(|w| component[w.index()] == *c)))
        .map(|(_, scc)| {
            let mut members: Vec<usize> = scc.iter().map(|v| v.index()).collect();
            members.sort_unstable();
            members
        })
        .collect();
    closed.sort();
    if closed.len() != 1 {
        return Err(Error::AmbiguousStationary { classes: closed });
    }
    let class = &closed[0];
    let m = class.len();

    // Unknowns ρ_c for c in the class. Equations: for each column j except the
    // last, Σ_i ρ_i (P_ij - δ_ij) = 0; the last equation is Σ_i ρ_i = 1.
    let mut a: Vec<Vec<T>> = vec![vec![T::zero(); m + 1]; m];
    for (row, &j) in class.iter().enumerate().take(m - 1) {
        for (col, &i) in class.iter().enumerate() {
            let mut v = p[i][j].clone();
            if i == j {
                v = v - T::one();
            }
            a[row][col] = v;
        }
    }
    for v in a[m - 1].iter_mut() {
        *v = T::one();
    }
    let solution = solve(a)?;

    let mut rho = vec![T::zero(); n];
    for (x, &i) in solution.into_iter().zip(class) {
        rho[i] = x;
    }
    Ok(rho)
}

/// Gaussian elimination with partial pivoting on an augmented `m x (m+1)`
/// system.
fn solve<T: Scalar>(mut a: Vec<Vec<T>>) -> Result<Vec<T>> {
    let m = a.len();
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&x, &y| {
                a[x][col]
                    .abs()
                    .partial_cmp(&a[y][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty range");
        if a[pivot][col].is_zero() {
            return Err(Error::Internal("singular balance system".into()));
        }
        a.swap(col, pivot);
        let head = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone() / head[col].clone();
            for (x, h) in row.iter_mut().zip(&head).skip(col) {
                *x = x.clone() - f.clone() * h.clone();
            }
        }
    }
    let mut x = vec![T::zero(); m];
    for i in (0..m).rev() {
        let mut acc = a[i][m].clone();
        for j in i + 1..m {
            acc = acc - a[i][j].clone() * x[j].clone();
        }
        x[i] = acc / a[i][i].clone();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::markov::ratio;
    use num_rational::BigRational;

    fn residual(p: &[Vec<f64>], rho: &[f64]) -> f64 {
        (0..p.len())
            .map(|j| ((0..p.len()).map(|i| rho[i] * p[i][j]).sum::<f64>() - rho[j]).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn doubly_stochastic_gives_uniform() {
        let p = vec![vec![0.2, 0.5, 0.3], vec![0.5, 0.3, 0.2], vec![0.3, 0.2, 0.5]];
        let rho = stationary(&p).unwrap();
        assert!(rho.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-14));
    }

    #[test]
    fn two_state_balance() {
        for (a, c) in [(0.3, 0.1), (0.9, 0.05), (1.0, 1.0), (0.5, 0.5)] {
            let p = vec![vec![1.0 - a, a], vec![c, 1.0 - c]];
            let rho = stationary(&p).unwrap();
            assert!((rho[0] - c / (a + c)).abs() < 1e-14);
            assert!((rho[1] - a / (a + c)).abs() < 1e-14);
            assert!(residual(&p, &rho) <= 1e-12);
        }
        let p = vec![vec![ratio(2, 3), ratio(1, 3)], vec![ratio(1, 5), ratio(4, 5)]];
        let rho: Vec<BigRational> = stationary(&p).unwrap();
        assert_eq!(rho, vec![ratio(3, 8), ratio(5, 8)]);
    }

    #[test]
    fn reducible_chain_is_ambiguous() {
        let p = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.5, 0.0, 0.5]];
        match stationary(&p) {
            Err(Error::AmbiguousStationary { classes }) => assert_eq!(classes, vec![vec![0], vec![1]]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn transient_states_get_zero() {
        let p = vec![vec![0.5, 0.5, 0.0], vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]];
        let rho = stationary(&p).unwrap();
        assert_eq!(rho[0], 0.0);
        assert!((rho[1] - 0.5).abs() < 1e-15 && (rho[2] - 0.5).abs() < 1e-15);
    }
}
