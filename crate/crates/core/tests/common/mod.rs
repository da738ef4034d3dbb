//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use matrix_tree::derivative;
use matrix_tree::graph::WeightedGraph;
use matrix_tree::tree::{self, LabeledTree};
use matrix_tree::{Scalar, SquareMatrix};
use num_traits::{One, Zero};

/// Laplace expansion along the first row. Exponential; keep `n <= 6`.
pub fn naive_det(m: &SquareMatrix) -> Scalar {
    let n = m.dim();
    if n == 0 {
        return Scalar::one();
    }
    let mut sum = Scalar::zero();
    for j in 1..=n {
        let entry = m.entry(1, j);
        if entry.is_zero() {
            continue;
        }
        let term = entry * naive_det(&m.minor(1, j).unwrap());
        if j % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// Slope at 0 of the interpolant through `(k, values[k])`, via Newton
/// divided differences.
pub fn newton_slope(values: &[Scalar]) -> Scalar {
    let mut table = values.to_vec();
    let mut coeffs = vec![table[0].clone()];
    for order in 1..values.len() {
        for k in 0..values.len() - order {
            table[k] = (&table[k + 1] - &table[k]) / Scalar::from_integer((order as i64).into());
        }
        coeffs.push(table[0].clone());
    }
    // p(t) = c0 + c1 t + c2 t(t-1) + ...; d/dt t*q(t) at 0 is q(0).
    let mut slope = Scalar::zero();
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        let q0: Scalar = (1..k).map(|m| Scalar::from_integer((-(m as i64)).into())).product();
        slope += c * q0;
    }
    slope
}

/// Filters every tree on `n` vertices through `contract_tree`.
pub fn brute_force_fiber(t_prime: &LabeledTree, i: usize, j: usize, n: usize) -> Vec<LabeledTree> {
    tree::enumerate_trees(n)
        .unwrap()
        .filter(|tau| tau.contains_edge(i, j))
        .filter(|tau| derivative::contract_tree(tau, i, j).unwrap() == *t_prime)
        .collect()
}

/// Labeled trees whose every edge is an edge of `g`.
pub fn spanning_trees_by_filter(g: &WeightedGraph) -> u64 {
    tree::enumerate_trees(g.vertex_count())
        .unwrap()
        .filter(|t| t.edges().iter().all(|&(u, v)| g.weight(u, v).is_some()))
        .count() as u64
}

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(v.into())
}
