//! Seeded random instances for the verification sweeps.

use rand::Rng;

use crate::graph::WeightedGraph;
use crate::linalg::{DoublyBalancedMatrix, LaplaceLikeMatrix, SquareMatrix};
use crate::scalar::{self, Scalar};
use crate::tree::{self, PruferSequence};

/// Numerators are drawn from `-NUMER..=NUMER`.
pub const NUMER: i64 = 9;
/// Denominators are drawn from `1..=DENOM`.
pub const DENOM: i64 = 4;

pub fn rational<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    scalar::ratio(rng.gen_range(-NUMER..=NUMER), rng.gen_range(1..=DENOM))
}

pub fn square<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SquareMatrix {
    SquareMatrix::from_fn(n, |_, _| rational(rng))
}

/// Random strict upper triangle; the diagonal is forced by zero row sums.
pub fn laplace_like<R: Rng + ?Sized>(rng: &mut R, n: usize) -> LaplaceLikeMatrix {
    let upper: Vec<Scalar> = (0..n * (n - 1) / 2).map(|_| rational(rng)).collect();
    LaplaceLikeMatrix::from_upper_triangle(n, &upper).expect("sizes agree")
}

/// Random `(n-1) x (n-1)` block bordered by the negated row and column
/// sums. Generally not symmetric for `n >= 3`; every doubly balanced
/// `2 x 2` matrix is symmetric.
pub fn doubly_balanced<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DoublyBalancedMatrix {
    let inner = n - 1;
    let block: Vec<Vec<Scalar>> = (0..inner)
        .map(|_| (0..inner).map(|_| rational(rng)).collect())
        .collect();
    let m = SquareMatrix::from_fn(n, |i, j| match (i == n, j == n) {
        (false, false) => block[i - 1][j - 1].clone(),
        (false, true) => -block[i - 1].iter().sum::<Scalar>(),
        (true, false) => -block.iter().map(|row| &row[j - 1]).sum::<Scalar>(),
        (true, true) => block.iter().flatten().sum(),
    });
    DoublyBalancedMatrix::new(m).expect("bordered block is balanced")
}

/// Unit-weight connected simple graph: a uniform random labeled tree plus
/// each remaining edge with probability 1/2.
pub fn connected_graph<R: Rng + ?Sized>(rng: &mut R, n: usize) -> WeightedGraph {
    let mut g = WeightedGraph::new(n);
    let total = tree::tree_count(n).expect("small n");
    let backbone = PruferSequence::from_index(n, rng.gen_range(0..total))
        .expect("index in range")
        .decode();
    for u in 1..=n {
        for v in u + 1..=n {
            if backbone.contains_edge(u, v) || rng.gen_bool(0.5) {
                g.add_edge(u, v, scalar::from_int(1)).expect("valid edge");
            }
        }
    }
    g
}
