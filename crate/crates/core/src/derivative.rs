//! Contraction along an edge and exact derivatives along `v_ij`.
//!
//! For `i < j` the tangent direction `v_ij` is the Laplace-like matrix with
//! `+1` at `(i, j)` and `(j, i)` and `-1` at `(i, i)` and `(j, j)`. The
//! contraction `L' = M_jj(L+)` adds row `j` into row `i`, column `j` into
//! column `i`, then deletes row and column `j`. The checks here compare
//!
//! * `v_ij T(L)` against `T(L')`,
//! * `-v_ij C(L)` against `C(L')` (also for non-symmetric doubly balanced `L`),
//! * the fiber sum of `d/dL_ij A_tau(L)` over `contract_ij(tau) = tau'`
//!   against `A_tau'(L')`.
//!
//! Derivatives are exact: `f(L + tV)` is sampled at `t = 0..=d` and the
//! interpolating polynomial's linear coefficient is read off.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DoublyBalancedMatrix, LaplaceLikeMatrix, SquareMatrix};
use crate::scalar::{self, Scalar};
use crate::tree::{self, LabeledTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TangentDirection {
    n: usize,
    i: usize,
    j: usize,
}

impl TangentDirection {
    pub fn new(n: usize, i: usize, j: usize) -> Result<Self> {
        check_pair(n, i, j)?;
        Ok(Self { n, i, j })
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn matrix(&self) -> SquareMatrix {
        let mut v = SquareMatrix::zeros(self.n);
        v.set(self.i, self.j, Scalar::one());
        v.set(self.j, self.i, Scalar::one());
        v.set(self.i, self.i, -Scalar::one());
        v.set(self.j, self.j, -Scalar::one());
        v
    }

    pub fn laplace_like(&self) -> LaplaceLikeMatrix {
        LaplaceLikeMatrix::new(self.matrix()).expect("v_ij is Laplace-like")
    }
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i >= j {
        return Err(Error::InvalidPair { i, j });
    }
    if i < 1 || j > n {
        return Err(Error::IndexOutOfRange { row: i, col: j, n });
    }
    Ok(())
}

/// `L' = M_jj(L+)` for any square `L` with `n >= 2` and `1 <= i < j <= n`.
pub fn contract_matrix(l: &SquareMatrix, i: usize, j: usize) -> Result<SquareMatrix> {
    let n = l.dim();
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, found: n });
    }
    check_pair(n, i, j)?;
    let mut plus = l.clone();
    for c in 1..=n {
        plus.set(i, c, plus.entry(i, c) + l.entry(j, c));
    }
    for r in 1..=n {
        plus.set(r, i, plus.entry(r, i) + plus.entry(r, j));
    }
    plus.minor(j, j)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionResult {
    pub matrix: LaplaceLikeMatrix,
    pub pair: (usize, usize),
}

/// Contraction of a Laplace-like matrix; the result is re-validated.
pub fn contract_laplace(l: &LaplaceLikeMatrix, i: usize, j: usize) -> Result<ContractionResult> {
    let matrix = LaplaceLikeMatrix::new(contract_matrix(l.as_matrix(), i, j)?)?;
    Ok(ContractionResult {
        matrix,
        pair: (i, j),
    })
}

pub fn contract_doubly_balanced(
    l: &DoublyBalancedMatrix,
    i: usize,
    j: usize,
) -> Result<DoublyBalancedMatrix> {
    DoublyBalancedMatrix::new(contract_matrix(l.as_matrix(), i, j)?)
}

/// Erases `j` and the edge `{i, j}`, reattaches `j`'s other neighbours to
/// `i`, and shifts labels `j+1..=n` down by one.
pub fn contract_tree(t: &LabeledTree, i: usize, j: usize) -> Result<LabeledTree> {
    check_pair(t.vertex_count(), i, j)?;
    if !t.contains_edge(i, j) {
        return Err(Error::EdgeAbsent { i, j });
    }
    let merge = |v: usize| if v == j { i } else { v };
    let relabel = |v: usize| if v > j { v - 1 } else { v };
    let edges = t
        .edges()
        .iter()
        .filter(|&&e| e != (i, j))
        .map(|&(a, b)| (relabel(merge(a)), relabel(merge(b))));
    LabeledTree::new(t.vertex_count() - 1, edges)
}

/// All trees `tau` on `{1, ..., n}` with `contract_tree(tau, i, j) = t_prime`.
///
/// Each neighbour of the merged vertex `i` in `t_prime` attaches to either
/// `i` or `j`, so the fiber has `2^deg(i)` elements.
pub fn contraction_fiber(
    t_prime: &LabeledTree,
    i: usize,
    j: usize,
    n: usize,
) -> Result<Vec<LabeledTree>> {
    if t_prime.vertex_count() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            found: t_prime.vertex_count(),
        });
    }
    check_pair(n, i, j)?;
    let lift = |v: usize| if v >= j { v + 1 } else { v };
    let mut fixed = vec![(i, j)];
    let mut around_i = Vec::new();
    for &(a, b) in t_prime.edges() {
        if a == i {
            around_i.push(lift(b));
        } else if b == i {
            around_i.push(lift(a));
        } else {
            fixed.push((lift(a), lift(b)));
        }
    }
    let d = around_i.len();
    let mut fiber = Vec::with_capacity(1 << d);
    for mask in 0u64..(1u64 << d) {
        let moved = around_i
            .iter()
            .enumerate()
            .map(|(bit, &u)| if mask >> bit & 1 == 1 { (u, j) } else { (u, i) });
        fiber.push(LabeledTree::new(n, fixed.iter().copied().chain(moved))?);
    }
    Ok(fiber)
}

/// `l_k'(0)` for the Lagrange basis on nodes `0, 1, ..., degree`.
fn derivative_weights(degree: usize) -> Vec<Scalar> {
    let node = |k: usize| scalar::from_int(k as i64);
    (0..=degree)
        .map(|k| {
            if k == 0 {
                -(1..=degree)
                    .map(|m| Scalar::one() / node(m))
                    .sum::<Scalar>()
            } else {
                let numer: Scalar = (1..=degree).filter(|&m| m != k).map(|m| -node(m)).product();
                let denom: Scalar = (0..=degree)
                    .filter(|&m| m != k)
                    .map(|m| node(k) - node(m))
                    .product();
                numer / denom
            }
        })
        .collect()
}

/// `d/dt f(L + tV)` at `t = 0`, exact when `t -> f(L + tV)` is a polynomial
/// of degree at most `degree_bound`.
pub fn exact_directional_derivative<F>(
    mut f: F,
    l: &SquareMatrix,
    v: &SquareMatrix,
    degree_bound: usize,
) -> Result<Scalar>
where
    F: FnMut(&SquareMatrix) -> Result<Scalar>,
{
    let weights = derivative_weights(degree_bound);
    let mut acc = Scalar::zero();
    for (k, w) in weights.iter().enumerate() {
        let point = l.add_scaled(v, &scalar::from_int(k as i64))?;
        acc += w * f(&point)?;
    }
    Ok(acc)
}

/// Outcome of checking one identity on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    #[serde(with = "scalar::serde_text")]
    pub left: Scalar,
    #[serde(with = "scalar::serde_text")]
    pub right: Scalar,
    pub equal: bool,
    pub instance: String,
}

impl VerificationReport {
    pub fn new(identity: &str, left: Scalar, right: Scalar, instance: String) -> Self {
        let equal = left == right;
        Self {
            identity: identity.to_owned(),
            left,
            right,
            equal,
            instance,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}]: left = {}, right = {} ({})",
            self.identity,
            self.instance,
            self.left,
            self.right,
            if self.equal { "equal" } else { "DIFFERENT" }
        )
    }
}

pub const T_IDENTITY: &str = "v_ij T(L) = T(L')";
pub const C_IDENTITY: &str = "-v_ij C(L) = C(L')";
pub const FIBER_IDENTITY: &str = "sum over fiber of dA/dL_ij = A_tau'(L')";

fn describe(l: &SquareMatrix, i: usize, j: usize) -> String {
    let rows: Vec<String> = l
        .rows()
        .take(l.dim())
        .map(|r| r.iter().map(scalar::format).collect::<Vec<_>>().join(" "))
        .collect();
    format!("n={}, (i,j)=({i},{j}), L=[{}]", l.dim(), rows.join("; "))
}

/// `v_ij T(L)` versus `T(L')`.
pub fn verify_t_identity(l: &LaplaceLikeMatrix, i: usize, j: usize) -> Result<VerificationReport> {
    let n = l.dim();
    let direction = TangentDirection::new(n, i, j)?;
    let left = exact_directional_derivative(tree::tree_sum, l.as_matrix(), &direction.matrix(), n)?;
    let right = tree::tree_sum(&contract_matrix(l.as_matrix(), i, j)?)?;
    Ok(VerificationReport::new(T_IDENTITY, left, right, describe(l.as_matrix(), i, j)))
}

/// `-v_ij C(L)` versus `C(L')`. `L` must have zero row and column sums;
/// symmetry is not required.
pub fn verify_c_identity(l: &SquareMatrix, i: usize, j: usize) -> Result<VerificationReport> {
    let balanced = DoublyBalancedMatrix::new(l.clone())?;
    let n = l.dim();
    let direction = TangentDirection::new(n, i, j)?;
    // C_11 stays the common cofactor along the line: L + tV is doubly balanced.
    let cofactor = |m: &SquareMatrix| m.cofactor(1, 1);
    let left = -exact_directional_derivative(cofactor, l, &direction.matrix(), n)?;
    let right = contract_doubly_balanced(&balanced, i, j)?.common_cofactor();
    Ok(VerificationReport::new(C_IDENTITY, left, right, describe(l, i, j)))
}

/// Fiber over `t_prime`: summed `A_tau(L) / L_ij` (the `{i, j}` factor
/// removed) versus `A_t_prime(L')`.
pub fn fiber_sum_identity_check(
    t_prime: &LabeledTree,
    l: &LaplaceLikeMatrix,
    i: usize,
    j: usize,
) -> Result<VerificationReport> {
    let n = l.dim();
    let fiber = contraction_fiber(t_prime, i, j, n)?;
    let left: Scalar = fiber
        .iter()
        .map(|tau| {
            tau.edges()
                .iter()
                .filter(|&&e| e != (i, j))
                .fold(Scalar::one(), |acc, &(a, b)| acc * l.as_matrix().entry(a, b))
        })
        .sum();
    let contracted = contract_matrix(l.as_matrix(), i, j)?;
    let right = t_prime.amplitude(&contracted)?;
    let instance = format!("tau'=[{t_prime}], {}", describe(l.as_matrix(), i, j));
    Ok(VerificationReport::new(FIBER_IDENTITY, left, right, instance))
}
