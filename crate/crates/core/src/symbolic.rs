//! Sparse polynomials in the edge variables `x_ij` (`i < j`) and a symbolic
//! check of `C(L) = (-1)^(n+1) T(L)` for the generic Laplace-like matrix.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::time::Instant;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::tree;

/// Largest `n` for the symbolic check unless raised. Memory grows roughly
/// with `n^(n-2)` terms; `n = 8` already holds 262144 of them.
pub const DEFAULT_SYMBOLIC_CAP: usize = 7;

/// Edge variable `x_ij`, stored with `i < j`.
pub type EdgeVar = (usize, usize);

fn edge_var(a: usize, b: usize) -> EdgeVar {
    (a.min(b), a.max(b))
}

/// Product of edge variables: sorted `(variable, exponent)` pairs, no zero
/// exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(EdgeVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "no diagonal variables");
        Self(vec![(edge_var(a, b), 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (EdgeVar, u32)>) -> Self {
        let mut m = Self::one();
        for ((a, b), e) in powers {
            if e > 0 {
                m = m.mul(&Self(vec![(edge_var(a, b), e)]));
            }
        }
        m
    }

    pub fn powers(&self) -> &[(EdgeVar, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut p, mut q) = (0, 0);
        while p < a.len() && q < b.len() {
            match a[p].0.cmp(&b[q].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[p]);
                    p += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[q]);
                    q += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[p].0, a[p].1 + b[q].1));
                    p += 1;
                    q += 1;
                }
            }
        }
        out.extend_from_slice(&a[p..]);
        out.extend_from_slice(&b[q..]);
        Self(out)
    }

    pub fn evaluate(&self, value: &impl Fn(EdgeVar) -> Scalar) -> Scalar {
        self.0.iter().fold(Scalar::one(), |acc, &(v, e)| {
            acc * num_traits::pow(value(v), e as usize)
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&((i, j), e)| {
                if e == 1 {
                    format!("x_{i}_{j}")
                } else {
                    format!("x_{i}_{j}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Canonical sparse polynomial: no zero coefficients, so structural
/// equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultivariatePolynomial {
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(a: usize, b: usize) -> Self {
        Self::term(Monomial::var(a, b), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    /// `d/dx_ab`, term by term.
    pub fn partial_derivative(&self, a: usize, b: usize) -> Self {
        let var = edge_var(a, b);
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some(pos) = m.0.iter().position(|&(v, _)| v == var) {
                let e = m.0[pos].1;
                let mut powers = m.0.clone();
                if e == 1 {
                    powers.remove(pos);
                } else {
                    powers[pos].1 -= 1;
                }
                out.add_term(Monomial(powers), c * scalar::from_int(i64::from(e)));
            }
        }
        out
    }

    pub fn evaluate(&self, value: impl Fn(EdgeVar) -> Scalar) -> Scalar {
        self.terms.iter().map(|(m, c)| c * m.evaluate(&value)).sum()
    }

    /// First monomial, in canonical order, where the coefficients differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Monomial, Scalar, Scalar)> {
        let mut keys: Vec<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|m| {
            let (a, b) = (self.coefficient(m), other.coefficient(m));
            (a != b).then(|| (m.clone(), a, b))
        })
    }
}

impl Add for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;

    fn add(self, rhs: Self) -> MultivariatePolynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl Sub for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;

    fn sub(self, rhs: Self) -> MultivariatePolynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl Neg for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;

    fn neg(self) -> MultivariatePolynomial {
        self.scale(&-Scalar::one())
    }
}

impl Mul for &MultivariatePolynomial {
    type Output = MultivariatePolynomial;

    fn mul(self, rhs: Self) -> MultivariatePolynomial {
        let mut out = MultivariatePolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

/// `c*x_i_j*...` terms in canonical order joined by ` + `; `0` when empty.
impl fmt::Display for MultivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.0.is_empty() {
                    scalar::format(c)
                } else {
                    format!("{}*{}", scalar::format(c), m)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Square matrix of polynomials, 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialMatrix {
    n: usize,
    entries: Vec<MultivariatePolynomial>,
}

impl PolynomialMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultivariatePolynomial {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn minor(&self, i: usize, j: usize) -> Self {
        let entries = (1..=self.n)
            .filter(|&r| r != i)
            .flat_map(|r| (1..=self.n).filter(move |&c| c != j).map(move |c| (r, c)))
            .map(|(r, c)| self.entry(r, c).clone())
            .collect();
        Self {
            n: self.n - 1,
            entries,
        }
    }

    /// Signed sum over column assignments, row by row, memoized on the set
    /// of columns already used: `O(2^n * n)` polynomial products.
    pub fn determinant(&self) -> MultivariatePolynomial {
        let n = self.n;
        assert!(n < 32, "column masks are u32");
        let mut layer: BTreeMap<u32, MultivariatePolynomial> = BTreeMap::new();
        layer.insert(0, MultivariatePolynomial::constant(Scalar::one()));
        for row in 1..=n {
            let mut next: BTreeMap<u32, MultivariatePolynomial> = BTreeMap::new();
            for (mask, partial) in &layer {
                for col in 1..=n {
                    let bit = 1u32 << (col - 1);
                    let entry = self.entry(row, col);
                    if mask & bit != 0 || entry.is_zero() {
                        continue;
                    }
                    // Inversions added: used columns to the right of `col`.
                    let inversions = (mask >> col).count_ones() as usize;
                    let product = partial * entry;
                    next.entry(mask | bit)
                        .or_default()
                        .add_scaled(&product, &scalar::sign_power(inversions));
                }
            }
            layer = next;
        }
        layer.remove(&((1u32 << n) - 1)).unwrap_or_default()
    }
}

/// Generic Laplace-like matrix: `x_ij` off the diagonal, `-sum_k x_ik` on it.
pub fn generic_laplacian(n: usize) -> PolynomialMatrix {
    let mut entries = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                let mut diag = MultivariatePolynomial::zero();
                for k in (1..=n).filter(|&k| k != i) {
                    diag.add_term(Monomial::var(i, k), -Scalar::one());
                }
                entries.push(diag);
            } else {
                entries.push(MultivariatePolynomial::var(i, j));
            }
        }
    }
    PolynomialMatrix { n, entries }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, found: 0 });
    }
    if n > cap {
        return Err(Error::CapExceeded {
            what: "symbolic expansion",
            n,
            cap,
        });
    }
    Ok(())
}

/// `C_11` of the generic Laplacian, expanded.
pub fn symbolic_cofactor(n: usize) -> Result<MultivariatePolynomial> {
    symbolic_cofactor_with_cap(n, DEFAULT_SYMBOLIC_CAP)
}

pub fn symbolic_cofactor_with_cap(n: usize, cap: usize) -> Result<MultivariatePolynomial> {
    check_cap(n, cap)?;
    Ok(generic_laplacian(n).minor(1, 1).determinant())
}

/// Sum over labeled trees of the product of their edge variables.
pub fn symbolic_tree_sum(n: usize) -> Result<MultivariatePolynomial> {
    symbolic_tree_sum_with_cap(n, DEFAULT_SYMBOLIC_CAP)
}

pub fn symbolic_tree_sum_with_cap(n: usize, cap: usize) -> Result<MultivariatePolynomial> {
    check_cap(n, cap)?;
    let mut sum = MultivariatePolynomial::zero();
    tree::for_each_tree_edges(n, |edges| {
        let m = Monomial(
            {
                let mut vars: Vec<(EdgeVar, u32)> = edges.iter().map(|&(a, b)| ((a, b), 1)).collect();
                vars.sort_unstable();
                vars
            },
        );
        sum.add_term(m, Scalar::one());
    });
    Ok(sum)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub monomial: String,
    #[serde(with = "scalar::serde_text")]
    pub cofactor_coefficient: Scalar,
    #[serde(with = "scalar::serde_text")]
    pub tree_side_coefficient: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicReport {
    pub n: usize,
    pub cofactor_terms: usize,
    pub tree_sum_terms: usize,
    pub equal: bool,
    pub witness: Option<Witness>,
    pub elapsed_ms: u128,
}

/// Compares `symbolic_cofactor(n)` with `(-1)^(n+1) symbolic_tree_sum(n)`.
pub fn verify_identity(n: usize) -> Result<SymbolicReport> {
    verify_identity_with_cap(n, DEFAULT_SYMBOLIC_CAP)
}

pub fn verify_identity_with_cap(n: usize, cap: usize) -> Result<SymbolicReport> {
    let start = Instant::now();
    let cofactor = symbolic_cofactor_with_cap(n, cap)?;
    let trees = symbolic_tree_sum_with_cap(n, cap)?;
    Ok(compare(n, &cofactor, &trees, start))
}

pub(crate) fn compare(
    n: usize,
    cofactor: &MultivariatePolynomial,
    trees: &MultivariatePolynomial,
    start: Instant,
) -> SymbolicReport {
    let signed = trees.scale(&scalar::sign_power(n + 1));
    let witness = cofactor
        .first_difference(&signed)
        .map(|(m, a, b)| Witness {
            monomial: if m.0.is_empty() { "1".into() } else { m.to_string() },
            cofactor_coefficient: a,
            tree_side_coefficient: b,
        });
    SymbolicReport {
        n,
        cofactor_terms: cofactor.term_count(),
        tree_sum_terms: trees.term_count(),
        equal: witness.is_none(),
        witness,
        elapsed_ms: start.elapsed().as_millis(),
    }
}
