//! Labeled trees on `{1, ..., n}`, Pruefer codes, amplitudes and tree sums.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::scalar::{self, Scalar};

/// Largest `n` enumerated unless a caller raises it (`9^7` trees).
pub const DEFAULT_TREE_CAP: usize = 9;

/// A spanning tree of the complete graph on `{1, ..., n}`.
///
/// Edges are stored as `(i, j)` with `i < j`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabeledTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl LabeledTree {
    /// Validates and canonicalizes `edges` as a tree on `{1, ..., n}`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTree("a tree needs at least one vertex".into()));
        }
        let mut canon = Vec::with_capacity(n - 1);
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidTree(format!("self-loop at {a}")));
            }
            for v in [a, b] {
                if !(1..=n).contains(&v) {
                    return Err(Error::InvalidTree(format!("vertex {v} outside 1..={n}")));
                }
            }
            canon.push((a.min(b), a.max(b)));
        }
        if canon.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "{} edges on {n} vertices, expected {}",
                canon.len(),
                n - 1
            )));
        }
        canon.sort_unstable();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTree("repeated edge".into()));
        }
        // n - 1 edges plus connectivity implies acyclic.
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for &(a, b) in &canon {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(Error::InvalidTree(format!("edge {{{a}, {b}}} closes a cycle")));
            }
            parent[ra] = rb;
        }
        Ok(Self { n, edges: canon })
    }

    pub fn single_vertex() -> Self {
        Self {
            n: 1,
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    /// `A_tau(L)`: product of `L_ij` over edges `i < j`.
    pub fn amplitude(&self, l: &SquareMatrix) -> Result<Scalar> {
        if l.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: l.dim(),
            });
        }
        Ok(self
            .edges
            .iter()
            .fold(Scalar::one(), |acc, &(i, j)| acc * l.entry(i, j)))
    }

    pub fn prufer(&self) -> PruferSequence {
        prufer_encode(self)
    }
}

impl fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            return write!(f, "(single vertex)");
        }
        let parts: Vec<String> = self.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Pruefer code of a labeled tree: `max(n - 2, 0)` labels in `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PruferSequence {
    n: usize,
    seq: Vec<usize>,
}

impl PruferSequence {
    pub fn new(n: usize, seq: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPrufer("n must be positive".into()));
        }
        if seq.len() != n.saturating_sub(2) {
            return Err(Error::InvalidPrufer(format!(
                "length {} for n = {n}, expected {}",
                seq.len(),
                n.saturating_sub(2)
            )));
        }
        if let Some(&bad) = seq.iter().find(|v| !(1..=n).contains(*v)) {
            return Err(Error::InvalidPrufer(format!("label {bad} outside 1..={n}")));
        }
        Ok(Self { n, seq })
    }

    /// The `index`-th sequence in radix order: the base-`n` digits of
    /// `index`, most significant first, each shifted up by one.
    pub fn from_index(n: usize, mut index: u64) -> Result<Self> {
        let total = tree_count(n).ok_or(Error::CapExceeded {
            what: "tree count",
            n,
            cap: u64::MAX as usize,
        })?;
        if index >= total {
            return Err(Error::InvalidPrufer(format!(
                "index {index} >= {total} sequences for n = {n}"
            )));
        }
        let len = n.saturating_sub(2);
        let mut seq = vec![1; len];
        for slot in seq.iter_mut().rev() {
            *slot = (index % n as u64) as usize + 1;
            index /= n as u64;
        }
        Ok(Self { n, seq })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.seq
    }

    pub fn decode(&self) -> LabeledTree {
        prufer_decode(self)
    }
}

/// `n^(n-2)` for `n >= 2`, `1` for `n = 1`; `None` on overflow or `n = 0`.
pub fn tree_count(n: usize) -> Option<u64> {
    match n {
        0 => None,
        1 => Some(1),
        _ => (n as u64).checked_pow(u32::try_from(n - 2).ok()?),
    }
}

/// Linear-time Pruefer decode into `edges` (cleared first). `degree` is
/// scratch space of length at least `n + 1`.
fn decode_into(n: usize, seq: &[usize], degree: &mut [usize], edges: &mut Vec<(usize, usize)>) {
    edges.clear();
    if n == 1 {
        return;
    }
    degree[1..=n].fill(1);
    for &v in seq {
        degree[v] += 1;
    }
    let mut ptr = (1..=n).find(|&v| degree[v] == 1).expect("a leaf exists");
    let mut leaf = ptr;
    for &v in seq {
        edges.push((leaf.min(v), leaf.max(v)));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf.min(n), leaf.max(n)));
}

pub fn prufer_decode(p: &PruferSequence) -> LabeledTree {
    let mut degree = vec![0; p.n + 1];
    let mut edges = Vec::with_capacity(p.n.saturating_sub(1));
    decode_into(p.n, &p.seq, &mut degree, &mut edges);
    edges.sort_unstable();
    LabeledTree { n: p.n, edges }
}

/// Repeatedly strips the smallest leaf and records its neighbour.
pub fn prufer_encode(t: &LabeledTree) -> PruferSequence {
    let n = t.n;
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for &(a, b) in &t.edges {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let mut removed = vec![false; n + 1];
    let mut seq = Vec::with_capacity(n.saturating_sub(2));
    for _ in 0..n.saturating_sub(2) {
        let leaf = (1..=n)
            .find(|&v| !removed[v] && adjacency[v].iter().filter(|&&u| !removed[u]).count() == 1)
            .expect("a tree with >= 3 live vertices has a leaf");
        let neighbour = *adjacency[leaf]
            .iter()
            .find(|&&u| !removed[u])
            .expect("leaf has one live neighbour");
        seq.push(neighbour);
        removed[leaf] = true;
    }
    PruferSequence { n, seq }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded {
            what: "tree enumeration",
            n,
            cap,
        })
    } else {
        Ok(())
    }
}

/// Every labeled tree on `{1, ..., n}`, in radix order of Pruefer codes.
pub fn enumerate_trees(n: usize) -> Result<TreeIter> {
    enumerate_trees_with_cap(n, DEFAULT_TREE_CAP)
}

pub fn enumerate_trees_with_cap(n: usize, cap: usize) -> Result<TreeIter> {
    if n == 0 {
        return Err(Error::InvalidTree("a tree needs at least one vertex".into()));
    }
    check_cap(n, cap)?;
    TreeIter::range(n, 0, tree_count(n).expect("capped n fits"))
}

/// Iterator over trees with Pruefer index in `[next, end)`.
///
/// Disjoint index ranges can be walked independently.
#[derive(Debug, Clone)]
pub struct TreeIter {
    n: usize,
    next: u64,
    end: u64,
}

impl TreeIter {
    pub fn range(n: usize, start: u64, end: u64) -> Result<Self> {
        let total = tree_count(n).ok_or(Error::InvalidTree(format!("no trees for n = {n}")))?;
        if start > end || end > total {
            return Err(Error::InvalidPrufer(format!(
                "range {start}..{end} outside 0..{total}"
            )));
        }
        Ok(Self {
            n,
            next: start,
            end,
        })
    }
}

impl Iterator for TreeIter {
    type Item = LabeledTree;

    fn next(&mut self) -> Option<LabeledTree> {
        if self.next >= self.end {
            return None;
        }
        let p = PruferSequence::from_index(self.n, self.next).expect("index in range");
        self.next += 1;
        Some(prufer_decode(&p))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for TreeIter {}

/// Calls `f` with the (unsorted) edge list of every tree on `{1, ..., n}`,
/// reusing one buffer. Walks Pruefer codes in radix order.
pub(crate) fn for_each_tree_edges(n: usize, mut f: impl FnMut(&[(usize, usize)])) {
    let len = n.saturating_sub(2);
    let mut seq = vec![1usize; len];
    let mut degree = vec![0usize; n + 1];
    let mut edges = Vec::with_capacity(n);
    loop {
        decode_into(n, &seq, &mut degree, &mut edges);
        f(&edges);
        // Odometer increment, least significant digit last.
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if seq[pos] < n {
                seq[pos] += 1;
                break;
            }
            seq[pos] = 1;
        }
    }
}

/// `T(L) = sum_tau A_tau(L)` by enumeration, default cap.
pub fn tree_sum(l: &SquareMatrix) -> Result<Scalar> {
    tree_sum_with_cap(l, DEFAULT_TREE_CAP)
}

/// Scales the upper triangle to integers by the lcm `D` of its
/// denominators, sums integer amplitudes, then divides by `D^(n-1)`.
pub fn tree_sum_with_cap(l: &SquareMatrix, cap: usize) -> Result<Scalar> {
    let n = l.dim();
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, found: 0 });
    }
    check_cap(n, cap)?;
    if n == 1 {
        return Ok(Scalar::one());
    }
    let upper: Vec<&Scalar> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .map(|(i, j)| l.entry(i, j))
        .collect();
    let denom = scalar::common_denominator(upper.iter().copied());
    let weights: Vec<BigInt> = upper
        .iter()
        .map(|x| x.numer() * (&denom / x.denom()))
        .collect();
    // Upper-triangle offset of (i, j), i < j, 1-based.
    let slot = |i: usize, j: usize| (i - 1) * (2 * n - i) / 2 + (j - i - 1);

    let total = sum_small(n, &weights, slot).unwrap_or_else(|| sum_big(n, &weights, slot));
    let scale = num_traits::pow(denom, n - 1);
    Ok(Scalar::new(total, scale))
}

fn sum_small(n: usize, weights: &[BigInt], slot: impl Fn(usize, usize) -> usize) -> Option<BigInt> {
    let small: Vec<i128> = weights
        .iter()
        .map(|w| w.to_i128())
        .collect::<Option<_>>()?;
    let mut total: i128 = 0;
    let mut overflow = false;
    for_each_tree_edges(n, |edges| {
        if overflow {
            return;
        }
        let mut amp: i128 = 1;
        for &(a, b) in edges {
            match amp.checked_mul(small[slot(a, b)]) {
                Some(v) => amp = v,
                None => {
                    overflow = true;
                    return;
                }
            }
        }
        match total.checked_add(amp) {
            Some(v) => total = v,
            None => overflow = true,
        }
    });
    (!overflow).then(|| BigInt::from(total))
}

fn sum_big(n: usize, weights: &[BigInt], slot: impl Fn(usize, usize) -> usize) -> BigInt {
    let mut total = BigInt::zero();
    for_each_tree_edges(n, |edges| {
        let amp = edges
            .iter()
            .fold(BigInt::one(), |acc, &(a, b)| acc * &weights[slot(a, b)]);
        total += amp;
    });
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::from_int;
    use std::collections::BTreeSet;

    fn tree(n: usize, edges: &[(usize, usize)]) -> LabeledTree {
        LabeledTree::new(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn decode_examples() {
        let two = PruferSequence::new(2, vec![]).unwrap();
        assert_eq!(two.decode(), tree(2, &[(1, 2)]));
        let star3 = PruferSequence::new(3, vec![3]).unwrap();
        assert_eq!(star3.decode(), tree(3, &[(1, 3), (2, 3)]));
        let star2 = PruferSequence::new(4, vec![2, 2]).unwrap();
        assert_eq!(star2.decode(), tree(4, &[(1, 2), (2, 3), (2, 4)]));
    }

    #[test]
    fn encode_examples() {
        assert_eq!(tree(2, &[(1, 2)]).prufer().as_slice(), &[] as &[usize]);
        assert_eq!(tree(3, &[(1, 2), (2, 3)]).prufer().as_slice(), &[2]);
        assert_eq!(LabeledTree::single_vertex().prufer().as_slice(), &[] as &[usize]);
    }

    #[test]
    fn round_trip_all_n4_sequences() {
        for k in 0..16 {
            let p = PruferSequence::from_index(4, k).unwrap();
            assert_eq!(p.decode().prufer(), p);
        }
    }

    #[test]
    fn from_index_is_radix_order() {
        assert_eq!(PruferSequence::from_index(4, 0).unwrap().as_slice(), &[1, 1]);
        assert_eq!(PruferSequence::from_index(4, 1).unwrap().as_slice(), &[1, 2]);
        assert_eq!(PruferSequence::from_index(4, 4).unwrap().as_slice(), &[2, 1]);
        assert_eq!(PruferSequence::from_index(4, 15).unwrap().as_slice(), &[4, 4]);
        assert!(PruferSequence::from_index(4, 16).is_err());
    }

    #[test]
    fn invalid_prufer_rejected() {
        assert!(PruferSequence::new(4, vec![1]).is_err());
        assert!(PruferSequence::new(4, vec![1, 5]).is_err());
        assert!(PruferSequence::new(0, vec![]).is_err());
    }

    #[test]
    fn invalid_trees_rejected() {
        assert!(LabeledTree::new(3, [(1, 2)]).is_err());
        assert!(LabeledTree::new(3, [(1, 2), (2, 1)]).is_err());
        assert!(LabeledTree::new(4, [(1, 2), (2, 3), (1, 3)]).is_err());
        assert!(LabeledTree::new(3, [(1, 1), (2, 3)]).is_err());
        assert!(LabeledTree::new(3, [(1, 4), (2, 3)]).is_err());
        assert!(LabeledTree::new(0, []).is_err());
        // Canonicalizes orientation and order.
        assert_eq!(
            LabeledTree::new(3, [(3, 2), (2, 1)]).unwrap().edges(),
            &[(1, 2), (2, 3)]
        );
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_trees(1).unwrap().count(), 1);
        assert_eq!(enumerate_trees(3).unwrap().count(), 3);
        assert_eq!(enumerate_trees(5).unwrap().count(), 125);
        let distinct: BTreeSet<_> = enumerate_trees(5).unwrap().collect();
        assert_eq!(distinct.len(), 125);
    }

    #[test]
    fn enumeration_cap() {
        assert_eq!(
            enumerate_trees(10).unwrap_err(),
            Error::CapExceeded {
                what: "tree enumeration",
                n: 10,
                cap: 9
            }
        );
        assert!(enumerate_trees_with_cap(4, 3).is_err());
        assert!(tree_sum_with_cap(&SquareMatrix::zeros(5), 4).is_err());
    }

    #[test]
    fn buffered_walk_matches_iterator() {
        let mut walked = Vec::new();
        for_each_tree_edges(5, |e| walked.push(LabeledTree::new(5, e.iter().copied()).unwrap()));
        let iterated: Vec<_> = enumerate_trees(5).unwrap().collect();
        assert_eq!(walked, iterated);
    }

    #[test]
    fn amplitude_examples() {
        let path = tree(3, &[(1, 2), (2, 3)]);
        let mut l = SquareMatrix::zeros(3);
        l.set(1, 2, from_int(2));
        l.set(2, 3, from_int(5));
        assert_eq!(path.amplitude(&l).unwrap(), from_int(10));
        assert_eq!(path.amplitude(&SquareMatrix::zeros(3)).unwrap(), from_int(0));
        assert_eq!(
            LabeledTree::single_vertex()
                .amplitude(&SquareMatrix::from_i64_rows([[7]]))
                .unwrap(),
            from_int(1)
        );
        assert!(path.amplitude(&SquareMatrix::zeros(2)).is_err());
    }

    #[test]
    fn tree_sum_examples() {
        let l2 = SquareMatrix::from_i64_rows([[-3, 3], [3, -3]]);
        assert_eq!(tree_sum(&l2).unwrap(), from_int(3));
        let k3 = SquareMatrix::from_i64_rows([[-2, 1, 1], [1, -2, 1], [1, 1, -2]]);
        assert_eq!(tree_sum(&k3).unwrap(), from_int(3));
        let k4 = SquareMatrix::from_fn(4, |i, j| if i == j { from_int(-3) } else { from_int(1) });
        assert_eq!(tree_sum(&k4).unwrap(), from_int(16));
        assert_eq!(tree_sum(&SquareMatrix::zeros(1)).unwrap(), from_int(1));
    }

    #[test]
    fn tree_sum_big_path_matches_amplitudes() {
        // Entries near 2^40 overflow i128 after four factors.
        let big = BigInt::from(1u64 << 40) + 7;
        let l = SquareMatrix::from_fn(5, |i, j| {
            if i == j {
                Scalar::zero()
            } else {
                Scalar::new(&big + BigInt::from(i * j), BigInt::from(i + j))
            }
        });
        let by_enumeration: Scalar = enumerate_trees(5)
            .unwrap()
            .map(|t| t.amplitude(&l).unwrap())
            .sum();
        assert_eq!(tree_sum(&l).unwrap(), by_enumeration);
    }

    #[test]
    fn tree_sum_uses_upper_triangle_only() {
        let l = SquareMatrix::from_i64_rows([[0, 2, 3], [100, 0, 5], [100, 100, 0]]);
        // Trees: {12,13} -> 6, {12,23} -> 10, {13,23} -> 15.
        assert_eq!(tree_sum(&l).unwrap(), from_int(31));
    }
}
