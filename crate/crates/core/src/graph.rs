//! Weighted graph ingestion and the Laplacian `L = A - D`.
//!
//! Edge-list format: the first non-comment line is `n`, then one `u v [w]`
//! per line with 1-based vertices and an optional rational weight
//! (default `1`). Lines starting with `#` and blank lines are skipped.
//! Self-loops are rejected; parallel edges are merged by summing weights.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{LaplaceLikeMatrix, SquareMatrix};
use crate::scalar::{self, Scalar};
use crate::text::{content_lines, parse_count};
use crate::tree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), Scalar>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: BTreeMap::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 1..=n {
            for v in u + 1..=n {
                g.edges.insert((u, v), Scalar::one());
            }
        }
        g
    }

    /// Adds `weight` to edge `{u, v}`.
    pub fn add_edge(&mut self, u: usize, v: usize, weight: Scalar) -> Result<()> {
        self.add_edge_at(u, v, weight, 0)
    }

    fn add_edge_at(&mut self, u: usize, v: usize, weight: Scalar, line: usize) -> Result<()> {
        for vertex in [u, v] {
            if !(1..=self.n).contains(&vertex) {
                return Err(Error::VertexOutOfRange {
                    line,
                    vertex,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::SelfLoop { line, vertex: u });
        }
        *self
            .edges
            .entry((u.min(v), u.max(v)))
            .or_insert_with(Scalar::zero) += weight;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.edges.iter().map(|(&(u, v), w)| (u, v, w))
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<&Scalar> {
        self.edges.get(&(u.min(v), u.max(v)))
    }

    /// Connected through edges of nonzero weight.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![1];
        seen[1] = true;
        while let Some(u) = stack.pop() {
            for (&(a, b), w) in &self.edges {
                if w.is_zero() {
                    continue;
                }
                let other = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen[1..].iter().all(|&s| s)
    }

    /// `L[u][v] = w(u, v)`, `L[u][u] = -sum_v w(u, v)`.
    pub fn laplacian(&self) -> LaplaceLikeMatrix {
        let mut m = SquareMatrix::zeros(self.n);
        for (&(u, v), w) in &self.edges {
            m.set(u, v, m.entry(u, v) + w);
            m.set(v, u, m.entry(v, u) + w);
            m.set(u, u, m.entry(u, u) - w);
            m.set(v, v, m.entry(v, v) - w);
        }
        LaplaceLikeMatrix::new(m).expect("graph Laplacian is Laplace-like")
    }
}

/// Serializes back to the edge-list format, weights always written.
impl fmt::Display for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for (&(u, v), w) in &self.edges {
            writeln!(f, "{u} {v} {}", scalar::format(w))?;
        }
        Ok(())
    }
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing vertex count".into(),
    })?;
    let n = parse_count(header, line)?;
    if n == 0 {
        return Err(Error::Parse {
            line,
            message: "vertex count must be positive".into(),
        });
    }
    let mut g = WeightedGraph::new(n);
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::Parse {
                line,
                message: format!("expected `u v [w]`, found `{content}`"),
            });
        }
        let u = parse_count(fields[0], line)?;
        let v = parse_count(fields[1], line)?;
        let w = match fields.get(2) {
            Some(text) => scalar::parse_at(text, line)?,
            None => Scalar::one(),
        };
        g.add_edge_at(u, v, w, line)?;
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningTreeCount {
    #[serde(with = "scalar::serde_text")]
    pub cofactor: Scalar,
    #[serde(with = "scalar::serde_text")]
    pub tree_count: Scalar,
    pub connected: bool,
}

/// `|C(L)|` for `L = laplacian(g)`: the number of spanning trees for unit
/// weights, the weighted tree sum's magnitude otherwise.
pub fn count_spanning_trees(g: &WeightedGraph) -> SpanningTreeCount {
    let cofactor = g.laplacian().common_cofactor();
    SpanningTreeCount {
        tree_count: cofactor.abs(),
        cofactor,
        connected: g.is_connected(),
    }
}

/// Number of labeled trees on `{1, ..., n}` whose edges all lie in `g`
/// (with nonzero weight). Enumerates every tree, so subject to the cap.
pub fn count_by_enumeration(g: &WeightedGraph) -> Result<u64> {
    let mut count = 0;
    for t in tree::enumerate_trees(g.n)? {
        if t
            .edges()
            .iter()
            .all(|&(u, v)| g.weight(u, v).is_some_and(|w| !w.is_zero()))
        {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{from_int, ratio};

    #[test]
    fn parse_examples() {
        let k3 = parse_graph("3\n1 2\n2 3\n1 3\n").unwrap();
        assert_eq!(k3, WeightedGraph::complete(3));

        let single = parse_graph("2\n1 2 5\n").unwrap();
        assert_eq!(single.weight(2, 1), Some(&from_int(5)));

        assert_eq!(
            parse_graph("3\n1 1\n").unwrap_err(),
            Error::SelfLoop { line: 2, vertex: 1 }
        );
    }

    #[test]
    fn parse_comments_weights_and_merging() {
        let text = "# a multigraph\n\n4\n1 2 3/2\n# again\n2 1 1/2\n3 4\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.weight(1, 2), Some(&from_int(2)));
        assert_eq!(g.weight(3, 4), Some(&from_int(1)));
        assert_eq!(g.edges().count(), 2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            parse_graph("3\n1 4\n").unwrap_err(),
            Error::VertexOutOfRange { line: 2, vertex: 4, n: 3 }
        );
        assert!(matches!(parse_graph("3\n1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3\n1 2 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3\n1 2 3 4\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("# only\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("2\n1 2 1/0\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn laplacian_examples() {
        let l = WeightedGraph::complete(3).laplacian();
        assert_eq!(
            l.as_matrix(),
            &SquareMatrix::from_i64_rows([[-2, 1, 1], [1, -2, 1], [1, 1, -2]])
        );
        let single = parse_graph("2\n1 2 5\n").unwrap().laplacian();
        assert_eq!(single.as_matrix(), &SquareMatrix::from_i64_rows([[-5, 5], [5, -5]]));
        assert_eq!(WeightedGraph::new(3).laplacian().as_matrix(), &SquareMatrix::zeros(3));
    }

    #[test]
    fn count_examples() {
        let k3 = count_spanning_trees(&WeightedGraph::complete(3));
        assert_eq!(k3.tree_count, from_int(3));
        assert!(k3.connected);
        assert_eq!(count_spanning_trees(&WeightedGraph::complete(4)).tree_count, from_int(16));

        let two_parts = parse_graph("4\n1 2\n3 4\n").unwrap();
        let c = count_spanning_trees(&two_parts);
        assert_eq!(c.tree_count, from_int(0));
        assert!(!c.connected);
    }

    #[test]
    fn weighted_count_is_tree_sum_magnitude() {
        // Path 1-2-3 with weights 1/2 and 3: one tree, amplitude 3/2.
        let g = parse_graph("3\n1 2 1/2\n2 3 3\n").unwrap();
        assert_eq!(count_spanning_trees(&g).tree_count, ratio(3, 2));
    }

    #[test]
    fn enumeration_oracle() {
        assert_eq!(count_by_enumeration(&WeightedGraph::complete(4)).unwrap(), 16);
        let cycle = parse_graph("4\n1 2\n2 3\n3 4\n4 1\n").unwrap();
        assert_eq!(count_by_enumeration(&cycle).unwrap(), 4);
        assert_eq!(count_spanning_trees(&cycle).tree_count, from_int(4));
    }

    #[test]
    fn serialize_round_trip() {
        let g = parse_graph("4\n1 2 3/2\n3 4\n2 4 -1\n").unwrap();
        assert_eq!(parse_graph(&g.to_string()).unwrap(), g);
    }
}
