mod common;

use std::collections::BTreeSet;

use common::{brute_force_fiber, int, naive_det, newton_slope, spanning_trees_by_filter};
use matrix_tree::derivative::{self, TangentDirection};
use matrix_tree::graph::{self, WeightedGraph};
use matrix_tree::random;
use matrix_tree::scalar::{self, sign_power};
use matrix_tree::symbolic;
use matrix_tree::tree::{self, PruferSequence};
use matrix_tree::{LaplaceLikeMatrix, Scalar, SquareMatrix};
use num_traits::Signed;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=4).prop_map(|(p, q)| scalar::ratio(p, q))
}

fn square(max_n: usize) -> impl Strategy<Value = SquareMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(rational(), n * n).prop_map(move |cells| {
            SquareMatrix::from_fn(n, |i, j| cells[(i - 1) * n + (j - 1)].clone())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn determinant_matches_cofactor_expansion(m in square(5)) {
        prop_assert_eq!(m.determinant(), naive_det(&m));
    }

    #[test]
    fn determinant_transpose_invariant(m in square(6)) {
        prop_assert_eq!(m.determinant(), m.transpose().determinant());
    }

    #[test]
    fn graph_text_round_trip(
        n in 2usize..7,
        raw in proptest::collection::vec((1usize..7, 1usize..7, rational()), 0..12),
    ) {
        let mut g = WeightedGraph::new(n);
        for (u, v, w) in raw {
            if u != v && u <= n && v <= n {
                g.add_edge(u, v, w).unwrap();
            }
        }
        let text = g.to_string();
        let parsed = graph::parse_graph(&text).unwrap();
        prop_assert_eq!(&parsed, &g);
        prop_assert_eq!(parsed.to_string(), text);
    }

    #[test]
    fn derivative_matches_newton_oracle(m in square(5), seed in any::<u64>()) {
        let n = m.dim();
        prop_assume!(n >= 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random::square(&mut rng, n);
        let f = |x: &SquareMatrix| Ok(x.determinant());
        let fast = derivative::exact_directional_derivative(f, &m, &v, n).unwrap();
        let samples: Vec<Scalar> = (0..=n)
            .map(|k| m.add_scaled(&v, &int(k as i64)).unwrap().determinant())
            .collect();
        prop_assert_eq!(fast, newton_slope(&samples));
    }
}

#[test]
fn newton_oracle_sanity() {
    // 3 + 2t - t^2 + t^3 sampled at 0..=3: slope 2.
    let p = |t: i64| int(3 + 2 * t - t * t + t * t * t);
    let samples: Vec<Scalar> = (0..=3).map(p).collect();
    assert_eq!(newton_slope(&samples), int(2));
}

#[test]
fn cofactors_agree_on_laplace_like() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..200 {
        let n = 2 + k % 7;
        let l = random::laplace_like(&mut rng, n);
        l.common_cofactor_checked()
            .unwrap_or_else(|e| panic!("n={n}: {e}"));
    }
}

#[test]
fn cofactors_agree_on_doubly_balanced() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for k in 0..100 {
        let n = 2 + k % 5;
        let d = random::doubly_balanced(&mut rng, n);
        d.common_cofactor_checked()
            .unwrap_or_else(|e| panic!("n={n}: {e}"));
    }
}

#[test]
fn prufer_bijection_exhaustive() {
    for n in 1..=6 {
        let all: Vec<_> = tree::enumerate_trees(n).unwrap().collect();
        for t in &all {
            assert_eq!(&t.prufer().decode(), t);
        }
        let total = tree::tree_count(n).unwrap();
        for k in 0..total {
            let p = PruferSequence::from_index(n, k).unwrap();
            assert_eq!(p.decode().prufer(), p);
        }
    }
}

#[test]
fn enumeration_is_cayley_and_distinct() {
    for n in 2..=8usize {
        let mut seen = BTreeSet::new();
        for t in tree::enumerate_trees(n).unwrap() {
            // Re-validating checks the connected/acyclic invariants.
            let again = matrix_tree::LabeledTree::new(n, t.edges().iter().copied()).unwrap();
            assert_eq!(again, t);
            seen.insert(t);
        }
        assert_eq!(seen.len() as u64, (n as u64).pow(n as u32 - 2), "n={n}");
    }
}

#[test]
fn disjoint_ranges_cover_enumeration() {
    let n = 6;
    let total = tree::tree_count(n).unwrap();
    let mid = total / 3;
    let mut parts: Vec<_> = tree::TreeIter::range(n, 0, mid).unwrap().collect();
    parts.extend(tree::TreeIter::range(n, mid, total).unwrap());
    let whole: Vec<_> = tree::enumerate_trees(n).unwrap().collect();
    assert_eq!(parts, whole);
}

#[test]
fn cofactor_equals_signed_tree_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for k in 0..100 {
        let n = 2 + k % 6;
        let l = random::laplace_like(&mut rng, n);
        let t = tree::tree_sum(l.as_matrix()).unwrap();
        assert_eq!(l.common_cofactor(), sign_power(n + 1) * t, "n={n}");
    }
}

#[test]
fn random_graph_counts_match_filter() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for k in 0..50 {
        let n = 2 + k % 6;
        let g = random::connected_graph(&mut rng, n);
        let c = graph::count_spanning_trees(&g);
        assert_eq!(c.tree_count, int(spanning_trees_by_filter(&g) as i64));
        assert!(c.connected);
    }
}

#[test]
fn complete_graph_counts() {
    for n in 2..=8usize {
        let c = graph::count_spanning_trees(&WeightedGraph::complete(n));
        assert_eq!(c.tree_count, int((n as i64).pow(n as u32 - 2)));
    }
}

#[test]
fn contraction_preserves_refinements() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for n in 2..=8 {
        for _ in 0..5 {
            let l = random::laplace_like(&mut rng, n);
            let d = random::doubly_balanced(&mut rng, n);
            for i in 1..=n {
                for j in i + 1..=n {
                    let c = derivative::contract_matrix(l.as_matrix(), i, j).unwrap();
                    assert_eq!(c.dim(), n - 1);
                    assert!(c.is_laplace_like());
                    let c = derivative::contract_matrix(d.as_matrix(), i, j).unwrap();
                    assert!(c.is_doubly_balanced());
                }
            }
        }
    }
}

#[test]
fn t_and_c_identities_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for k in 0..100 {
        let n = 2 + k % 6;
        let l = random::laplace_like(&mut rng, n);
        for i in 1..=n {
            for j in i + 1..=n {
                let t = derivative::verify_t_identity(&l, i, j).unwrap();
                assert!(t.equal, "{t}");
                let c = derivative::verify_c_identity(l.as_matrix(), i, j).unwrap();
                assert!(c.equal, "{c}");
            }
        }
    }
}

#[test]
fn c_identity_on_nonsymmetric_doubly_balanced() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for k in 0..100 {
        let n = 3 + k % 4;
        let d = random::doubly_balanced(&mut rng, n);
        assert!(!d.as_matrix().is_symmetric());
        for i in 1..=n {
            for j in i + 1..=n {
                let c = derivative::verify_c_identity(d.as_matrix(), i, j).unwrap();
                assert!(c.equal, "{c}");
            }
        }
    }
}

#[test]
fn fibers_match_brute_force_and_partition() {
    for n in 3..=6 {
        for i in 1..=n {
            for j in i + 1..=n {
                let mut covered = BTreeSet::new();
                for t_prime in tree::enumerate_trees(n - 1).unwrap() {
                    let built: BTreeSet<_> =
                        derivative::contraction_fiber(&t_prime, i, j, n).unwrap().into_iter().collect();
                    let brute: BTreeSet<_> = brute_force_fiber(&t_prime, i, j, n).into_iter().collect();
                    assert_eq!(built, brute);
                    assert_eq!(built.len(), 1 << t_prime.degree(i));
                    for tau in built {
                        assert!(covered.insert(tau), "fibers overlap");
                    }
                }
                let with_edge = tree::enumerate_trees(n)
                    .unwrap()
                    .filter(|t| t.contains_edge(i, j))
                    .count();
                assert_eq!(covered.len(), with_edge);
            }
        }
    }
}

#[test]
fn fiber_identity_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for n in 3..=6 {
        let l = random::laplace_like(&mut rng, n);
        for i in 1..=n {
            for j in i + 1..=n {
                let mut left = Scalar::from_integer(0.into());
                let mut right = left.clone();
                for t_prime in tree::enumerate_trees(n - 1).unwrap() {
                    let r = derivative::fiber_sum_identity_check(&t_prime, &l, i, j).unwrap();
                    assert!(r.equal, "{r}");
                    left += r.left;
                    right += r.right;
                }
                let t = derivative::verify_t_identity(&l, i, j).unwrap();
                assert_eq!(left, t.left);
                assert_eq!(right, t.right);
            }
        }
    }
}

#[test]
fn base_case_zero_matrix() {
    for n in 2..=8 {
        let z = LaplaceLikeMatrix::zeros(n).unwrap();
        assert_eq!(z.common_cofactor(), int(0));
        assert_eq!(tree::tree_sum(z.as_matrix()).unwrap(), int(0));
    }
}

/// Generic point: the Laplace-like matrix with off-diagonal `values(i, j)`.
fn point(n: usize, rng: &mut ChaCha8Rng) -> (LaplaceLikeMatrix, impl Fn((usize, usize)) -> Scalar) {
    let l = random::laplace_like(rng, n);
    let m = l.as_matrix().clone();
    (l, move |(a, b): (usize, usize)| m.entry(a, b).clone())
}

#[test]
fn symbolic_cofactor_evaluates_to_numeric() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for n in 1..=6 {
        let poly = symbolic::symbolic_cofactor(n).unwrap();
        for _ in 0..5 {
            let (l, values) = point(n, &mut rng);
            assert_eq!(poly.evaluate(values), l.common_cofactor(), "n={n}");
        }
    }
}

#[test]
fn symbolic_partials_match_exact_derivative() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for n in 2..=5 {
        let poly = symbolic::symbolic_cofactor(n).unwrap();
        for _ in 0..3 {
            let (l, values) = point(n, &mut rng);
            for i in 1..=n {
                for j in i + 1..=n {
                    let v = TangentDirection::new(n, i, j).unwrap().matrix();
                    let exact =
                        derivative::exact_directional_derivative(|m| m.cofactor(1, 1), l.as_matrix(), &v, n)
                            .unwrap();
                    let symbolic = poly.partial_derivative(i, j).evaluate(&values);
                    assert_eq!(exact, symbolic, "n={n}, ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn symbolic_cofactor_is_relabeling_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 0..10 {
        let n = 3 + k % 3;
        let poly = symbolic::symbolic_cofactor(n).unwrap();
        let (_, values) = point(n, &mut rng);
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.shuffle(&mut rng);
        let permuted = |(a, b): (usize, usize)| {
            let (pa, pb) = (perm[a - 1], perm[b - 1]);
            values((pa.min(pb), pa.max(pb)))
        };
        assert_eq!(poly.evaluate(&values), poly.evaluate(permuted), "perm {perm:?}");
    }
}

#[test]
fn symbolic_tree_sum_shape() {
    for n in 2..=7usize {
        let t = symbolic::symbolic_tree_sum(n).unwrap();
        assert_eq!(t.term_count() as u64, (n as u64).pow(n as u32 - 2));
        for (m, c) in t.terms() {
            assert_eq!(c, &int(1));
            assert!(m.is_squarefree());
            assert_eq!(m.degree() as usize, n - 1);
        }
    }
}

#[test]
fn symbolic_identity_up_to_seven() {
    for n in 1..=7 {
        let r = symbolic::verify_identity(n).unwrap();
        assert!(r.equal, "n={n}: {:?}", r.witness);
    }
}

#[test]
fn weighted_counts_are_tree_sum_magnitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for n in 2..=6 {
        let l = random::laplace_like(&mut rng, n);
        let mut g = WeightedGraph::new(n);
        for i in 1..=n {
            for j in i + 1..=n {
                g.add_edge(i, j, l.as_matrix().entry(i, j).clone()).unwrap();
            }
        }
        let c = graph::count_spanning_trees(&g);
        assert_eq!(c.tree_count, tree::tree_sum(l.as_matrix()).unwrap().abs());
    }
}
