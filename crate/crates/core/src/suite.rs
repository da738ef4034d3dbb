//! Seeded verification sweeps and the machine-readable run report.
//!
//! Every check draws its instances from its own ChaCha stream derived from
//! the configured seed, so a fixed seed gives a byte-identical report.
//! A failing check carries the first counterexample it met.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::derivative::{self, VerificationReport};
use crate::error::{Error, Result};
use crate::graph::{self, WeightedGraph};
use crate::linalg::{LaplaceLikeMatrix, SquareMatrix};
use crate::random;
use crate::scalar::{self, Scalar};
use crate::symbolic;
use crate::tree::{self, LabeledTree};

/// Deliberate defects used to show the checks can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    #[default]
    None,
    /// Cofactors computed as `(-1)^(i+j+1) det M_ij`.
    CofactorSignFlip,
    /// Tree contraction that skips shifting labels `j+1..=n` down.
    ContractTreeNoRelabel,
}

impl Mutation {
    fn cofactor(self, m: &SquareMatrix, i: usize, j: usize) -> Result<Scalar> {
        let c = m.cofactor(i, j)?;
        Ok(match self {
            Mutation::CofactorSignFlip => -c,
            _ => c,
        })
    }

    fn common_cofactor(self, l: &LaplaceLikeMatrix) -> Scalar {
        self.cofactor(l.as_matrix(), 1, 1).expect("n >= 1")
    }

    fn contract_tree(self, t: &LabeledTree, i: usize, j: usize) -> Result<LabeledTree> {
        match self {
            Mutation::ContractTreeNoRelabel => {
                if !t.contains_edge(i, j) {
                    return Err(Error::EdgeAbsent { i, j });
                }
                let merge = |v: usize| if v == j { i } else { v };
                let edges = t
                    .edges()
                    .iter()
                    .filter(|&&e| e != (i, j))
                    .map(|&(a, b)| (merge(a), merge(b)));
                LabeledTree::new(t.vertex_count() - 1, edges)
            }
            _ => derivative::contract_tree(t, i, j),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteKind {
    Numeric,
    Symbolic,
    Derivatives,
    /// The cofactor derivative identity on non-symmetric doubly balanced
    /// matrices.
    Remark,
    All,
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SuiteKind::Numeric => "numeric",
            SuiteKind::Symbolic => "symbolic",
            SuiteKind::Derivatives => "derivatives",
            SuiteKind::Remark => "remark",
            SuiteKind::All => "all",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Dimension range for the random sweeps (inclusive).
    pub n_min: usize,
    pub n_max: usize,
    /// Random instances per dimension.
    pub instances: usize,
    /// Largest `n` for the symbolic identity.
    pub symbolic_n_max: usize,
    /// Largest `n` for checks that enumerate trees of a whole graph.
    pub enumeration_n_max: usize,
    pub mutation: Mutation,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            n_min: 2,
            n_max: 6,
            instances: 100,
            symbolic_n_max: symbolic::DEFAULT_SYMBOLIC_CAP,
            enumeration_n_max: 7,
            mutation: Mutation::None,
        }
    }
}

impl SuiteConfig {
    fn dims(&self, lo: usize, hi: usize) -> std::ops::RangeInclusive<usize> {
        self.n_min.max(lo)..=self.n_max.min(hi)
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// One named check over many instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub instances: u64,
    pub witness: Option<VerificationReport>,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_owned(),
            passed: true,
            instances: 0,
            witness: None,
        }
    }

    /// Counts `report` and keeps it if it is the first failure.
    fn record(&mut self, report: VerificationReport) {
        self.instances += 1;
        if !report.equal && self.passed {
            self.passed = false;
            self.witness = Some(report);
        }
    }

    fn record_error(&mut self, identity: &str, instance: String, err: &Error) {
        self.record(VerificationReport {
            identity: identity.to_owned(),
            left: Scalar::zero(),
            right: Scalar::one(),
            equal: false,
            instance: format!("{instance}: {err}"),
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub input_digest: String,
    pub results: Vec<CheckResult>,
    #[serde(default)]
    pub values: BTreeMap<String, String>,
    #[serde(default)]
    pub warnings: Vec<String>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str, input: &[u8]) -> Self {
        Self {
            command: command.to_owned(),
            input_digest: digest(input),
            results: Vec::new(),
            values: BTreeMap::new(),
            warnings: Vec::new(),
            passed: true,
            timing_ms: None,
        }
    }

    pub fn push(&mut self, result: CheckResult) {
        self.passed &= result.passed;
        self.results.push(result);
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

/// Hex SHA-256.
pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn matrix_instance(m: &SquareMatrix) -> String {
    let rows: Vec<String> = m
        .rows()
        .take(m.dim())
        .map(|r| r.iter().map(scalar::format).collect::<Vec<_>>().join(" "))
        .collect();
    format!("n={}, L=[{}]", m.dim(), rows.join("; "))
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
}

pub const TREE_SUM_NUMERIC: &str = "cofactor-tree-sum";
pub const COFACTOR_EQUALITY: &str = "cofactor-equality";
pub const BASE_CASE: &str = "base-case";
pub const COMPLETE_GRAPH_COUNTS: &str = "complete-graph-counts";
pub const RANDOM_GRAPH_COUNTS: &str = "random-graph-counts";
pub const TREE_SUM_SYMBOLIC: &str = "cofactor-tree-sum-symbolic";
pub const T_DERIVATIVE: &str = "t-derivative";
pub const C_DERIVATIVE: &str = "c-derivative";
pub const FIBER_SUM: &str = "fiber-sum";
pub const FIBER_PARTITION: &str = "fiber-partition";
pub const FIBER_CONSISTENCY: &str = "fiber-consistency";
pub const NONSYMMETRIC_C_DERIVATIVE: &str = "c-derivative-nonsymmetric";
pub const NONSYMMETRIC_COFACTOR_EQUALITY: &str = "cofactor-equality-nonsymmetric";

/// `C(L) = (-1)^(n+1) T(L)` on random Laplace-like matrices.
pub fn check_tree_sum_numeric(cfg: &SuiteConfig) -> CheckResult {
    let mut result = CheckResult::new(TREE_SUM_NUMERIC);
    let mut rng = cfg.rng(1);
    for n in cfg.dims(1, tree::DEFAULT_TREE_CAP) {
        for _ in 0..cfg.instances {
            let l = random::laplace_like(&mut rng, n);
            let left = cfg.mutation.common_cofactor(&l);
            let right = scalar::sign_power(n + 1) * tree::tree_sum(l.as_matrix()).expect("capped");
            result.record(VerificationReport::new(
                "C(L) = (-1)^(n+1) T(L)",
                left,
                right,
                matrix_instance(l.as_matrix()),
            ));
        }
    }
    result
}

/// All `n^2` cofactors agree on random Laplace-like matrices.
pub fn check_cofactor_equality(cfg: &SuiteConfig) -> CheckResult {
    let mut result = CheckResult::new(COFACTOR_EQUALITY);
    let mut rng = cfg.rng(2);
    for n in cfg.dims(1, usize::MAX) {
        for _ in 0..cfg.instances {
            let l = random::laplace_like(&mut rng, n);
            result.record(cofactor_spread(cfg.mutation, l.as_matrix(), "C_ij = C_11"));
        }
    }
    result
}

/// Compares every cofactor with `C_11`; reports the first that differs.
fn cofactor_spread(mutation: Mutation, m: &SquareMatrix, identity: &str) -> VerificationReport {
    let n = m.dim();
    let reference = mutation.cofactor(m, 1, 1).expect("in range");
    for (i, j) in (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))) {
        let c = mutation.cofactor(m, i, j).expect("in range");
        if c != reference {
            return VerificationReport::new(
                identity,
                reference,
                c,
                format!("(i,j)=({i},{j}), {}", matrix_instance(m)),
            );
        }
    }
    VerificationReport::new(identity, reference.clone(), reference, matrix_instance(m))
}

/// `C(0) = T(0) = 0` for `n >= 2`.
pub fn check_base_case(cfg: &SuiteConfig, n_max: usize) -> CheckResult {
    let mut result = CheckResult::new(BASE_CASE);
    for n in 2..=n_max.min(tree::DEFAULT_TREE_CAP) {
        let zero = LaplaceLikeMatrix::zeros(n).expect("n >= 1");
        let c = cfg.mutation.common_cofactor(&zero);
        let t = tree::tree_sum(zero.as_matrix()).expect("capped");
        result.record(VerificationReport::new("C(0) = 0", c, Scalar::zero(), format!("n={n}")));
        result.record(VerificationReport::new("T(0) = 0", t, Scalar::zero(), format!("n={n}")));
    }
    result
}

/// `|C(A - D)| = n^(n-2)` for `K_n`, `2 <= n <= n_max`; for
/// `n <= enumeration_n_max` also matched against tree enumeration.
pub fn check_complete_graphs(cfg: &SuiteConfig, n_max: usize) -> CheckResult {
    let mut result = CheckResult::new(COMPLETE_GRAPH_COUNTS);
    for n in 2..=n_max {
        let g = WeightedGraph::complete(n);
        let count = graph_count(cfg.mutation, &g);
        let cayley = Scalar::from_integer(num_traits::pow(num_bigint::BigInt::from(n), n - 2));
        result.record(VerificationReport::new(
            "|C(L)| = n^(n-2)",
            count.clone(),
            cayley,
            format!("K_{n}"),
        ));
        if n <= cfg.enumeration_n_max {
            let listed = graph::count_by_enumeration(&g).expect("capped");
            result.record(VerificationReport::new(
                "|C(L)| = #spanning trees (enumerated)",
                count,
                scalar::from_int(listed as i64),
                format!("K_{n}"),
            ));
        }
    }
    result
}

fn graph_count(mutation: Mutation, g: &WeightedGraph) -> Scalar {
    // Signed: (-1)^(n+1) C(L) is the tree count, so a sign error shows.
    let c = mutation.common_cofactor(&g.laplacian());
    scalar::sign_power(g.vertex_count() + 1) * c
}

/// Random connected unit-weight graphs: `|C(A - D)|` against enumeration.
pub fn check_random_graphs(cfg: &SuiteConfig) -> CheckResult {
    let mut result = CheckResult::new(RANDOM_GRAPH_COUNTS);
    let mut rng = cfg.rng(3);
    for n in cfg.dims(2, cfg.enumeration_n_max) {
        for _ in 0..cfg.instances.div_ceil(10) {
            let g = random::connected_graph(&mut rng, n);
            let count = graph_count(cfg.mutation, &g);
            let listed = graph::count_by_enumeration(&g).expect("capped");
            let edges: Vec<String> = g.edges().map(|(u, v, _)| format!("{u}-{v}")).collect();
            result.record(VerificationReport::new(
                "|C(L)| = #spanning trees (enumerated)",
                count,
                scalar::from_int(listed as i64),
                format!("n={n}, edges=[{}]", edges.join(" ")),
            ));
        }
    }
    result
}

/// The symbolic identity for `1 <= n <= symbolic_n_max`.
pub fn check_tree_sum_symbolic(cfg: &SuiteConfig) -> CheckResult {
    check_tree_sum_symbolic_detailed(cfg).0
}

/// Also returns the per-`n` reports (term counts, timings).
pub fn check_tree_sum_symbolic_detailed(cfg: &SuiteConfig) -> (CheckResult, Vec<symbolic::SymbolicReport>) {
    let mut result = CheckResult::new(TREE_SUM_SYMBOLIC);
    let mut reports = Vec::new();
    for n in 1..=cfg.symbolic_n_max {
        match symbolic::verify_identity_with_cap(n, cfg.symbolic_n_max) {
            Ok(report) => {
                result.record(symbolic_report(&report));
                reports.push(report);
            }
            Err(err) => result.record_error(TREE_SUM_SYMBOLIC, format!("n={n}"), &err),
        }
    }
    (result, reports)
}

fn symbolic_report(r: &symbolic::SymbolicReport) -> VerificationReport {
    let identity = "C(L) = (-1)^(n+1) T(L) as polynomials";
    match &r.witness {
        None => VerificationReport::new(
            identity,
            scalar::from_int(r.cofactor_terms as i64),
            scalar::from_int(r.tree_sum_terms as i64),
            format!("n={}, term counts", r.n),
        ),
        Some(w) => VerificationReport {
            identity: identity.to_owned(),
            left: w.cofactor_coefficient.clone(),
            right: w.tree_side_coefficient.clone(),
            equal: false,
            instance: format!("n={}, coefficient of {}", r.n, w.monomial),
        },
    }
}

/// `v_ij T(L) = T(L')` on random Laplace-like `L`, every pair.
pub fn check_t_derivative(cfg: &SuiteConfig) -> CheckResult {
    let mut result = CheckResult::new(T_DERIVATIVE);
    let mut rng = cfg.rng(4);
    for n in cfg.dims(2, tree::DEFAULT_TREE_CAP) {
        for _ in 0..cfg.instances {
            let l = random::laplace_like(&mut rng, n);
            for (i, j) in pairs(n) {
                match derivative::verify_t_identity(&l, i, j) {
                    Ok(r) => result.record(r),
                    Err(err) => result.record_error(derivative::T_IDENTITY, matrix_instance(l.as_matrix()), &err),
                }
            }
        }
    }
    result
}

/// `-v_ij C(L) = C(L')` on random Laplace-like `L`, every pair.
pub fn check_c_derivative(cfg: &SuiteConfig) -> CheckResult {
    let mut result = CheckResult::new(C_DERIVATIVE);
    let mut rng = cfg.rng(5);
    for n in cfg.dims(2, usize::MAX) {
        for _ in 0..cfg.instances {
            let l = random::laplace_like(&mut rng, n);
            for (i, j) in pairs(n) {
                match derivative::verify_c_identity(l.as_matrix(), i, j) {
                    Ok(r) => result.record(r),
                    Err(err) => result.record_error(derivative::C_IDENTITY, matrix_instance(l.as_matrix()), &err),
                }
            }
        }
    }
    result
}

const FIBER_N: (usize, usize) = (3, 6);
const FIBER_MATRICES: usize = 2;

/// The fiber-sum identity, every `tau'` on `n - 1` vertices, every pair.
pub fn check_fiber_sum(cfg: &SuiteConfig) -> CheckResult {
    let mut result = CheckResult::new(FIBER_SUM);
    let mut rng = cfg.rng(6);
    for n in cfg.dims(FIBER_N.0, FIBER_N.1) {
        for _ in 0..FIBER_MATRICES {
            let l = random::laplace_like(&mut rng, n);
            for (i, j) in pairs(n) {
                for t_prime in tree::enumerate_trees(n - 1).expect("small n") {
                    match derivative::fiber_sum_identity_check(&t_prime, &l, i, j) {
                        Ok(r) => result.record(r),
                        Err(err) => result.record_error(derivative::FIBER_IDENTITY, format!("tau'=[{t_prime}]"), &err),
                    }
                }
            }
        }
    }
    result
}

/// Constructed fibers against the brute-force preimages of
/// `contract_ij` over all trees on `n` vertices containing `{i, j}`:
/// same sets, size `2^deg(i)`, and every such tree lands in some fiber.
pub fn check_fiber_partition(cfg: &SuiteConfig) -> CheckResult {
    let mut result = CheckResult::new(FIBER_PARTITION);
    let identity = "fiber(tau') = {tau : contract_ij(tau) = tau'}";
    for n in cfg.dims(FIBER_N.0, FIBER_N.1) {
        for (i, j) in pairs(n) {
            let mut preimages: BTreeMap<LabeledTree, BTreeSet<LabeledTree>> = BTreeMap::new();
            let mut stray = None;
            for tau in tree::enumerate_trees(n).expect("small n") {
                if !tau.contains_edge(i, j) {
                    continue;
                }
                match cfg.mutation.contract_tree(&tau, i, j) {
                    Ok(t_prime) => {
                        preimages.entry(t_prime).or_default().insert(tau);
                    }
                    Err(err) => {
                        stray.get_or_insert_with(|| {
                            format!("n={n}, (i,j)=({i},{j}), tau=[{tau}]: {err}")
                        });
                    }
                }
            }
            if let Some(instance) = stray {
                result.record(VerificationReport {
                    identity: "contract_ij(tau) is a tree on n-1 vertices".into(),
                    left: Scalar::zero(),
                    right: Scalar::one(),
                    equal: false,
                    instance,
                });
            }
            for t_prime in tree::enumerate_trees(n - 1).expect("small n") {
                let built: BTreeSet<LabeledTree> = derivative::contraction_fiber(&t_prime, i, j, n)
                    .expect("consistent sizes")
                    .into_iter()
                    .collect();
                let brute = preimages.remove(&t_prime).unwrap_or_default();
                let expected_size = 1i64 << t_prime.degree(i);
                let mut report = VerificationReport::new(
                    identity,
                    scalar::from_int(brute.len() as i64),
                    scalar::from_int(expected_size),
                    format!("n={n}, (i,j)=({i},{j}), tau'=[{t_prime}]"),
                );
                report.equal &= built == brute && built.len() as i64 == expected_size;
                result.record(report);
            }
            if let Some((t_prime, _)) = preimages.into_iter().next() {
                result.record(VerificationReport {
                    identity: identity.into(),
                    left: Scalar::one(),
                    right: Scalar::zero(),
                    equal: false,
                    instance: format!("n={n}, (i,j)=({i},{j}): image [{t_prime}] is not a tree on n-1 labels"),
                });
            }
        }
    }
    result
}

/// Summing the fiber identity over all `tau'` reproduces `v_ij T = T(L')`.
pub fn check_fiber_consistency(cfg: &SuiteConfig) -> CheckResult {
    let mut result = CheckResult::new(FIBER_CONSISTENCY);
    let mut rng = cfg.rng(7);
    for n in cfg.dims(FIBER_N.0, FIBER_N.1) {
        let l = random::laplace_like(&mut rng, n);
        for (i, j) in pairs(n) {
            let mut left = Scalar::zero();
            let mut right = Scalar::zero();
            for t_prime in tree::enumerate_trees(n - 1).expect("small n") {
                let r = derivative::fiber_sum_identity_check(&t_prime, &l, i, j).expect("consistent");
                left += r.left;
                right += r.right;
            }
            let t = derivative::verify_t_identity(&l, i, j).expect("capped");
            let instance = format!("(i,j)=({i},{j}), {}", matrix_instance(l.as_matrix()));
            result.record(VerificationReport::new(
                "sum of fiber left sides = v_ij T(L)",
                left,
                t.left,
                instance.clone(),
            ));
            result.record(VerificationReport::new(
                "sum of fiber right sides = T(L')",
                right,
                t.right,
                instance,
            ));
        }
    }
    result
}

/// `-v_ij C(L) = C(L')` on random non-symmetric doubly balanced `L`.
pub fn check_nonsymmetric_c_derivative(cfg: &SuiteConfig) -> CheckResult {
    let mut result = CheckResult::new(NONSYMMETRIC_C_DERIVATIVE);
    let mut rng = cfg.rng(8);
    for n in cfg.dims(2, usize::MAX) {
        for _ in 0..cfg.instances {
            let l = random::doubly_balanced(&mut rng, n);
            for (i, j) in pairs(n) {
                match derivative::verify_c_identity(l.as_matrix(), i, j) {
                    Ok(r) => result.record(r),
                    Err(err) => result.record_error(derivative::C_IDENTITY, matrix_instance(l.as_matrix()), &err),
                }
            }
        }
    }
    result
}

pub fn check_nonsymmetric_cofactor_equality(cfg: &SuiteConfig) -> CheckResult {
    let mut result = CheckResult::new(NONSYMMETRIC_COFACTOR_EQUALITY);
    let mut rng = cfg.rng(9);
    for n in cfg.dims(2, usize::MAX) {
        for _ in 0..cfg.instances {
            let l = random::doubly_balanced(&mut rng, n);
            result.record(cofactor_spread(cfg.mutation, l.as_matrix(), "C_ij = C_11 (doubly balanced)"));
        }
    }
    result
}

/// Runs the selected suite. Failures are report content, never errors.
pub fn run_verification_suite(kind: SuiteKind, cfg: &SuiteConfig) -> RunReport {
    let config_bytes = serde_json::to_vec(cfg).expect("config serializes");
    let mut report = RunReport::new(&format!("verify {kind}"), &config_bytes);
    let numeric = matches!(kind, SuiteKind::Numeric | SuiteKind::All);
    let derivatives = matches!(kind, SuiteKind::Derivatives | SuiteKind::All);
    let remark = matches!(kind, SuiteKind::Remark | SuiteKind::All);
    if numeric {
        report.push(check_tree_sum_numeric(cfg));
        report.push(check_cofactor_equality(cfg));
        report.push(check_base_case(cfg, cfg.n_max.max(2)));
        report.push(check_complete_graphs(cfg, cfg.n_max.max(2)));
        report.push(check_random_graphs(cfg));
    }
    if matches!(kind, SuiteKind::Symbolic | SuiteKind::All) {
        let (result, details) = check_tree_sum_symbolic_detailed(cfg);
        for d in &details {
            report.values.insert(
                format!("symbolic_n{}_terms", d.n),
                format!("{}/{}", d.cofactor_terms, d.tree_sum_terms),
            );
        }
        report.push(result);
    }
    if derivatives {
        report.push(check_t_derivative(cfg));
        report.push(check_c_derivative(cfg));
        report.push(check_fiber_sum(cfg));
        report.push(check_fiber_partition(cfg));
        report.push(check_fiber_consistency(cfg));
    }
    if remark {
        report.push(check_nonsymmetric_c_derivative(cfg));
        report.push(check_nonsymmetric_cofactor_equality(cfg));
    }
    report
}
