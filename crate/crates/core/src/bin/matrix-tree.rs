use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use matrix_tree::derivative;
use matrix_tree::graph;
use matrix_tree::linalg::{DoublyBalancedMatrix, SquareMatrix};
use matrix_tree::scalar;
use matrix_tree::suite::{self, Mutation, RunReport, SuiteConfig, SuiteKind};
use matrix_tree::symbolic;
use matrix_tree::tree;

#[derive(Parser)]
#[command(name = "matrix-tree", version, about = "Exact Matrix-Tree theorem toolkit")]
struct Cli {
    /// Emit the JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Record wall-clock time in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count spanning trees of an edge-list graph via |C(A - D)|.
    Count { file: PathBuf },
    /// List every labeled tree on {1..n}.
    Enumerate {
        n: usize,
        #[arg(long, default_value_t = tree::DEFAULT_TREE_CAP)]
        cap: usize,
    },
    /// Sum of tree amplitudes T(L) for a matrix file.
    TreeSum {
        file: PathBuf,
        #[arg(long, default_value_t = tree::DEFAULT_TREE_CAP)]
        cap: usize,
    },
    /// Common cofactor C(L) of a Laplace-like or doubly balanced matrix,
    /// or one cofactor C_ij of any matrix with --at.
    Cofactor {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        at: Option<Vec<usize>>,
    },
    /// Contraction L' = M_jj(L+) along {i, j}, printed as a matrix file.
    Contract { file: PathBuf, i: usize, j: usize },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[command(flatten)]
        opts: VerifyOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Numeric,
    Symbolic,
    Derivatives,
    Remark,
    All,
}

impl From<SuiteArg> for SuiteKind {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Numeric => SuiteKind::Numeric,
            SuiteArg::Symbolic => SuiteKind::Symbolic,
            SuiteArg::Derivatives => SuiteKind::Derivatives,
            SuiteArg::Remark => SuiteKind::Remark,
            SuiteArg::All => SuiteKind::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationArg {
    CofactorSignFlip,
    ContractTreeNoRelabel,
}

#[derive(Args)]
struct VerifyOpts {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    instances: Option<usize>,
    /// Inject a known defect; the suite is then expected to fail.
    #[arg(long, value_enum)]
    mutate: Option<MutationArg>,
}

impl VerifyOpts {
    fn config(&self, kind: SuiteKind) -> SuiteConfig {
        let mut cfg = SuiteConfig::default();
        if kind == SuiteKind::Numeric {
            cfg.n_max = 7;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(n) = self.n_min {
            cfg.n_min = n;
        }
        if let Some(n) = self.n_max {
            if kind == SuiteKind::Symbolic {
                cfg.symbolic_n_max = n;
            } else {
                cfg.n_max = n;
            }
        }
        if let Some(k) = self.instances {
            cfg.instances = k;
        }
        cfg.mutation = match self.mutate {
            None => Mutation::None,
            Some(MutationArg::CofactorSignFlip) => Mutation::CofactorSignFlip,
            Some(MutationArg::ContractTreeNoRelabel) => Mutation::ContractTreeNoRelabel,
        };
        cfg
    }
}

const EXIT_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(Output { mut report, text }) => {
            if cli.timing {
                report.timing_ms = Some(start.elapsed().as_millis() as u64);
            }
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{text}");
                for w in &report.warnings {
                    eprintln!("warning: {w}");
                }
                if let Some(ms) = report.timing_ms {
                    println!("elapsed: {ms} ms");
                }
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

struct Output {
    report: RunReport,
    text: String,
}

fn run(cli: &Cli) -> Result<Output, InputError> {
    match &cli.command {
        Command::Count { file } => {
            let text = read(file)?;
            let g = graph::parse_graph(&text)?;
            let count = graph::count_spanning_trees(&g);
            let mut report = RunReport::new("count", text.as_bytes());
            report.values.insert("cofactor".into(), scalar::format(&count.cofactor));
            report.values.insert("tree_count".into(), scalar::format(&count.tree_count));
            report.values.insert("connected".into(), count.connected.to_string());
            if !count.connected {
                report.warnings.push("graph is disconnected; no spanning tree exists".into());
            }
            let text = format!("cofactor: {}\ntree_count: {}\n", count.cofactor, count.tree_count);
            Ok(Output { report, text })
        }
        Command::Enumerate { n, cap } => {
            let trees: Vec<_> = tree::enumerate_trees_with_cap(*n, *cap)?.collect();
            let mut report = RunReport::new("enumerate", n.to_string().as_bytes());
            report.values.insert("count".into(), trees.len().to_string());
            let mut text = String::new();
            for (k, t) in trees.iter().enumerate() {
                report.values.insert(format!("tree_{k:07}"), t.to_string());
                text.push_str(&t.to_string());
                text.push('\n');
            }
            Ok(Output { report, text })
        }
        Command::TreeSum { file, cap } => {
            let text = read(file)?;
            let m = SquareMatrix::parse(&text)?;
            let t = tree::tree_sum_with_cap(&m, *cap)?;
            let mut report = RunReport::new("tree-sum", text.as_bytes());
            report.values.insert("tree_sum".into(), scalar::format(&t));
            Ok(Output { report, text: format!("{t}\n") })
        }
        Command::Cofactor { file, at } => {
            let text = read(file)?;
            let m = SquareMatrix::parse(&text)?;
            let mut report = RunReport::new("cofactor", text.as_bytes());
            let value = match at.as_deref() {
                Some(&[i, j]) => {
                    let c = m.cofactor(i, j)?;
                    report.values.insert(format!("cofactor_{i}_{j}"), scalar::format(&c));
                    c
                }
                _ => {
                    // Laplace-like matrices are doubly balanced.
                    let balanced = DoublyBalancedMatrix::new(m)?;
                    let c = balanced.common_cofactor_checked()?;
                    report.values.insert("common_cofactor".into(), scalar::format(&c));
                    c
                }
            };
            Ok(Output { report, text: format!("{value}\n") })
        }
        Command::Contract { file, i, j } => {
            let text = read(file)?;
            let m = SquareMatrix::parse(&text)?;
            let contracted = derivative::contract_matrix(&m, *i, *j)?;
            let mut report = RunReport::new("contract", text.as_bytes());
            report.values.insert("matrix".into(), contracted.to_string());
            Ok(Output { report, text: contracted.to_string() })
        }
        Command::Verify { suite: which, opts } => {
            let kind = SuiteKind::from(*which);
            let cfg = opts.config(kind);
            if kind == SuiteKind::Symbolic && cfg.symbolic_n_max > symbolic::DEFAULT_SYMBOLIC_CAP {
                eprintln!(
                    "warning: symbolic expansion beyond n = {} needs a lot of memory",
                    symbolic::DEFAULT_SYMBOLIC_CAP
                );
            }
            let report = suite::run_verification_suite(kind, &cfg);
            let mut text = String::new();
            for r in &report.results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                text.push_str(&format!("{status} {} ({} instances)\n", r.name, r.instances));
                if let Some(w) = &r.witness {
                    text.push_str(&format!("  witness: {w}\n"));
                }
            }
            Ok(Output { report, text })
        }
    }
}
