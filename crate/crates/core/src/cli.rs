//! The `pathcover` command line: argument parsing, dispatch and reports.

use std::fs;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cover::{min_pathcover, solve_pathcover, DpSolution};
use crate::decomposition::{heuristic_decomposition, to_advanced_nice, to_nice, TreeDecomposition};
use crate::error::{Error, Result};
use crate::generators;
use crate::graph::{Graph, PathSystem, Variant};
use crate::oracle::{brute_pathcover, brute_pathpartition_with, OracleBudget};
use crate::partition::{decide_partition, min_partition_cc, min_partition_dp, solve_partition_dp};
use crate::tree::solve_tree_graph;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "pathcover",
    version,
    about = "Path Cover and Path Partition solvers"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format for reports.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Leave wall times out so reports are byte-identical across runs.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Linear-time cover of a tree.
    Tree(GraphArg),
    /// Path Cover by the tree-decomposition DP.
    Cover(DpArgs),
    /// Path Partition by the tree-decomposition DP.
    Partition(DpArgs),
    /// Randomized Path Partition decision (Cut&Count).
    PartitionCc(CcArgs),
    /// Exhaustive ground truth.
    Oracle(OracleArgs),
    /// Emit a generated graph in .gr format.
    Gen(GenArgs),
    /// Run a benchmark suite and print CSV.
    Bench(BenchArgs),
    /// Check a decomposition against a graph.
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
pub struct GraphArg {
    /// Input graph in .gr format.
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Args, Debug)]
pub struct VariantFlags {
    /// Require induced paths.
    #[arg(long)]
    pub induced: bool,
    /// Forbid two paths sharing an edge.
    #[arg(long)]
    pub edge_disjoint: bool,
}

impl VariantFlags {
    fn variant(&self) -> Variant {
        Variant {
            induced: self.induced,
            edge_disjoint: self.edge_disjoint,
        }
    }
}

#[derive(Args, Debug)]
pub struct DpArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Tree decomposition in .td format; the min-degree heuristic otherwise.
    #[arg(long)]
    pub td: Option<PathBuf>,
    /// Fixed budget; without it the optimum is searched for.
    #[arg(long)]
    pub kappa: Option<usize>,
    #[command(flatten)]
    pub variant: VariantFlags,
}

#[derive(Args, Debug)]
pub struct CcArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub td: Option<PathBuf>,
    /// Number of paths to test for; without it the smallest accepted k is reported.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    #[arg(long, env = "PATHCOVER_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Solve Path Partition instead of Path Cover.
    #[arg(long)]
    pub partition: bool,
    #[command(flatten)]
    pub variant: VariantFlags,
    #[arg(long, default_value_t = 12)]
    pub max_vertices: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    RandomTree,
    RandomTw,
    Star,
    Path,
    Cycle,
    Figure2,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Vertex count, leaf count for stars, block count for figure2.
    #[arg(long)]
    pub n: usize,
    /// Width bound for random-tw.
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    /// Probability of keeping each edge of the underlying t-tree.
    #[arg(long, default_value_t = 0.7)]
    pub keep: f64,
    #[arg(long, env = "PATHCOVER_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Also write a decomposition here (random-tw and figure2 only).
    #[arg(long)]
    pub td_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Trees,
    Figure2,
    Empty,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Tree sizes or figure2 parameters; suite defaults otherwise.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    #[arg(long, env = "PATHCOVER_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub td: PathBuf,
}

/// Exit status and the text printed on standard output.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

fn read_graph(p: &FsPath) -> Result<Graph> {
    Graph::from_gr(&fs::read_to_string(p)?)
}

fn read_td(p: &FsPath) -> Result<TreeDecomposition> {
    TreeDecomposition::from_td(&fs::read_to_string(p)?)
}

/// The given decomposition, or the heuristic one; with where it came from.
fn decomposition(g: &Graph, td: &Option<PathBuf>) -> Result<(TreeDecomposition, &'static str)> {
    match td {
        Some(p) => {
            let td = read_td(p)?;
            td.validate(g)?;
            Ok((td, "given"))
        }
        None => Ok((heuristic_decomposition(g), "heuristic")),
    }
}

fn ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

struct Report {
    fields: serde_json::Map<String, Value>,
    code: i32,
}

impl Report {
    fn new(command: &str) -> Self {
        let mut fields = serde_json::Map::new();
        fields.insert("command".into(), json!(command));
        Report { fields, code: 0 }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.fields.insert(key.into(), v);
    }

    fn system(&mut self, s: &PathSystem) {
        self.set("size", json!(s.size()));
        // Reports use the 1-based ids of the .gr format.
        let paths: Vec<Vec<usize>> = s
            .paths
            .iter()
            .map(|p| p.0.iter().map(|v| v + 1).collect())
            .collect();
        self.set("paths", json!(paths));
    }

    fn dp(&mut self, sol: &DpSolution) {
        self.system(&sol.system);
        self.set("stats", json!(sol.stats));
    }
}

/// Parses nothing, runs everything: the whole program minus `main`.
pub fn run(cfg: &RunConfig) -> Outcome {
    match dispatch(cfg) {
        Ok(Dispatched::Report(r)) => Outcome {
            code: r.code,
            report: render(cfg, r),
        },
        Ok(Dispatched::Raw(text)) => Outcome {
            code: 0,
            report: text,
        },
        Err(e) => {
            let code = match e {
                Error::Internal(_) => EXIT_INTERNAL,
                _ => EXIT_INPUT,
            };
            Outcome {
                code,
                report: json!({"error": e.to_string(), "exit_code": code}).to_string(),
            }
        }
    }
}

fn render(cfg: &RunConfig, mut r: Report) -> String {
    if cfg.no_timing {
        r.fields.remove("wall_ms");
    }
    match cfg.format {
        Format::Json => Value::Object(r.fields).to_string(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let keys: Vec<&String> = r.fields.keys().collect();
            w.write_record(&keys).expect("in-memory write");
            w.write_record(r.fields.values().map(|v| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            }))
            .expect("in-memory write");
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
    }
}

enum Dispatched {
    Report(Report),
    Raw(String),
}

fn dispatch(cfg: &RunConfig) -> Result<Dispatched> {
    let start = Instant::now();
    let mut r = match &cfg.command {
        Command::Tree(a) => {
            let g = read_graph(&a.graph)?;
            let sys = solve_tree_graph(&g)?;
            let mut r = Report::new("tree");
            r.system(&sys);
            r
        }
        Command::Cover(a) | Command::Partition(a) => {
            let partition = matches!(cfg.command, Command::Partition(_));
            let g = read_graph(&a.graph)?;
            let (td, source) = decomposition(&g, &a.td)?;
            let variant = a.variant.variant();
            let mut r = Report::new(if partition { "partition" } else { "cover" });
            r.set("width", json!(td.width()));
            r.set("decomposition", json!(source));
            match a.kappa {
                None => {
                    let sol = if partition {
                        min_partition_dp(&g, variant, Some(&td))?
                    } else {
                        min_pathcover(&g, variant, Some(&td))?
                    };
                    r.dp(&sol);
                }
                Some(kappa) => {
                    let ntd = to_nice(&g, &td)?;
                    let sol = if partition {
                        solve_partition_dp(&g, &ntd, kappa, variant)?
                    } else {
                        solve_pathcover(&g, &ntd, kappa, variant)?
                    };
                    r.set("kappa", json!(kappa));
                    match sol {
                        Some(sol) => r.dp(&sol),
                        None => {
                            r.set("feasible", json!(false));
                            r.code = EXIT_INFEASIBLE;
                        }
                    }
                }
            }
            r
        }
        Command::PartitionCc(a) => {
            let g = read_graph(&a.graph)?;
            let (td, source) = decomposition(&g, &a.td)?;
            let antd = to_advanced_nice(&to_nice(&g, &td)?, &g)?;
            let mut r = Report::new("partition-cc");
            r.set("width", json!(td.width()));
            r.set("decomposition", json!(source));
            r.set("seed", json!(a.seed));
            match a.k {
                Some(k) => {
                    let d = decide_partition(&g, &antd, k, a.reps, a.seed)?;
                    for (key, v) in d.to_json().as_object().expect("object") {
                        r.set(key, v.clone());
                    }
                }
                None => {
                    r.set("size", json!(min_partition_cc(&g, &antd, a.reps, a.seed)?));
                    r.set("reps", json!(a.reps));
                }
            }
            r
        }
        Command::Oracle(a) => {
            let g = read_graph(&a.graph)?;
            let budget = OracleBudget::with_max_vertices(a.max_vertices);
            let variant = a.variant.variant();
            let sys = if a.partition {
                brute_pathpartition_with(&g, variant, budget)?
            } else {
                brute_pathcover(&g, variant, budget)?
            };
            let mut r = Report::new("oracle");
            r.set("mode", json!(sys.mode));
            r.system(&sys);
            r
        }
        Command::Gen(a) => return generate(a).map(Dispatched::Raw),
        Command::Bench(a) => return bench(a, cfg.no_timing).map(Dispatched::Raw),
        Command::Validate(a) => {
            let g = read_graph(&a.graph)?;
            let td = read_td(&a.td)?;
            let mut r = Report::new("validate");
            let check = td.check(&g)?;
            r.set("valid", json!(check.is_ok()));
            r.set("width", json!(td.width()));
            if let Err(v) = check {
                r.set("violation", json!(v.to_string()));
                r.code = 1;
            }
            r
        }
    };
    r.set("wall_ms", json!(ms(start)));
    Ok(Dispatched::Report(r))
}

fn generate(a: &GenArgs) -> Result<String> {
    let (g, td) = match a.kind {
        GenKind::RandomTree => (generators::random_tree(a.n, a.seed), None),
        GenKind::RandomTw => {
            let (g, td) = generators::random_tw_graph(a.n, a.t, a.keep, a.seed)?;
            (g, Some(td))
        }
        GenKind::Star => (generators::star(a.n), None),
        GenKind::Path => (generators::path(a.n), None),
        GenKind::Cycle => (generators::cycle(a.n)?, None),
        GenKind::Figure2 => {
            let (g, td, _) = generators::figure2(a.n)?;
            (g, Some(td))
        }
    };
    if let Some(path) = &a.td_out {
        let td = td
            .ok_or_else(|| Error::InvalidParameter("--td-out needs random-tw or figure2".into()))?;
        fs::File::create(path)?.write_all(td.to_td().as_bytes())?;
    }
    Ok(g.to_gr())
}

/// Header of every bench CSV.
pub const BENCH_HEADER: [&str; 7] = [
    "instance",
    "solver",
    "size",
    "time_ms",
    "peak_states",
    "width",
    "nodes",
];

fn bench(a: &BenchArgs, no_timing: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Internal(e.to_string());
    w.write_record(BENCH_HEADER).map_err(csv_err)?;
    let time = |start: Instant| {
        if no_timing {
            String::new()
        } else {
            ms(start).to_string()
        }
    };
    match a.suite {
        Suite::Empty => {}
        Suite::Trees => {
            let sizes = if a.sizes.is_empty() {
                vec![10_000, 100_000, 1_000_000]
            } else {
                a.sizes.clone()
            };
            for n in sizes {
                let g = generators::random_tree(n, a.seed);
                let start = Instant::now();
                let sys = solve_tree_graph(&g)?;
                let row = [
                    format!("tree-{n}"),
                    "tree".into(),
                    sys.size().to_string(),
                    time(start),
                    String::new(),
                    "1".into(),
                    n.to_string(),
                ];
                w.write_record(&row).map_err(csv_err)?;
            }
        }
        Suite::Figure2 => {
            let sizes = if a.sizes.is_empty() {
                vec![2, 3, 4]
            } else {
                a.sizes.clone()
            };
            for s in sizes {
                let (g, td, _) = generators::figure2(s)?;
                for solver in ["cover-dp", "partition-dp"] {
                    let start = Instant::now();
                    let sol = if solver == "cover-dp" {
                        min_pathcover(&g, Variant::PLAIN, Some(&td))?
                    } else {
                        min_partition_dp(&g, Variant::PLAIN, Some(&td))?
                    };
                    let row = [
                        format!("figure2-{s}"),
                        solver.into(),
                        sol.size.to_string(),
                        time(start),
                        sol.stats.peak_states.to_string(),
                        td.width().map_or(String::new(), |w| w.to_string()),
                        sol.stats.nodes.to_string(),
                    ];
                    w.write_record(&row).map_err(csv_err)?;
                }
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}
