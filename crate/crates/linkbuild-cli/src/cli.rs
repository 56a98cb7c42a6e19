//! Command-line surface of the `linkbuild` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linkbuild_core::selectors::Strategy;

#[derive(Debug, Parser)]
#[command(
    name = "linkbuild",
    about = "Pick backlink sources that maximize a target node's PageRank, \
             and measure how badly the cheap strategies can lose",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a selection strategy on a graph from an edge-list file.
    Select(SelectArgs),
    /// Sweep the cycle-vs-sink family: how much PageRank naive selection
    /// forfeits, by formula, by exact system solve, and (where the instance
    /// fits in memory) by direct measurement.
    NaiveBound(NaiveBoundArgs),
    /// Sweep the sink-vs-sink family: the same comparison for greedy
    /// selection on reachability.
    RgreedyBound(RgreedyBoundArgs),
    /// Drill the greedy guarantee on random instances: greedy-on-reachability
    /// must keep at least (1 - alpha^2)(1 - 1/e) of the optimal PageRank.
    Guarantee(GuaranteeArgs),
    /// Search for a small graph where a backlink gains more when added late
    /// than early, certifying the objective is not submodular.
    Witness(WitnessArgs),
    /// Materialize a family instance to an edge-list file plus a role map.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputOpts {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SurferOpts {
    /// Link-following probability of the surfer model.
    #[arg(long, default_value_t = 0.85)]
    pub alpha: f64,
    /// Convergence tolerance of the iterative solvers.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Edge-list file: a node-count line, then one `u v` pair per line.
    pub graph: PathBuf,
    /// Node whose PageRank the selection maximizes.
    #[arg(long, default_value_t = 0)]
    pub target: usize,
    /// Number of backlink sources to pick.
    #[arg(long, short)]
    pub k: usize,
    /// naive, rgreedy, pigreedy, or exhaustive.
    #[arg(long, value_parser = parse_strategy)]
    pub strategy: Strategy,
    #[command(flatten)]
    pub surfer: SurferOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Args)]
pub struct NaiveBoundArgs {
    /// Decoy tail lengths to sweep, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "5,20,80,200")]
    pub u: Vec<usize>,
    /// Backlink budgets: one value, or one per entry of --u.
    #[arg(long, value_delimiter = ',', default_value = "2,3,10,50")]
    pub k: Vec<usize>,
    /// Baseline margin by which decoys out-score prizes.
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[command(flatten)]
    pub surfer: SurferOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Args)]
pub struct RgreedyBoundArgs {
    /// Prize tail lengths to sweep, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,5,12,60,500")]
    pub c: Vec<usize>,
    /// Backlink budgets: one value, or one per entry of --c.
    #[arg(long, value_delimiter = ',', default_value = "5")]
    pub k: Vec<usize>,
    #[command(flatten)]
    pub surfer: SurferOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Args)]
pub struct GuaranteeArgs {
    /// Random instances to check.
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    /// Largest node count sampled.
    #[arg(long = "max-n", default_value_t = 12)]
    pub max_n: usize,
    /// Largest backlink budget sampled.
    #[arg(long = "max-k", default_value_t = 3)]
    pub max_k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub surfer: SurferOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    /// Largest graph the search may return.
    #[arg(long = "max-n", default_value_t = 12)]
    pub max_n: usize,
    /// Smallest late-minus-early gain difference that counts.
    #[arg(long = "min-margin", default_value_t = 1e-6)]
    pub min_margin: f64,
    /// Random graphs to try beyond the deterministic construction.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub surfer: SurferOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    CycleVsSink,
    SinkVsSink,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Which family to build.
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Backlink budget (decoy and prize group size).
    #[arg(long, short)]
    pub k: usize,
    /// Decoy tail length (cycle-vs-sink only).
    #[arg(long)]
    pub u: Option<usize>,
    /// Prize tail length (sink-vs-sink only).
    #[arg(long)]
    pub c: Option<usize>,
    /// Baseline score margin (cycle-vs-sink only).
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    /// Where to write the edge list.
    #[arg(long)]
    pub graph_out: PathBuf,
    /// Where to write the `id role` map; defaults to the graph path with a
    /// `.roles` extension.
    #[arg(long)]
    pub roles_out: Option<PathBuf>,
    #[command(flatten)]
    pub surfer: SurferOpts,
    #[command(flatten)]
    pub output: OutputOpts,
}
