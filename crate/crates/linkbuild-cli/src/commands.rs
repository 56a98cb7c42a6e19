//! One function per subcommand. Each returns the process exit code: 0 for
//! success, 3 when a checked bound is violated; data problems surface as
//! errors and exit 2.

use anyhow::{bail, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use linkbuild_core::closed_form::{
    greedy_guarantee_factor, naive_ratio, naive_ratio_bound, naive_ratio_limit,
    reach_greedy_ratio, reach_greedy_ratio_limit, Family, FamilySystem, Scenario,
};
use linkbuild_core::families::{
    cycle_vs_sink, plan_cycle_vs_sink, plan_sink_vs_sink, sink_vs_sink, FamilyInstance,
    MAX_MATERIALIZED_EDGES,
};
use linkbuild_core::graph::{load_edge_list, random_digraph, save_edge_list};
use linkbuild_core::selectors::{
    candidate_set, exhaustive_select, reach_greedy_select, select,
};
use linkbuild_core::surfer::{pagerank, SurferParams};
use linkbuild_core::witness::{find_witness, WitnessSearchConfig};
use linkbuild_core::DirectedGraph;

use crate::cli::{
    Cli, Command, FamilyArg, Format, GenerateArgs, GuaranteeArgs, NaiveBoundArgs, OutputOpts,
    RgreedyBoundArgs, SelectArgs, SurferOpts, WitnessArgs,
};
use crate::report::{ids, opt_sci, sci, write_csv, write_json, CsvRow};

/// Explicit measurement is skipped above this edge count; the closed forms
/// stay exact at any size.
const EXPLICIT_EDGE_CAP: usize = 200_000;

impl SurferOpts {
    fn params(&self) -> SurferParams {
        SurferParams { alpha: self.alpha, tol: self.tol, ..SurferParams::default() }
    }
}

fn emit<R: CsvRow, J: Serialize>(
    output: &OutputOpts,
    rows: &[R],
    json: &J,
) -> anyhow::Result<()> {
    let mut out = crate::report::open_out(output.out.as_deref())?;
    match output.format {
        Format::Csv => write_csv(rows, &mut out),
        Format::Json => write_json(json, &mut out),
    }
}

pub fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Select(args) => run_select(args),
        Command::NaiveBound(args) => run_naive_bound(args),
        Command::RgreedyBound(args) => run_rgreedy_bound(args),
        Command::Guarantee(args) => run_guarantee(args),
        Command::Witness(args) => run_witness(args),
        Command::Generate(args) => run_generate(args),
    }
}

#[derive(Serialize)]
struct TraceJson {
    chosen: usize,
    objective: f64,
}

#[derive(Serialize)]
struct SelectReport {
    strategy: String,
    target: usize,
    k: usize,
    alpha: f64,
    sources: Vec<usize>,
    final_pi_x: f64,
    trace: Vec<TraceJson>,
}

struct SelectCsv {
    strategy: String,
    target: usize,
    k: usize,
    alpha: f64,
    step: usize,
    chosen: usize,
    objective: f64,
    final_pi_x: f64,
}

impl CsvRow for SelectCsv {
    fn headers() -> &'static [&'static str] {
        &["strategy", "target", "k", "alpha", "step", "chosen", "objective", "final_pi_x"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.strategy.clone(),
            self.target.to_string(),
            self.k.to_string(),
            sci(self.alpha),
            self.step.to_string(),
            self.chosen.to_string(),
            sci(self.objective),
            sci(self.final_pi_x),
        ]
    }
}

fn run_select(args: SelectArgs) -> anyhow::Result<i32> {
    let graph = load_edge_list(&args.graph)
        .with_context(|| format!("cannot load {}", args.graph.display()))?;
    let params = args.surfer.params();
    let result = select(&graph, args.target, args.k, args.strategy, &params)?;
    let rows: Vec<SelectCsv> = result
        .trace
        .iter()
        .enumerate()
        .map(|(step, t)| SelectCsv {
            strategy: result.strategy.name().to_string(),
            target: args.target,
            k: args.k,
            alpha: params.alpha,
            step,
            chosen: t.chosen,
            objective: t.objective,
            final_pi_x: result.final_pi_x,
        })
        .collect();
    let json = SelectReport {
        strategy: result.strategy.name().to_string(),
        target: args.target,
        k: args.k,
        alpha: params.alpha,
        sources: result.sources.clone(),
        final_pi_x: result.final_pi_x,
        trace: result
            .trace
            .iter()
            .map(|t| TraceJson { chosen: t.chosen, objective: t.objective })
            .collect(),
    };
    emit(&args.output, &rows, &json)?;
    Ok(0)
}

/// Pair a sweep list with budgets: a single budget broadcasts, otherwise the
/// lists zip position by position.
fn pair_lists(sweep: &[usize], k: &[usize]) -> anyhow::Result<Vec<(usize, usize)>> {
    if k.len() == 1 {
        return Ok(sweep.iter().map(|&s| (s, k[0])).collect());
    }
    if k.len() != sweep.len() {
        bail!(
            "expected 1 or {} budgets to pair with the sweep list, got {}",
            sweep.len(),
            k.len()
        );
    }
    Ok(sweep.iter().copied().zip(k.iter().copied()).collect())
}

/// Measured prize-over-decoy PageRank ratio on the explicit graph, if the
/// instance is small enough to build.
fn explicit_ratio(instance: &FamilyInstance, params: &SurferParams) -> anyhow::Result<f64> {
    let decoy = instance.scenario_graph(Scenario::DecoyLinked)?;
    let prize = instance.scenario_graph(Scenario::PrizeLinked)?;
    Ok(pagerank(&prize, params)?.get(instance.target)
        / pagerank(&decoy, params)?.get(instance.target))
}

#[derive(Serialize)]
struct NaiveBoundRow {
    alpha: f64,
    k: usize,
    u: usize,
    delta: f64,
    prize_tail: usize,
    lambda: f64,
    delta_realized: f64,
    /// Closed-form loss ratio in the infinite-clique limit.
    ratio_formula: f64,
    /// The same limit from the role system solve; agrees with the formula.
    ratio_limit_system: f64,
    /// Exact ratio of the finite instance with its clique of u^2.
    ratio_finite_system: f64,
    /// PageRank-measured ratio on the explicit graph; null when the
    /// instance is too large to materialize.
    ratio_explicit: Option<f64>,
    /// Large-size limit at this margin.
    limit_at_delta: f64,
    /// Supremum of the loss ratio over the whole family.
    supremum: f64,
}

impl CsvRow for NaiveBoundRow {
    fn headers() -> &'static [&'static str] {
        &[
            "alpha",
            "k",
            "u",
            "delta",
            "prize_tail",
            "lambda",
            "delta_realized",
            "ratio_formula",
            "ratio_limit_system",
            "ratio_finite_system",
            "ratio_explicit",
            "limit_at_delta",
            "supremum",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            sci(self.alpha),
            self.k.to_string(),
            self.u.to_string(),
            sci(self.delta),
            self.prize_tail.to_string(),
            sci(self.lambda),
            sci(self.delta_realized),
            sci(self.ratio_formula),
            sci(self.ratio_limit_system),
            sci(self.ratio_finite_system),
            opt_sci(self.ratio_explicit),
            sci(self.limit_at_delta),
            sci(self.supremum),
        ]
    }
}

#[derive(Serialize)]
struct NaiveBoundReport {
    alpha: f64,
    delta: f64,
    rows: Vec<NaiveBoundRow>,
}

fn run_naive_bound(args: NaiveBoundArgs) -> anyhow::Result<i32> {
    let params = args.surfer.params();
    let alpha = params.alpha;
    let mut rows = Vec::new();
    for (u, k) in pair_lists(&args.u, &args.k)? {
        let plan = plan_cycle_vs_sink(alpha, k, u, args.delta)?;
        let prize_tail = plan.system.prize_tail;
        let limit_system = FamilySystem { clique: None, ..plan.system };
        let ratio_explicit = if plan.system.edge_count().unwrap() <= EXPLICIT_EDGE_CAP {
            let instance = cycle_vs_sink(alpha, k, u, args.delta)?;
            Some(explicit_ratio(&instance, &params)?)
        } else {
            None
        };
        rows.push(NaiveBoundRow {
            alpha,
            k,
            u,
            delta: args.delta,
            prize_tail,
            lambda: plan.lambda,
            delta_realized: plan.delta_realized,
            ratio_formula: naive_ratio(alpha, k, prize_tail, u),
            ratio_limit_system: limit_system.gap_ratio()?,
            ratio_finite_system: plan.system.gap_ratio()?,
            ratio_explicit,
            limit_at_delta: naive_ratio_limit(alpha, args.delta),
            supremum: naive_ratio_bound(alpha),
        });
    }
    let json = NaiveBoundReport { alpha, delta: args.delta, rows };
    emit(&args.output, &json.rows, &json)?;
    Ok(0)
}

#[derive(Serialize)]
struct RgreedyBoundRow {
    alpha: f64,
    k: usize,
    c: usize,
    decoy_tail: usize,
    prize_tail: usize,
    clique: usize,
    /// Closed-form loss ratio of the finite instance.
    ratio_formula: f64,
    /// The same instance from the role system solve; agrees with the formula.
    ratio_system: f64,
    /// PageRank-measured ratio on the explicit graph; null when the
    /// instance is too large to materialize.
    ratio_explicit: Option<f64>,
    /// Supremum as the tail scale grows.
    limit: f64,
}

impl CsvRow for RgreedyBoundRow {
    fn headers() -> &'static [&'static str] {
        &[
            "alpha",
            "k",
            "c",
            "decoy_tail",
            "prize_tail",
            "clique",
            "ratio_formula",
            "ratio_system",
            "ratio_explicit",
            "limit",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            sci(self.alpha),
            self.k.to_string(),
            self.c.to_string(),
            self.decoy_tail.to_string(),
            self.prize_tail.to_string(),
            self.clique.to_string(),
            sci(self.ratio_formula),
            sci(self.ratio_system),
            opt_sci(self.ratio_explicit),
            sci(self.limit),
        ]
    }
}

#[derive(Serialize)]
struct RgreedyBoundReport {
    alpha: f64,
    rows: Vec<RgreedyBoundRow>,
}

fn run_rgreedy_bound(args: RgreedyBoundArgs) -> anyhow::Result<i32> {
    let params = args.surfer.params();
    let alpha = params.alpha;
    let mut rows = Vec::new();
    for (c, k) in pair_lists(&args.c, &args.k)? {
        let system = plan_sink_vs_sink(alpha, k, c)?;
        let ratio_explicit = if system.edge_count().unwrap() <= EXPLICIT_EDGE_CAP {
            let instance = sink_vs_sink(alpha, k, c)?;
            Some(explicit_ratio(&instance, &params)?)
        } else {
            None
        };
        rows.push(RgreedyBoundRow {
            alpha,
            k,
            c,
            decoy_tail: system.decoy_tail,
            prize_tail: system.prize_tail,
            clique: system.clique.unwrap(),
            ratio_formula: reach_greedy_ratio(alpha, k, c),
            ratio_system: system.gap_ratio()?,
            ratio_explicit,
            limit: reach_greedy_ratio_limit(alpha),
        });
    }
    let json = RgreedyBoundReport { alpha, rows };
    emit(&args.output, &json.rows, &json)?;
    Ok(0)
}

#[derive(Clone, Serialize)]
struct GuaranteeRow {
    instance: usize,
    n: usize,
    p: f64,
    k: usize,
    target: usize,
    greedy_pi: f64,
    best_pi: f64,
    ratio: f64,
    bound: f64,
    ok: bool,
}

impl CsvRow for GuaranteeRow {
    fn headers() -> &'static [&'static str] {
        &["instance", "n", "p", "k", "target", "greedy_pi", "best_pi", "ratio", "bound", "ok"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.instance.to_string(),
            self.n.to_string(),
            sci(self.p),
            self.k.to_string(),
            self.target.to_string(),
            sci(self.greedy_pi),
            sci(self.best_pi),
            sci(self.ratio),
            sci(self.bound),
            self.ok.to_string(),
        ]
    }
}

#[derive(Serialize)]
struct GuaranteeReport {
    alpha: f64,
    bound: f64,
    instances: usize,
    min_ratio: f64,
    violations: usize,
    rows: Vec<GuaranteeRow>,
}

fn run_guarantee(args: GuaranteeArgs) -> anyhow::Result<i32> {
    if args.max_n < 5 {
        bail!("--max-n must be at least 5");
    }
    if args.max_k == 0 {
        bail!("--max-k must be at least 1");
    }
    let params = args.surfer.params();
    let bound = greedy_guarantee_factor(params.alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut rows = Vec::new();
    let mut violating_graphs: Vec<(DirectedGraph, GuaranteeRow)> = Vec::new();
    let mut produced = 0;
    while produced < args.instances {
        let n = 5 + rng.gen_range(0..=args.max_n - 5);
        let p = [0.1, 0.3, 0.5][produced % 3];
        let graph = random_digraph(n, p, &mut rng);
        let target = rng.gen_range(0..n);
        let k = 1 + rng.gen_range(0..args.max_k);
        if candidate_set(&graph, target).len() < k {
            continue;
        }
        let greedy = reach_greedy_select(&graph, target, k, &params)?;
        let best = exhaustive_select(&graph, target, k, &params)?;
        let ratio = greedy.final_pi_x / best.final_pi_x;
        let ok = ratio >= bound - 1e-12;
        let row = GuaranteeRow {
            instance: produced,
            n,
            p,
            k,
            target,
            greedy_pi: greedy.final_pi_x,
            best_pi: best.final_pi_x,
            ratio,
            bound,
            ok,
        };
        if !ok {
            violating_graphs.push((graph.clone(), row.clone()));
        }
        rows.push(row);
        produced += 1;
    }
    let min_ratio = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let json = GuaranteeReport {
        alpha: params.alpha,
        bound,
        instances: args.instances,
        min_ratio,
        violations: violating_graphs.len(),
        rows,
    };
    emit(&args.output, &json.rows, &json)?;
    for (graph, row) in &violating_graphs {
        eprintln!(
            "guarantee violated: instance {} (n={}, k={}, target={}) ratio {} < bound {}",
            row.instance, row.n, row.k, row.target, row.ratio, row.bound
        );
        eprint!("{}", linkbuild_core::graph::edge_list_to_string(graph));
    }
    Ok(if violating_graphs.is_empty() { 0 } else { 3 })
}

#[derive(Serialize)]
struct WitnessReport {
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<usize>,
    small_set: Vec<usize>,
    large_set: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extra: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pi_small: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pi_small_extra: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pi_large: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pi_large_extra: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    margin: Option<f64>,
    edges: Vec<(usize, usize)>,
}

struct WitnessCsv<'a>(&'a WitnessReport);

impl CsvRow for WitnessCsv<'_> {
    fn headers() -> &'static [&'static str] {
        &[
            "found",
            "n",
            "target",
            "extra",
            "small_set",
            "large_set",
            "margin",
            "pi_small",
            "pi_small_extra",
            "pi_large",
            "pi_large_extra",
            "edges",
        ]
    }

    fn fields(&self) -> Vec<String> {
        let r = self.0;
        vec![
            r.found.to_string(),
            r.n.map(|v| v.to_string()).unwrap_or_default(),
            r.target.map(|v| v.to_string()).unwrap_or_default(),
            r.extra.map(|v| v.to_string()).unwrap_or_default(),
            ids(&r.small_set),
            ids(&r.large_set),
            opt_sci(r.margin),
            opt_sci(r.pi_small),
            opt_sci(r.pi_small_extra),
            opt_sci(r.pi_large),
            opt_sci(r.pi_large_extra),
            r.edges.iter().map(|(u, v)| format!("{u}->{v}")).collect::<Vec<_>>().join(" "),
        ]
    }
}

fn run_witness(args: WitnessArgs) -> anyhow::Result<i32> {
    let config = WitnessSearchConfig {
        params: args.surfer.params(),
        max_nodes: args.max_n,
        min_margin: args.min_margin,
        random_trials: args.trials,
        seed: args.seed,
    };
    let report = match find_witness(&config)? {
        Some(w) => {
            w.verify(&config.params)?;
            WitnessReport {
                found: true,
                n: Some(w.graph.node_count()),
                target: Some(w.target),
                small_set: w.small_set.clone(),
                large_set: w.large_set.clone(),
                extra: Some(w.extra),
                pi_small: Some(w.pi_small),
                pi_small_extra: Some(w.pi_small_extra),
                pi_large: Some(w.pi_large),
                pi_large_extra: Some(w.pi_large_extra),
                margin: Some(w.margin()),
                edges: w.graph.edges().collect(),
            }
        }
        None => WitnessReport {
            found: false,
            n: None,
            target: None,
            small_set: Vec::new(),
            large_set: Vec::new(),
            extra: None,
            pi_small: None,
            pi_small_extra: None,
            pi_large: None,
            pi_large_extra: None,
            margin: None,
            edges: Vec::new(),
        },
    };
    emit(&args.output, &[WitnessCsv(&report)], &report)?;
    Ok(0)
}

#[derive(Serialize)]
struct GenerateReport {
    family: String,
    n: usize,
    edges: usize,
    k: usize,
    decoy_tail: usize,
    prize_tail: usize,
    clique: usize,
    gap_ratio: f64,
    graph_path: String,
    roles_path: String,
}

impl CsvRow for GenerateReport {
    fn headers() -> &'static [&'static str] {
        &[
            "family",
            "n",
            "edges",
            "k",
            "decoy_tail",
            "prize_tail",
            "clique",
            "gap_ratio",
            "graph_path",
            "roles_path",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.family.clone(),
            self.n.to_string(),
            self.edges.to_string(),
            self.k.to_string(),
            self.decoy_tail.to_string(),
            self.prize_tail.to_string(),
            self.clique.to_string(),
            sci(self.gap_ratio),
            self.graph_path.clone(),
            self.roles_path.clone(),
        ]
    }
}

fn run_generate(args: GenerateArgs) -> anyhow::Result<i32> {
    let alpha = args.surfer.alpha;
    let instance = match args.family {
        FamilyArg::CycleVsSink => {
            let u = args.u.context("--family cycle-vs-sink needs --u")?;
            cycle_vs_sink(alpha, args.k, u, args.delta)?
        }
        FamilyArg::SinkVsSink => {
            let c = args.c.context("--family sink-vs-sink needs --c")?;
            sink_vs_sink(alpha, args.k, c)?
        }
    };
    debug_assert!(instance.graph.edge_count() <= MAX_MATERIALIZED_EDGES);
    save_edge_list(&instance.graph, &args.graph_out)
        .with_context(|| format!("cannot write {}", args.graph_out.display()))?;
    let roles_path = args
        .roles_out
        .unwrap_or_else(|| args.graph_out.with_extension("roles"));
    std::fs::write(&roles_path, instance.roles_to_string())
        .with_context(|| format!("cannot write {}", roles_path.display()))?;
    let family_name = match instance.system.family {
        Family::CycleVsSink => "cycle_vs_sink",
        Family::SinkVsSink => "sink_vs_sink",
    };
    let report = GenerateReport {
        family: family_name.to_string(),
        n: instance.graph.node_count(),
        edges: instance.graph.edge_count(),
        k: instance.system.k,
        decoy_tail: instance.system.decoy_tail,
        prize_tail: instance.system.prize_tail,
        clique: instance.system.clique.unwrap(),
        gap_ratio: instance.system.gap_ratio()?,
        graph_path: args.graph_out.display().to_string(),
        roles_path: roles_path.display().to_string(),
    };
    emit(&args.output, std::slice::from_ref(&report), &report)?;
    Ok(0)
}
