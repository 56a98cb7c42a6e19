//! Generators for the two adversarial benchmark families.
//!
//! Both produce graphs with the same cast, laid out in a fixed id order so
//! tests and tooling can address roles directly: the target is node 0,
//! decoys are `1..=k`, prizes are `k+1..=2k`, then decoy tails (grouped per
//! decoy), prize tails, and finally the clique. The target always links to
//! the `k` prize nodes; nobody links to the target, so decoys and prizes are
//! all valid backlink candidates.
//!
//! * [`cycle_vs_sink`]: decoys form a directed `k`-cycle and soak up rank
//!   from tails of length `u`; prizes are sinks with tails sized so the
//!   naive score of a decoy stays ahead of a prize's by the margin `delta`.
//!   Naive selection takes the decoys and forfeits most of the achievable
//!   PageRank.
//! * [`sink_vs_sink`]: decoys and prizes are all sinks, decoy tails one
//!   longer than prize tails. Each greedy-by-reachability step sees a bigger
//!   one-step gain in a decoy, but only prize links close the
//!   target-to-prize loop that compounds rank, so greedy loses by a factor
//!   approaching `1 / (1 - alpha^2)`.
//!
//! The per-role PageRank of any instance, in any of the three link
//! scenarios, comes from [`FamilySystem::solve`] without touching the
//! explicit graph; the builders here exist to run real selection strategies
//! against instances small enough to materialize.

use crate::closed_form::{Family, FamilySystem, RolePageRanks, Scenario};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};

/// Hard ceiling on explicit instance size; the clique alone needs
/// `t_i * (t_i - 1)` edges, so large parameter points must stay symbolic.
pub const MAX_MATERIALIZED_EDGES: usize = 5_000_000;

/// What a node does in a family instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Target,
    Decoy,
    Prize,
    Tail,
    Clique,
}

impl Role {
    pub fn name(&self) -> &'static str {
        match self {
            Role::Target => "target",
            Role::Decoy => "decoy",
            Role::Prize => "prize",
            Role::Tail => "tail",
            Role::Clique => "clique",
        }
    }
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "target" => Ok(Role::Target),
            "decoy" => Ok(Role::Decoy),
            "prize" => Ok(Role::Prize),
            "tail" => Ok(Role::Tail),
            "clique" => Ok(Role::Clique),
            other => Err(Error::InvalidParameter(format!("unknown role {other:?}"))),
        }
    }
}

/// A materialized family instance with its role map and exact solver.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyInstance {
    pub graph: DirectedGraph,
    pub target: NodeId,
    pub system: FamilySystem,
    pub decoys: Vec<NodeId>,
    pub prizes: Vec<NodeId>,
    /// Tail-length interpolation weight used to hit the score margin;
    /// cycle-vs-sink only.
    pub lambda: Option<f64>,
    /// Margin actually achieved after rounding tail lengths to integers;
    /// cycle-vs-sink only.
    pub delta_realized: Option<f64>,
}

impl FamilyInstance {
    /// Exact per-role PageRank for this instance under a link scenario.
    pub fn expected(&self, scenario: Scenario) -> Result<RolePageRanks> {
        self.system.solve(scenario)
    }

    /// The instance graph with the scenario's backlinks in place.
    pub fn scenario_graph(&self, scenario: Scenario) -> Result<DirectedGraph> {
        match scenario {
            Scenario::Baseline => Ok(self.graph.clone()),
            Scenario::DecoyLinked => self.graph.add_backlinks(&self.decoys, self.target),
            Scenario::PrizeLinked => self.graph.add_backlinks(&self.prizes, self.target),
        }
    }

    pub fn role_of(&self, i: NodeId) -> Role {
        let k = self.system.k;
        let tails = k * (self.system.decoy_tail + self.system.prize_tail);
        if i == self.target {
            Role::Target
        } else if i <= k {
            Role::Decoy
        } else if i <= 2 * k {
            Role::Prize
        } else if i <= 2 * k + tails {
            Role::Tail
        } else {
            Role::Clique
        }
    }

    pub fn roles(&self) -> Vec<Role> {
        (0..self.graph.node_count()).map(|i| self.role_of(i)).collect()
    }

    /// Role sidecar text: one `id role` line per node.
    pub fn roles_to_string(&self) -> String {
        let mut out = String::new();
        for (i, role) in self.roles().iter().enumerate() {
            out.push_str(&format!("{i} {role}\n"));
        }
        out
    }
}

/// Parse a role sidecar produced by [`FamilyInstance::roles_to_string`].
pub fn parse_roles(text: &str) -> Result<Vec<Role>> {
    let mut pairs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (id, role) = match (it.next(), it.next(), it.next()) {
            (Some(id), Some(role), None) => (id, role),
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected 'id role', got {line:?}"),
                })
            }
        };
        let id: usize = id.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            message: format!("bad node id {id:?}"),
        })?;
        let role: Role = role.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            message: format!("bad role {role:?}"),
        })?;
        pairs.push((id, role));
    }
    pairs.sort_by_key(|&(id, _)| id);
    for (expected, &(id, _)) in pairs.iter().enumerate() {
        if id != expected {
            return Err(Error::Parse {
                line: 0,
                message: format!("role ids are not contiguous at {id}"),
            });
        }
    }
    Ok(pairs.into_iter().map(|(_, role)| role).collect())
}

fn materialize(system: &FamilySystem) -> Result<FamilyInstance> {
    system.validate()?;
    let k = system.k;
    let t_d = system.decoy_tail;
    let t_p = system.prize_tail;
    let t_i = system.clique.expect("materialize requires a finite clique");
    let edge_count = system.edge_count().expect("finite system");
    if edge_count > MAX_MATERIALIZED_EDGES {
        return Err(Error::Construction(format!(
            "instance needs {edge_count} edges, cap is {MAX_MATERIALIZED_EDGES}; \
             evaluate it symbolically instead"
        )));
    }
    let n = system.node_count().expect("finite system");
    let decoys: Vec<NodeId> = (1..=k).collect();
    let prizes: Vec<NodeId> = (k + 1..=2 * k).collect();
    let mut edges = Vec::with_capacity(edge_count);
    for &p in &prizes {
        edges.push((0, p));
    }
    if system.family == Family::CycleVsSink {
        for i in 0..k {
            edges.push((decoys[i], decoys[(i + 1) % k]));
        }
    }
    let mut next_id = 2 * k + 1;
    for &d in &decoys {
        for _ in 0..t_d {
            edges.push((next_id, d));
            next_id += 1;
        }
    }
    for &p in &prizes {
        for _ in 0..t_p {
            edges.push((next_id, p));
            next_id += 1;
        }
    }
    let clique: Vec<NodeId> = (next_id..next_id + t_i).collect();
    for &u in &clique {
        for &v in &clique {
            if u != v {
                edges.push((u, v));
            }
        }
    }
    debug_assert_eq!(next_id + t_i, n);
    Ok(FamilyInstance {
        graph: DirectedGraph::build(n, &edges)?,
        target: 0,
        system: *system,
        decoys,
        prizes,
        lambda: None,
        delta_realized: None,
    })
}

/// Interpolation weight for the prize tail length of [`cycle_vs_sink`]: with
/// `prize_tail = u / (2 (1 - lambda * alpha))` the baseline decoy-to-prize
/// PageRank ratio lands exactly on `2 + delta`.
pub fn lambda_param(alpha: f64, k: usize, u: usize, delta: f64) -> f64 {
    let a = alpha;
    let k = k as f64;
    let u = u as f64;
    let d = delta;
    let num = ((a * a - a) * d + 2.0 * a * a) * k * u
        + 2.0 * ((a - 1.0) * d + 2.0 * a - 1.0) * k
        + 2.0 * (a * a - a) * d
        + 4.0 * (a * a - a);
    let den = 2.0 * a * a * k * u
        + ((2.0 * a * a - 2.0 * a) * d + 4.0 * a * a - 2.0 * a) * k
        + (2.0 * a.powi(3) - 2.0 * a * a) * d
        + 4.0 * a.powi(3)
        - 4.0 * a * a;
    num / den
}

/// Realized baseline margin: how far the decoy/prize PageRank ratio sits
/// above 2, which is the break-even point of the naive score comparison.
fn realized_margin(system: &FamilySystem) -> Result<f64> {
    let sol = system.solve(Scenario::Baseline)?;
    Ok(sol.pi_decoy / sol.pi_prize - 2.0)
}

/// A cycle-vs-sink parameter point, resolved to concrete tail lengths but
/// not yet materialized. Lets sweeps evaluate parameter points whose graphs
/// would be far too large to build.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CyclePlan {
    pub system: FamilySystem,
    pub lambda: f64,
    pub delta_realized: f64,
}

/// Resolve cycle-vs-sink parameters: `k` ring decoys with tails of length
/// `u`, a clique of `u^2`, and prize tails sized (via [`lambda_param`] plus
/// a local scan over the rounding error) so the baseline naive-score margin
/// stays strictly positive, targeting `delta`.
pub fn plan_cycle_vs_sink(alpha: f64, k: usize, u: usize, delta: f64) -> Result<CyclePlan> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    if u < 2 {
        return Err(Error::InvalidParameter(format!("u must be at least 2, got {u}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    let lambda = lambda_param(alpha, k, u, delta);
    let denom = 2.0 * (1.0 - lambda * alpha);
    if denom <= 0.0 {
        return Err(Error::Construction(format!(
            "margin {delta} is unreachable at k={k}, u={u}: tail length diverges"
        )));
    }
    let center = (u as f64 / denom).round().max(1.0) as i64;
    // Rounding the tail length moves the margin; scan nearby lengths for the
    // closest one that keeps the decoys strictly ahead.
    for offset in [0i64, -1, 1, -2, 2, -3, 3] {
        let t_p = center + offset;
        if t_p < 1 {
            continue;
        }
        let system = FamilySystem {
            family: Family::CycleVsSink,
            alpha,
            k,
            decoy_tail: u,
            prize_tail: t_p as usize,
            clique: Some(u * u),
        };
        let margin = realized_margin(&system)?;
        if margin > 0.0 {
            return Ok(CyclePlan { system, lambda, delta_realized: margin });
        }
    }
    Err(Error::Construction(format!(
        "no prize tail length near {center} keeps the decoys ahead at k={k}, u={u}"
    )))
}

/// Build a cycle-vs-sink instance; see [`plan_cycle_vs_sink`].
pub fn cycle_vs_sink(alpha: f64, k: usize, u: usize, delta: f64) -> Result<FamilyInstance> {
    let plan = plan_cycle_vs_sink(alpha, k, u, delta)?;
    let mut instance = materialize(&plan.system)?;
    instance.lambda = Some(plan.lambda);
    instance.delta_realized = Some(plan.delta_realized);
    Ok(instance)
}

/// Resolve sink-vs-sink parameters: prize tails of length `c`, decoy tails
/// `c + 1`, clique of `max(2, c^2)`.
pub fn plan_sink_vs_sink(alpha: f64, k: usize, c: usize) -> Result<FamilySystem> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    if c < 1 {
        return Err(Error::InvalidParameter("c must be at least 1".into()));
    }
    let system = FamilySystem {
        family: Family::SinkVsSink,
        alpha,
        k,
        decoy_tail: c + 1,
        prize_tail: c,
        clique: Some((c * c).max(2)),
    };
    system.validate()?;
    Ok(system)
}

/// Build a sink-vs-sink instance; see [`plan_sink_vs_sink`].
pub fn sink_vs_sink(alpha: f64, k: usize, c: usize) -> Result<FamilyInstance> {
    materialize(&plan_sink_vs_sink(alpha, k, c)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfer::{pagerank, SurferParams};
    use approx::assert_abs_diff_eq;

    const A: f64 = 0.85;

    #[test]
    fn cycle_instance_counts_match_parameters() {
        let inst = cycle_vs_sink(A, 2, 3, 0.01).unwrap();
        let sys = inst.system;
        assert_eq!(sys.decoy_tail, 3);
        assert_eq!(sys.clique, Some(9));
        assert_eq!(inst.graph.node_count(), sys.node_count().unwrap());
        let t_i = 9;
        let expected_edges =
            2 + 2 + 2 * (sys.decoy_tail + sys.prize_tail) + t_i * (t_i - 1);
        assert_eq!(inst.graph.edge_count(), expected_edges);
        assert_eq!(inst.decoys, vec![1, 2]);
        assert_eq!(inst.prizes, vec![3, 4]);
        assert!(inst.lambda.is_some());
        assert!(inst.delta_realized.unwrap() > 0.0);
    }

    #[test]
    fn sink_instance_counts_match_parameters() {
        let inst = sink_vs_sink(A, 3, 2).unwrap();
        assert_eq!(inst.system.decoy_tail, 3);
        assert_eq!(inst.system.prize_tail, 2);
        assert_eq!(inst.system.clique, Some(4));
        assert_eq!(inst.graph.node_count(), 3 * (3 + 2 + 2) + 4 + 1);
        // decoys and prizes are all sinks; the target links every prize
        for &d in &inst.decoys {
            assert!(inst.graph.is_sink(d));
        }
        for &p in &inst.prizes {
            assert!(inst.graph.is_sink(p));
            assert!(inst.graph.has_edge(inst.target, p));
        }
    }

    #[test]
    fn tiny_tail_scale_clamps_clique() {
        let inst = sink_vs_sink(A, 2, 1).unwrap();
        assert_eq!(inst.system.clique, Some(2));
    }

    #[test]
    fn roles_partition_the_node_set() {
        let inst = cycle_vs_sink(A, 2, 3, 0.01).unwrap();
        let roles = inst.roles();
        assert_eq!(roles.len(), inst.graph.node_count());
        assert_eq!(roles[0], Role::Target);
        let count = |r: Role| roles.iter().filter(|&&x| x == r).count();
        assert_eq!(count(Role::Decoy), 2);
        assert_eq!(count(Role::Prize), 2);
        assert_eq!(count(Role::Tail), 2 * (3 + inst.system.prize_tail));
        assert_eq!(count(Role::Clique), 9);
    }

    #[test]
    fn role_sidecar_round_trips() {
        let inst = sink_vs_sink(A, 2, 1).unwrap();
        let text = inst.roles_to_string();
        assert_eq!(parse_roles(&text).unwrap(), inst.roles());
        assert!(parse_roles("0 target\n2 tail\n").is_err());
        assert!(parse_roles("0 villain\n").is_err());
    }

    #[test]
    fn explicit_pagerank_matches_solved_roles() {
        let params = SurferParams::default();
        let instances =
            [cycle_vs_sink(A, 2, 3, 0.01).unwrap(), sink_vs_sink(A, 2, 3).unwrap()];
        for inst in &instances {
            for scenario in Scenario::ALL {
                let g = inst.scenario_graph(scenario).unwrap();
                let pi = pagerank(&g, &params).unwrap();
                let sol = inst.expected(scenario).unwrap();
                for (i, role) in inst.roles().iter().enumerate() {
                    let expected = match role {
                        Role::Target => sol.pi_target,
                        Role::Decoy => sol.pi_decoy,
                        Role::Prize => sol.pi_prize,
                        Role::Tail => sol.pi_tail,
                        Role::Clique => sol.pi_clique,
                    };
                    assert_abs_diff_eq!(pi.get(i), expected, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn cycle_margin_keeps_decoys_ahead_on_the_naive_score() {
        for (k, u) in [(2, 3), (3, 6), (2, 10)] {
            let inst = cycle_vs_sink(A, k, u, 0.01).unwrap();
            let sol = inst.expected(Scenario::Baseline).unwrap();
            // Decoys have out-degree 1 before linking, prizes are sinks, so
            // the naive comparison is pi_decoy / 2 against pi_prize.
            assert!(sol.pi_decoy / 2.0 > sol.pi_prize, "k={k} u={u}");
            let margin = inst.delta_realized.unwrap();
            assert!(margin > 0.0 && margin < 0.2, "margin {margin}");
        }
    }

    #[test]
    fn oversized_instances_are_refused() {
        // The clique of u^2 nodes needs about u^4 edges; u = 60 is past the cap.
        match cycle_vs_sink(A, 2, 60, 0.01) {
            Err(Error::Construction(msg)) => assert!(msg.contains("edges")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(cycle_vs_sink(A, 1, 5, 0.01).is_err());
        assert!(cycle_vs_sink(A, 2, 1, 0.01).is_err());
        assert!(cycle_vs_sink(A, 2, 5, 0.0).is_err());
        assert!(sink_vs_sink(A, 2, 0).is_err());
        assert!(sink_vs_sink(1.2, 2, 2).is_err());
    }
}
