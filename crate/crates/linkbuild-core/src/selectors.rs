//! Backlink selection strategies.
//!
//! All strategies answer the same question: which `k` nodes should link to
//! the target `x` to raise its PageRank the most? Candidates are every node
//! except `x` itself and nodes already linking to it.
//!
//! * [`naive_select`]: one PageRank solve on the unmodified graph; rank
//!   candidate `i` by `pi_i / (outdeg_i + 1)`, the teleport-free mass it
//!   would push through a new link, and keep the top `k`.
//! * [`reach_greedy_select`]: `k` rounds, each committing the candidate that
//!   maximizes the reachability of `x` in the augmented graph. Equivalent to
//!   greedily maximizing `pi_x` divided by the target's self-visit factor,
//!   which makes the objective submodular and earns a constant-factor
//!   guarantee that plain greedy-on-PageRank lacks.
//! * [`pi_greedy_select`]: `k` rounds committing the candidate that maximizes
//!   `pi_x` itself.
//! * [`exhaustive_select`]: evaluate every `k`-subset of candidates, up to a
//!   hard enumeration cap.
//!
//! Ties always resolve toward smaller node ids, and subset search prefers the
//! lexicographically smallest maximizer, so results are deterministic even
//! though candidate evaluation runs in parallel.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::surfer::{pagerank, reach_probabilities, SurferParams};

/// Hard cap on the number of subsets [`exhaustive_select`] will evaluate.
pub const ENUMERATION_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Naive,
    ReachGreedy,
    PiGreedy,
    Exhaustive,
}

impl Strategy {
    pub const ALL: [Strategy; 4] =
        [Strategy::Naive, Strategy::ReachGreedy, Strategy::PiGreedy, Strategy::Exhaustive];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Naive => "naive",
            Strategy::ReachGreedy => "rgreedy",
            Strategy::PiGreedy => "pigreedy",
            Strategy::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Strategy::Naive),
            "rgreedy" => Ok(Strategy::ReachGreedy),
            "pigreedy" => Ok(Strategy::PiGreedy),
            "exhaustive" => Ok(Strategy::Exhaustive),
            other => Err(Error::InvalidParameter(format!(
                "unknown strategy {other:?}, expected naive|rgreedy|pigreedy|exhaustive"
            ))),
        }
    }
}

/// One committed choice and the objective value that justified it. For the
/// greedy strategies the objective is measured after committing the edge; for
/// the one-shot strategies it is the score the node was ranked by.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub chosen: NodeId,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub strategy: Strategy,
    /// Chosen sources, ascending.
    pub sources: Vec<NodeId>,
    /// PageRank of the target once all chosen backlinks are in place.
    pub final_pi_x: f64,
    pub trace: Vec<TraceStep>,
}

/// Nodes eligible to become new backlink sources: everything except the
/// target and its existing in-neighbors.
pub fn candidate_set(g: &DirectedGraph, x: NodeId) -> Vec<NodeId> {
    let existing = g.in_neighbors(x);
    (0..g.node_count()).filter(|&i| i != x && !existing.contains(&i)).collect()
}

fn checked_candidates(g: &DirectedGraph, x: NodeId, k: usize) -> Result<Vec<NodeId>> {
    if x >= g.node_count() {
        return Err(Error::NodeOutOfRange { node: x, nodes: g.node_count() });
    }
    if k == 0 {
        return Err(Error::InvalidParameter("budget k must be at least 1".into()));
    }
    let candidates = candidate_set(g, x);
    if candidates.len() < k {
        return Err(Error::TooFewCandidates { k, available: candidates.len() });
    }
    Ok(candidates)
}

fn final_pi(g: &DirectedGraph, sources: &[NodeId], x: NodeId, params: &SurferParams) -> Result<f64> {
    let augmented = g.add_backlinks(sources, x)?;
    Ok(pagerank(&augmented, params)?.get(x))
}

/// Higher objective wins; equal objectives go to the smaller node id.
fn better(a: (f64, NodeId), b: (f64, NodeId)) -> (f64, NodeId) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 <= b.1) {
        a
    } else {
        b
    }
}

/// Rank candidates by `pi_i / (outdeg_i + 1)` from a single PageRank solve
/// of the unmodified graph and take the best `k`.
pub fn naive_select(
    g: &DirectedGraph,
    x: NodeId,
    k: usize,
    params: &SurferParams,
) -> Result<SelectionResult> {
    let candidates = checked_candidates(g, x, k)?;
    let pi = pagerank(g, params)?;
    let mut scored: Vec<(f64, NodeId)> =
        candidates.iter().map(|&i| (pi.get(i) / (g.out_degree(i) + 1) as f64, i)).collect();
    // Descending score, ascending id among equals.
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    scored.truncate(k);
    let trace: Vec<TraceStep> =
        scored.iter().map(|&(objective, chosen)| TraceStep { chosen, objective }).collect();
    let mut sources: Vec<NodeId> = scored.iter().map(|&(_, i)| i).collect();
    sources.sort_unstable();
    let final_pi_x = final_pi(g, &sources, x, params)?;
    Ok(SelectionResult { strategy: Strategy::Naive, sources, final_pi_x, trace })
}

fn greedy_select<F>(
    g: &DirectedGraph,
    x: NodeId,
    k: usize,
    params: &SurferParams,
    strategy: Strategy,
    objective: F,
) -> Result<SelectionResult>
where
    F: Fn(&DirectedGraph) -> Result<f64> + Sync,
{
    let mut remaining = checked_candidates(g, x, k)?;
    let mut current = g.clone();
    let mut trace = Vec::with_capacity(k);
    for _ in 0..k {
        let scored: Vec<(f64, NodeId)> = remaining
            .par_iter()
            .map(|&c| {
                let augmented = current.add_edge(c, x)?;
                Ok((objective(&augmented)?, c))
            })
            .collect::<Result<_>>()?;
        let (value, chosen) =
            scored.into_iter().reduce(better).expect("candidate pool is non-empty");
        current = current.add_edge(chosen, x)?;
        remaining.retain(|&c| c != chosen);
        trace.push(TraceStep { chosen, objective: value });
    }
    let mut sources: Vec<NodeId> = trace.iter().map(|s| s.chosen).collect();
    sources.sort_unstable();
    let final_pi_x = pagerank(&current, params)?.get(x);
    Ok(SelectionResult { strategy, sources, final_pi_x, trace })
}

/// Greedy on the reachability of `x`: each round adds the backlink that
/// maximizes `1 + sum of reach probabilities` in the augmented graph.
pub fn reach_greedy_select(
    g: &DirectedGraph,
    x: NodeId,
    k: usize,
    params: &SurferParams,
) -> Result<SelectionResult> {
    greedy_select(g, x, k, params, Strategy::ReachGreedy, |augmented| {
        let f = reach_probabilities(augmented, x, params)?;
        Ok(1.0 + f.iter().enumerate().filter(|&(i, _)| i != x).map(|(_, v)| v).sum::<f64>())
    })
}

/// Greedy directly on the PageRank of `x`.
pub fn pi_greedy_select(
    g: &DirectedGraph,
    x: NodeId,
    k: usize,
    params: &SurferParams,
) -> Result<SelectionResult> {
    greedy_select(g, x, k, params, Strategy::PiGreedy, |augmented| {
        Ok(pagerank(augmented, params)?.get(x))
    })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Evaluate every `k`-subset of the candidate set and return the best one.
/// Among subsets with equal PageRank the lexicographically smallest wins.
/// Refuses instances whose subset count exceeds [`ENUMERATION_CAP`].
pub fn exhaustive_select(
    g: &DirectedGraph,
    x: NodeId,
    k: usize,
    params: &SurferParams,
) -> Result<SelectionResult> {
    let candidates = checked_candidates(g, x, k)?;
    let subsets = binomial(candidates.len(), k);
    if subsets > ENUMERATION_CAP {
        return Err(Error::EnumerationCap { subsets, cap: ENUMERATION_CAP });
    }
    // Flat buffer of subsets, k ids each, in lexicographic order over the
    // ascending candidate list.
    let mut buffer: Vec<NodeId> = Vec::with_capacity(subsets as usize * k);
    for combo in candidates.iter().copied().combinations(k) {
        buffer.extend_from_slice(&combo);
    }
    let best = buffer
        .par_chunks_exact(k)
        .enumerate()
        .map(|(index, subset)| {
            let value = final_pi(g, subset, x, params)?;
            Ok((value, index))
        })
        .collect::<Result<Vec<(f64, usize)>>>()?
        .into_iter()
        .reduce(|a, b| if a.0 > b.0 || (a.0 == b.0 && a.1 <= b.1) { a } else { b })
        .expect("at least one subset");
    let (final_pi_x, index) = best;
    let sources: Vec<NodeId> = buffer[index * k..(index + 1) * k].to_vec();
    let trace =
        sources.iter().map(|&chosen| TraceStep { chosen, objective: final_pi_x }).collect();
    Ok(SelectionResult { strategy: Strategy::Exhaustive, sources, final_pi_x, trace })
}

/// Dispatch on [`Strategy`].
pub fn select(
    g: &DirectedGraph,
    x: NodeId,
    k: usize,
    strategy: Strategy,
    params: &SurferParams,
) -> Result<SelectionResult> {
    match strategy {
        Strategy::Naive => naive_select(g, x, k, params),
        Strategy::ReachGreedy => reach_greedy_select(g, x, k, params),
        Strategy::PiGreedy => pi_greedy_select(g, x, k, params),
        Strategy::Exhaustive => exhaustive_select(g, x, k, params),
    }
}
