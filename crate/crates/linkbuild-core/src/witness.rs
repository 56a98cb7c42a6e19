//! Certificates that the target's PageRank is not submodular in its
//! backlink set.
//!
//! Submodularity would mean diminishing returns: adding one more backlink
//! source helps less when more backlinks are already in place. That fails
//! for PageRank. A backlink from `y` is worth little while `y` feeds a part
//! of the graph that never returns to the target, but once other backlinks
//! raise the target's rank, the same `y` edge also closes a
//! target-to-`y`-and-back loop whose amplification grows with everything
//! already added. The drain construction below makes that concrete, and
//! [`find_witness`] returns it (or a randomly found alternative) as a
//! checkable [`NonSubmodularWitness`].
//!
//! Reachability, in contrast, is submodular in the backlink set, which is
//! exactly why greedy selection on reachability carries a guarantee while
//! greedy on PageRank itself does not.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::surfer::{pagerank, SurferParams};

/// A concrete violation of diminishing returns: starting from `graph`,
/// adding the backlink `extra -> target` gains MORE on top of `large_set`'s
/// backlinks than on top of `small_set`'s, even though `small_set` is
/// contained in `large_set`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonSubmodularWitness {
    pub graph: DirectedGraph,
    pub target: NodeId,
    pub small_set: Vec<NodeId>,
    pub large_set: Vec<NodeId>,
    pub extra: NodeId,
    /// `pi_target` with the small set's backlinks in place.
    pub pi_small: f64,
    /// ... the small set plus `extra`.
    pub pi_small_extra: f64,
    /// ... the large set.
    pub pi_large: f64,
    /// ... the large set plus `extra`.
    pub pi_large_extra: f64,
}

fn pi_with(
    g: &DirectedGraph,
    sources: &[NodeId],
    extra: Option<NodeId>,
    target: NodeId,
    params: &SurferParams,
) -> Result<f64> {
    let mut augmented = g.add_backlinks(sources, target)?;
    if let Some(y) = extra {
        augmented = augmented.add_edge(y, target)?;
    }
    Ok(pagerank(&augmented, params)?.get(target))
}

impl NonSubmodularWitness {
    /// How much the late gain of `extra` exceeds its early gain. Positive
    /// for a genuine violation.
    pub fn margin(&self) -> f64 {
        (self.pi_large_extra - self.pi_large) - (self.pi_small_extra - self.pi_small)
    }

    /// Re-derive everything from the graph and fail if any part of the
    /// certificate does not hold.
    pub fn verify(&self, params: &SurferParams) -> Result<()> {
        let n = self.graph.node_count();
        let in_range =
            |i: NodeId| -> Result<()> { if i < n { Ok(()) } else { Err(Error::NodeOutOfRange { node: i, nodes: n }) } };
        in_range(self.target)?;
        in_range(self.extra)?;
        for &s in self.small_set.iter().chain(&self.large_set) {
            in_range(s)?;
        }
        if self.extra == self.target {
            return Err(Error::Construction("extra source equals the target".into()));
        }
        if !self.small_set.iter().all(|s| self.large_set.contains(s)) {
            return Err(Error::Construction("small set is not inside the large set".into()));
        }
        if self.large_set.contains(&self.extra) {
            return Err(Error::Construction("extra source already in the large set".into()));
        }
        if self.large_set.contains(&self.target) {
            return Err(Error::Construction("target cannot be its own source".into()));
        }
        for &s in self.large_set.iter().chain([&self.extra]) {
            if self.graph.has_edge(s, self.target) {
                return Err(Error::Construction(format!(
                    "edge {s} -> {} already present, its gain would be zero",
                    self.target
                )));
            }
        }
        let fresh = [
            pi_with(&self.graph, &self.small_set, None, self.target, params)?,
            pi_with(&self.graph, &self.small_set, Some(self.extra), self.target, params)?,
            pi_with(&self.graph, &self.large_set, None, self.target, params)?,
            pi_with(&self.graph, &self.large_set, Some(self.extra), self.target, params)?,
        ];
        let stored = [self.pi_small, self.pi_small_extra, self.pi_large, self.pi_large_extra];
        for (f, s) in fresh.iter().zip(&stored) {
            if (f - s).abs() > 1e-9 {
                return Err(Error::Construction(format!(
                    "stored value {s} disagrees with recomputed {f}"
                )));
            }
        }
        let margin = (fresh[3] - fresh[2]) - (fresh[1] - fresh[0]);
        if margin <= 0.0 {
            return Err(Error::Construction(format!(
                "no violation: late gain does not exceed early gain (margin {margin})"
            )));
        }
        Ok(())
    }
}

/// The deterministic construction: target `x -> y`, `y` feeding an absorbing
/// two-cycle drain, and `helpers` extra nodes feeding the same drain. With
/// no backlinks, a `y -> x` edge closes a short loop but `x` has nothing
/// else going for it; with all helpers linked to `x` first, the same edge
/// amplifies their combined contribution, so it gains more when added late.
pub fn drain_witness(helpers: usize, params: &SurferParams) -> Result<NonSubmodularWitness> {
    if helpers == 0 {
        return Err(Error::InvalidParameter("need at least one helper".into()));
    }
    let x = 0;
    let y = 1;
    let drain = 2;
    let n = 4 + helpers;
    let mut edges = vec![(x, y), (y, drain), (drain, 3), (3, drain)];
    let helper_ids: Vec<NodeId> = (4..n).collect();
    for &h in &helper_ids {
        edges.push((h, drain));
    }
    let graph = DirectedGraph::build(n, &edges)?;
    let witness = NonSubmodularWitness {
        pi_small: pi_with(&graph, &[], None, x, params)?,
        pi_small_extra: pi_with(&graph, &[], Some(y), x, params)?,
        pi_large: pi_with(&graph, &helper_ids, None, x, params)?,
        pi_large_extra: pi_with(&graph, &helper_ids, Some(y), x, params)?,
        graph,
        target: x,
        small_set: Vec::new(),
        large_set: helper_ids,
        extra: y,
    };
    Ok(witness)
}

/// Search bounds for [`find_witness`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessSearchConfig {
    pub params: SurferParams,
    /// Largest graph the search may return.
    pub max_nodes: usize,
    /// Smallest margin that counts as a violation.
    pub min_margin: f64,
    /// Random graphs to try if the deterministic construction does not fit
    /// within `max_nodes`.
    pub random_trials: usize,
    pub seed: u64,
}

impl Default for WitnessSearchConfig {
    fn default() -> Self {
        Self {
            params: SurferParams::default(),
            max_nodes: 12,
            min_margin: 1e-6,
            random_trials: 200,
            seed: 0,
        }
    }
}

/// Find a non-submodularity witness within the configured bounds. Tries the
/// drain construction at growing helper counts first, then random graphs.
/// Returns `None` when nothing within bounds violates submodularity.
pub fn find_witness(config: &WitnessSearchConfig) -> Result<Option<NonSubmodularWitness>> {
    config.params.validate()?;
    for helpers in 1.. {
        if 4 + helpers > config.max_nodes {
            break;
        }
        let w = drain_witness(helpers, &config.params)?;
        if w.margin() > config.min_margin {
            return Ok(Some(w));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.random_trials {
        if config.max_nodes < 3 {
            break;
        }
        let n = 3 + rng.gen_range(0..=config.max_nodes - 3);
        let p = [0.2, 0.35, 0.5][rng.gen_range(0..3)];
        let g = crate::graph::random_digraph(n, p, &mut rng);
        let x = rng.gen_range(0..n);
        let free: Vec<NodeId> =
            (0..n).filter(|&i| i != x && !g.has_edge(i, x)).collect();
        if free.len() < 2 {
            continue;
        }
        for &y in &free {
            for &b in &free {
                if b == y {
                    continue;
                }
                let pi_empty = pi_with(&g, &[], None, x, &config.params)?;
                let pi_y = pi_with(&g, &[], Some(y), x, &config.params)?;
                let pi_b = pi_with(&g, &[b], None, x, &config.params)?;
                let pi_by = pi_with(&g, &[b], Some(y), x, &config.params)?;
                if (pi_by - pi_b) - (pi_y - pi_empty) > config.min_margin {
                    return Ok(Some(NonSubmodularWitness {
                        graph: g,
                        target: x,
                        small_set: Vec::new(),
                        large_set: vec![b],
                        extra: y,
                        pi_small: pi_empty,
                        pi_small_extra: pi_y,
                        pi_large: pi_b,
                        pi_large_extra: pi_by,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params() -> SurferParams {
        SurferParams::default()
    }

    #[test]
    fn drain_values_at_two_helpers() {
        let w = drain_witness(2, &params()).unwrap();
        assert_eq!(w.graph.node_count(), 6);
        // With no backlinks the target only ever gets teleport mass.
        assert_abs_diff_eq!(w.pi_small, 0.15 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.pi_small_extra, 0.05577299412915853, epsilon = 1e-9);
        assert_abs_diff_eq!(w.pi_large, 0.04625, epsilon = 1e-9);
        assert_abs_diff_eq!(w.pi_large_extra, 0.08904109589041154, epsilon = 1e-9);
        assert_abs_diff_eq!(w.margin(), 1.2018e-2, epsilon = 1e-5);
        w.verify(&params()).unwrap();
    }

    #[test]
    fn backlinks_always_help() {
        let w = drain_witness(3, &params()).unwrap();
        assert!(w.pi_small < w.pi_small_extra);
        assert!(w.pi_small < w.pi_large);
        assert!(w.pi_large < w.pi_large_extra);
    }

    #[test]
    fn search_returns_the_smallest_drain() {
        let w = find_witness(&WitnessSearchConfig::default()).unwrap().unwrap();
        assert_eq!(w.graph.node_count(), 5);
        assert_eq!(w.small_set, Vec::<NodeId>::new());
        assert_eq!(w.large_set, vec![4]);
        assert_eq!(w.extra, 1);
        assert_abs_diff_eq!(w.margin(), 7.2109e-3, epsilon = 1e-5);
        w.verify(&params()).unwrap();
    }

    #[test]
    fn search_respects_node_bound() {
        let config =
            WitnessSearchConfig { max_nodes: 2, random_trials: 0, ..Default::default() };
        assert!(find_witness(&config).unwrap().is_none());
    }

    #[test]
    fn verify_rejects_tampering() {
        let good = drain_witness(2, &params()).unwrap();

        let mut wrong_value = good.clone();
        wrong_value.pi_large_extra += 0.01;
        assert!(wrong_value.verify(&params()).is_err());

        let mut extra_inside = good.clone();
        extra_inside.extra = extra_inside.large_set[0];
        assert!(extra_inside.verify(&params()).is_err());

        let mut swapped = good.clone();
        std::mem::swap(&mut swapped.pi_small, &mut swapped.pi_large);
        assert!(swapped.verify(&params()).is_err());

        // An already-present edge would make the claimed gain vacuous.
        let mut edge_present = good.clone();
        edge_present.graph = edge_present.graph.add_edge(1, 0).unwrap();
        assert!(edge_present.verify(&params()).is_err());
    }
}
