//! Random-surfer numerics: PageRank and reach quantities for one target.
//!
//! The surfer model: at each step, with probability `alpha` follow a uniform
//! outlink of the current node (a sink jumps to a uniformly random node
//! instead), and with probability `1 - alpha` zap to a uniformly random node.
//! PageRank is the stationary distribution of that chain.
//!
//! For a fixed target `x` the module also computes, by fixed-point iteration:
//!
//! * `reach[i]`: the probability that a surfer starting at `i` reaches `x`
//!   before zapping. `reach[x]` is pinned to 1, and a sink counts as linking
//!   to every node in the graph.
//! * `self_visits`: the expected number of visits to `x` for a surfer
//!   starting at `x`, counting only steps before the first zap. Equals
//!   `1 / (1 - rho)` where `rho` is the probability of a zap-free return.
//! * `reachability`: `1 + sum of reach[i] over i != x`.
//!
//! PageRank factors as `pi_x = (1 - alpha) / n * self_visits * reachability`,
//! which the selectors exploit to rank candidate backlinks without a full
//! PageRank solve per candidate.

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};

/// Iteration parameters shared by every solver in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurferParams {
    /// Link-following probability. Must lie strictly inside (0, 1).
    pub alpha: f64,
    /// Convergence threshold: an L1 residual for PageRank, and an L-infinity
    /// gap scaled by `1 - alpha` for the reach iterations.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SurferParams {
    fn default() -> Self {
        Self { alpha: 0.85, tol: 1e-12, max_iter: 100_000 }
    }
}

impl SurferParams {
    pub fn with_alpha(alpha: f64) -> Self {
        Self { alpha, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// A converged PageRank solution.
#[derive(Debug, Clone, PartialEq)]
pub struct PageRankVector {
    values: Vec<f64>,
}

impl PageRankVector {
    pub fn get(&self, i: NodeId) -> f64 {
        self.values[i]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

impl std::ops::Index<NodeId> for PageRankVector {
    type Output = f64;
    fn index(&self, i: NodeId) -> &f64 {
        &self.values[i]
    }
}

fn check_target(g: &DirectedGraph, x: NodeId) -> Result<()> {
    if g.node_count() == 0 {
        return Err(Error::InvalidParameter("graph has no nodes".into()));
    }
    if x >= g.node_count() {
        return Err(Error::NodeOutOfRange { node: x, nodes: g.node_count() });
    }
    Ok(())
}

/// Row `i` of the transition matrix: teleport mass everywhere plus the link
/// mass spread over `i`'s outlinks, or over all nodes when `i` is a sink.
pub fn transition_row(g: &DirectedGraph, i: NodeId, alpha: f64) -> Result<Vec<f64>> {
    SurferParams { alpha, ..SurferParams::default() }.validate()?;
    check_target(g, i)?;
    let n = g.node_count();
    let base = (1.0 - alpha) / n as f64;
    let mut row = vec![base; n];
    if g.is_sink(i) {
        for p in &mut row {
            *p += alpha / n as f64;
        }
    } else {
        let share = alpha / g.out_degree(i) as f64;
        for &j in g.out_neighbors(i) {
            row[j] += share;
        }
    }
    Ok(row)
}

/// Power iteration from the uniform vector. Sink mass is redistributed
/// uniformly on every step; the full matrix is never formed. The returned
/// vector satisfies an L1 residual of at most `tol`.
pub fn pagerank(g: &DirectedGraph, params: &SurferParams) -> Result<PageRankVector> {
    params.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::InvalidParameter("graph has no nodes".into()));
    }
    let alpha = params.alpha;
    let nf = n as f64;
    let mut pi = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..params.max_iter {
        let sink_mass: f64 = (0..n).filter(|&i| g.is_sink(i)).map(|i| pi[i]).sum();
        let base = ((1.0 - alpha) + alpha * sink_mass) / nf;
        next.fill(base);
        for u in 0..n {
            if !g.is_sink(u) {
                let share = alpha * pi[u] / g.out_degree(u) as f64;
                for &v in g.out_neighbors(u) {
                    next[v] += share;
                }
            }
        }
        residual = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut pi, &mut next);
        if residual <= params.tol {
            return Ok(PageRankVector { values: pi });
        }
    }
    Err(Error::NoConvergence { max_iter: params.max_iter, residual })
}

/// Probability of reaching `x` before zapping, from every start node.
///
/// Jacobi iteration of `f[i] = alpha / outdeg(i) * sum of f over i's
/// outlinks` with `f[x]` pinned to 1, starting from zero. Sinks use
/// `outdeg = n` with the whole node set as their outlinks. The iteration
/// contracts with ratio `alpha`; it stops once the successive-iterate
/// L-infinity gap drops to `tol * (1 - alpha)`.
pub fn reach_probabilities(
    g: &DirectedGraph,
    x: NodeId,
    params: &SurferParams,
) -> Result<Vec<f64>> {
    params.validate()?;
    check_target(g, x)?;
    let n = g.node_count();
    let alpha = params.alpha;
    let nf = n as f64;
    let threshold = params.tol * (1.0 - alpha);
    let mut f = vec![0.0; n];
    f[x] = 1.0;
    let mut next = vec![0.0; n];
    let mut gap = f64::INFINITY;
    for _ in 0..params.max_iter {
        let total: f64 = f.iter().sum();
        next[x] = 1.0;
        for i in 0..n {
            if i == x {
                continue;
            }
            next[i] = if g.is_sink(i) {
                alpha * total / nf
            } else {
                let s: f64 = g.out_neighbors(i).iter().map(|&j| f[j]).sum();
                alpha * s / g.out_degree(i) as f64
            };
        }
        gap = f.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut f, &mut next);
        if gap <= threshold {
            return Ok(f);
        }
    }
    Err(Error::NoConvergence { max_iter: params.max_iter, residual: gap })
}

fn return_probability(g: &DirectedGraph, x: NodeId, reach: &[f64], alpha: f64) -> f64 {
    // One application of the reach update at x itself, using the pinned
    // solution: the probability of leaving x and making it back before a zap.
    let n = g.node_count() as f64;
    if g.is_sink(x) {
        alpha * reach.iter().sum::<f64>() / n
    } else {
        let s: f64 = g.out_neighbors(x).iter().map(|&j| reach[j]).sum();
        alpha * s / g.out_degree(x) as f64
    }
}

/// Expected visits to `x` by a surfer starting at `x`, before the first zap.
pub fn expected_self_visits(g: &DirectedGraph, x: NodeId, params: &SurferParams) -> Result<f64> {
    let reach = reach_probabilities(g, x, params)?;
    Ok(1.0 / (1.0 - return_probability(g, x, &reach, params.alpha)))
}

/// Reach-derived quantities for one target, bundled so a single fixed-point
/// solve serves all of them.
#[derive(Debug, Clone, PartialEq)]
pub struct SurferMetrics {
    pub target: NodeId,
    pub alpha: f64,
    pub reach: Vec<f64>,
    pub self_visits: f64,
    pub reachability: f64,
}

impl SurferMetrics {
    /// PageRank of the target reconstructed from the factorization
    /// `(1 - alpha) / n * self_visits * reachability`.
    pub fn pi_estimate(&self) -> f64 {
        (1.0 - self.alpha) / self.reach.len() as f64 * self.self_visits * self.reachability
    }
}

pub fn surfer_metrics(g: &DirectedGraph, x: NodeId, params: &SurferParams) -> Result<SurferMetrics> {
    let reach = reach_probabilities(g, x, params)?;
    let rho = return_probability(g, x, &reach, params.alpha);
    let reachability = 1.0 + reach.iter().enumerate().filter(|&(i, _)| i != x).map(|(_, f)| f).sum::<f64>();
    Ok(SurferMetrics {
        target: x,
        alpha: params.alpha,
        reach,
        self_visits: 1.0 / (1.0 - rho),
        reachability,
    })
}
