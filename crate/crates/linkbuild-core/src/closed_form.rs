//! Exact role-level PageRank for the benchmark families, plus the strategy
//! gap ratios and guarantee constants in closed form.
//!
//! Both families in [`crate::families`] share one shape. A target `x` links
//! out to `k` "prize" nodes, the sources it actually wants links from. A
//! second group of `k` "decoy" nodes is dressed up to look better to a cheap
//! selection strategy. Every decoy and prize node is fed by a private chain
//! of tail nodes, and a clique of interlinked filler nodes absorbs the rest
//! of the probability mass. By symmetry every node of a role carries the same
//! PageRank, so the stationary equations collapse to a handful of scalar
//! equations that substitution solves exactly. No iteration, no graph.
//!
//! [`FamilySystem::solve`] returns those per-role values for three graph
//! variants: the unmodified graph, the graph with all decoys linking to `x`,
//! and the graph with all prizes linking to `x`. The prize/decoy ratio of
//! `pi_x` across the last two is the price of picking wrong, and the
//! `*_ratio` functions give its closed forms directly.

use crate::error::{Error, Result};

/// The two adversarial constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Decoys form a directed `k`-cycle that hoards rank; prizes are sinks.
    /// Defeats the one-shot score `pi_i / (outdeg_i + 1)`.
    CycleVsSink,
    /// Decoys and prizes are both sinks; the decoys' slightly longer tails
    /// win every single-step reachability comparison, but prizes compound
    /// through the `x -> prize -> x` loop. Defeats greedy-by-reachability.
    SinkVsSink,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::CycleVsSink, Family::SinkVsSink];

    pub fn name(&self) -> &'static str {
        match self {
            Family::CycleVsSink => "cycle_vs_sink",
            Family::SinkVsSink => "sink_vs_sink",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle_vs_sink" => Ok(Family::CycleVsSink),
            "sink_vs_sink" => Ok(Family::SinkVsSink),
            other => Err(Error::InvalidParameter(format!(
                "unknown family {other:?}, expected cycle_vs_sink|sink_vs_sink"
            ))),
        }
    }
}

/// Which backlinks are in place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// No node links to the target yet.
    Baseline,
    /// All `k` decoys link to the target: the cheap strategy's outcome.
    DecoyLinked,
    /// All `k` prizes link to the target: the optimal outcome.
    PrizeLinked,
}

impl Scenario {
    pub const ALL: [Scenario; 3] =
        [Scenario::Baseline, Scenario::DecoyLinked, Scenario::PrizeLinked];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Baseline => "baseline",
            Scenario::DecoyLinked => "decoy_linked",
            Scenario::PrizeLinked => "prize_linked",
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of one family instance, as the solver sees them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilySystem {
    pub family: Family,
    pub alpha: f64,
    /// Number of decoy nodes, prize nodes, and backlinks.
    pub k: usize,
    /// Tail chain length feeding each decoy node.
    pub decoy_tail: usize,
    /// Tail chain length feeding each prize node.
    pub prize_tail: usize,
    /// Clique size. `None` solves the infinite-clique limit, in which case
    /// role values come out in teleport units (tail value 1) rather than
    /// probabilities.
    pub clique: Option<usize>,
}

impl FamilySystem {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if self.clique == Some(1) {
            return Err(Error::InvalidParameter(
                "clique of size 1 is a stray sink; use 0 or at least 2".into(),
            ));
        }
        Ok(())
    }

    /// Total node count of the finite instance, `None` in the limit regime.
    pub fn node_count(&self) -> Option<usize> {
        self.clique
            .map(|t_i| self.k * (self.decoy_tail + self.prize_tail + 2) + t_i + 1)
    }

    /// Edge count of the finite instance, `None` in the limit regime. The
    /// clique dominates: `t_i * (t_i - 1)` of these are clique edges.
    pub fn edge_count(&self) -> Option<usize> {
        self.clique.map(|t_i| {
            let ring = if self.family == Family::CycleVsSink { self.k } else { 0 };
            self.k + ring
                + self.k * (self.decoy_tail + self.prize_tail)
                + t_i * t_i.saturating_sub(1)
        })
    }

    /// Per-role coefficients in teleport units: every tail node is worth
    /// exactly 1, the clique geometric series gives 1 / (1 - alpha), and the
    /// rest follows by substitution. `leak` is the coefficient total a single
    /// sink of the scenario redistributes over the whole graph.
    fn coefficients(&self, scenario: Scenario) -> (f64, f64, f64, f64) {
        let a = self.alpha;
        let k = self.k as f64;
        let t_d = self.decoy_tail as f64;
        let t_p = self.prize_tail as f64;
        match self.family {
            Family::CycleVsSink => {
                // Decoys pass rank around their own cycle; linking the
                // target splits each decoy's outflow in half.
                let (c_decoy, c_x): (f64, f64) = match scenario {
                    Scenario::Baseline => ((1.0 + a * t_d) / (1.0 - a), 1.0),
                    Scenario::DecoyLinked => {
                        let c_decoy = (1.0 + a * t_d) / (1.0 - a / 2.0);
                        (c_decoy, 1.0 + (a * k / 2.0) * c_decoy)
                    }
                    Scenario::PrizeLinked => (
                        (1.0 + a * t_d) / (1.0 - a),
                        (1.0 + a * k + a * a * k * t_p) / (1.0 - a * a),
                    ),
                };
                let c_prize = 1.0 + a * (c_x / k + t_p);
                let leak = match scenario {
                    // Prizes are the only sinks until they link out.
                    Scenario::Baseline | Scenario::DecoyLinked => c_prize,
                    Scenario::PrizeLinked => 0.0,
                };
                (c_x, c_decoy, c_prize, leak)
            }
            Family::SinkVsSink => {
                let c_decoy = 1.0 + a * t_d;
                let (c_x, c_prize): (f64, f64) = match scenario {
                    Scenario::Baseline => (1.0, 1.0 + a * (1.0 / k + t_p)),
                    Scenario::DecoyLinked => {
                        let c_x = 1.0 + a * k * c_decoy;
                        (c_x, 1.0 + a * (c_x / k + t_p))
                    }
                    Scenario::PrizeLinked => {
                        let c_x = (1.0 + a * k + a * a * k * t_p) / (1.0 - a * a);
                        (c_x, 1.0 + a * t_p + a * c_x / k)
                    }
                };
                let leak = match scenario {
                    Scenario::Baseline => c_prize + c_decoy,
                    Scenario::DecoyLinked => c_prize,
                    Scenario::PrizeLinked => c_decoy,
                };
                (c_x, c_decoy, c_prize, leak)
            }
        }
    }

    /// Solve the role system exactly.
    pub fn solve(&self, scenario: Scenario) -> Result<RolePageRanks> {
        self.validate()?;
        let (c_x, c_decoy, c_prize, leak) = self.coefficients(scenario);
        let c_clique = 1.0 / (1.0 - self.alpha);
        // In a finite instance the teleport unit b solves
        // b = (1 - alpha) / n + (alpha / n) * k * leak * b.
        let b = match self.node_count() {
            Some(n) => {
                let n = n as f64;
                (1.0 - self.alpha) / n / (1.0 - (self.alpha * self.k as f64 / n) * leak)
            }
            None => 1.0,
        };
        Ok(RolePageRanks {
            system: *self,
            scenario,
            pi_tail: b,
            pi_target: c_x * b,
            pi_decoy: c_decoy * b,
            pi_prize: c_prize * b,
            pi_clique: c_clique * b,
        })
    }

    /// `pi_x` with prizes linked divided by `pi_x` with decoys linked: the
    /// factor lost to picking the decoys.
    pub fn gap_ratio(&self) -> Result<f64> {
        let prize = self.solve(Scenario::PrizeLinked)?.pi_target;
        let decoy = self.solve(Scenario::DecoyLinked)?.pi_target;
        Ok(prize / decoy)
    }
}

/// The stationary value shared by every node of each role.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RolePageRanks {
    pub system: FamilySystem,
    pub scenario: Scenario,
    pub pi_tail: f64,
    pub pi_target: f64,
    pub pi_decoy: f64,
    pub pi_prize: f64,
    pub pi_clique: f64,
}

impl RolePageRanks {
    /// Sum over all nodes; 1 for a correct finite solution, `None` in the
    /// limit regime where values are not probabilities.
    pub fn total_mass(&self) -> Option<f64> {
        let s = &self.system;
        s.clique.map(|t_i| {
            let tails = (s.k * (s.decoy_tail + s.prize_tail)) as f64 * self.pi_tail;
            tails
                + self.pi_target
                + s.k as f64 * (self.pi_decoy + self.pi_prize)
                + t_i as f64 * self.pi_clique
        })
    }

    /// Largest absolute residual of the five per-role stationary equations,
    /// `None` in the limit regime.
    pub fn equation_residuals(&self) -> Option<f64> {
        let s = &self.system;
        let n = s.node_count()? as f64;
        let a = s.alpha;
        let k = s.k as f64;
        // Sinks spread their mass uniformly; which roles are sinks depends
        // on family and scenario.
        let sink_mass = match (s.family, self.scenario) {
            (Family::CycleVsSink, Scenario::Baseline | Scenario::DecoyLinked) => {
                k * self.pi_prize
            }
            (Family::CycleVsSink, Scenario::PrizeLinked) => 0.0,
            (Family::SinkVsSink, Scenario::Baseline) => k * (self.pi_prize + self.pi_decoy),
            (Family::SinkVsSink, Scenario::DecoyLinked) => k * self.pi_prize,
            (Family::SinkVsSink, Scenario::PrizeLinked) => k * self.pi_decoy,
        };
        let base = (1.0 - a) / n + a * sink_mass / n;
        let into_target = match (s.family, self.scenario) {
            (_, Scenario::Baseline) => 0.0,
            // A linked cycle decoy splits its outflow with its cycle
            // successor; every other linker forwards everything.
            (Family::CycleVsSink, Scenario::DecoyLinked) => k * a * self.pi_decoy / 2.0,
            (Family::SinkVsSink, Scenario::DecoyLinked) => k * a * self.pi_decoy,
            (_, Scenario::PrizeLinked) => k * a * self.pi_prize,
        };
        let into_decoy = match s.family {
            Family::CycleVsSink => {
                let own = if self.scenario == Scenario::DecoyLinked { a / 2.0 } else { a };
                a * s.decoy_tail as f64 * self.pi_tail + own * self.pi_decoy
            }
            Family::SinkVsSink => a * s.decoy_tail as f64 * self.pi_tail,
        };
        let into_prize = a * s.prize_tail as f64 * self.pi_tail + a * self.pi_target / k;
        let residuals = [
            self.pi_tail - base,
            self.pi_clique - (base + a * self.pi_clique),
            self.pi_target - (base + into_target),
            self.pi_decoy - (base + into_decoy),
            self.pi_prize - (base + into_prize),
        ];
        Some(residuals.iter().fold(0.0f64, |m, r| m.max(r.abs())))
    }
}

/// Convenience wrapper: solve a finite instance.
pub fn solve_family_system(
    family: Family,
    scenario: Scenario,
    alpha: f64,
    k: usize,
    decoy_tail: usize,
    prize_tail: usize,
    clique: usize,
) -> Result<RolePageRanks> {
    FamilySystem { family, alpha, k, decoy_tail, prize_tail, clique: Some(clique) }
        .solve(scenario)
}

/// Convenience wrapper: solve the infinite-clique limit in teleport units.
pub fn solve_family_system_limit(
    family: Family,
    scenario: Scenario,
    alpha: f64,
    k: usize,
    decoy_tail: usize,
    prize_tail: usize,
) -> Result<RolePageRanks> {
    FamilySystem { family, alpha, k, decoy_tail, prize_tail, clique: None }.solve(scenario)
}

/// Optimal-over-naive PageRank ratio for the cycle-vs-sink family in the
/// infinite-clique limit, as a rational function of the tail lengths.
/// Matches the limit-regime [`FamilySystem::gap_ratio`] identically.
pub fn naive_ratio(alpha: f64, k: usize, prize_tail: usize, decoy_tail: usize) -> f64 {
    let a = alpha;
    let k = k as f64;
    let t_p = prize_tail as f64;
    let t_d = decoy_tail as f64;
    let num = (a.powi(3) - 2.0 * a * a) * k * t_p + (a * a - 2.0 * a) * k + a - 2.0;
    let den = (a.powi(4) - a * a) * k * t_d + (a.powi(3) - a) * k - a.powi(3)
        + 2.0 * a * a
        + a
        - 2.0;
    num / den
}

/// Limit of [`naive_ratio`] as the instance grows, keeping the decoys ahead
/// of the prizes by a naive-score margin of `delta`.
pub fn naive_ratio_limit(alpha: f64, delta: f64) -> f64 {
    let a = alpha;
    (2.0 - a)
        / ((a.powi(3) - a * a - a + 1.0) * delta + 2.0 * a.powi(3) - 2.0 * a * a - 2.0 * a + 2.0)
}

/// Supremum of the naive strategy's loss factor over the whole family:
/// `(2 - alpha) / (2 (1 - alpha) (1 - alpha^2))`.
pub fn naive_ratio_bound(alpha: f64) -> f64 {
    naive_ratio_limit(alpha, 0.0)
}

/// Loss-factor limit for a tail-free, clique-free variant of the same trap.
/// The rational form is negative throughout (0, 1); its magnitude is the
/// ratio. About -4.69 at alpha = 0.85.
pub fn no_clique_bound(alpha: f64) -> f64 {
    let a = alpha;
    (2.0 * a.powi(4) + a * a + a - 6.0) / (4.0 * a.powi(3) - 6.0 * a * a - 4.0 * a + 6.0)
}

/// Optimal-over-greedy PageRank ratio for the sink-vs-sink family with
/// decoy tails `c + 1`, prize tails `c`, and a clique of `c^2`, as one exact
/// rational function. Matches [`FamilySystem::gap_ratio`] on that instance.
pub fn reach_greedy_ratio(alpha: f64, k: usize, c: usize) -> f64 {
    let a = alpha;
    let k = k as f64;
    let c = c as f64;
    let num = -((a * a * c * k + a * k + 1.0)
        * ((1.0 - a.powi(4)) * (c + 1.0) * k
            + (1.0 - a * a) * c * k
            + (-a.powi(3) - a + 2.0) * k
            + c * c
            - a * a
            + 1.0));
    let den = ((-a.powi(3) - a * a + a + 1.0) * (c + 1.0) * k
        + (a + 1.0) * c * k
        + (-a * a + a + 2.0) * k
        + (a + 1.0) * c * c
        + a
        + 1.0)
        * ((a.powi(3) - a * a) * (c + 1.0) * k + (a * a - a) * k + a - 1.0);
    num / den
}

/// Supremum of [`reach_greedy_ratio`] as `c` grows: `1 / (1 - alpha^2)`,
/// the amplification of the target-to-prize-and-back loop.
pub fn reach_greedy_ratio_limit(alpha: f64) -> f64 {
    1.0 / (1.0 - alpha * alpha)
}

/// Approximation factor of greedy maximization for a monotone submodular
/// objective: `1 - 1/e`.
pub fn submodular_greedy_factor() -> f64 {
    1.0 - (-1.0f64).exp()
}

/// Worst-case fraction of the optimal `pi_x` that greedy-by-reachability
/// retains: `(1 - alpha^2) (1 - 1/e)`. The reachability objective is
/// submodular, so greedy keeps `1 - 1/e` of the optimal reachability, and
/// translating reachability back to PageRank costs at most the self-visit
/// spread `1 - alpha^2`.
pub fn greedy_guarantee_factor(alpha: f64) -> f64 {
    (1.0 - alpha * alpha) * submodular_greedy_factor()
}
