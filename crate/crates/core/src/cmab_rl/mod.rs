//! The relevance-learning contextual bandit policy.
//!
//! Each `2d̄x`-tuple `w` of context dimensions gets its own uniform partition of
//! `[0,1]^{2d̄x}`; every arm keeps a count and sample mean per cell. For the
//! current context an arm's `d̄x`-tuple `v` stays a relevance candidate when
//! the sample means of all supertuples of `v` agree within the joint
//! uncertainty. Among candidates the tuple whose supertuple means vary least
//! is used to pool a count-weighted estimate, and the arm with the largest
//! `estimate + 5 u_max` is played, `u_max` being the arm's widest radius over
//! all `2d̄x`-tuples.

mod relevance;
mod snapshot;

use std::cell::Cell;

use rand::Rng;

pub use relevance::{
    aggregate_mean, confidence_numerator, passes_relevance_test, relevance_and_variation,
    uncertainty, variation, CellEstimate,
};
pub use snapshot::{parse_snapshot, SnapshotEntry};

use crate::bandit::{seeded_rng, ArgMax, ArmVector, BanditRng, ContextVector, Policy};
use crate::partition::{
    binomial, ceil_root, enumerate_tuples, generate_arms, supertuples, CellId, DimensionTuple,
    DiscretizedArmSet, StatsStore,
};
use crate::partition::{linear_cell_index, CellStats};
use crate::{Error, Result};

/// Exploration weight on the widest uncertainty term in the arm index.
pub const UCB_WEIGHT: f64 = 5.0;

/// `⌈T^{1/(2 + 2d̄x + d̄a)}⌉`.
pub fn m_for_horizon(horizon: u64, relevant_context: usize, relevant_arm: usize) -> usize {
    let exponent = 2 + 2 * relevant_context + relevant_arm;
    ceil_root(horizon.max(1), exponent as u32) as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmabRlConfig {
    pub context_dim: usize,
    pub arm_dim: usize,
    /// Upper bound `d̄x` on the number of relevant context dimensions.
    pub relevant_context: usize,
    /// Upper bound `d̄a` on the number of relevant arm dimensions.
    pub relevant_arm: usize,
    pub horizon: u64,
    pub lipschitz: f64,
    /// Scales every uncertainty term.
    pub multiplier: f64,
    /// Partition number; `None` uses [`m_for_horizon`].
    pub partitions: Option<usize>,
}

impl CmabRlConfig {
    pub fn new(
        context_dim: usize,
        arm_dim: usize,
        relevant_context: usize,
        relevant_arm: usize,
        horizon: u64,
    ) -> Self {
        Self {
            context_dim,
            arm_dim,
            relevant_context,
            relevant_arm,
            horizon,
            lipschitz: 1.0,
            multiplier: 1.0,
            partitions: None,
        }
    }

    pub fn with_multiplier(mut self, multiplier: f64) -> Self {
        self.multiplier = multiplier;
        self
    }

    pub fn with_lipschitz(mut self, lipschitz: f64) -> Self {
        self.lipschitz = lipschitz;
        self
    }

    pub fn with_partitions(mut self, m: usize) -> Self {
        self.partitions = Some(m);
        self
    }

    pub fn partition_number(&self) -> usize {
        self.partitions
            .unwrap_or_else(|| m_for_horizon(self.horizon, self.relevant_context, self.relevant_arm))
    }

    pub fn validate(&self) -> Result<()> {
        let c = self;
        if c.relevant_context == 0 || c.relevant_arm == 0 {
            return Err(Error::config("relevant dimension bounds must be positive"));
        }
        if 2 * c.relevant_context > c.context_dim {
            return Err(Error::config(format!(
                "2 * relevant_context = {} exceeds context_dim = {}",
                2 * c.relevant_context,
                c.context_dim
            )));
        }
        if c.relevant_arm > c.arm_dim {
            return Err(Error::config(format!(
                "relevant_arm = {} exceeds arm_dim = {}",
                c.relevant_arm, c.arm_dim
            )));
        }
        if c.horizon == 0 {
            return Err(Error::config("horizon must be at least 1"));
        }
        if !(c.lipschitz.is_finite() && c.lipschitz > 0.0) {
            return Err(Error::config("lipschitz constant must be positive"));
        }
        if !(c.multiplier.is_finite() && c.multiplier > 0.0) {
            return Err(Error::config("confidence multiplier must be positive"));
        }
        if c.partitions == Some(0) {
            return Err(Error::config("partition number must be at least 1"));
        }
        let m = c.partition_number() as u128;
        if m.checked_pow(2 * c.relevant_context as u32)
            .is_none_or(|cells| cells > u64::MAX as u128)
        {
            return Err(Error::config("m^(2 relevant_context) overflows the cell index"));
        }
        Ok(())
    }
}

/// Cell of every `2d̄x`-tuple that a context falls into, indexed by tuple rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundCells(Vec<CellId>);

impl RoundCells {
    pub fn cells(&self) -> &[CellId] {
        &self.0
    }
}

pub struct CmabRl {
    config: CmabRlConfig,
    m: usize,
    arms: DiscretizedArmSet,
    /// `V^{d̄x}_x` in lexicographic order.
    narrow: Vec<DimensionTuple>,
    /// `V^{2d̄x}_x` in lexicographic order.
    wide: Vec<DimensionTuple>,
    /// For each narrow tuple, ranks of its supertuples within `wide`.
    supertuple_ranks: Vec<Vec<usize>>,
    cbar: u64,
    numerator: f64,
    slack: f64,
    store: StatsStore,
    rng: BanditRng,
    pending: Option<usize>,
    stat_reads: Cell<u64>,
    // scratch reused across rounds
    estimates: Vec<CellEstimate>,
    candidates: Vec<(usize, f64)>,
}

impl CmabRl {
    pub fn new(config: CmabRlConfig) -> Result<Self> {
        config.validate()?;
        let m = config.partition_number();
        let arms = generate_arms(config.arm_dim, config.relevant_arm, m)?;
        let narrow = enumerate_tuples(config.context_dim, config.relevant_context)?;
        let wide = enumerate_tuples(config.context_dim, 2 * config.relevant_context)?;
        let supertuple_ranks = narrow
            .iter()
            .map(|v| {
                let supers = supertuples(v, 2 * config.relevant_context, config.context_dim)?;
                Ok(supers
                    .iter()
                    .map(|w| wide.binary_search(w).expect("supertuple is in the catalog"))
                    .collect())
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        let cbar = binomial(config.context_dim - 1, 2 * config.relevant_context - 1);
        let slack = 2.0 * config.lipschitz * (config.relevant_context as f64).sqrt() / m as f64;
        let mut policy = Self {
            m,
            numerator: 0.0,
            slack,
            estimates: vec![
                CellEstimate {
                    mean: 0.0,
                    count: 0,
                    radius: f64::INFINITY
                };
                wide.len()
            ],
            candidates: Vec::with_capacity(narrow.len()),
            arms,
            narrow,
            wide,
            supertuple_ranks,
            cbar,
            store: StatsStore::new(),
            rng: seeded_rng(0, 0),
            pending: None,
            stat_reads: Cell::new(0),
            config,
        };
        policy.refresh_numerator();
        Ok(policy)
    }

    fn refresh_numerator(&mut self) {
        self.numerator = confidence_numerator(
            self.arms.len(),
            self.cbar,
            self.m,
            self.config.relevant_context,
            self.config.horizon,
        );
    }

    pub fn config(&self) -> &CmabRlConfig {
        &self.config
    }

    pub fn partitions(&self) -> usize {
        self.m
    }

    pub fn arm_set(&self) -> &DiscretizedArmSet {
        &self.arms
    }

    pub fn narrow_tuples(&self) -> &[DimensionTuple] {
        &self.narrow
    }

    pub fn wide_tuples(&self) -> &[DimensionTuple] {
        &self.wide
    }

    /// Ranks (within [`Self::wide_tuples`]) of the supertuples of narrow tuple `v`.
    pub fn supertuple_ranks(&self, v: usize) -> &[usize] {
        &self.supertuple_ranks[v]
    }

    /// `C̄ = C(d_x - 1, 2d̄x - 1)`.
    pub fn cbar(&self) -> u64 {
        self.cbar
    }

    pub fn store(&self) -> &StatsStore {
        &self.store
    }

    /// Number of (mean, uncertainty) cell reads performed since the last reset.
    pub fn stat_reads(&self) -> u64 {
        self.stat_reads.get()
    }

    /// Uncertainty term of a cell visited `count` times.
    pub fn uncertainty(&self, count: u64) -> f64 {
        CellEstimate::from_stats(CellStats { count, mean: 0.0 }, self.numerator, self.config.multiplier)
            .radius
    }

    pub fn round_cells(&self, context: &ContextVector) -> Result<RoundCells> {
        if context.dim() != self.config.context_dim {
            return Err(Error::domain(format!(
                "context has {} coordinates, expected {}",
                context.dim(),
                self.config.context_dim
            )));
        }
        let per_dim: Vec<usize> = context
            .values()
            .iter()
            .map(|&v| crate::partition::cell_index(v, self.m))
            .collect::<Result<_>>()?;
        let mut intervals = Vec::with_capacity(2 * self.config.relevant_context);
        Ok(RoundCells(
            self.wide
                .iter()
                .enumerate()
                .map(|(rank, w)| {
                    intervals.clear();
                    intervals.extend(w.dims().iter().map(|&d| per_dim[d]));
                    CellId {
                        tuple: rank as u32,
                        cell: linear_cell_index(&intervals, self.m),
                    }
                })
                .collect(),
        ))
    }

    /// Estimates of arm `y` at every `2d̄x`-tuple's current cell.
    pub fn cell_estimates(&self, y: usize, cells: &RoundCells) -> Vec<CellEstimate> {
        let mut out = Vec::with_capacity(cells.0.len());
        self.gather(y, cells, &mut out);
        out
    }

    fn gather(&self, y: usize, cells: &RoundCells, out: &mut Vec<CellEstimate>) {
        out.clear();
        out.extend(cells.0.iter().map(|&c| {
            CellEstimate::from_stats(self.store.get(y, c), self.numerator, self.config.multiplier)
        }));
        self.stat_reads
            .set(self.stat_reads.get() + cells.0.len() as u64);
    }

    /// Ranks of the narrow tuples that pass the relevance test for arm `y`.
    pub fn candidate_relevant_tuples(&self, y: usize, cells: &RoundCells) -> Vec<usize> {
        let est = self.cell_estimates(y, cells);
        (0..self.narrow.len())
            .filter(|&v| passes_relevance_test(&est, &self.supertuple_ranks[v], self.slack))
            .collect()
    }

    pub fn variation(&self, y: usize, v: usize, cells: &RoundCells) -> f64 {
        variation(&self.cell_estimates(y, cells), &self.supertuple_ranks[v])
    }

    pub fn aggregate_mean(&self, y: usize, v: usize, cells: &RoundCells) -> f64 {
        aggregate_mean(&self.cell_estimates(y, cells), &self.supertuple_ranks[v])
    }

    /// Estimated relevant tuple for arm `y`: the minimum-variation candidate
    /// (random among ties), or a uniformly random narrow tuple when
    /// `candidates` is empty.
    pub fn select_estimated_tuple(
        &mut self,
        y: usize,
        candidates: &[usize],
        cells: &RoundCells,
    ) -> usize {
        let est = self.cell_estimates(y, cells);
        let scored: Vec<(usize, f64)> = candidates
            .iter()
            .map(|&v| (v, variation(&est, &self.supertuple_ranks[v])))
            .collect();
        pick_estimated_tuple(&scored, self.narrow.len(), &mut self.rng)
    }

    /// Runs one selection step and returns the chosen arm id.
    pub fn choose_arm(&mut self, context: &ContextVector) -> Result<usize> {
        let cells = self.round_cells(context)?;
        let mut best = ArgMax::new();
        let mut estimates = std::mem::take(&mut self.estimates);
        let mut candidates = std::mem::take(&mut self.candidates);
        for y in 0..self.arms.len() {
            self.gather(y, &cells, &mut estimates);
            let widest = estimates
                .iter()
                .fold(0.0f64, |acc, e| acc.max(e.radius));
            let ucb = if widest.is_infinite() {
                // The index is +inf whatever tuple gets estimated.
                f64::INFINITY
            } else {
                candidates.clear();
                for (v, supers) in self.supertuple_ranks.iter().enumerate() {
                    let (passes, var) = relevance_and_variation(&estimates, supers, self.slack);
                    if passes {
                        candidates.push((v, var));
                    }
                }
                let chosen = pick_estimated_tuple(&candidates, self.narrow.len(), &mut self.rng);
                aggregate_mean(&estimates, &self.supertuple_ranks[chosen]) + UCB_WEIGHT * widest
            };
            best.offer(y, ucb, &mut self.rng);
        }
        self.estimates = estimates;
        self.candidates = candidates;
        let y = best.index().expect("arm set is nonempty");
        self.pending = Some(y);
        Ok(y)
    }

    /// Updates arm `y`'s statistics in the context's cell of every `2d̄x`-tuple.
    pub fn learn_arm(&mut self, context: &ContextVector, y: usize, reward: f64) -> Result<()> {
        if y >= self.arms.len() {
            return Err(Error::domain(format!("arm id {y} is out of range")));
        }
        if !reward.is_finite() {
            return Err(Error::domain(format!("reward {reward} is not finite")));
        }
        let cells = self.round_cells(context)?;
        for &cell in &cells.0 {
            self.store.update(y, cell, reward);
        }
        Ok(())
    }

    /// Restricts play to a finite arm list: each cell of the arm partition
    /// that contains a listed arm is represented by the first such arm, and
    /// cells containing none are dropped. Clears all statistics.
    pub fn restrict_arms(&mut self, finite: &[ArmVector]) -> Result<()> {
        if finite.is_empty() {
            return Err(Error::domain("finite arm list is empty"));
        }
        if let Some(a) = finite.iter().find(|a| a.dim() != self.config.arm_dim) {
            return Err(Error::domain(format!(
                "arm has {} coordinates, expected {}",
                a.dim(),
                self.config.arm_dim
            )));
        }
        let full = generate_arms(self.config.arm_dim, self.config.relevant_arm, self.m)?;
        self.arms = full.restricted_to(finite);
        self.store.clear();
        self.pending = None;
        self.refresh_numerator();
        Ok(())
    }
}

fn pick_estimated_tuple(scored: &[(usize, f64)], narrow: usize, rng: &mut BanditRng) -> usize {
    if scored.is_empty() {
        return rng.random_range(0..narrow);
    }
    let mut best = ArgMax::new();
    for &(v, var) in scored {
        best.offer(v, -var, rng);
    }
    best.index().expect("nonempty candidates")
}

impl Policy for CmabRl {
    fn name(&self) -> &str {
        "cmab-rl"
    }

    fn context_dim(&self) -> usize {
        self.config.context_dim
    }

    fn arm_dim(&self) -> usize {
        self.config.arm_dim
    }

    fn choose(&mut self, context: &ContextVector) -> Result<ArmVector> {
        let y = self.choose_arm(context)?;
        Ok(self.arms.arm(y).clone())
    }

    fn learn(&mut self, context: &ContextVector, arm: &ArmVector, reward: f64) -> Result<()> {
        let y = match self.pending.take() {
            Some(y) if self.arms.arm(y) == arm => y,
            _ => self
                .arms
                .position(arm)
                .ok_or_else(|| Error::domain("learned arm is not in the discretized arm set"))?,
        };
        self.learn_arm(context, y, reward)
    }

    fn reset(&mut self, seed: u64) {
        self.store.clear();
        self.rng = seeded_rng(seed, 0);
        self.pending = None;
        self.stat_reads.set(0);
    }
}
