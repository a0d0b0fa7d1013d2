use rustc_hash::FxHashMap;

use crate::bandit::{seeded_rng, ArgMax, ArmVector, BanditRng, ContextVector, Policy};
use crate::partition::{ceil_root, cell_index, linear_cell_index, CellStats};
use crate::{Error, Result};

/// `⌈T^{1/(2 + d_x + d_a)}⌉`.
pub fn iup_m(horizon: u64, context_dim: usize, arm_dim: usize) -> usize {
    ceil_root(horizon.max(1), (2 + context_dim + arm_dim) as u32) as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct IupConfig {
    pub context_dim: usize,
    pub arm_dim: usize,
    pub horizon: u64,
    pub multiplier: f64,
    /// Partition number; `None` uses [`iup_m`].
    pub partitions: Option<usize>,
}

impl IupConfig {
    pub fn new(context_dim: usize, arm_dim: usize, horizon: u64) -> Self {
        Self {
            context_dim,
            arm_dim,
            horizon,
            multiplier: 1.0,
            partitions: None,
        }
    }

    pub fn with_multiplier(mut self, multiplier: f64) -> Self {
        self.multiplier = multiplier;
        self
    }

    pub fn partition_number(&self) -> usize {
        self.partitions
            .unwrap_or_else(|| iup_m(self.horizon, self.context_dim, self.arm_dim))
    }
}

/// Uniform partitioning of the joint context-arm cube into `m^{d_x + d_a}`
/// hypercubes. Among the cubes whose context projection holds the current
/// context, plays the arm-projection center of the cube with the largest
/// `mean + multiplier * sqrt(2 ln t / N)` (unvisited cubes first).
pub struct Iup {
    config: IupConfig,
    m: usize,
    arm_cells: u64,
    store: FxHashMap<u64, CellStats>,
    round: u64,
    rng: BanditRng,
}

impl Iup {
    pub fn new(config: IupConfig) -> Result<Self> {
        if config.context_dim == 0 || config.arm_dim == 0 || config.horizon == 0 {
            return Err(Error::config("dimensions and horizon must be positive"));
        }
        if !(config.multiplier.is_finite() && config.multiplier > 0.0) {
            return Err(Error::config("confidence multiplier must be positive"));
        }
        let m = config.partition_number();
        if m == 0 {
            return Err(Error::config("partition number must be at least 1"));
        }
        let total = (m as u128).checked_pow((config.context_dim + config.arm_dim) as u32);
        if total.is_none_or(|t| t > u64::MAX as u128) {
            return Err(Error::config("m^(d_x + d_a) overflows the cube index"));
        }
        Ok(Self {
            arm_cells: (m as u64).pow(config.arm_dim as u32),
            m,
            config,
            store: FxHashMap::default(),
            round: 0,
            rng: seeded_rng(0, 0),
        })
    }

    pub fn partitions(&self) -> usize {
        self.m
    }

    /// Number of hypercubes with at least one observation.
    pub fn stored_cells(&self) -> usize {
        self.store.len()
    }

    fn context_cell(&self, context: &ContextVector) -> Result<u64> {
        if context.dim() != self.config.context_dim {
            return Err(Error::domain("context dimension mismatch"));
        }
        let idx: Vec<usize> = context
            .values()
            .iter()
            .map(|&v| cell_index(v, self.m))
            .collect::<Result<_>>()?;
        Ok(linear_cell_index(&idx, self.m))
    }

    /// Joint-cube ids whose context projection contains `context`.
    pub fn candidate_cubes(&self, context: &ContextVector) -> Result<Vec<u64>> {
        let c = self.context_cell(context)?;
        Ok((0..self.arm_cells).map(|a| c * self.arm_cells + a).collect())
    }

    fn arm_center(&self, arm_cell: u64) -> ArmVector {
        let m = self.m as u64;
        let mut values = vec![0.0; self.config.arm_dim];
        let mut rest = arm_cell;
        for v in values.iter_mut().rev() {
            *v = ((rest % m) as f64 + 0.5) / self.m as f64;
            rest /= m;
        }
        ArmVector::from_unchecked(values)
    }

    pub fn iup_choose(&mut self, context: &ContextVector) -> Result<ArmVector> {
        let c = self.context_cell(context)?;
        self.round += 1;
        let log_t = (self.round as f64).ln();
        let mut best = ArgMax::new();
        for a in 0..self.arm_cells {
            let index = match self.store.get(&(c * self.arm_cells + a)) {
                None => f64::INFINITY,
                Some(s) => s.mean + self.config.multiplier * (2.0 * log_t / s.count as f64).sqrt(),
            };
            best.offer(a as usize, index, &mut self.rng);
        }
        Ok(self.arm_center(best.index().expect("at least one arm cell") as u64))
    }
}

impl Policy for Iup {
    fn name(&self) -> &str {
        "iup"
    }

    fn context_dim(&self) -> usize {
        self.config.context_dim
    }

    fn arm_dim(&self) -> usize {
        self.config.arm_dim
    }

    fn choose(&mut self, context: &ContextVector) -> Result<ArmVector> {
        self.iup_choose(context)
    }

    fn learn(&mut self, context: &ContextVector, arm: &ArmVector, reward: f64) -> Result<()> {
        if arm.dim() != self.config.arm_dim {
            return Err(Error::domain("arm dimension mismatch"));
        }
        let c = self.context_cell(context)?;
        let idx: Vec<usize> = arm
            .values()
            .iter()
            .map(|&v| cell_index(v, self.m))
            .collect::<Result<_>>()?;
        let key = c * self.arm_cells + linear_cell_index(&idx, self.m);
        self.store.entry(key).or_default().record(reward);
        Ok(())
    }

    fn reset(&mut self, seed: u64) {
        self.store.clear();
        self.round = 0;
        self.rng = seeded_rng(seed, 0);
    }
}
