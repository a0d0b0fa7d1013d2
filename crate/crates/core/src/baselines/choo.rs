use rand::Rng;

use crate::bandit::{seeded_rng, ArgMax, ArmVector, BanditRng, ContextVector, Policy};
use crate::{Error, Result};

/// `⌈ln T / (2 ln(1/ρ))⌉`, the depth below which no node is expanded.
pub fn choo_depth_cap(horizon: u64, rho: f64) -> usize {
    let t = horizon.max(1) as f64;
    (t.ln() / (2.0 * (1.0 / rho).ln())).ceil().max(0.0) as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChooConfig {
    pub context_dim: usize,
    pub arm_dim: usize,
    pub horizon: u64,
    pub multiplier: f64,
    /// Smoothness constant; `None` uses `2 sqrt(d_x + d_a)`.
    pub v1: Option<f64>,
    /// Diameter shrink rate; `None` uses `2^(-1/(d_x + d_a))`.
    pub rho: Option<f64>,
    /// `None` uses [`choo_depth_cap`].
    pub depth_cap: Option<usize>,
}

impl ChooConfig {
    pub fn new(context_dim: usize, arm_dim: usize, horizon: u64) -> Self {
        Self {
            context_dim,
            arm_dim,
            horizon,
            multiplier: 1.0,
            v1: None,
            rho: None,
            depth_cap: None,
        }
    }

    pub fn with_multiplier(mut self, multiplier: f64) -> Self {
        self.multiplier = multiplier;
        self
    }

    fn joint_dim(&self) -> usize {
        self.context_dim + self.arm_dim
    }

    pub fn v1(&self) -> f64 {
        self.v1.unwrap_or_else(|| 2.0 * (self.joint_dim() as f64).sqrt())
    }

    pub fn rho(&self) -> f64 {
        self.rho
            .unwrap_or_else(|| 2f64.powf(-1.0 / self.joint_dim() as f64))
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
            .unwrap_or_else(|| choo_depth_cap(self.horizon, self.rho()))
    }
}

/// A region of the joint context-arm cube. Coordinates `0..d_x` are context,
/// the rest are arm. Child 0 holds `[lo, mid]` and child 1 holds `(mid, hi]`
/// along the split dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ChooNode {
    pub depth: usize,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub count: u64,
    pub mean: f64,
    pub u: f64,
    pub b: f64,
    pub children: [Option<usize>; 2],
}

impl ChooNode {
    fn root(dim: usize) -> Self {
        Self {
            depth: 0,
            lo: vec![0.0; dim],
            hi: vec![1.0; dim],
            count: 0,
            mean: 0.0,
            u: f64::INFINITY,
            b: f64::INFINITY,
            children: [None, None],
        }
    }

    /// Longest edge, lowest index on ties.
    pub fn split_dim(&self) -> usize {
        let mut best = 0;
        for i in 1..self.lo.len() {
            if self.hi[i] - self.lo[i] > self.hi[best] - self.lo[best] {
                best = i;
            }
        }
        best
    }

    pub fn midpoint(&self) -> f64 {
        let s = self.split_dim();
        0.5 * (self.lo[s] + self.hi[s])
    }

    fn child_region(&self, side: usize) -> Self {
        let s = self.split_dim();
        let mid = self.midpoint();
        let mut child = Self::root(self.lo.len());
        child.depth = self.depth + 1;
        child.lo.clone_from(&self.lo);
        child.hi.clone_from(&self.hi);
        if side == 0 {
            child.hi[s] = mid;
        } else {
            child.lo[s] = mid;
        }
        child
    }

    /// Whether the context projection of child `side` holds `x`.
    fn child_holds(&self, side: usize, x: &[f64]) -> bool {
        let s = self.split_dim();
        if s >= x.len() {
            return true;
        }
        (x[s] <= self.midpoint()) == (side == 0)
    }

    /// Closed-box containment of the context projection.
    pub fn holds_context(&self, x: &[f64]) -> bool {
        x.iter()
            .enumerate()
            .all(|(i, &v)| self.lo[i] <= v && v <= self.hi[i])
    }
}

/// The outcome of one tree descent.
#[derive(Debug, Clone, PartialEq)]
pub struct Descent {
    /// Existing nodes visited, root first.
    pub path: Vec<usize>,
    /// Node created this round, if any.
    pub new_leaf: Option<usize>,
    pub arm: ArmVector,
}

/// Contextual hierarchical optimistic optimization over a binary tree of
/// hypercubes of the joint space. Each round descends through children whose
/// context projection holds the context, following the larger B-value, and
/// expands one new leaf.
pub struct Choo {
    config: ChooConfig,
    v1: f64,
    rho: f64,
    depth_cap: usize,
    nodes: Vec<ChooNode>,
    round: u64,
    rng: BanditRng,
    pending: Option<Descent>,
}

impl Choo {
    pub fn new(config: ChooConfig) -> Result<Self> {
        if config.context_dim == 0 || config.arm_dim == 0 || config.horizon == 0 {
            return Err(Error::config("dimensions and horizon must be positive"));
        }
        if !(config.multiplier.is_finite() && config.multiplier > 0.0) {
            return Err(Error::config("confidence multiplier must be positive"));
        }
        let (v1, rho) = (config.v1(), config.rho());
        if !(v1.is_finite() && v1 >= 0.0) {
            return Err(Error::config("v1 must be finite and non-negative"));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::config("rho must lie in (0, 1)"));
        }
        Ok(Self {
            depth_cap: config.depth_cap(),
            nodes: vec![ChooNode::root(config.joint_dim())],
            config,
            v1,
            rho,
            round: 0,
            rng: seeded_rng(0, 0),
            pending: None,
        })
    }

    pub fn nodes(&self) -> &[ChooNode] {
        &self.nodes
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    fn arm_bounds(&self, node: usize) -> (&[f64], &[f64]) {
        let n = &self.nodes[node];
        let dx = self.config.context_dim;
        (&n.lo[dx..], &n.hi[dx..])
    }

    pub fn choo_descend(&mut self, context: &ContextVector) -> Result<Descent> {
        if context.dim() != self.config.context_dim {
            return Err(Error::domain("context dimension mismatch"));
        }
        let x = context.values();
        self.round += 1;
        let mut path = vec![0usize];
        let mut current = 0usize;
        loop {
            let node = &self.nodes[current];
            if node.depth >= self.depth_cap {
                let (lo, hi) = self.arm_bounds(current);
                let arm = lo.iter().zip(hi).map(|(l, h)| 0.5 * (l + h)).collect();
                return Ok(Descent {
                    path,
                    new_leaf: None,
                    arm: ArmVector::from_unchecked(arm),
                });
            }
            let eligible: Vec<usize> = (0..2).filter(|&s| node.child_holds(s, x)).collect();
            let missing: Vec<usize> = eligible
                .iter()
                .copied()
                .filter(|&s| node.children[s].is_none())
                .collect();
            if !missing.is_empty() {
                let side = missing[self.rng.random_range(0..missing.len())];
                let child = self.nodes[current].child_region(side);
                let id = self.nodes.len();
                self.nodes.push(child);
                self.nodes[current].children[side] = Some(id);
                let dx = self.config.context_dim;
                let leaf = &self.nodes[id];
                let rng = &mut self.rng;
                let arm: Vec<f64> = leaf.lo[dx..]
                    .iter()
                    .zip(&leaf.hi[dx..])
                    .map(|(&l, &h)| l + (h - l) * rng.random::<f64>())
                    .collect();
                return Ok(Descent {
                    path,
                    new_leaf: Some(id),
                    arm: ArmVector::from_unchecked(arm),
                });
            }
            let mut best = ArgMax::new();
            for &s in &eligible {
                let c = node.children[s].expect("eligible child exists");
                best.offer(c, self.nodes[c].b, &mut self.rng);
            }
            current = best.index().expect("a context lies in some child");
            path.push(current);
        }
    }

    pub fn choo_update(&mut self, descent: &Descent, reward: f64) -> Result<()> {
        if !reward.is_finite() {
            return Err(Error::domain("reward must be finite"));
        }
        let log_t = (self.round.max(1) as f64).ln();
        let touched: Vec<usize> = descent.path.iter().copied().chain(descent.new_leaf).collect();
        for &id in &touched {
            let n = self.nodes.get_mut(id).ok_or_else(|| Error::domain("unknown node"))?;
            n.count += 1;
            n.mean += (reward - n.mean) / n.count as f64;
            n.u = n.mean
                + self.config.multiplier * (2.0 * log_t / n.count as f64).sqrt()
                + self.v1 * self.rho.powi(n.depth as i32);
        }
        for &id in touched.iter().rev() {
            let children = self.nodes[id].children;
            let child_b = children
                .iter()
                .map(|c| c.map_or(f64::INFINITY, |c| self.nodes[c].b))
                .fold(f64::NEG_INFINITY, f64::max);
            let n = &mut self.nodes[id];
            n.b = n.u.min(child_b);
        }
        Ok(())
    }
}

impl Policy for Choo {
    fn name(&self) -> &str {
        "c-hoo"
    }

    fn context_dim(&self) -> usize {
        self.config.context_dim
    }

    fn arm_dim(&self) -> usize {
        self.config.arm_dim
    }

    fn choose(&mut self, context: &ContextVector) -> Result<ArmVector> {
        let d = self.choo_descend(context)?;
        let arm = d.arm.clone();
        self.pending = Some(d);
        Ok(arm)
    }

    fn learn(&mut self, _context: &ContextVector, _arm: &ArmVector, reward: f64) -> Result<()> {
        let d = self
            .pending
            .take()
            .ok_or_else(|| Error::domain("learn called without a preceding choose"))?;
        self.choo_update(&d, reward)
    }

    fn reset(&mut self, seed: u64) {
        self.nodes = vec![ChooNode::root(self.config.joint_dim())];
        self.round = 0;
        self.rng = seeded_rng(seed, 0);
        self.pending = None;
    }
}
