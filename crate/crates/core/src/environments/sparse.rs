use super::{bernoulli, grid_oracle, uniform_point, OracleConfig};
use crate::bandit::{ArmVector, BanditRng, ContextVector, Environment, OracleChoice};
use crate::{Error, Result};

/// How the reward varies along the first relevant arm coordinate inside a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArmProfile {
    /// Constant 1; the arm does not matter.
    Flat,
    /// Triangle peaking at 1 in the middle of the region, 0 at its edges.
    Tent,
}

/// Arms whose first relevant coordinate lies in `(previous upper, arm_upper]`
/// depend on the context only through `context_dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextRegion {
    pub arm_upper: f64,
    pub context_dims: Vec<usize>,
}

/// Fixture environment with known relevance:
///
/// `μ_a(x) = baseline + amplitude * profile_r(a_{c_0}) * mean(x_{c_r})`
///
/// where `r` is the region containing `a_{c_0}`. Only the listed coordinates
/// enter the reward, so perturbing any other coordinate leaves it unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRelevanceEnvConfig {
    pub context_dim: usize,
    pub arm_dim: usize,
    /// Relevant arm dimensions `c`; regions and profiles use the first one.
    pub arm_dims: Vec<usize>,
    pub regions: Vec<ContextRegion>,
    pub profile: ArmProfile,
    pub baseline: f64,
    pub amplitude: f64,
}

impl SparseRelevanceEnvConfig {
    /// A single region covering every arm.
    pub fn single(
        context_dim: usize,
        arm_dim: usize,
        context_dims: Vec<usize>,
        arm_dims: Vec<usize>,
        profile: ArmProfile,
        baseline: f64,
        amplitude: f64,
    ) -> Self {
        Self {
            context_dim,
            arm_dim,
            arm_dims,
            regions: vec![ContextRegion {
                arm_upper: 1.0,
                context_dims,
            }],
            profile,
            baseline,
            amplitude,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SparseRelevanceEnvironment {
    config: SparseRelevanceEnvConfig,
    oracle: OracleConfig,
}

impl SparseRelevanceEnvironment {
    pub fn new(config: SparseRelevanceEnvConfig, oracle: OracleConfig) -> Result<Self> {
        let c = &config;
        if c.regions.is_empty() {
            return Err(Error::config("at least one context region is required"));
        }
        if c.regions.windows(2).any(|w| w[0].arm_upper >= w[1].arm_upper)
            || c.regions[0].arm_upper <= 0.0
            || c.regions.last().is_some_and(|r| r.arm_upper != 1.0)
        {
            return Err(Error::config(
                "region upper bounds must increase strictly and end at 1",
            ));
        }
        for r in &c.regions {
            if r.context_dims.is_empty()
                || r.context_dims.windows(2).any(|w| w[0] >= w[1])
                || r.context_dims.iter().any(|&d| d >= c.context_dim)
            {
                return Err(Error::config(format!(
                    "region context dims {:?} must be nonempty, increasing and < {}",
                    r.context_dims, c.context_dim
                )));
            }
        }
        if c.arm_dims.windows(2).any(|w| w[0] >= w[1]) || c.arm_dims.iter().any(|&d| d >= c.arm_dim) {
            return Err(Error::config("arm dims must be increasing and in range"));
        }
        if c.arm_dims.is_empty() && (c.regions.len() > 1 || c.profile != ArmProfile::Flat) {
            return Err(Error::config(
                "regions and tent profiles need a relevant arm dimension",
            ));
        }
        if c.profile == ArmProfile::Flat && c.regions.len() > 1 {
            return Err(Error::config(
                "a flat profile with several regions would be discontinuous",
            ));
        }
        if !(c.baseline >= 0.0 && c.amplitude >= 0.0 && c.baseline + c.amplitude <= 1.0) {
            return Err(Error::config("need 0 <= baseline, amplitude and baseline + amplitude <= 1"));
        }
        if oracle.resolution < 2 {
            return Err(Error::config("oracle resolution must be at least 2"));
        }
        Ok(Self { config, oracle })
    }

    pub fn config(&self) -> &SparseRelevanceEnvConfig {
        &self.config
    }

    /// A Lipschitz constant for the reward in the relevant coordinates
    /// (Euclidean norms, context and arm distances added).
    pub fn lipschitz(&self) -> f64 {
        let c = &self.config;
        let context = c
            .regions
            .iter()
            .map(|r| 1.0 / (r.context_dims.len() as f64).sqrt())
            .fold(0.0, f64::max);
        let arm = match c.profile {
            ArmProfile::Flat => 0.0,
            ArmProfile::Tent => self
                .region_bounds()
                .map(|(lo, hi)| 2.0 / (hi - lo))
                .fold(0.0, f64::max),
        };
        c.amplitude * context.max(arm)
    }

    fn region_bounds(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let uppers = self.config.regions.iter().map(|r| r.arm_upper);
        std::iter::once(0.0)
            .chain(uppers.clone())
            .zip(uppers)
    }

    fn region_of(&self, z: f64) -> usize {
        self.config
            .regions
            .iter()
            .position(|r| z <= r.arm_upper)
            .unwrap_or(self.config.regions.len() - 1)
    }

    fn reward(&self, context: &[f64], arm: &[f64]) -> f64 {
        let c = &self.config;
        let (region, profile) = match c.arm_dims.first() {
            None => (0, 1.0),
            Some(&d) => {
                let z = arm[d];
                let r = self.region_of(z);
                let profile = match c.profile {
                    ArmProfile::Flat => 1.0,
                    ArmProfile::Tent => {
                        let (lo, hi) = self.region_bounds().nth(r).expect("region exists");
                        let mid = 0.5 * (lo + hi);
                        (1.0 - (2.0 * (z - mid) / (hi - lo)).abs()).max(0.0)
                    }
                };
                (r, profile)
            }
        };
        let dims = &c.regions[region].context_dims;
        let signal = dims.iter().map(|&d| context[d]).sum::<f64>() / dims.len() as f64;
        (c.baseline + c.amplitude * profile * signal).clamp(0.0, 1.0)
    }
}

impl Environment for SparseRelevanceEnvironment {
    fn context_dim(&self) -> usize {
        self.config.context_dim
    }

    fn arm_dim(&self) -> usize {
        self.config.arm_dim
    }

    fn relevant_context_dims(&self) -> Vec<usize> {
        let mut dims: Vec<usize> = self
            .config
            .regions
            .iter()
            .flat_map(|r| r.context_dims.iter().copied())
            .collect();
        dims.sort_unstable();
        dims.dedup();
        dims
    }

    fn relevant_arm_dims(&self) -> Vec<usize> {
        self.config.arm_dims.clone()
    }

    fn sample_context(&self, rng: &mut BanditRng) -> ContextVector {
        ContextVector::from_unchecked(uniform_point(self.config.context_dim, rng))
    }

    fn expected_reward(&self, context: &ContextVector, arm: &ArmVector) -> f64 {
        self.reward(context.values(), arm.values())
    }

    fn sample_reward(&self, context: &ContextVector, arm: &ArmVector, rng: &mut BanditRng) -> f64 {
        bernoulli(self.expected_reward(context, arm), rng)
    }

    fn oracle(&self, context: &ContextVector) -> OracleChoice {
        grid_oracle(
            self.config.arm_dim,
            &self.config.arm_dims,
            self.oracle.resolution,
            |arm| self.expected_reward(context, arm),
        )
    }
}
