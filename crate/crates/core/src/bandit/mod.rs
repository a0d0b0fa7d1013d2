//! Shared domain types and the policy/environment round-loop contracts.

mod concentration;
mod rng;
mod ties;

pub use concentration::selfnormalized_bound;
pub use rng::{seeded_rng, BanditRng};
pub(crate) use ties::ArgMax;

use crate::{Error, Result};

macro_rules! unit_cube_point {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(Vec<f64>);

        impl $name {
            /// Validates that every coordinate is finite and lies in `[0, 1]`.
            pub fn new(values: Vec<f64>) -> Result<Self> {
                if values.is_empty() {
                    return Err(Error::domain(concat!($what, " must have at least one coordinate")));
                }
                if let Some((i, v)) = values
                    .iter()
                    .enumerate()
                    .find(|(_, v)| !(v.is_finite() && (0.0..=1.0).contains(*v)))
                {
                    return Err(Error::domain(format!(
                        concat!($what, " coordinate {} = {} is outside [0, 1]"),
                        i, v
                    )));
                }
                Ok(Self(values))
            }

            /// Like [`Self::new`] but also checks the dimension.
            pub fn with_dim(values: Vec<f64>, dim: usize) -> Result<Self> {
                if values.len() != dim {
                    return Err(Error::domain(format!(
                        concat!($what, " has {} coordinates, expected {}"),
                        values.len(),
                        dim
                    )));
                }
                Self::new(values)
            }

            pub(crate) fn from_unchecked(values: Vec<f64>) -> Self {
                debug_assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
                Self(values)
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn values(&self) -> &[f64] {
                &self.0
            }

            /// Callers must keep every coordinate inside `[0, 1]`.
            #[allow(dead_code)]
            pub(crate) fn values_mut(&mut self) -> &mut [f64] {
                &mut self.0
            }

            pub fn into_values(self) -> Vec<f64> {
                self.0
            }
        }

        impl std::ops::Index<usize> for $name {
            type Output = f64;

            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }
    };
}

unit_cube_point!(
    /// A context `x(t)` in `[0, 1]^{d_x}`.
    ContextVector,
    "context"
);
unit_cube_point!(
    /// An arm `a(t)` in `[0, 1]^{d_a}`.
    ArmVector,
    "arm"
);

/// Everything observed and evaluated in one round of the loop.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    /// 1-based round index.
    pub round: usize,
    pub context: ContextVector,
    pub arm: ArmVector,
    /// Sampled reward fed back to the policy.
    pub reward: f64,
    /// Expected reward of the chosen arm, reported by the environment.
    pub expected_reward: f64,
    /// Best achievable expected reward for this context.
    pub oracle_reward: f64,
}

impl RoundRecord {
    pub fn gap(&self) -> f64 {
        self.oracle_reward - self.expected_reward
    }
}

/// Prefix sums of the per-round pseudo-regret `oracle_reward - expected_reward`.
pub fn cumulative_regret(trajectory: &[RoundRecord]) -> Vec<f64> {
    trajectory
        .iter()
        .scan(0.0, |acc, r| {
            *acc += r.gap();
            Some(*acc)
        })
        .collect()
}

/// A learner that picks an arm for each context and learns from the reward.
///
/// Two policies constructed from the same configuration and reset with the
/// same seed must return identical arm sequences for identical inputs.
pub trait Policy: Send {
    fn name(&self) -> &str;

    fn context_dim(&self) -> usize;

    fn arm_dim(&self) -> usize;

    fn choose(&mut self, context: &ContextVector) -> Result<ArmVector>;

    /// Feeds back the reward for `arm`, which must be the arm just returned by
    /// [`Policy::choose`] for `context`.
    fn learn(&mut self, context: &ContextVector, arm: &ArmVector, reward: f64) -> Result<()>;

    /// Discards all learned state and reseeds the policy's RNG.
    fn reset(&mut self, seed: u64);
}

/// Best arm and its expected reward for a given context.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleChoice {
    pub arm: ArmVector,
    pub reward: f64,
}

/// A stochastic reward source. Read-only apart from the caller-owned RNG.
pub trait Environment: Send + Sync {
    fn context_dim(&self) -> usize;

    fn arm_dim(&self) -> usize;

    /// Context dimensions the expected reward may depend on (0-based).
    fn relevant_context_dims(&self) -> Vec<usize>;

    /// Arm dimensions the expected reward may depend on (0-based).
    fn relevant_arm_dims(&self) -> Vec<usize>;

    fn sample_context(&self, rng: &mut BanditRng) -> ContextVector;

    fn expected_reward(&self, context: &ContextVector, arm: &ArmVector) -> f64;

    /// Draws a reward whose mean is [`Environment::expected_reward`].
    fn sample_reward(&self, context: &ContextVector, arm: &ArmVector, rng: &mut BanditRng) -> f64;

    fn oracle(&self, context: &ContextVector) -> OracleChoice;

    fn oracle_best(&self, context: &ContextVector) -> f64 {
        self.oracle(context).reward
    }
}
