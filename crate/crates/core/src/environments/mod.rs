//! Reward environments and the grid oracle used to compute regret.

mod glucose;
mod gmm;
mod oracle;
mod sparse;

pub use glucose::glucose_reward;
pub use gmm::{GmmEnvConfig, GmmEnvironment};
pub use oracle::{full_grid_oracle, grid_oracle, OracleConfig};
pub use sparse::{ArmProfile, ContextRegion, SparseRelevanceEnvConfig, SparseRelevanceEnvironment};

use rand::Rng;

use crate::bandit::BanditRng;

/// Bernoulli draw with success probability `p` (clamped to `[0, 1]`).
pub(crate) fn bernoulli(p: f64, rng: &mut BanditRng) -> f64 {
    if rng.random::<f64>() < p {
        1.0
    } else {
        0.0
    }
}

pub(crate) fn uniform_point(dim: usize, rng: &mut BanditRng) -> Vec<f64> {
    (0..dim).map(|_| rng.random::<f64>()).collect()
}
