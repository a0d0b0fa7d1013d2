use crate::bandit::{ArmVector, OracleChoice};

/// Grid used to approximate `max_a μ_a(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Number of equal steps per searched arm dimension; the grid has
    /// `resolution + 1` points `0, 1/resolution, …, 1` per dimension, so
    /// doubling the resolution refines the previous grid.
    pub resolution: usize,
    /// Accepted shortfall of the grid maximum below the true maximum.
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            resolution: 1000,
            tolerance: 1e-3,
        }
    }
}

/// Maximizes `reward` over the grid on `dims`; other arm coordinates stay at 0.5.
pub fn grid_oracle<F>(arm_dim: usize, dims: &[usize], resolution: usize, reward: F) -> OracleChoice
where
    F: Fn(&ArmVector) -> f64,
{
    let resolution = resolution.max(1);
    let mut arm = ArmVector::from_unchecked(vec![0.5; arm_dim]);
    let mut steps = vec![0usize; dims.len()];
    let mut best = OracleChoice {
        arm: arm.clone(),
        reward: f64::NEG_INFINITY,
    };
    loop {
        {
            let values = arm.values_mut();
            for (&d, &k) in dims.iter().zip(&steps) {
                values[d] = k as f64 / resolution as f64;
            }
        }
        let r = reward(&arm);
        if r > best.reward {
            best = OracleChoice {
                arm: arm.clone(),
                reward: r,
            };
        }
        let Some(pos) = (0..steps.len()).rev().find(|&i| steps[i] < resolution) else {
            break;
        };
        steps[pos] += 1;
        for k in &mut steps[pos + 1..] {
            *k = 0;
        }
    }
    best
}

/// Relevance-agnostic fallback: the grid spans every arm dimension.
/// Cost grows as `(resolution + 1)^arm_dim`.
pub fn full_grid_oracle<F>(arm_dim: usize, resolution: usize, reward: F) -> OracleChoice
where
    F: Fn(&ArmVector) -> f64,
{
    let dims: Vec<usize> = (0..arm_dim).collect();
    grid_oracle(arm_dim, &dims, resolution, reward)
}
