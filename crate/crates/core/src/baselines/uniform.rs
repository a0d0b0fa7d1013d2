use crate::bandit::{seeded_rng, ArmVector, BanditRng, ContextVector, Policy};
use crate::environments::uniform_point;
use crate::{Error, Result};

/// Plays an independent uniform point of `[0,1]^{d_a}` every round.
pub struct UniformRandom {
    context_dim: usize,
    arm_dim: usize,
    rng: BanditRng,
}

impl UniformRandom {
    pub fn new(context_dim: usize, arm_dim: usize) -> Result<Self> {
        if context_dim == 0 || arm_dim == 0 {
            return Err(Error::config("dimensions must be positive"));
        }
        Ok(Self {
            context_dim,
            arm_dim,
            rng: seeded_rng(0, 0),
        })
    }

    pub fn uniform_choose(&mut self) -> ArmVector {
        ArmVector::from_unchecked(uniform_point(self.arm_dim, &mut self.rng))
    }
}

impl Policy for UniformRandom {
    fn name(&self) -> &str {
        "uniform-random"
    }

    fn context_dim(&self) -> usize {
        self.context_dim
    }

    fn arm_dim(&self) -> usize {
        self.arm_dim
    }

    fn choose(&mut self, context: &ContextVector) -> Result<ArmVector> {
        if context.dim() != self.context_dim {
            return Err(Error::domain("context dimension mismatch"));
        }
        Ok(self.uniform_choose())
    }

    fn learn(&mut self, _: &ContextVector, _: &ArmVector, _: f64) -> Result<()> {
        Ok(())
    }

    fn reset(&mut self, seed: u64) {
        self.rng = seeded_rng(seed, 0);
    }
}
