use std::f64::consts::PI;

use super::{bernoulli, grid_oracle, uniform_point, OracleConfig};
use crate::bandit::{ArmVector, BanditRng, ContextVector, Environment, OracleChoice};
use crate::{Error, Result};

/// Two-dimensional Gaussian-mixture reward surface over one context and one
/// arm coordinate: `μ_a(x) = min(s Σ_i ρ_i f((x_c, a_c) | θ_i, Σ_i), 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GmmEnvConfig {
    pub context_dim: usize,
    pub arm_dim: usize,
    pub scale: f64,
    pub weights: Vec<f64>,
    pub means: Vec<[f64; 2]>,
    pub covariances: Vec<[[f64; 2]; 2]>,
    /// The single relevant context coordinate.
    pub context_index: usize,
    /// The single relevant arm coordinate.
    pub arm_index: usize,
}

impl GmmEnvConfig {
    /// Scale 0.25, two equally weighted components centred at (0.25, 0.75)
    /// and (0.5, 0.5) with opposite correlation; coordinate 0 relevant.
    pub fn synthetic_defaults(context_dim: usize, arm_dim: usize) -> Self {
        Self {
            context_dim,
            arm_dim,
            scale: 0.25,
            weights: vec![0.5, 0.5],
            means: vec![[0.25, 0.75], [0.5, 0.5]],
            covariances: vec![[[0.05, 0.03], [0.03, 0.025]], [[0.025, -0.03], [-0.03, 0.05]]],
            context_index: 0,
            arm_index: 0,
        }
    }
}

#[derive(Debug, Clone)]
struct Component {
    weight: f64,
    mean: [f64; 2],
    precision: [[f64; 2]; 2],
    norm: f64,
}

#[derive(Debug, Clone)]
pub struct GmmEnvironment {
    config: GmmEnvConfig,
    components: Vec<Component>,
    oracle: OracleConfig,
}

impl GmmEnvironment {
    pub fn new(config: GmmEnvConfig, oracle: OracleConfig) -> Result<Self> {
        let k = config.weights.len();
        if k == 0 || config.means.len() != k || config.covariances.len() != k {
            return Err(Error::config(
                "mixture needs matching nonempty weights, means and covariances",
            ));
        }
        if config.weights.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(Error::config("mixture weights must be positive"));
        }
        let total: f64 = config.weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::config(format!("mixture weights sum to {total}, not 1")));
        }
        if !(config.scale.is_finite() && config.scale >= 0.0) {
            return Err(Error::config("scale must be a nonnegative number"));
        }
        if config.context_index >= config.context_dim || config.arm_index >= config.arm_dim {
            return Err(Error::config("relevant coordinate index out of range"));
        }
        if oracle.resolution < 2 {
            return Err(Error::config("oracle resolution must be at least 2"));
        }
        let components = config
            .weights
            .iter()
            .zip(&config.means)
            .zip(&config.covariances)
            .enumerate()
            .map(|(i, ((&weight, &mean), cov))| {
                let [[a, b], [c, d]] = *cov;
                let det = a * d - b * c;
                if b != c || !(a > 0.0 && det > 0.0) {
                    return Err(Error::config(format!(
                        "covariance {i} is not symmetric positive definite"
                    )));
                }
                Ok(Component {
                    weight,
                    mean,
                    precision: [[d / det, -b / det], [-c / det, a / det]],
                    norm: 1.0 / (2.0 * PI * det.sqrt()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            config,
            components,
            oracle,
        })
    }

    pub fn config(&self) -> &GmmEnvConfig {
        &self.config
    }

    /// Unscaled mixture density at `(x_c, a_c)`.
    pub fn density(&self, x: f64, a: f64) -> f64 {
        self.components
            .iter()
            .map(|c| {
                let dx = x - c.mean[0];
                let da = a - c.mean[1];
                let p = c.precision;
                let q = dx * (p[0][0] * dx + p[0][1] * da) + da * (p[1][0] * dx + p[1][1] * da);
                c.weight * c.norm * (-0.5 * q).exp()
            })
            .sum()
    }

    /// Expected reward as a function of the two relevant coordinates.
    #[inline]
    pub fn reward_at(&self, x: f64, a: f64) -> f64 {
        (self.config.scale * self.density(x, a)).min(1.0)
    }
}

impl Environment for GmmEnvironment {
    fn context_dim(&self) -> usize {
        self.config.context_dim
    }

    fn arm_dim(&self) -> usize {
        self.config.arm_dim
    }

    fn relevant_context_dims(&self) -> Vec<usize> {
        vec![self.config.context_index]
    }

    fn relevant_arm_dims(&self) -> Vec<usize> {
        vec![self.config.arm_index]
    }

    fn sample_context(&self, rng: &mut BanditRng) -> ContextVector {
        ContextVector::from_unchecked(uniform_point(self.config.context_dim, rng))
    }

    fn expected_reward(&self, context: &ContextVector, arm: &ArmVector) -> f64 {
        self.reward_at(context[self.config.context_index], arm[self.config.arm_index])
    }

    fn sample_reward(&self, context: &ContextVector, arm: &ArmVector, rng: &mut BanditRng) -> f64 {
        bernoulli(self.expected_reward(context, arm), rng)
    }

    fn oracle(&self, context: &ContextVector) -> OracleChoice {
        let x = context[self.config.context_index];
        grid_oracle(
            self.config.arm_dim,
            &[self.config.arm_index],
            self.oracle.resolution,
            |arm| self.reward_at(x, arm[self.config.arm_index]),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::seeded_rng;

    fn env() -> GmmEnvironment {
        GmmEnvironment::new(GmmEnvConfig::synthetic_defaults(5, 5), OracleConfig::default()).unwrap()
    }

    fn point(x0: f64, dim: usize) -> Vec<f64> {
        let mut v = vec![0.3; dim];
        v[0] = x0;
        v
    }

    // Reference densities from scipy.stats.multivariate_normal.
    #[test]
    fn clamp_active_at_first_mean() {
        let e = env();
        let unclamped = 0.25 * e.density(0.25, 0.75);
        assert!((unclamped - 1.342_043_996_888_753_4).abs() < 1e-12, "{unclamped}");
        assert_eq!(e.reward_at(0.25, 0.75), 1.0);
    }

    #[test]
    fn far_corner_value() {
        let e = env();
        assert!((e.reward_at(0.95, 0.05) - 0.013_872_932_761_187_2).abs() < 1e-12);
        assert!((e.reward_at(0.7, 0.2) - 0.420_167_711_245_185).abs() < 1e-12);
    }

    #[test]
    fn zero_scale() {
        let mut cfg = GmmEnvConfig::synthetic_defaults(2, 2);
        cfg.scale = 0.0;
        let e = GmmEnvironment::new(cfg, OracleConfig::default()).unwrap();
        assert_eq!(e.reward_at(0.25, 0.75), 0.0);
        assert_eq!(e.reward_at(0.6, 0.1), 0.0);
    }

    #[test]
    fn rejects_bad_covariance() {
        let mut cfg = GmmEnvConfig::synthetic_defaults(2, 2);
        cfg.covariances[0] = [[0.01, 0.03], [0.03, 0.01]];
        assert!(GmmEnvironment::new(cfg, OracleConfig::default()).is_err());
        let mut cfg = GmmEnvConfig::synthetic_defaults(2, 2);
        cfg.covariances[1] = [[0.05, 0.01], [0.02, 0.05]];
        assert!(GmmEnvironment::new(cfg, OracleConfig::default()).is_err());
        let mut cfg = GmmEnvConfig::synthetic_defaults(2, 2);
        cfg.weights = vec![0.5, 0.6];
        assert!(GmmEnvironment::new(cfg, OracleConfig::default()).is_err());
    }

    #[test]
    fn irrelevant_coordinates_ignored() {
        let e = env();
        let mut rng = seeded_rng(1, 0);
        for _ in 0..200 {
            let x = e.sample_context(&mut rng);
            let a = ArmVector::new(uniform_point(5, &mut rng)).unwrap();
            let mut x2 = uniform_point(5, &mut rng);
            x2[0] = x[0];
            let mut a2 = uniform_point(5, &mut rng);
            a2[0] = a[0];
            let v = e.expected_reward(&x, &a);
            assert_eq!(v, e.expected_reward(&ContextVector::new(x2).unwrap(), &ArmVector::new(a2).unwrap()));
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn oracle_hits_plateau() {
        let e = env();
        let x = ContextVector::new(point(0.25, 5)).unwrap();
        assert_eq!(e.oracle_best(&x), 1.0);
    }

    #[test]
    fn oracle_matches_fine_scan() {
        // 100001-point scipy scans: x=0 -> 0.569197, x=0.8 -> 0.175779.
        let e = env();
        for (x0, want) in [(0.0, 0.569_197_253_582_369_3), (0.8, 0.175_778_621_801_761_5)] {
            let got = e.oracle_best(&ContextVector::new(point(x0, 5)).unwrap());
            assert!(got <= want + 1e-12 && want - got < 1e-3, "x0={x0} got {got}");
        }
    }

    #[test]
    fn bernoulli_rewards() {
        let mut cfg = GmmEnvConfig::synthetic_defaults(1, 1);
        let e = GmmEnvironment::new(cfg.clone(), OracleConfig::default()).unwrap();
        let mut rng = seeded_rng(2, 0);
        let x = ContextVector::new(vec![0.25]).unwrap();
        let a = ArmVector::new(vec![0.75]).unwrap();
        assert!((0..1000).all(|_| e.sample_reward(&x, &a, &mut rng) == 1.0));
        cfg.scale = 0.0;
        let zero = GmmEnvironment::new(cfg, OracleConfig::default()).unwrap();
        assert!((0..1000).all(|_| zero.sample_reward(&x, &a, &mut rng) == 0.0));
    }

    #[test]
    fn bernoulli_mean() {
        let mut rng = seeded_rng(3, 0);
        let n = 100_000;
        let mean = (0..n).map(|_| bernoulli(0.3, &mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 0.3).abs() < 0.01, "{mean}");
    }

    #[test]
    fn uniform_contexts() {
        let e = env();
        let mut rng = seeded_rng(4, 0);
        let n = 100_000;
        let xs: Vec<ContextVector> = (0..n).map(|_| e.sample_context(&mut rng)).collect();
        let means: Vec<f64> = (0..5)
            .map(|d| xs.iter().map(|x| x[d]).sum::<f64>() / n as f64)
            .collect();
        for m in &means {
            assert!((m - 0.5).abs() < 0.01);
        }
        for i in 0..5 {
            for j in i + 1..5 {
                let cov = xs.iter().map(|x| (x[i] - means[i]) * (x[j] - means[j])).sum::<f64>()
                    / n as f64;
                // variance of U(0,1) is 1/12
                let r = cov * 12.0;
                assert!(r.abs() < 0.02, "corr({i},{j}) = {r}");
            }
        }
    }
}
