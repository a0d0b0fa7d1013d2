use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bandit::{Environment, Policy};
use crate::baselines::{iup_m, Choo, ChooConfig, Iup, IupConfig, UniformRandom};
use crate::cmab_rl::{CmabRl, CmabRlConfig};
use crate::environments::{
    ArmProfile, ContextRegion, GmmEnvConfig, GmmEnvironment, OracleConfig,
    SparseRelevanceEnvConfig, SparseRelevanceEnvironment,
};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Experiment description, read from a TOML file.
///
/// ```toml
/// schema_version = 1
/// horizon = 100000
/// repetitions = 20
/// seed = 7
///
/// [dimensions]
/// context = 5
/// arm = 5
/// relevant_context = 1
/// relevant_arm = 1
///
/// [environment]
/// kind = "gmm"
///
/// [[algorithms]]
/// kind = "cmab-rl"
/// multiplier = 0.001
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub horizon: u64,
    pub repetitions: usize,
    pub seed: u64,
    /// Recording stride; defaults to `max(1, horizon / 1000)`.
    #[serde(default)]
    pub stride: Option<u64>,
    pub dimensions: Dimensions,
    pub environment: EnvironmentSpec,
    #[serde(default)]
    pub oracle: OracleSpec,
    pub algorithms: Vec<AlgorithmSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dimensions {
    pub context: usize,
    pub arm: usize,
    pub relevant_context: usize,
    pub relevant_arm: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_resolution() -> usize {
    OracleConfig::default().resolution
}

fn default_tolerance() -> f64 {
    OracleConfig::default().tolerance
}

impl Default for OracleSpec {
    fn default() -> Self {
        Self {
            resolution: default_resolution(),
            tolerance: default_tolerance(),
        }
    }
}

impl From<OracleSpec> for OracleConfig {
    fn from(s: OracleSpec) -> Self {
        OracleConfig {
            resolution: s.resolution,
            tolerance: s.tolerance,
        }
    }
}

/// Unset GMM fields fall back to the standard synthetic mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EnvironmentSpec {
    Gmm {
        #[serde(default)]
        scale: Option<f64>,
        #[serde(default)]
        weights: Option<Vec<f64>>,
        #[serde(default)]
        means: Option<Vec<[f64; 2]>>,
        #[serde(default)]
        covariances: Option<Vec<[[f64; 2]; 2]>>,
        #[serde(default)]
        context_index: Option<usize>,
        #[serde(default)]
        arm_index: Option<usize>,
    },
    Sparse {
        arm_dims: Vec<usize>,
        regions: Vec<RegionSpec>,
        #[serde(default)]
        profile: ProfileSpec,
        #[serde(default)]
        baseline: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub arm_upper: f64,
    pub context_dims: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileSpec {
    #[default]
    Flat,
    Tent,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlgorithmSpec {
    CmabRl {
        #[serde(default)]
        name: Option<String>,
        #[serde(default = "one")]
        multiplier: f64,
        #[serde(default = "one")]
        lipschitz: f64,
        #[serde(default)]
        partitions: Option<usize>,
    },
    Iup {
        #[serde(default)]
        name: Option<String>,
        #[serde(default = "one")]
        multiplier: f64,
        #[serde(default)]
        partitions: Option<usize>,
    },
    #[serde(rename = "c-hoo")]
    CHoo {
        #[serde(default)]
        name: Option<String>,
        #[serde(default = "one")]
        multiplier: f64,
        #[serde(default)]
        v1: Option<f64>,
        #[serde(default)]
        rho: Option<f64>,
        #[serde(default)]
        depth_cap: Option<usize>,
    },
    Uniform {
        #[serde(default)]
        name: Option<String>,
    },
}

impl AlgorithmSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::CmabRl { .. } => "cmab-rl",
            Self::Iup { .. } => "iup",
            Self::CHoo { .. } => "c-hoo",
            Self::Uniform { .. } => "uniform",
        }
    }

    /// The configured name, or the kind.
    pub fn label(&self) -> &str {
        let name = match self {
            Self::CmabRl { name, .. }
            | Self::Iup { name, .. }
            | Self::CHoo { name, .. }
            | Self::Uniform { name } => name,
        };
        name.as_deref().unwrap_or(self.kind())
    }

    /// `None` for algorithms without a confidence term.
    pub fn multiplier(&self) -> Option<f64> {
        match self {
            Self::CmabRl { multiplier, .. }
            | Self::Iup { multiplier, .. }
            | Self::CHoo { multiplier, .. } => Some(*multiplier),
            Self::Uniform { .. } => None,
        }
    }

    pub fn with_multiplier(&self, value: f64) -> Self {
        let mut out = self.clone();
        match &mut out {
            Self::CmabRl { multiplier, .. }
            | Self::Iup { multiplier, .. }
            | Self::CHoo { multiplier, .. } => *multiplier = value,
            Self::Uniform { .. } => {}
        }
        out
    }

    /// Partition number used at `horizon`, for the partitioning algorithms.
    pub fn partitions(&self, dims: &Dimensions, horizon: u64) -> Option<usize> {
        match self {
            Self::CmabRl { partitions, .. } => Some(partitions.unwrap_or_else(|| {
                crate::cmab_rl::m_for_horizon(horizon, dims.relevant_context, dims.relevant_arm)
            })),
            Self::Iup { partitions, .. } => {
                Some(partitions.unwrap_or_else(|| iup_m(horizon, dims.context, dims.arm)))
            }
            _ => None,
        }
    }

    pub fn build(&self, dims: &Dimensions, horizon: u64) -> Result<Box<dyn Policy>> {
        Ok(match self {
            Self::CmabRl {
                multiplier,
                lipschitz,
                partitions,
                ..
            } => {
                let mut cfg = CmabRlConfig::new(
                    dims.context,
                    dims.arm,
                    dims.relevant_context,
                    dims.relevant_arm,
                    horizon,
                )
                .with_multiplier(*multiplier)
                .with_lipschitz(*lipschitz);
                if let Some(m) = partitions {
                    cfg = cfg.with_partitions(*m);
                }
                Box::new(CmabRl::new(cfg)?)
            }
            Self::Iup {
                multiplier,
                partitions,
                ..
            } => Box::new(Iup::new(IupConfig {
                partitions: *partitions,
                ..IupConfig::new(dims.context, dims.arm, horizon).with_multiplier(*multiplier)
            })?),
            Self::CHoo {
                multiplier,
                v1,
                rho,
                depth_cap,
                ..
            } => Box::new(Choo::new(ChooConfig {
                v1: *v1,
                rho: *rho,
                depth_cap: *depth_cap,
                ..ChooConfig::new(dims.context, dims.arm, horizon).with_multiplier(*multiplier)
            })?),
            Self::Uniform { .. } => Box::new(UniformRandom::new(dims.context, dims.arm)?),
        })
    }
}

impl EnvironmentSpec {
    pub fn build(&self, dims: &Dimensions, oracle: OracleSpec) -> Result<Arc<dyn Environment>> {
        Ok(match self {
            Self::Gmm {
                scale,
                weights,
                means,
                covariances,
                context_index,
                arm_index,
            } => {
                let mut cfg = GmmEnvConfig::synthetic_defaults(dims.context, dims.arm);
                if let Some(v) = scale {
                    cfg.scale = *v;
                }
                if let Some(v) = weights {
                    cfg.weights.clone_from(v);
                }
                if let Some(v) = means {
                    cfg.means.clone_from(v);
                }
                if let Some(v) = covariances {
                    cfg.covariances.clone_from(v);
                }
                if let Some(v) = context_index {
                    cfg.context_index = *v;
                }
                if let Some(v) = arm_index {
                    cfg.arm_index = *v;
                }
                Arc::new(GmmEnvironment::new(cfg, oracle.into())?)
            }
            Self::Sparse {
                arm_dims,
                regions,
                profile,
                baseline,
                amplitude,
            } => {
                let cfg = SparseRelevanceEnvConfig {
                    context_dim: dims.context,
                    arm_dim: dims.arm,
                    arm_dims: arm_dims.clone(),
                    regions: regions
                        .iter()
                        .map(|r| ContextRegion {
                            arm_upper: r.arm_upper,
                            context_dims: r.context_dims.clone(),
                        })
                        .collect(),
                    profile: match profile {
                        ProfileSpec::Flat => ArmProfile::Flat,
                        ProfileSpec::Tent => ArmProfile::Tent,
                    },
                    baseline: *baseline,
                    amplitude: *amplitude,
                };
                Arc::new(SparseRelevanceEnvironment::new(cfg, oracle.into())?)
            }
        })
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn effective_stride(&self) -> u64 {
        self.stride.unwrap_or_else(|| default_stride(self.horizon))
    }

    /// Stride actually used when running at `horizon` instead of the configured one.
    pub fn stride_for(&self, horizon: u64) -> u64 {
        self.stride.unwrap_or_else(|| default_stride(horizon))
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.repetitions as u64)
            .map(|r| self.seed.wrapping_add(r))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.horizon == 0 {
            return Err(Error::config("horizon must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(Error::config("repetitions must be at least 1"));
        }
        if self.stride == Some(0) {
            return Err(Error::config("stride must be at least 1"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("at least one algorithm is required"));
        }
        let mut seen = BTreeSet::new();
        for a in &self.algorithms {
            let label = a.label();
            if label.is_empty()
                || !label
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
            {
                return Err(Error::config(format!(
                    "algorithm name {label:?} must be nonempty and use only [A-Za-z0-9._-]"
                )));
            }
            if !seen.insert(label.to_string()) {
                return Err(Error::config(format!("duplicate algorithm name {label:?}")));
            }
            if let Some(m) = a.multiplier() {
                if !(m.is_finite() && m > 0.0) {
                    return Err(Error::config(format!("{label}: multiplier must be positive")));
                }
            }
            // surfaces dimension and parameter errors before any round runs
            a.build(&self.dimensions, self.horizon)?;
        }
        let env = self.environment.build(&self.dimensions, self.oracle)?;
        if env.context_dim() != self.dimensions.context || env.arm_dim() != self.dimensions.arm {
            return Err(Error::config("environment dimensions disagree with [dimensions]"));
        }
        Ok(())
    }
}

pub fn default_stride(horizon: u64) -> u64 {
    (horizon / 1000).max(1)
}

/// Every leaf of a TOML document as `dotted.key = value`, in key order.
/// Array elements are addressed as `key[i]`.
pub fn flatten_toml(text: &str) -> Result<Vec<(String, String)>> {
    let table: toml::Table = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = Vec::new();
    for (k, v) in &table {
        flatten_value(k.clone(), v, &mut out);
    }
    Ok(out)
}

fn flatten_value(prefix: String, value: &toml::Value, out: &mut Vec<(String, String)>) {
    match value {
        toml::Value::Table(t) => {
            for (k, v) in t {
                flatten_value(format!("{prefix}.{k}"), v, out);
            }
        }
        toml::Value::Array(items) if items.iter().any(|v| v.is_table()) => {
            for (i, v) in items.iter().enumerate() {
                flatten_value(format!("{prefix}[{i}]"), v, out);
            }
        }
        other => out.push((prefix, other.to_string())),
    }
}
