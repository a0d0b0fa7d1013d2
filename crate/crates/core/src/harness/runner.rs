use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::config::{AlgorithmSpec, RunConfig};
use crate::bandit::{seeded_rng, ContextVector, Environment, Policy, RoundRecord};
use crate::{Error, Result};

const CONTEXT_STREAM: u64 = 1;
const REWARD_STREAM: u64 = 2;

/// Contexts and oracle values of one repetition. Every algorithm in the
/// repetition sees the same contexts; shorter horizons use a prefix.
pub struct RoundTape {
    contexts: Vec<ContextVector>,
    oracle: Vec<f64>,
}

impl RoundTape {
    pub fn generate(env: &dyn Environment, horizon: u64, seed: u64) -> Self {
        let mut rng = seeded_rng(seed, CONTEXT_STREAM);
        let contexts: Vec<ContextVector> =
            (0..horizon).map(|_| env.sample_context(&mut rng)).collect();
        let oracle = contexts.iter().map(|x| env.oracle_best(x)).collect();
        Self { contexts, oracle }
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }
}

/// Cumulative series of one episode, recorded at `rounds`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub seed: u64,
    pub horizon: u64,
    pub rounds: Vec<u64>,
    /// Sampled rewards.
    pub cum_reward: Vec<f64>,
    /// Expected rewards of the played arms.
    pub cum_expected_reward: Vec<f64>,
    pub cum_oracle_reward: Vec<f64>,
    /// `cum_oracle_reward - cum_expected_reward`.
    pub cum_regret: Vec<f64>,
    pub duration: Duration,
}

impl Trajectory {
    pub fn total_reward(&self) -> f64 {
        self.cum_reward.last().copied().unwrap_or(0.0)
    }

    pub fn total_regret(&self) -> f64 {
        self.cum_regret.last().copied().unwrap_or(0.0)
    }
}

/// Rounds `stride, 2 stride, …` plus the final round: `⌈T / stride⌉` entries.
pub fn recorded_rounds(horizon: u64, stride: u64) -> Vec<u64> {
    let stride = stride.max(1);
    let mut rounds: Vec<u64> = (1..=horizon / stride).map(|k| k * stride).collect();
    if !horizon.is_multiple_of(stride) {
        rounds.push(horizon);
    }
    rounds
}

fn check_dims(policy: &dyn Policy, env: &dyn Environment) -> Result<()> {
    if policy.context_dim() != env.context_dim() || policy.arm_dim() != env.arm_dim() {
        return Err(Error::config(format!(
            "{} expects ({}, {}) dimensions, environment has ({}, {})",
            policy.name(),
            policy.context_dim(),
            policy.arm_dim(),
            env.context_dim(),
            env.arm_dim()
        )));
    }
    Ok(())
}

/// Plays the first `horizon` rounds of `tape`.
pub fn play_tape(
    policy: &mut dyn Policy,
    env: &dyn Environment,
    tape: &RoundTape,
    horizon: u64,
    seed: u64,
    stride: u64,
) -> Result<Trajectory> {
    check_dims(policy, env)?;
    if horizon == 0 || horizon as usize > tape.len() {
        return Err(Error::config(format!(
            "horizon {horizon} outside 1..={}",
            tape.len()
        )));
    }
    let start = Instant::now();
    policy.reset(seed);
    let mut reward_rng = seeded_rng(seed, REWARD_STREAM);
    let rounds = recorded_rounds(horizon, stride);
    let n = rounds.len();
    let mut traj = Trajectory {
        seed,
        horizon,
        rounds,
        cum_reward: Vec::with_capacity(n),
        cum_expected_reward: Vec::with_capacity(n),
        cum_oracle_reward: Vec::with_capacity(n),
        cum_regret: Vec::with_capacity(n),
        duration: Duration::ZERO,
    };
    let (mut reward, mut expected, mut oracle) = (0.0, 0.0, 0.0);
    let mut next = 0;
    for t in 0..horizon as usize {
        let x = &tape.contexts[t];
        let a = policy.choose(x)?;
        let r = env.sample_reward(x, &a, &mut reward_rng);
        policy.learn(x, &a, r)?;
        reward += r;
        expected += env.expected_reward(x, &a);
        oracle += tape.oracle[t];
        if traj.rounds[next] == t as u64 + 1 {
            traj.cum_reward.push(reward);
            traj.cum_expected_reward.push(expected);
            traj.cum_oracle_reward.push(oracle);
            traj.cum_regret.push(oracle - expected);
            next += 1;
        }
    }
    traj.duration = start.elapsed();
    Ok(traj)
}

/// One seeded episode: context stream 1, reward stream 2, policy reset with `seed`.
pub fn run_episode(
    policy: &mut dyn Policy,
    env: &dyn Environment,
    horizon: u64,
    seed: u64,
    stride: u64,
) -> Result<Trajectory> {
    check_dims(policy, env)?;
    if horizon == 0 {
        return Err(Error::config("horizon must be at least 1"));
    }
    let tape = RoundTape::generate(env, horizon, seed);
    play_tape(policy, env, &tape, horizon, seed, stride)
}

/// Same episode as [`run_episode`], returning every round.
pub fn record_episode(
    policy: &mut dyn Policy,
    env: &dyn Environment,
    horizon: u64,
    seed: u64,
) -> Result<Vec<RoundRecord>> {
    check_dims(policy, env)?;
    if horizon == 0 {
        return Err(Error::config("horizon must be at least 1"));
    }
    let tape = RoundTape::generate(env, horizon, seed);
    policy.reset(seed);
    let mut reward_rng = seeded_rng(seed, REWARD_STREAM);
    let mut out = Vec::with_capacity(horizon as usize);
    for (t, x) in tape.contexts.iter().enumerate() {
        let a = policy.choose(x)?;
        let r = env.sample_reward(x, &a, &mut reward_rng);
        policy.learn(x, &a, r)?;
        out.push(RoundRecord {
            round: t + 1,
            expected_reward: env.expected_reward(x, &a),
            oracle_reward: tape.oracle[t],
            context: x.clone(),
            arm: a,
            reward: r,
        });
    }
    Ok(out)
}

/// Mean and sample standard deviation across repetitions at each recorded round.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateResult {
    pub algorithm: String,
    pub horizon: u64,
    pub repetitions: usize,
    pub seeds: Vec<u64>,
    pub partitions: Option<usize>,
    pub rounds: Vec<u64>,
    pub mean_cum_reward: Vec<f64>,
    pub std_cum_reward: Vec<f64>,
    pub mean_cum_regret: Vec<f64>,
    pub std_cum_regret: Vec<f64>,
    pub final_rewards: Vec<f64>,
    pub final_regrets: Vec<f64>,
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    let mean = values.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

impl AggregateResult {
    /// Aggregates trajectories in the given order; they must share recorded rounds.
    pub fn from_trajectories(
        algorithm: &str,
        partitions: Option<usize>,
        trajectories: &[Trajectory],
    ) -> Result<Self> {
        let first = trajectories
            .first()
            .ok_or_else(|| Error::config("no trajectories to aggregate"))?;
        if trajectories.iter().any(|t| t.rounds != first.rounds) {
            return Err(Error::config("trajectories record different rounds"));
        }
        let mut out = Self {
            algorithm: algorithm.to_string(),
            horizon: first.horizon,
            repetitions: trajectories.len(),
            seeds: trajectories.iter().map(|t| t.seed).collect(),
            partitions,
            rounds: first.rounds.clone(),
            mean_cum_reward: Vec::new(),
            std_cum_reward: Vec::new(),
            mean_cum_regret: Vec::new(),
            std_cum_regret: Vec::new(),
            final_rewards: trajectories.iter().map(Trajectory::total_reward).collect(),
            final_regrets: trajectories.iter().map(Trajectory::total_regret).collect(),
        };
        for i in 0..first.rounds.len() {
            let (m, s) = mean_std(trajectories.iter().map(|t| t.cum_reward[i]));
            out.mean_cum_reward.push(m);
            out.std_cum_reward.push(s);
            let (m, s) = mean_std(trajectories.iter().map(|t| t.cum_regret[i]));
            out.mean_cum_regret.push(m);
            out.std_cum_regret.push(s);
        }
        Ok(out)
    }

    pub fn final_mean_reward(&self) -> f64 {
        self.mean_cum_reward.last().copied().unwrap_or(0.0)
    }

    pub fn final_std_reward(&self) -> f64 {
        self.std_cum_reward.last().copied().unwrap_or(0.0)
    }

    pub fn final_mean_regret(&self) -> f64 {
        self.mean_cum_regret.last().copied().unwrap_or(0.0)
    }

    pub fn final_std_regret(&self) -> f64 {
        self.std_cum_regret.last().copied().unwrap_or(0.0)
    }

    /// Standard error of the final regret divided by the horizon.
    pub fn time_avg_regret_se(&self) -> f64 {
        self.final_std_regret() / (self.repetitions as f64).sqrt() / self.horizon as f64
    }
}

/// One (algorithm, horizon) combination to run in every repetition.
#[derive(Debug, Clone)]
pub struct Job {
    pub label: String,
    pub algorithm: AlgorithmSpec,
    pub horizon: u64,
    pub stride: u64,
}

/// Repetition order of execution; results are identical either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Serial,
}

/// Runs every job in every repetition of `config`, one tape per repetition.
/// Results come back in job order.
pub fn run_jobs(config: &RunConfig, jobs: &[Job], execution: Execution) -> Result<Vec<AggregateResult>> {
    let seeds = config.seeds();
    run_jobs_with_seeds(config, jobs, &seeds, execution)
}

/// As [`run_jobs`] with an explicit seed list; aggregation follows that order.
pub fn run_jobs_with_seeds(
    config: &RunConfig,
    jobs: &[Job],
    seeds: &[u64],
    execution: Execution,
) -> Result<Vec<AggregateResult>> {
    if jobs.is_empty() || seeds.is_empty() {
        return Err(Error::config("nothing to run"));
    }
    let env = config.environment.build(&config.dimensions, config.oracle)?;
    let max_horizon = jobs.iter().map(|j| j.horizon).max().unwrap_or(1);
    let dims = config.dimensions;
    let one_rep = |&seed: &u64| -> Result<Vec<Trajectory>> {
        let tape = RoundTape::generate(env.as_ref(), max_horizon, seed);
        jobs.iter()
            .map(|job| {
                let mut policy = job.algorithm.build(&dims, job.horizon)?;
                play_tape(policy.as_mut(), env.as_ref(), &tape, job.horizon, seed, job.stride)
                    .map_err(|e| Error::config(format!("{} (seed {seed}): {e}", job.label)))
            })
            .collect()
    };
    let per_rep: Vec<Vec<Trajectory>> = match execution {
        Execution::Parallel => seeds.par_iter().map(one_rep).collect::<Result<_>>()?,
        Execution::Serial => seeds.iter().map(one_rep).collect::<Result<_>>()?,
    };
    jobs.iter()
        .enumerate()
        .map(|(j, job)| {
            let trajs: Vec<Trajectory> = per_rep.iter().map(|rep| rep[j].clone()).collect();
            AggregateResult::from_trajectories(
                &job.label,
                job.algorithm.partitions(&dims, job.horizon),
                &trajs,
            )
        })
        .collect()
}

fn config_jobs(config: &RunConfig, horizon: u64) -> Vec<Job> {
    config
        .algorithms
        .iter()
        .map(|a| Job {
            label: a.label().to_string(),
            algorithm: a.clone(),
            horizon,
            stride: config.stride_for(horizon),
        })
        .collect()
}

/// All configured algorithms over `repetitions` seeds `seed, seed + 1, …`.
pub fn run_experiment(config: &RunConfig) -> Result<Vec<AggregateResult>> {
    run_experiment_with(config, Execution::Parallel)
}

pub fn run_experiment_with(config: &RunConfig, execution: Execution) -> Result<Vec<AggregateResult>> {
    config.validate()?;
    run_jobs(config, &config_jobs(config, config.horizon), execution)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridEntry {
    pub algorithm: String,
    pub multiplier: f64,
    pub mean_final_reward: f64,
    pub std_final_reward: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchReport {
    pub multipliers: Vec<f64>,
    pub entries: Vec<GridEntry>,
    /// Per algorithm, the first multiplier attaining the largest mean final reward.
    pub best: Vec<(String, f64)>,
}

impl GridSearchReport {
    pub fn best_for(&self, algorithm: &str) -> Option<f64> {
        self.best
            .iter()
            .find(|(a, _)| a == algorithm)
            .map(|&(_, m)| m)
    }
}

/// Runs every multiplier for each algorithm that has a confidence term.
pub fn grid_search(config: &RunConfig, multipliers: &[f64]) -> Result<GridSearchReport> {
    config.validate()?;
    if multipliers.is_empty() {
        return Err(Error::config("multiplier set is empty"));
    }
    if let Some(bad) = multipliers.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
        return Err(Error::config(format!("multiplier {bad} must be positive")));
    }
    let tuned: Vec<&AlgorithmSpec> = config
        .algorithms
        .iter()
        .filter(|a| a.multiplier().is_some())
        .collect();
    if tuned.is_empty() {
        return Err(Error::config("no configured algorithm has a multiplier"));
    }
    let stride = config.effective_stride();
    let mut jobs = Vec::new();
    for a in &tuned {
        for &m in multipliers {
            jobs.push(Job {
                label: a.label().to_string(),
                algorithm: a.with_multiplier(m),
                horizon: config.horizon,
                stride,
            });
        }
    }
    let results = run_jobs(config, &jobs, Execution::Parallel)?;
    let entries: Vec<GridEntry> = jobs
        .iter()
        .zip(&results)
        .map(|(job, r)| GridEntry {
            algorithm: job.label.clone(),
            multiplier: job.algorithm.multiplier().unwrap_or(f64::NAN),
            mean_final_reward: r.final_mean_reward(),
            std_final_reward: r.final_std_reward(),
        })
        .collect();
    let best = tuned
        .iter()
        .map(|a| {
            let mut best: Option<&GridEntry> = None;
            for e in entries.iter().filter(|e| e.algorithm == a.label()) {
                if best.is_none_or(|b| e.mean_final_reward > b.mean_final_reward) {
                    best = Some(e);
                }
            }
            let b = best.expect("each algorithm has entries");
            (b.algorithm.clone(), b.multiplier)
        })
        .collect();
    Ok(GridSearchReport {
        multipliers: multipliers.to_vec(),
        entries,
        best,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub horizon: u64,
    pub results: Vec<AggregateResult>,
}

/// Sorted, deduplicated horizons; policies are rebuilt for each so their
/// partition numbers follow the horizon.
pub fn horizon_sweep(config: &RunConfig, horizons: &[u64]) -> Result<Vec<SweepPoint>> {
    config.validate()?;
    let mut hs = horizons.to_vec();
    hs.sort_unstable();
    hs.dedup();
    if hs.is_empty() || hs[0] == 0 {
        return Err(Error::config("horizons must be nonempty and positive"));
    }
    let jobs: Vec<Job> = hs.iter().flat_map(|&h| config_jobs(config, h)).collect();
    let mut results = run_jobs(config, &jobs, Execution::Parallel)?.into_iter();
    let k = config.algorithms.len();
    Ok(hs
        .iter()
        .map(|&horizon| SweepPoint {
            horizon,
            results: results.by_ref().take(k).collect(),
        })
        .collect())
}
