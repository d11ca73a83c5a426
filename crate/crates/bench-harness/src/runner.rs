use std::collections::BTreeMap;

use bandit_core::{seeds, ArmId, BanditInstance, RegretLedger};
use erasure_channels::{init_agent, transmit, violation_windows_in_run, AgentChannel, ChannelKind};
use policies::{build_policy, PolicyKind, UcbAssignment};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use thiserror::Error;

use crate::config::ExperimentConfig;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("channel setup failed: {0}")]
    Channel(#[from] erasure_channels::ChannelError),
    #[error("instance setup failed: {0}")]
    Instance(#[from] bandit_core::InstanceError),
    #[error("policy setup failed: {0}")]
    Policy(#[from] policies::PolicyError),
}

/// One simulated run's downsampled trace and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub policy: PolicyKind,
    pub run: usize,
    /// `(round, cumulative pseudo-regret)` at stride resolution.
    pub samples: Vec<(usize, f64)>,
    /// Realized-reward regret series when enabled.
    pub realized: Option<Vec<(usize, f64)>>,
    pub final_regret: f64,
    pub violations: u64,
    pub final_active: Vec<ArmId>,
    pub play_counts: BTreeMap<(usize, ArmId), u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyAggregate {
    pub policy: PolicyKind,
    /// `(round, mean cumulative regret, standard error)` across runs.
    pub points: Vec<(usize, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub raw: Vec<RunTrace>,
    pub aggregates: Vec<PolicyAggregate>,
    pub realized_regret: bool,
}

impl ExperimentResult {
    pub fn aggregate(&self, policy: PolicyKind) -> Option<&PolicyAggregate> {
        self.aggregates.iter().find(|a| a.policy == policy)
    }
}

/// Channels sorted ascending by repetition budget, as the schedulers
/// require; ties broken by erasure probability to keep the order stable.
pub fn sorted_channels(
    epsilons: &[f64],
    kind: ChannelKind,
    horizon: usize,
) -> Result<Vec<AgentChannel>, RunError> {
    let mut channels = epsilons
        .iter()
        .map(|&e| AgentChannel::bind(e, kind, horizon))
        .collect::<Result<Vec<_>, _>>()?;
    channels.sort_by(|a, b| a.alpha.cmp(&b.alpha).then(a.epsilon.total_cmp(&b.epsilon)));
    Ok(channels)
}

pub struct RunSpec<'a> {
    pub means: &'a [f64],
    pub noise: bandit_core::NoiseModel,
    pub channels: &'a [AgentChannel],
    pub horizon: usize,
    pub stride: usize,
    pub policy: PolicyKind,
    pub ucb_assignment: UcbAssignment,
    pub track_realized: bool,
}

/// Simulates one seeded run: arm order shuffled, fresh agent states, full
/// horizon, ledger recorded. Bit-deterministic in `run_seed`.
pub fn simulate_run(spec: &RunSpec<'_>, run_seed: u64) -> Result<RunTrace, RunError> {
    let k = spec.means.len();
    let m = spec.channels.len();
    let alphas: Vec<u32> = spec.channels.iter().map(|c| c.alpha).collect();

    // arms shuffled per run: policies only ever see indices
    let mut means = spec.means.to_vec();
    means.shuffle(&mut seeds::stream(run_seed, "arms", 0));
    let instance = BanditInstance::new(means, spec.noise)?;

    let mut policy = build_policy(
        spec.policy,
        k,
        m,
        &alphas,
        spec.horizon,
        seeds::stream(run_seed, "policy", 0),
        spec.ucb_assignment,
    )?;

    let mut states: Vec<_> = (0..m)
        .map(|j| init_agent(&mut seeds::stream(run_seed, "init", j as u64), k))
        .collect();
    let mut chan_rngs: Vec<_> =
        (0..m).map(|j| seeds::stream(run_seed, "channel", j as u64)).collect();
    let mut reward_rngs: Vec<_> =
        (0..m).map(|j| seeds::stream(run_seed, "reward", j as u64)).collect();

    let mut ledger = RegretLedger::new(spec.horizon, spec.stride, spec.track_realized);
    let mut sent = vec![0usize; m];
    let mut played = vec![0usize; m];
    let mut rewards = vec![0.0f64; m];
    let count_violations = spec.channels.iter().any(|c| c.kind == ChannelKind::Erasure);

    for t in 1..=spec.horizon {
        policy.next_actions(t, &mut sent);
        let batch = policy.batch_index();
        for j in 0..m {
            played[j] = transmit(&spec.channels[j], &mut states[j], sent[j], &mut chan_rngs[j]);
            rewards[j] = instance.sample_reward(played[j], &mut reward_rngs[j])?;
        }
        if count_violations {
            for (j, st) in states.iter().enumerate() {
                ledger.add_violations(violation_windows_in_run(st.erasure_run, alphas[j]));
            }
        }
        ledger.record_round(&instance, &played, &rewards, batch)?;
        policy.observe(t, &rewards);
    }

    Ok(RunTrace {
        policy: spec.policy,
        run: 0,
        samples: ledger.samples().to_vec(),
        realized: ledger.realized_samples().map(<[_]>::to_vec),
        final_regret: ledger.cumulative(),
        violations: ledger.violation_count(),
        final_active: policy.active_arms(),
        play_counts: ledger.play_counts().clone(),
    })
}

/// Runs the full `policy x run` grid of an experiment, in parallel across
/// runs, and aggregates mean and standard error per policy.
///
/// The output is a pure function of the config: run seeds are derived from
/// `(seed, policy name, run index)`, and the reduction is an ordered
/// collect, so thread count cannot change any byte of the result.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, RunError> {
    let epsilons = config.epsilons();
    let channels = sorted_channels(&epsilons, config.channel.to_kind(), config.horizon)?;
    let kinds = config.policy_kinds();

    let tasks: Vec<(PolicyKind, usize)> = kinds
        .iter()
        .flat_map(|&p| (0..config.runs).map(move |r| (p, r)))
        .collect();

    let raw: Vec<RunTrace> = tasks
        .par_iter()
        .map(|&(policy, run)| {
            let spec = RunSpec {
                means: &config.instance.means,
                noise: config.instance.noise.to_model(),
                channels: &channels,
                horizon: config.horizon,
                stride: config.stride,
                policy,
                ucb_assignment: config.ucb_assignment.to_assignment(),
                track_realized: config.realized_regret,
            };
            let run_seed = seeds::derive(config.seed, policy.name(), run as u64);
            simulate_run(&spec, run_seed).map(|mut trace| {
                trace.run = run;
                trace
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let aggregates = kinds
        .iter()
        .map(|&policy| aggregate_policy(policy, &raw, config.runs))
        .collect();

    Ok(ExperimentResult { raw, aggregates, realized_regret: config.realized_regret })
}

fn aggregate_policy(policy: PolicyKind, raw: &[RunTrace], runs: usize) -> PolicyAggregate {
    let traces: Vec<&RunTrace> = raw.iter().filter(|t| t.policy == policy).collect();
    assert_eq!(traces.len(), runs);
    let num_points = traces[0].samples.len();
    let mut points = Vec::with_capacity(num_points);
    for idx in 0..num_points {
        let t = traces[0].samples[idx].0;
        let values: Vec<f64> = traces
            .iter()
            .map(|trace| {
                debug_assert_eq!(trace.samples[idx].0, t);
                trace.samples[idx].1
            })
            .collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let stderr = if values.len() > 1 {
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        points.push((t, mean, stderr));
    }
    PolicyAggregate { policy, points }
}

/// Least-squares slope of a cumulative-regret series over rounds >= from.
pub fn slope_from(points: &[(usize, f64)], from: usize) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(t, _)| t >= from)
        .map(|&(t, v)| (t as f64, v))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    sxy / sxx
}
