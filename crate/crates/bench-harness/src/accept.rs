//! Building blocks for the acceptance suite and the `verify` subcommand.

use bandit_core::{seeds, ArmId};
use batch_scheduler::{
    ilp_optimum, schedule_end_time_bound, lp_end_time, schedule, structural_report,
};
use erasure_channels::{init_agent, transmit, AgentChannel, ChannelKind};
use rand::Rng;
use rayon::prelude::*;

use crate::config::{AgentSpec, Constants, ExperimentConfig, InstanceSpec, NoiseSpec};

/// Experiment-style arm means: `[0.8, 1, 0, ..., 0]` over `k` arms.
pub fn benchmark_means(k: usize) -> Vec<f64> {
    let mut means = vec![0.0; k];
    means[0] = 0.8;
    means[1] = 1.0;
    means
}

/// Benchmark config: K=10 Gaussian(1) arms, grouped channels, all five
/// policies.
pub fn benchmark_config(
    epsilon_groups: &[(f64, usize)],
    horizon: usize,
    runs: usize,
    seed: u64,
    stride: usize,
) -> ExperimentConfig {
    ExperimentConfig {
        instance: InstanceSpec {
            means: benchmark_means(10),
            noise: NoiseSpec::Gaussian { sigma: 1.0 },
        },
        agents: epsilon_groups
            .iter()
            .map(|&(value, count)| AgentSpec::Group { value, count })
            .collect(),
        horizon,
        runs,
        seed,
        policies: policies::PolicyKind::ALL.iter().map(|p| p.name().to_string()).collect(),
        stride,
        output: None,
        constants: Constants::default(),
        channel: Default::default(),
        realized_regret: false,
        ucb_assignment: Default::default(),
    }
}

pub const EXPERIMENT1_EPSILONS: [(f64, usize); 4] =
    [(0.2, 5), (0.7, 5), (0.9, 5), (0.99, 5)];
pub const EXPERIMENT2_EPSILONS: [(f64, usize); 4] =
    [(0.9, 5), (0.93, 5), (0.95, 5), (0.99, 5)];

/// Exhaustive end-time sandwich over the tiny-instance grid: for every
/// `M <= 3`, `K <= 4`, `i = 1` and sorted `alpha in {0,1,2,4}^M`,
/// `lp <= ilp <= schedule end <= end-time bound`, and `ceil(lp) = ilp` whenever
/// every alpha is zero. Returns the number of `(instance, seed)` cases.
pub fn oracle_sandwich_grid() -> Result<usize, String> {
    let choices = [0u32, 1, 2, 4];
    let mut cases = 0usize;
    for m in 1..=3usize {
        let mut alpha_sets: Vec<Vec<u32>> = Vec::new();
        let mut stack = vec![0usize; m];
        loop {
            let set: Vec<u32> = stack.iter().map(|&c| choices[c]).collect();
            if set.windows(2).all(|w| w[0] <= w[1]) {
                alpha_sets.push(set);
            }
            let mut pos = 0;
            loop {
                if pos == m {
                    break;
                }
                stack[pos] += 1;
                if stack[pos] < choices.len() {
                    break;
                }
                stack[pos] = 0;
                pos += 1;
            }
            if pos == m {
                break;
            }
        }
        for alphas in alpha_sets {
            for k in 1..=4usize {
                let active: Vec<ArmId> = (0..k).collect();
                let lp = lp_end_time(&alphas, k, 1);
                let ilp = ilp_optimum(&alphas, k, 1).map_err(|e| e.to_string())?;
                let upper = schedule_end_time_bound(&alphas, k, 1);
                if lp > ilp as f64 + 1e-9 {
                    return Err(format!("lp {lp} > ilp {ilp} at alphas {alphas:?} K={k}"));
                }
                if alphas.iter().all(|&a| a == 0) && lp.ceil() as u64 != ilp {
                    return Err(format!(
                        "ceil(lp) = {} != ilp {ilp} at alphas {alphas:?} K={k}",
                        lp.ceil()
                    ));
                }
                for seed in 0..5u64 {
                    let mut rng = seeds::stream(seed, "grid", cases as u64);
                    let sched =
                        schedule(&active, &alphas, 1, &mut rng).map_err(|e| e.to_string())?;
                    sched.validate(&active, &alphas)?;
                    if (sched.end_time as u64) < ilp {
                        return Err(format!(
                            "schedule end {} below ilp {ilp} at alphas {alphas:?} K={k}",
                            sched.end_time
                        ));
                    }
                    if sched.end_time as f64 > upper + 1e-9 {
                        return Err(format!(
                            "schedule end {} above upper bound {upper} at alphas {alphas:?} K={k}",
                            sched.end_time
                        ));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(cases)
}

/// Structural invariant sweep over random instances
/// (`M <= 16`, `K <= 32`, `i <= 3`): effective-pull counts, repetition
/// prefixes, stage-1 guarantee, part caps. Returns the case count.
pub fn structural_suite(cases: usize, seed: u64) -> Result<usize, String> {
    (0..cases)
        .into_par_iter()
        .try_for_each(|case| {
            let mut rng = seeds::stream(seed, "structural", case as u64);
            let m = rng.random_range(1..=16usize);
            let k = rng.random_range(1..=32usize);
            let i = rng.random_range(1..=3u32);
            let mut alphas: Vec<u32> = (0..m).map(|_| rng.random_range(0..=128)).collect();
            alphas.sort_unstable();
            let active: Vec<ArmId> = (0..k).collect();
            let sched = schedule(&active, &alphas, i, &mut rng)
                .map_err(|e| format!("case {case}: {e}"))?;
            structural_report(&sched, &active, &alphas)
                .map_err(|e| format!("case {case} (M={m} K={k} i={i}, alphas {alphas:?}): {e}"))
        })
        .map(|()| cases)
}

/// Per-arm play-count statistics over seeded single-batch simulations with
/// a fixed active set: returns `(mean, standard error)` per arm.
pub fn batch_play_count_stats(
    k: usize,
    epsilons: &[f64],
    horizon: usize,
    i: u32,
    sims: usize,
    seed: u64,
) -> Vec<(f64, f64)> {
    let channels: Vec<AgentChannel> = epsilons
        .iter()
        .map(|&e| AgentChannel::bind(e, ChannelKind::Erasure, horizon).expect("valid eps"))
        .collect();
    let alphas: Vec<u32> = channels.iter().map(|c| c.alpha).collect();
    let active: Vec<ArmId> = (0..k).collect();

    let counts: Vec<Vec<f64>> = (0..sims)
        .into_par_iter()
        .map(|sim| {
            let sim_seed = seeds::derive(seed, "symmetry", sim as u64);
            let mut rng = seeds::stream(sim_seed, "policy", 0);
            let sched = schedule(&active, &alphas, i, &mut rng).expect("valid instance");
            let mut per_arm = vec![0.0f64; k];
            for (agent, channel) in channels.iter().enumerate() {
                let mut st = init_agent(&mut seeds::stream(sim_seed, "init", agent as u64), k);
                let mut crng = seeds::stream(sim_seed, "channel", agent as u64);
                for t in 1..=sched.end_time {
                    let played = transmit(channel, &mut st, sched.arm_at(agent, t), &mut crng);
                    per_arm[played] += 1.0;
                }
            }
            per_arm
        })
        .collect();

    let n = sims as f64;
    (0..k)
        .map(|arm| {
            let sum: f64 = counts.iter().map(|c| c[arm]).sum();
            let mean = sum / n;
            let var =
                counts.iter().map(|c| (c[arm] - mean) * (c[arm] - mean)).sum::<f64>() / (n - 1.0);
            (mean, (var / n).sqrt())
        })
        .collect()
}

pub struct GoodEventStats {
    pub runs: usize,
    pub violating_runs: usize,
    /// Union bound on the per-run violation probability, computed from the
    /// actual per-channel `eps^alpha` window probabilities.
    pub union_bound: f64,
}

/// Simulates erasure indicator streams for `runs` independent runs at the
/// given scale and counts runs containing any good-event violation window.
pub fn good_event_stats(
    epsilons: &[f64],
    horizon: usize,
    runs: usize,
    seed: u64,
) -> GoodEventStats {
    let alphas: Vec<u32> = epsilons
        .iter()
        .map(|&e| erasure_channels::repetitions_for(e, horizon).expect("valid eps"))
        .collect();

    let violating: usize = (0..runs)
        .into_par_iter()
        .map(|run| {
            let run_seed = seeds::derive(seed, "good-event", run as u64);
            for (agent, (&eps, &alpha)) in epsilons.iter().zip(&alphas).enumerate() {
                if alpha == 0 {
                    continue;
                }
                let mut rng = seeds::stream(run_seed, "channel", agent as u64);
                let mut streak = 0u32;
                for _ in 0..horizon {
                    if rng.random::<f64>() < eps {
                        streak += 1;
                        if streak >= alpha {
                            return 1usize;
                        }
                    } else {
                        streak = 0;
                    }
                }
            }
            0usize
        })
        .sum();

    let union_bound: f64 = epsilons
        .iter()
        .zip(&alphas)
        .map(|(&eps, &alpha)| {
            let windows = (horizon as f64 - f64::from(alpha) + 1.0).max(0.0);
            windows * eps.powi(alpha as i32)
        })
        .sum();

    GoodEventStats { runs, violating_runs: violating, union_bound }
}
