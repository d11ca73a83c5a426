use std::collections::HashMap;

use bandit_core::ArmId;
use batch_scheduler::BatchSchedule;

/// Elimination threshold for batch `i`: `4 sqrt(ln(K M T) / (2 * 4^i))`.
/// `k` is the original arm count, not the current active count.
pub fn elimination_threshold(i: u32, k: usize, m: usize, horizon: usize) -> f64 {
    let log_kmt = ((k * m * horizon) as f64).ln();
    4.0 * (log_kmt / (2.0 * 4f64.powi(i as i32))).sqrt()
}

/// Retains the arms whose empirical mean is within the batch-`i` threshold
/// of the best empirical mean. `means[j]` belongs to `active[j]`. The best
/// empirical arm always survives, so the result is never empty.
pub fn eliminate(
    active: &[ArmId],
    means: &[f64],
    i: u32,
    k: usize,
    m: usize,
    horizon: usize,
) -> Vec<ArmId> {
    debug_assert_eq!(active.len(), means.len());
    let threshold = elimination_threshold(i, k, m, horizon);
    let best = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    active
        .iter()
        .zip(means)
        .filter(|&(_, &mu)| best - mu <= threshold)
        .map(|(&a, _)| a)
        .collect()
}

/// Batch-`i` empirical means from a full reward matrix: for each arm, the
/// rewards inside its effective windows summed and divided by `4^i`.
/// Repetition, imitator and filler rewards are excluded.
pub fn empirical_means(
    schedule: &BatchSchedule,
    rewards: &[Vec<f64>],
) -> HashMap<ArmId, f64> {
    let mut sums: HashMap<ArmId, f64> = HashMap::new();
    for w in &schedule.windows {
        let row = &rewards[w.agent];
        let sum: f64 = row[w.start - 1..w.end].iter().sum();
        *sums.entry(w.arm).or_insert(0.0) += sum;
    }
    let norm = schedule.pulls_per_arm as f64;
    sums.values_mut().for_each(|s| *s /= norm);
    sums
}

#[cfg(test)]
mod tests {
    use super::*;
    use bandit_core::seeds;
    use batch_scheduler::schedule;

    #[test]
    fn threshold_examples() {
        // K=2, M=2, T=1000: ln 4000 over 2*4^i.
        let t3 = elimination_threshold(3, 2, 2, 1000);
        assert!((t3 - 1.0183).abs() < 5e-4, "{t3}");
        let t5 = elimination_threshold(5, 2, 2, 1000);
        assert!((t5 - 0.2546).abs() < 5e-4, "{t5}");
    }

    #[test]
    fn elimination_follows_threshold() {
        let active = [0, 1];
        let means = [0.9, 0.2];
        assert_eq!(eliminate(&active, &means, 3, 2, 2, 1000), vec![0, 1]);
        assert_eq!(eliminate(&active, &means, 5, 2, 2, 1000), vec![0]);
    }

    #[test]
    fn equal_means_never_eliminate() {
        let active = [3, 5, 7];
        let means = [0.4, 0.4, 0.4];
        for i in 1..10 {
            assert_eq!(eliminate(&active, &means, i, 3, 4, 100_000), active.to_vec());
        }
    }

    #[test]
    fn best_empirical_arm_always_survives() {
        let mut rng = seeds::stream(1, "policy", 0);
        use rand::Rng;
        for _ in 0..200 {
            let k = rng.random_range(2..10usize);
            let active: Vec<ArmId> = (0..k).collect();
            let means: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
            let i = rng.random_range(1..8u32);
            let kept = eliminate(&active, &means, i, k, 4, 50_000);
            assert!(!kept.is_empty());
            let best_idx = means
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            assert!(kept.contains(&active[best_idx]));
        }
    }

    #[test]
    fn empirical_means_normalize_by_pulls() {
        let active = [0, 1, 2];
        let alphas = [1, 2];
        let mut rng = seeds::stream(2, "policy", 0);
        let s = schedule(&active, &alphas, 1, &mut rng).unwrap();
        // all rewards one: every mean is exactly 1
        let ones = vec![vec![1.0; s.end_time]; 2];
        let means = empirical_means(&s, &ones);
        for &a in &active {
            assert_eq!(means[&a], 1.0);
        }
    }

    #[test]
    fn alternating_rewards_average_to_half() {
        // i=1, single agent: windows are contiguous runs of 4.
        let active = [0];
        // One arm, one agent: block of alpha=0 + 4 pulls.
        let s = schedule(&active, &[0], 1, &mut seeds::stream(3, "policy", 0)).unwrap();
        let rewards = vec![vec![1.0, 0.0, 1.0, 0.0]];
        let means = empirical_means(&s, &rewards);
        assert_eq!(means[&0], 0.5);
    }
}
