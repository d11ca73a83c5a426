use bandit_core::ArmId;

use crate::Policy;

/// How MA-UCB maps its per-round decisions onto agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UcbAssignment {
    /// Each agent runs its own UCB learner on the rewards attributed to
    /// its own sent actions (single-agent UCB wrapped per agent).
    #[default]
    Independent,
    /// One shared learner; agents are assigned sequentially by argmax with
    /// provisional count increments, so one round can explore several arms.
    Diverse,
    /// One shared learner; all agents play the single argmax arm.
    SameArm,
}

struct UcbStats {
    counts: Vec<u64>,
    sums: Vec<f64>,
}

impl UcbStats {
    fn new(k: usize) -> Self {
        Self { counts: vec![0; k], sums: vec![0.0; k] }
    }

    fn score(&self, arm: ArmId, provisional: u64, ln_t: f64) -> f64 {
        if provisional == 0 {
            return f64::INFINITY;
        }
        let mean = if self.counts[arm] > 0 {
            self.sums[arm] / self.counts[arm] as f64
        } else {
            0.0
        };
        mean + (2.0 * ln_t / provisional as f64).sqrt()
    }

    /// Argmax with ties to the fewest provisional pulls, then the lowest
    /// arm index, so round 1 spreads evenly over the arms.
    fn argmax(&self, provisional: &[u64], ln_t: f64) -> ArmId {
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for arm in 0..self.counts.len() {
            let s = self.score(arm, provisional[arm], ln_t);
            if s > best_score || (s == best_score && provisional[arm] < provisional[best]) {
                best = arm;
                best_score = s;
            }
        }
        best
    }

    fn record(&mut self, arm: ArmId, reward: f64) {
        self.counts[arm] += 1;
        self.sums[arm] += reward;
    }
}

/// Multi-agent UCB.
///
/// Every variant scores arms by `mean_a + sqrt(2 ln t / n_a)` with untried
/// arms forced first, and attributes all rewards to the sent actions,
/// oblivious to erasures. The variants differ in who owns the statistics:
/// one learner per agent (`Independent`, the default) or a single shared
/// learner (`Diverse`, `SameArm`).
pub struct MaUcb {
    assignment: UcbAssignment,
    k: usize,
    shared: UcbStats,
    per_agent: Vec<UcbStats>,
    last_sent: Vec<ArmId>,
}

pub fn ma_ucb_policy(k: usize, m: usize, assignment: UcbAssignment) -> MaUcb {
    let per_agent = match assignment {
        UcbAssignment::Independent => (0..m).map(|_| UcbStats::new(k)).collect(),
        _ => Vec::new(),
    };
    MaUcb {
        assignment,
        k,
        shared: UcbStats::new(k),
        per_agent,
        last_sent: vec![0; m],
    }
}

impl Policy for MaUcb {
    fn next_actions(&mut self, round: usize, out: &mut [ArmId]) {
        let ln_t = (round as f64).ln();
        match self.assignment {
            UcbAssignment::Independent => {
                for (agent, slot) in out.iter_mut().enumerate() {
                    let stats = &self.per_agent[agent];
                    *slot = stats.argmax(&stats.counts, ln_t);
                }
            }
            UcbAssignment::Diverse => {
                let mut provisional = self.shared.counts.clone();
                for slot in out.iter_mut() {
                    let arm = self.shared.argmax(&provisional, ln_t);
                    provisional[arm] += 1;
                    *slot = arm;
                }
            }
            UcbAssignment::SameArm => {
                let arm = self.shared.argmax(&self.shared.counts, ln_t);
                out.fill(arm);
            }
        }
        self.last_sent.copy_from_slice(out);
    }

    fn observe(&mut self, _round: usize, rewards: &[f64]) {
        for (agent, &reward) in rewards.iter().enumerate() {
            let arm = self.last_sent[agent];
            match self.assignment {
                UcbAssignment::Independent => self.per_agent[agent].record(arm, reward),
                _ => self.shared.record(arm, reward),
            }
        }
    }

    fn batch_index(&self) -> usize {
        0
    }

    fn active_arms(&self) -> Vec<ArmId> {
        (0..self.k).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_round_spreads_agents_over_untried_arms() {
        let k = 3;
        for m in [1usize, 2, 3, 5, 8] {
            let mut ucb = ma_ucb_policy(k, m, UcbAssignment::Diverse);
            let mut out = vec![0; m];
            ucb.next_actions(1, &mut out);
            let mut per_arm = vec![0usize; k];
            for &a in &out {
                per_arm[a] += 1;
            }
            let lo = m / k;
            let hi = m.div_ceil(k);
            for (arm, &c) in per_arm.iter().enumerate() {
                assert!(
                    (lo..=hi).contains(&c),
                    "m={m}: arm {arm} got {c} assignments"
                );
            }
        }
    }

    #[test]
    fn same_arm_variant_is_uniform_within_round() {
        let mut ucb = ma_ucb_policy(4, 6, UcbAssignment::SameArm);
        let mut out = vec![0; 6];
        for round in 1..=50 {
            ucb.next_actions(round, &mut out);
            assert!(out.iter().all(|&a| a == out[0]));
            ucb.observe(round, &[0.3; 6]);
        }
    }

    /// Textbook single-agent UCB written independently of the policy code,
    /// with the same tie convention (fewest pulls, then lowest index).
    fn reference_ucb_trace(k: usize, rewards: &dyn Fn(usize, ArmId) -> f64, t_max: usize) -> Vec<ArmId> {
        let mut counts = vec![0u64; k];
        let mut sums = vec![0.0; k];
        let mut trace = Vec::new();
        for t in 1..=t_max {
            let score = |arm: usize, counts: &[u64]| {
                if counts[arm] == 0 {
                    f64::INFINITY
                } else {
                    sums[arm] / counts[arm] as f64
                        + (2.0 * (t as f64).ln() / counts[arm] as f64).sqrt()
                }
            };
            let mut arm = 0;
            for cand in 1..k {
                let (s, b) = (score(cand, &counts), score(arm, &counts));
                if s > b || (s == b && counts[cand] < counts[arm]) {
                    arm = cand;
                }
            }
            trace.push(arm);
            counts[arm] += 1;
            sums[arm] += rewards(t, arm);
        }
        trace
    }

    #[test]
    fn single_agent_matches_textbook_ucb() {
        // deterministic reward pattern, no channel in between; at M = 1
        // every variant degenerates to the same learner
        let rewards = |t: usize, arm: ArmId| ((t * 7 + arm * 13) % 10) as f64 / 10.0;
        let k = 4;
        let reference = reference_ucb_trace(k, &rewards, 200);

        for assignment in [
            UcbAssignment::Independent,
            UcbAssignment::Diverse,
            UcbAssignment::SameArm,
        ] {
            let mut ucb = ma_ucb_policy(k, 1, assignment);
            let mut out = vec![0; 1];
            let mut trace = Vec::new();
            for t in 1..=200 {
                ucb.next_actions(t, &mut out);
                trace.push(out[0]);
                ucb.observe(t, &[rewards(t, out[0])]);
            }
            assert_eq!(trace, reference, "{assignment:?}");
        }
    }

    #[test]
    fn independent_learners_do_not_share_rewards() {
        // Two agents, two arms; agent 0 sees arm 0 pay off, agent 1 sees
        // arm 1 pay off; each converges to its own winner.
        let mut ucb = ma_ucb_policy(2, 2, UcbAssignment::Independent);
        let mut out = vec![0; 2];
        for round in 1..=400 {
            ucb.next_actions(round, &mut out);
            let r0 = if out[0] == 0 { 1.0 } else { 0.0 };
            let r1 = if out[1] == 1 { 1.0 } else { 0.0 };
            ucb.observe(round, &[r0, r1]);
        }
        let mut tally = [[0usize; 2]; 2];
        for round in 1..=100 {
            ucb.next_actions(round + 400, &mut out);
            tally[0][out[0]] += 1;
            tally[1][out[1]] += 1;
            ucb.observe(round + 400, &[0.0, 0.0]);
        }
        assert!(tally[0][0] > 60, "agent 0 prefers arm 0: {tally:?}");
        assert!(tally[1][1] > 60, "agent 1 prefers arm 1: {tally:?}");
    }
}
