use bandit_core::ArmId;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::bounds::fits_within_budget;
use crate::plan::{BatchSchedule, EffectiveWindow, Slot, SlotKind};
use crate::pulls_per_arm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("active arm set is empty")]
    EmptyActiveSet,
    #[error("need at least one agent")]
    NoAgents,
    #[error("repetition budgets must be sorted ascending")]
    UnsortedAlphas,
    #[error("batch index {0} out of supported range 1..=20")]
    BadBatchIndex(u32),
}

pub(crate) fn check_inputs(
    active: &[ArmId],
    alphas: &[u32],
    i: u32,
) -> Result<(), ScheduleError> {
    if active.is_empty() {
        return Err(ScheduleError::EmptyActiveSet);
    }
    if alphas.is_empty() {
        return Err(ScheduleError::NoAgents);
    }
    if alphas.windows(2).any(|w| w[0] > w[1]) {
        return Err(ScheduleError::UnsortedAlphas);
    }
    if i == 0 || i > 20 {
        return Err(ScheduleError::BadBatchIndex(i));
    }
    Ok(())
}

pub(crate) struct Builder {
    rows: Vec<Vec<Slot>>,
    windows: Vec<EffectiveWindow>,
}

impl Builder {
    pub(crate) fn new(num_agents: usize) -> Self {
        Self { rows: vec![Vec::new(); num_agents], windows: Vec::new() }
    }

    pub(crate) fn len(&self, agent: usize) -> usize {
        self.rows[agent].len()
    }

    pub(crate) fn rows_push(&mut self, agent: usize, slot: Slot) {
        self.rows[agent].push(slot);
    }

    /// Effective run without its own repetition prefix (the caller already
    /// pushed the repetitions).
    pub(crate) fn push_effective_run(&mut self, agent: usize, arm: ArmId, pulls: usize) {
        let row = &mut self.rows[agent];
        let start = row.len() + 1;
        for _ in 0..pulls {
            row.push(Slot::new(arm, SlotKind::Effective));
        }
        self.windows.push(EffectiveWindow { arm, agent, start, end: row.len() });
    }

    /// Repetition prefix plus an effective window of `pulls` sends of `arm`.
    pub(crate) fn push_block(&mut self, agent: usize, arm: ArmId, alpha: u32, pulls: usize) {
        let row = &mut self.rows[agent];
        for _ in 0..alpha {
            row.push(Slot::new(arm, SlotKind::Repetition));
        }
        let start = row.len() + 1;
        for _ in 0..pulls {
            row.push(Slot::new(arm, SlotKind::Effective));
        }
        self.windows.push(EffectiveWindow { arm, agent, start, end: row.len() });
    }

    /// Imitator copy of a part: own repetition prefix plus the pulls, all
    /// discarded for learning and truncated at `limit`.
    fn push_imitation(&mut self, agent: usize, arm: ArmId, alpha: u32, pulls: usize, limit: usize) {
        let row = &mut self.rows[agent];
        for _ in 0..(alpha as usize + pulls) {
            if row.len() >= limit {
                return;
            }
            row.push(Slot::new(arm, SlotKind::Imitation));
        }
    }

    /// Pads the agent's row with uniformly random active arms.
    pub(crate) fn fill_to<R: Rng + ?Sized>(
        &mut self,
        agent: usize,
        end_time: usize,
        active: &[ArmId],
        rng: &mut R,
    ) {
        let row = &mut self.rows[agent];
        while row.len() < end_time {
            let arm = active[rng.random_range(0..active.len())];
            row.push(Slot::new(arm, SlotKind::Filler));
        }
    }

    /// Pads the agent's row by replaying its last scheduled action
    /// (`default` when the row is empty).
    pub(crate) fn fill_replay(&mut self, agent: usize, end_time: usize, default: ArmId) {
        let row = &mut self.rows[agent];
        let arm = row.last().map_or(default, Slot::arm);
        while row.len() < end_time {
            row.push(Slot::new(arm, SlotKind::Filler));
        }
    }

    pub(crate) fn finish(
        self,
        end_time: usize,
        pulls: usize,
        stage1_arms: usize,
        k_hat: usize,
        parts_per_agent: Vec<usize>,
        part_sizes: Vec<usize>,
    ) -> BatchSchedule {
        BatchSchedule {
            end_time,
            slots: self.rows,
            windows: self.windows,
            pulls_per_arm: pulls,
            stage1_arms,
            k_hat,
            parts_per_agent,
            part_sizes,
        }
    }
}

/// Two-stage batch scheduler.
///
/// Stage 1 shuffles the active set and greedily packs whole arms (each
/// costing `alpha_m + 4^i` slots) onto agents while their end time stays
/// within the LP budget `tau`; this places at least `(K - M)^+` arms.
/// Stage 2 splits each leftover arm's `4^i` pulls into
/// `max(1, floor(M / 2 k_hat))` near-equal parts and deals the parts round
/// robin to the first `floor(M/2)` agents, each part paying that agent's
/// repetition prefix again. The remaining agents imitate their counterpart
/// in the first half (with their own repetition budget, truncated at the
/// batch end); imitator rewards are not effective. The batch end time is
/// the latest end among stage-1 assignments and the first half's stage-2
/// work, and every idle slot is filled with a random active arm whose
/// reward is discarded.
pub fn schedule<R: Rng + ?Sized>(
    active: &[ArmId],
    alphas: &[u32],
    i: u32,
    rng: &mut R,
) -> Result<BatchSchedule, ScheduleError> {
    check_inputs(active, alphas, i)?;
    let k = active.len();
    let m = alphas.len();
    let p4 = pulls_per_arm(i);
    let costs: Vec<u64> = alphas.iter().map(|&a| u64::from(a) + p4 as u64).collect();

    let mut shuffled = active.to_vec();
    shuffled.shuffle(rng);

    let mut b = Builder::new(m);
    let mut next = 0usize;
    for agent in 0..m {
        let cost = costs[agent];
        let mut t_end = 0u64;
        while next < k && fits_within_budget(t_end + cost, &costs, k as u64) {
            b.push_block(agent, shuffled[next], alphas[agent], p4);
            next += 1;
            t_end += cost;
        }
    }
    let stage1_arms = next;
    let stage1_end_max = (0..m).map(|a| b.len(a)).max().expect("agents");
    let k_hat = k - stage1_arms;
    let first_half = m / 2;

    let mut parts_per_agent = vec![0usize; first_half];
    let mut part_sizes = Vec::new();
    let mut assigned_parts: Vec<Vec<(ArmId, usize)>> = vec![Vec::new(); first_half];
    if k_hat > 0 {
        assert!(
            first_half >= 1,
            "stage 1 schedules everything when only one agent exists"
        );
        let p = (m / (2 * k_hat)).max(1).min(p4);
        let (q, r) = (p4 / p, p4 % p);
        let mut part_idx = 0usize;
        for &arm in &shuffled[stage1_arms..] {
            for j in 0..p {
                let size = if j < r { q + 1 } else { q };
                let agent = part_idx % first_half;
                b.push_block(agent, arm, alphas[agent], size);
                parts_per_agent[agent] += 1;
                part_sizes.push(size);
                assigned_parts[agent].push((arm, size));
                part_idx += 1;
            }
        }
    }

    let first_half_end = (0..first_half).map(|a| b.len(a)).max().unwrap_or(0);
    let end_time = stage1_end_max.max(first_half_end);

    if k_hat > 0 {
        for (agent, &alpha) in alphas.iter().enumerate().skip(first_half) {
            let counterpart = (agent - first_half) % first_half;
            for &(arm, size) in &assigned_parts[counterpart] {
                b.push_imitation(agent, arm, alpha, size, end_time);
            }
        }
    }

    for agent in 0..m {
        b.fill_to(agent, end_time, active, rng);
    }

    Ok(b.finish(end_time, p4, stage1_arms, k_hat, parts_per_agent, part_sizes))
}

/// Criterion checks beyond [`BatchSchedule::validate`]: the stage-1 count,
/// the per-agent stage-2 part cap, and the part-size cap.
pub fn structural_report(
    sched: &BatchSchedule,
    active: &[ArmId],
    alphas: &[u32],
) -> Result<(), String> {
    sched.validate(active, alphas)?;
    let k = active.len();
    let m = alphas.len();
    let guaranteed = k.saturating_sub(m);
    if sched.stage1_arms < guaranteed {
        return Err(format!(
            "stage 1 placed {} arms, below the (K-M)+ = {guaranteed} guarantee",
            sched.stage1_arms
        ));
    }
    if let Some(worst) = sched.parts_per_agent.iter().max() {
        if *worst > 3 {
            return Err(format!("an agent received {worst} stage-2 parts (cap 3)"));
        }
    }
    if sched.k_hat > 0 {
        let p4 = sched.pulls_per_arm;
        let cap = p4.min((4 * sched.k_hat * p4).div_ceil(m));
        if let Some(&worst) = sched.part_sizes.iter().max() {
            if worst > cap {
                return Err(format!("part of size {worst} exceeds cap {cap}"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use bandit_core::seeds;

    #[test]
    fn hand_trace_two_agents_three_arms() {
        // tau = 6; one whole arm per agent in slots 1-4, the third arm's
        // pulls on agent 0 in slots 5-8, agent 1 imitating there.
        let mut rng = seeds::stream(1, "policy", 0);
        let s = schedule(&[0, 1, 2], &[0, 0], 1, &mut rng).unwrap();
        assert_eq!(s.end_time, 8);
        assert_eq!(s.stage1_arms, 2);
        assert_eq!(s.k_hat, 1);
        s.validate(&[0, 1, 2], &[0, 0]).unwrap();
        for t in 5..=8 {
            assert_eq!(s.slot_at(1, t).kind, SlotKind::Imitation);
            assert_eq!(s.slot_at(0, t).kind, SlotKind::Effective);
        }
        // every arm has exactly 4 effective pulls (validate checks), and
        // the stage-2 arm is the one imitated
        assert_eq!(s.arm_at(1, 5), s.arm_at(0, 5));
    }

    #[test]
    fn single_agent_packs_everything_sequentially() {
        for (alpha, k) in [(0u32, 3usize), (7, 5), (2, 1)] {
            let active: Vec<ArmId> = (0..k).collect();
            let mut rng = seeds::stream(2, "policy", 0);
            let s = schedule(&active, &[alpha], 1, &mut rng).unwrap();
            assert_eq!(s.k_hat, 0, "alpha={alpha} k={k}");
            assert_eq!(s.end_time, k * (alpha as usize + 4));
            s.validate(&active, &[alpha]).unwrap();
        }
    }

    #[test]
    fn single_arm_two_agents_goes_to_stage_two() {
        let mut rng = seeds::stream(3, "policy", 0);
        let s = schedule(&[0], &[0, 0], 1, &mut rng).unwrap();
        assert_eq!(s.stage1_arms, 0);
        assert_eq!(s.k_hat, 1);
        assert_eq!(s.end_time, 4);
        s.validate(&[0], &[0, 0]).unwrap();
        for t in 1..=4 {
            assert_eq!(s.arm_at(0, t), 0);
            assert_eq!(s.slot_at(0, t).kind, SlotKind::Effective);
            assert_eq!(s.slot_at(1, t).kind, SlotKind::Imitation);
        }
    }

    #[test]
    fn identical_seeds_give_identical_schedules() {
        let active: Vec<ArmId> = (0..7).collect();
        let alphas = [0, 1, 3, 9];
        let a = schedule(&active, &alphas, 2, &mut seeds::stream(4, "policy", 7)).unwrap();
        let b = schedule(&active, &alphas, 2, &mut seeds::stream(4, "policy", 7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn structural_invariants_on_random_instances() {
        let mut rng = seeds::stream(5, "policy", 0);
        for case in 0..300 {
            let m = 1 + case % 9;
            let k = 1 + (case * 7) % 20;
            let i = 1 + (case % 3) as u32;
            let mut alphas: Vec<u32> =
                (0..m).map(|_| rng.random_range(0..40)).collect();
            alphas.sort_unstable();
            let active: Vec<ArmId> = (0..k).collect();
            let s = schedule(&active, &alphas, i, &mut rng).unwrap();
            structural_report(&s, &active, &alphas)
                .unwrap_or_else(|e| panic!("case {case} (M={m} K={k} i={i}): {e}"));
        }
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let mut rng = seeds::stream(6, "policy", 0);
        assert_eq!(
            schedule(&[], &[0], 1, &mut rng).unwrap_err(),
            ScheduleError::EmptyActiveSet
        );
        assert_eq!(
            schedule(&[0], &[], 1, &mut rng).unwrap_err(),
            ScheduleError::NoAgents
        );
        assert_eq!(
            schedule(&[0], &[3, 1], 1, &mut rng).unwrap_err(),
            ScheduleError::UnsortedAlphas
        );
        assert_eq!(
            schedule(&[0], &[0], 0, &mut rng).unwrap_err(),
            ScheduleError::BadBatchIndex(0)
        );
    }
}
