use bandit_core::{seeds::SimRng, ArmId};
use batch_scheduler::{
    pulls_per_arm, schedule, schedule_horizontal, schedule_vertical, BatchSchedule, SlotKind,
};

use crate::elimination::eliminate;
use crate::Policy;

/// Builds one batch's schedule for the active set.
trait Planner: Send {
    fn plan(&mut self, active: &[ArmId], i: u32, rng: &mut SimRng) -> BatchSchedule;
}

/// Successive elimination over planner-produced batch schedules.
///
/// Streams the schedule column by column, accumulates rewards from
/// effective slots only (sums, not sample lists), and eliminates at batch
/// boundaries. A final batch cut off by the horizon plays its prefix and
/// performs no elimination, since its statistics are incomplete.
struct BatchedElimination<P> {
    planner: P,
    k: usize,
    m: usize,
    horizon: usize,
    rng: SimRng,
    active: Vec<ArmId>,
    i: u32,
    sched: Option<BatchSchedule>,
    cursor: usize,
    sums: Vec<f64>,
    samples: Vec<u64>,
}

impl<P: Planner> BatchedElimination<P> {
    fn new(planner: P, k: usize, m: usize, horizon: usize, rng: SimRng) -> Self {
        Self {
            planner,
            k,
            m,
            horizon,
            rng,
            active: (0..k).collect(),
            i: 1,
            sched: None,
            cursor: 0,
            sums: vec![0.0; k],
            samples: vec![0; k],
        }
    }

    fn ensure_schedule(&mut self) {
        if self.sched.is_none() {
            self.sched = Some(self.planner.plan(&self.active, self.i, &mut self.rng));
            self.cursor = 0;
            self.sums.fill(0.0);
            self.samples.fill(0);
        }
    }
}

impl<P: Planner> Policy for BatchedElimination<P> {
    fn next_actions(&mut self, _round: usize, out: &mut [ArmId]) {
        self.ensure_schedule();
        let sched = self.sched.as_ref().expect("just planned");
        for (agent, slot) in out.iter_mut().enumerate() {
            *slot = sched.arm_at(agent, self.cursor + 1);
        }
    }

    fn observe(&mut self, _round: usize, rewards: &[f64]) {
        let sched = self.sched.as_ref().expect("observe follows next_actions");
        for (agent, &reward) in rewards.iter().enumerate() {
            let slot = sched.slot_at(agent, self.cursor + 1);
            if slot.kind == SlotKind::Effective {
                self.sums[slot.arm()] += reward;
                self.samples[slot.arm()] += 1;
            }
        }
        self.cursor += 1;
        if self.cursor == sched.end_time {
            let pulls = sched.pulls_per_arm as f64;
            debug_assert!(
                self.active.iter().all(|&a| self.samples[a] == sched.pulls_per_arm as u64),
                "every active arm collects exactly 4^i effective samples"
            );
            let means: Vec<f64> = self.active.iter().map(|&a| self.sums[a] / pulls).collect();
            self.active = eliminate(&self.active, &means, self.i, self.k, self.m, self.horizon);
            self.i += 1;
            self.sched = None;
        }
    }

    fn batch_index(&self) -> usize {
        self.i as usize
    }

    fn active_arms(&self) -> Vec<ArmId> {
        self.active.clone()
    }
}

struct Sp2Planner {
    alphas: Vec<u32>,
}

impl Planner for Sp2Planner {
    fn plan(&mut self, active: &[ArmId], i: u32, rng: &mut SimRng) -> BatchSchedule {
        schedule(active, &self.alphas, i, rng).expect("valid batch inputs")
    }
}

struct VerticalPlanner {
    alphas: Vec<u32>,
}

impl Planner for VerticalPlanner {
    fn plan(&mut self, active: &[ArmId], i: u32, _rng: &mut SimRng) -> BatchSchedule {
        schedule_vertical(active, &self.alphas, i).expect("valid batch inputs")
    }
}

struct HorizontalPlanner {
    alphas: Vec<u32>,
}

impl Planner for HorizontalPlanner {
    fn plan(&mut self, active: &[ArmId], i: u32, _rng: &mut SimRng) -> BatchSchedule {
        schedule_horizontal(active, &self.alphas, i).expect("valid batch inputs")
    }
}

/// Erasure-oblivious batch that keeps the single-agent pull structure:
/// each active arm (in active-set order) is sent to every agent for `4^i`
/// consecutive rounds, no repetition slots, and all `M 4^i` rewards feed
/// the arm's mean.
fn plan_m_wide_sae(active: &[ArmId], m: usize, i: u32) -> BatchSchedule {
    use batch_scheduler::{EffectiveWindow, Slot};

    let p4 = pulls_per_arm(i);
    let end_time = active.len() * p4;

    let mut rows: Vec<Vec<Slot>> = vec![Vec::with_capacity(end_time); m];
    let mut windows = Vec::new();
    for (block, &arm) in active.iter().enumerate() {
        let start = block * p4 + 1;
        for (agent, row) in rows.iter_mut().enumerate() {
            for _ in 0..p4 {
                row.push(Slot::new(arm, SlotKind::Effective));
            }
            windows.push(EffectiveWindow { arm, agent, start, end: start + p4 - 1 });
        }
    }

    BatchSchedule {
        end_time,
        slots: rows,
        windows,
        // every reward counts: M 4^i samples normalize each mean
        pulls_per_arm: m * p4,
        stage1_arms: active.len(),
        k_hat: 0,
        parts_per_agent: Vec::new(),
        part_sizes: Vec::new(),
    }
}

/// BatchSP2: successive elimination over the two-stage repetition-aware
/// scheduler.
pub fn batchsp2_policy(
    k: usize,
    m: usize,
    alphas: &[u32],
    horizon: usize,
    rng: SimRng,
) -> impl Policy {
    BatchedElimination::new(Sp2Planner { alphas: alphas.to_vec() }, k, m, horizon, rng)
}

/// MA-SAE: successive elimination with the single-agent pull sequence
/// executed by every agent at once, no repetitions, every reward
/// attributed to its sent arm.
pub fn ma_sae_policy(k: usize, m: usize, horizon: usize, rng: SimRng) -> impl Policy {
    BatchedElimination::new(MaSaePlanner { m }, k, m, horizon, rng)
}

struct MaSaePlanner {
    m: usize,
}

impl Planner for MaSaePlanner {
    fn plan(&mut self, active: &[ArmId], i: u32, _rng: &mut SimRng) -> BatchSchedule {
        plan_m_wide_sae(active, self.m, i)
    }
}

/// MA-LSAE-V: successive elimination over the whole-arm vertical schedule.
pub fn ma_lsae_v_policy(
    k: usize,
    m: usize,
    alphas: &[u32],
    horizon: usize,
    rng: SimRng,
) -> impl Policy {
    BatchedElimination::new(VerticalPlanner { alphas: alphas.to_vec() }, k, m, horizon, rng)
}

/// MA-LSAE-H: successive elimination over the per-arm horizontal schedule.
pub fn ma_lsae_h_policy(
    k: usize,
    m: usize,
    alphas: &[u32],
    horizon: usize,
    rng: SimRng,
) -> impl Policy {
    BatchedElimination::new(HorizontalPlanner { alphas: alphas.to_vec() }, k, m, horizon, rng)
}
