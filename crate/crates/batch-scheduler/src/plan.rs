use bandit_core::ArmId;

/// What a schedule slot is for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    /// Repetition prefix; the reward is discarded.
    Repetition,
    /// Effective pull; the reward feeds the arm's mean estimate.
    Effective,
    /// Imitator slot (repetitions and pulls alike); reward discarded.
    Imitation,
    /// Padding with a random active arm; reward discarded.
    Filler,
}

/// One (agent, round) cell of a batch schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    arm: u32,
    pub kind: SlotKind,
}

impl Slot {
    pub fn new(arm: ArmId, kind: SlotKind) -> Self {
        Self { arm: u32::try_from(arm).expect("arm id fits in u32"), kind }
    }

    pub fn arm(&self) -> ArmId {
        self.arm as usize
    }
}

/// A run of effective pulls of `arm` on `agent`; `start..=end` are 1-based
/// batch-local rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EffectiveWindow {
    pub arm: ArmId,
    pub agent: usize,
    pub start: usize,
    pub end: usize,
}

impl EffectiveWindow {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A fully materialized per-agent, per-slot action plan for one batch.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchSchedule {
    /// Batch end time `T^(i)`; every agent has exactly this many slots.
    pub end_time: usize,
    /// `slots[m][t-1]` is what the learner sends agent `m` at round `t`.
    pub slots: Vec<Vec<Slot>>,
    /// The pulls whose rewards feed the mean estimates.
    pub windows: Vec<EffectiveWindow>,
    /// Effective pulls per arm in this batch (`4^i`).
    pub pulls_per_arm: usize,
    /// Arms fully scheduled by stage 1 (whole arm on one agent).
    pub stage1_arms: usize,
    /// Arms left for stage 2.
    pub k_hat: usize,
    /// Stage-2 parts landed on each of the first `floor(M/2)` agents.
    pub parts_per_agent: Vec<usize>,
    /// Sizes of all stage-2 parts, in assignment order.
    pub part_sizes: Vec<usize>,
}

impl BatchSchedule {
    pub fn num_agents(&self) -> usize {
        self.slots.len()
    }

    /// Action sent to `agent` at 1-based batch round `t`.
    pub fn arm_at(&self, agent: usize, t: usize) -> ArmId {
        self.slots[agent][t - 1].arm()
    }

    pub fn slot_at(&self, agent: usize, t: usize) -> Slot {
        self.slots[agent][t - 1]
    }

    /// Structural self-check; returns a description of the first violation.
    ///
    /// Verified properties: every agent has `end_time` slots, every arm in
    /// `active` owns exactly `pulls_per_arm` effective pulls, every
    /// effective window is immediately preceded by exactly `alphas[agent]`
    /// repetition slots of the same arm, windows never overlap, and the
    /// effective slots are precisely those covered by windows (so windows,
    /// prefixes, imitator slots and filler tile the whole batch).
    pub fn validate(&self, active: &[ArmId], alphas: &[u32]) -> Result<(), String> {
        let t_i = self.end_time;
        if self.slots.len() != alphas.len() {
            return Err(format!(
                "{} agent rows for {} agents",
                self.slots.len(),
                alphas.len()
            ));
        }
        for (m, row) in self.slots.iter().enumerate() {
            if row.len() != t_i {
                return Err(format!("agent {m} has {} slots, end time is {t_i}", row.len()));
            }
        }

        let mut effective_per_arm = vec![0usize; active.iter().max().map_or(0, |&a| a + 1)];
        let mut covered = vec![0usize; alphas.len()];
        let mut per_agent: Vec<Vec<&EffectiveWindow>> = vec![Vec::new(); alphas.len()];
        for w in &self.windows {
            if w.start < 1 || w.end > t_i || w.start > w.end {
                return Err(format!("window {w:?} out of range for end time {t_i}"));
            }
            per_agent[w.agent].push(w);
            effective_per_arm[w.arm] += w.len();
            covered[w.agent] += w.len();

            for t in w.start..=w.end {
                let s = self.slot_at(w.agent, t);
                if s.kind != SlotKind::Effective || s.arm() != w.arm {
                    return Err(format!("window {w:?} covers non-effective slot at t={t}"));
                }
            }
            let alpha = alphas[w.agent] as usize;
            if w.start <= alpha {
                return Err(format!("window {w:?} has no room for its repetition prefix"));
            }
            for t in (w.start - alpha)..w.start {
                let s = self.slot_at(w.agent, t);
                if s.kind != SlotKind::Repetition || s.arm() != w.arm {
                    return Err(format!(
                        "window {w:?} not preceded by {alpha} repetitions of its arm"
                    ));
                }
            }
            if w.start > alpha + 1 {
                let before = self.slot_at(w.agent, w.start - alpha - 1);
                if before.kind == SlotKind::Repetition && before.arm() == w.arm {
                    return Err(format!("window {w:?} prefix longer than alpha"));
                }
            }
        }

        for &arm in active {
            if effective_per_arm[arm] != self.pulls_per_arm {
                return Err(format!(
                    "arm {arm} has {} effective pulls, expected {}",
                    effective_per_arm[arm], self.pulls_per_arm
                ));
            }
        }

        for (m, ws) in per_agent.iter_mut().enumerate() {
            ws.sort_by_key(|w| w.start);
            for pair in ws.windows(2) {
                if pair[1].start <= pair[0].end {
                    return Err(format!("overlapping windows on agent {m}"));
                }
            }
            let effective_slots = self.slots[m]
                .iter()
                .filter(|s| s.kind == SlotKind::Effective)
                .count();
            if effective_slots != covered[m] {
                return Err(format!(
                    "agent {m} has {effective_slots} effective slots but windows cover {}",
                    covered[m]
                ));
            }
        }
        Ok(())
    }
}
