//! Reference schedulers used as experiment baselines.
//!
//! Unlike [`crate::schedule`], these take no random stream: arms are laid
//! out in active-set order and idle slots replay the agent's last action,
//! so a baseline batch plan is a pure function of `(active, alphas, i)`.

use bandit_core::ArmId;

use crate::algorithm::{check_inputs, Builder, ScheduleError};
use crate::plan::{BatchSchedule, Slot, SlotKind};
use crate::pulls_per_arm;

/// Whole-arm scheduler: `floor(K/M)` arms per agent, the remaining
/// `K mod M` arms on the first (fastest) agents, every arm's pulls kept on
/// one agent. End time `max(floor(K/M) (alpha_M + 4^i),
/// (floor(K/M)+1)(alpha_r + 4^i))` with `r = K mod M`.
pub fn schedule_vertical(
    active: &[ArmId],
    alphas: &[u32],
    i: u32,
) -> Result<BatchSchedule, ScheduleError> {
    check_inputs(active, alphas, i)?;
    let k = active.len();
    let m = alphas.len();
    let p4 = pulls_per_arm(i);

    let base = k / m;
    let extra = k % m;
    let mut b = Builder::new(m);
    let mut next = 0usize;
    for (agent, &alpha) in alphas.iter().enumerate() {
        let arms = base + usize::from(agent < extra);
        for _ in 0..arms {
            b.push_block(agent, active[next], alpha, p4);
            next += 1;
        }
    }
    let end_time = (0..m).map(|a| b.len(a)).max().expect("agents");
    for agent in 0..m {
        b.fill_replay(agent, end_time, active[0]);
    }
    Ok(b.finish(end_time, p4, k, 0, Vec::new(), Vec::new()))
}

/// Per-arm parallel scheduler: arms are processed one at a time; each arm
/// is sent to the prefix of agents `1..=M*` minimizing
/// `(sum_{m<=M*} alpha_m + 4^i) / M*`, every agent paying its own
/// repetition prefix, until `4^i` effective pulls accumulate (surplus
/// pulls are truncated and discarded). Agents outside the prefix replay
/// their previous action as filler.
pub fn schedule_horizontal(
    active: &[ArmId],
    alphas: &[u32],
    i: u32,
) -> Result<BatchSchedule, ScheduleError> {
    check_inputs(active, alphas, i)?;
    let m = alphas.len();
    let p4 = pulls_per_arm(i);

    // argmin over prefix sizes, ties to the smallest prefix
    let mut best_mt = 1usize;
    let mut best_ratio = f64::INFINITY;
    let mut prefix_sum = 0u64;
    for (idx, &a) in alphas.iter().enumerate() {
        prefix_sum += u64::from(a);
        let ratio = (prefix_sum as f64 + p4 as f64) / (idx + 1) as f64;
        if ratio < best_ratio {
            best_ratio = ratio;
            best_mt = idx + 1;
        }
    }

    // smallest phase length giving 4^i candidate pulls across the prefix
    let candidates =
        |d: usize| -> usize { alphas[..best_mt].iter().map(|&a| d.saturating_sub(a as usize)).sum() };
    let (mut lo, mut hi) = (1usize, alphas[best_mt - 1] as usize + p4);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if candidates(mid) >= p4 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let phase_len = lo;

    let mut b = Builder::new(m);
    let mut last_sent: Vec<Option<ArmId>> = vec![None; m];
    for &arm in active {
        // effective cells in slot-major order until 4^i are claimed
        let mut budget = p4;
        let mut effective = vec![0usize; best_mt];
        for t in 1..=phase_len {
            for (agent, count) in effective.iter_mut().enumerate() {
                if t > alphas[agent] as usize && budget > 0 {
                    *count += 1;
                    budget -= 1;
                }
            }
        }
        for agent in 0..best_mt {
            let reps = (alphas[agent] as usize).min(phase_len);
            for _ in 0..reps {
                b.rows_push(agent, Slot::new(arm, SlotKind::Repetition));
            }
            if effective[agent] > 0 {
                b.push_effective_run(agent, arm, effective[agent]);
            }
            // surplus candidates and any leftover slack are truncated pulls
            let used = reps + effective[agent];
            for _ in used..phase_len {
                b.rows_push(agent, Slot::new(arm, SlotKind::Filler));
            }
            last_sent[agent] = Some(arm);
        }
        for (agent, last) in last_sent.iter_mut().enumerate().skip(best_mt) {
            let replay = last.unwrap_or(arm);
            for _ in 0..phase_len {
                b.rows_push(agent, Slot::new(replay, SlotKind::Filler));
            }
            *last = Some(replay);
        }
    }

    let end_time = b.len(0);
    Ok(b.finish(end_time, p4, 0, 0, Vec::new(), Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn active(k: usize) -> Vec<ArmId> {
        (0..k).collect()
    }

    #[test]
    fn vertical_matches_example_one_formula() {
        for (k, alphas, i) in [
            (4usize, vec![0u32, 0], 1u32),
            (10, vec![0, 2, 5, 9], 1),
            (3, vec![1, 4], 2),
            (7, vec![0, 0, 0], 2),
        ] {
            let m = alphas.len();
            let p4 = pulls_per_arm(i);
            let s = schedule_vertical(&active(k), &alphas, i).unwrap();
            s.validate(&active(k), &alphas).unwrap();
            let base = k / m;
            let extra = k % m;
            let whole = base * (alphas[m - 1] as usize + p4);
            let expect = if extra > 0 {
                whole.max((base + 1) * (alphas[extra - 1] as usize + p4))
            } else {
                whole
            };
            assert_eq!(s.end_time, expect, "k={k} alphas={alphas:?} i={i}");
        }
    }

    #[test]
    fn vertical_two_per_agent() {
        let s = schedule_vertical(&active(4), &[0, 0], 1).unwrap();
        assert_eq!(s.end_time, 8);
    }

    #[test]
    fn vertical_single_arm_many_agents() {
        let s = schedule_vertical(&active(1), &[0, 0, 0, 0], 1).unwrap();
        assert_eq!(s.end_time, 4);
        s.validate(&active(1), &[0, 0, 0, 0]).unwrap();
        for t in 1..=4 {
            assert_eq!(s.slot_at(0, t).kind, SlotKind::Effective);
            for agent in 1..4 {
                assert_eq!(s.slot_at(agent, t).kind, SlotKind::Filler);
            }
        }
    }

    #[test]
    fn vertical_zero_delay_end_time_is_ceil_k_over_m() {
        for (k, m, i) in [(10usize, 4usize, 1u32), (5, 5, 2), (9, 2, 1)] {
            let alphas = vec![0u32; m];
            let s = schedule_vertical(&active(k), &alphas, i).unwrap();
            assert_eq!(s.end_time, k.div_ceil(m) * pulls_per_arm(i));
        }
    }

    #[test]
    fn horizontal_equal_alphas_end_time() {
        for (k, m, alpha, i) in [(5usize, 4usize, 3u32, 1u32), (10, 20, 7, 2), (2, 3, 0, 1)] {
            let alphas = vec![alpha; m];
            let p4 = pulls_per_arm(i);
            let s = schedule_horizontal(&active(k), &alphas, i).unwrap();
            s.validate(&active(k), &alphas).unwrap();
            assert_eq!(s.end_time, k * (alpha as usize + p4.div_ceil(m)));
        }
    }

    #[test]
    fn horizontal_skips_slow_agents() {
        let s = schedule_horizontal(&active(3), &[0, 1000], 1).unwrap();
        s.validate(&active(3), &[0, 1000]).unwrap();
        assert_eq!(s.end_time, 12); // three phases of 4 slots on agent 0
        for t in 1..=12 {
            assert_eq!(s.slot_at(0, t).kind, SlotKind::Effective);
            assert_eq!(s.slot_at(1, t).kind, SlotKind::Filler);
        }
    }

    #[test]
    fn horizontal_and_vertical_agree_for_single_agent() {
        let alphas = [5u32];
        let arms = active(4);
        let h = schedule_horizontal(&arms, &alphas, 1).unwrap();
        let v = schedule_vertical(&arms, &alphas, 1).unwrap();
        assert_eq!(h.end_time, v.end_time);
        for t in 1..=h.end_time {
            assert_eq!(h.arm_at(0, t), v.arm_at(0, t));
        }
    }

    #[test]
    fn horizontal_truncates_surplus_pulls() {
        // 3 agents, alpha = 0, 4 pulls: phase length 2 gives 6 candidates,
        // 2 are truncated; every arm still has exactly 4 effective pulls.
        let alphas = [0u32, 0, 0];
        let arms = active(2);
        let s = schedule_horizontal(&arms, &alphas, 1).unwrap();
        s.validate(&arms, &alphas).unwrap();
        assert_eq!(s.end_time, 4);
    }

    #[test]
    fn baselines_are_deterministic_in_their_inputs() {
        let arms = active(6);
        let alphas = [0u32, 2, 7];
        assert_eq!(
            schedule_vertical(&arms, &alphas, 2).unwrap(),
            schedule_vertical(&arms, &alphas, 2).unwrap()
        );
        assert_eq!(
            schedule_horizontal(&arms, &alphas, 2).unwrap(),
            schedule_horizontal(&arms, &alphas, 2).unwrap()
        );
    }
}
