//! Batch scheduling of arm pulls across heterogeneous agents.
//!
//! In batch `i` every active arm needs exactly `4^i` effective pulls, and a
//! pull block on agent `m` must be prefixed by `alpha_m` repetition sends
//! so the agent holds the right action with high probability. The batch
//! ends when the slowest agent finishes, so the scheduler's job is to
//! minimize that end time.
//!
//! This crate provides:
//!
//! - [`lp_end_time`]: the closed-form LP-relaxation lower bound on the
//!   batch end time.
//! - [`ilp_optimum`]: an exhaustive branch-and-bound oracle for the exact
//!   integer optimum, guarded to tiny instances.
//! - [`schedule`]: the two-stage randomized scheduler (whole arms greedily
//!   up to the LP budget, then the leftovers split into parts over the
//!   faster half of the agents, mirrored by the slower half).
//! - [`schedule_end_time_bound`]: the closed-form upper bound on the end time of
//!   [`schedule`].
//! - [`schedule_vertical`] / [`schedule_horizontal`]: the two reference
//!   schedulers used as baselines (whole arms per agent / each arm spread
//!   across all agents).

mod algorithm;
mod baselines;
mod bounds;
mod ilp;
mod plan;

pub use algorithm::{schedule, structural_report, ScheduleError};
pub use baselines::{schedule_horizontal, schedule_vertical};
pub use bounds::{fits_within_budget, schedule_end_time_bound, lp_end_time, lp_rounding_end_time};
pub use ilp::{ilp_optimum, OracleError};
pub use plan::{BatchSchedule, EffectiveWindow, Slot, SlotKind};

/// Effective pulls per active arm in batch `i`.
pub fn pulls_per_arm(i: u32) -> usize {
    4usize.pow(i)
}
