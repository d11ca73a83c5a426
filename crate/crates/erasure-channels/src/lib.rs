//! Downlink action-erasure channels and per-agent action persistence.
//!
//! Each agent sits behind an i.i.d. channel: a sent action is received with
//! probability `1 - epsilon` and the agent keeps playing its last
//! successfully received action otherwise. The repetition budget `alpha`
//! makes a persistently repeated action stick with probability at least
//! `1 - T^-4`. A geometric-delay channel kind is provided as well; it is
//! distributionally identical to the erasure kind but implemented through a
//! queued-delivery countdown, which keeps the two code paths independent.

mod channel;
mod diagnostics;

pub use channel::{
    init_agent, repetitions_for, repetitions_for_delay, transmit, AgentChannel, AgentState,
    ChannelError, ChannelKind,
};
pub use diagnostics::{good_event_violations, violation_windows_in_run};
