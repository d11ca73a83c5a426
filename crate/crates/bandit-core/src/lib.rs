//! Ground-truth bandit instances, reward generation and regret accounting.
//!
//! Everything downstream (channels, schedulers, policies, the benchmark
//! harness) builds on three pieces defined here:
//!
//! - [`BanditInstance`]: the true arm means plus a reward-noise model,
//!   immutable after construction and shareable across concurrent runs.
//! - [`RegretLedger`]: per-round cumulative pseudo-regret with per-batch
//!   play-count and diagnostic bookkeeping, single writer per run.
//! - [`seeds`]: the substream derivation scheme that makes every simulated
//!   trace a pure function of one base seed.
//!
//! Regret is pseudo-regret: the sum of suboptimality gaps of the arms the
//! agents actually played, independent of the realized reward noise.

mod instance;
mod ledger;
pub mod seeds;

pub use instance::{BanditInstance, InstanceError, NoiseModel};
pub use ledger::RegretLedger;

/// Arm identifier, `0..K`.
pub type ArmId = usize;
