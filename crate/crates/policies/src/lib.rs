//! Learner policies behind a uniform per-round contract: a vector of sent
//! actions out, a vector of rewards in. A policy never sees ground-truth
//! means or erasure realizations; misattribution under erasures is exactly
//! what separates the algorithms.
//!
//! Policies:
//!
//! - `batchsp2`: batched successive elimination with the two-stage
//!   repetition-aware scheduler.
//! - `ma-sae`: successive elimination keeping the single-agent pull
//!   sequence, executed by all agents at once with no repetitions and
//!   every reward attributed to its sent action.
//! - `ma-lsae-v`: successive elimination over the whole-arm (vertical)
//!   schedule.
//! - `ma-lsae-h`: successive elimination over the per-arm parallel
//!   (horizontal) schedule.
//! - `ma-ucb`: a shared-statistics multi-agent UCB.

mod batched;
mod elimination;
mod ucb;

use std::fmt;
use std::str::FromStr;

use bandit_core::{seeds::SimRng, ArmId};
use thiserror::Error;

pub use batched::{batchsp2_policy, ma_lsae_h_policy, ma_lsae_v_policy, ma_sae_policy};
pub use elimination::{elimination_threshold, eliminate, empirical_means};
pub use ucb::{ma_ucb_policy, UcbAssignment};

/// Per-round policy contract.
///
/// The harness calls `next_actions` then `observe` once per round, with
/// 1-based round numbers. `out` and `rewards` are indexed by agent.
pub trait Policy: Send {
    fn next_actions(&mut self, round: usize, out: &mut [ArmId]);
    fn observe(&mut self, round: usize, rewards: &[f64]);
    /// Current batch index for diagnostics; 0 for non-batched policies.
    fn batch_index(&self) -> usize;
    /// Arms the policy still considers candidates.
    fn active_arms(&self) -> Vec<ArmId>;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolicyError {
    #[error("need at least 2 arms, got {0}")]
    TooFewArms(usize),
    #[error("need at least one agent")]
    NoAgents,
    #[error("repetition budgets must be sorted ascending")]
    UnsortedAlphas,
    #[error("policy needs one repetition budget per agent: {alphas} budgets, {agents} agents")]
    AlphaCountMismatch { alphas: usize, agents: usize },
}

/// The five policy kinds, with their exact config/CSV names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    BatchSp2,
    MaSae,
    MaLsaeV,
    MaLsaeH,
    MaUcb,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] = [
        PolicyKind::BatchSp2,
        PolicyKind::MaSae,
        PolicyKind::MaLsaeV,
        PolicyKind::MaLsaeH,
        PolicyKind::MaUcb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::BatchSp2 => "batchsp2",
            PolicyKind::MaSae => "ma-sae",
            PolicyKind::MaLsaeV => "ma-lsae-v",
            PolicyKind::MaLsaeH => "ma-lsae-h",
            PolicyKind::MaUcb => "ma-ucb",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown policy kind {s:?}"))
    }
}

/// Builds a policy of the given kind.
///
/// `alphas` must be sorted ascending and sized to the agent count; the
/// repetition-oblivious kinds (`ma-sae`, `ma-ucb`) ignore it. `rng` seeds
/// the policy's own randomness (scheduler shuffles and fillers).
pub fn build_policy(
    kind: PolicyKind,
    k: usize,
    m: usize,
    alphas: &[u32],
    horizon: usize,
    rng: SimRng,
    ucb_assignment: UcbAssignment,
) -> Result<Box<dyn Policy>, PolicyError> {
    if k < 2 {
        return Err(PolicyError::TooFewArms(k));
    }
    if m == 0 {
        return Err(PolicyError::NoAgents);
    }
    if alphas.len() != m {
        return Err(PolicyError::AlphaCountMismatch { alphas: alphas.len(), agents: m });
    }
    if alphas.windows(2).any(|w| w[0] > w[1]) {
        return Err(PolicyError::UnsortedAlphas);
    }
    Ok(match kind {
        PolicyKind::BatchSp2 => Box::new(batchsp2_policy(k, m, alphas, horizon, rng)),
        PolicyKind::MaSae => Box::new(ma_sae_policy(k, m, horizon, rng)),
        PolicyKind::MaLsaeV => Box::new(ma_lsae_v_policy(k, m, alphas, horizon, rng)),
        PolicyKind::MaLsaeH => Box::new(ma_lsae_h_policy(k, m, alphas, horizon, rng)),
        PolicyKind::MaUcb => Box::new(ma_ucb_policy(k, m, ucb_assignment)),
    })
}
