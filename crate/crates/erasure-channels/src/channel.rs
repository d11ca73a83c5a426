use bandit_core::ArmId;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("erasure probability must lie in [0, 1), got {0}; the agent would never receive")]
    EpsilonOutOfRange(f64),
    #[error("horizon must be at least 2, got {0}")]
    HorizonTooSmall(usize),
}

/// How the downlink loses or defers actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    /// Each send is independently erased with probability `epsilon`.
    Erasure,
    /// Each fresh send is queued and delivered after a Geometric(1-epsilon)
    /// number of rounds; newer sends supersede in-flight older ones. Same
    /// reception law as `Erasure` under the repetition protocol, different
    /// mechanism.
    GeometricDelay,
}

/// One agent's downlink: erasure probability, repetition budget and kind.
///
/// Immutable configuration; safe to share across runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentChannel {
    pub epsilon: f64,
    pub alpha: u32,
    pub kind: ChannelKind,
}

impl AgentChannel {
    /// Binds a channel to a horizon, computing `alpha = repetitions_for`.
    pub fn bind(epsilon: f64, kind: ChannelKind, horizon: usize) -> Result<Self, ChannelError> {
        Ok(Self { epsilon, alpha: repetitions_for(epsilon, horizon)?, kind })
    }

    /// Builds a channel with an explicit repetition budget, e.g. when only
    /// an upper bound on the erasure probability is known (a larger alpha
    /// is always safe).
    pub fn with_alpha(epsilon: f64, kind: ChannelKind, alpha: u32) -> Result<Self, ChannelError> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(ChannelError::EpsilonOutOfRange(epsilon));
        }
        Ok(Self { epsilon, alpha, kind })
    }
}

/// Repetition budget for an erasure channel over horizon `T`:
/// `max(0, ceil(4 ln T / ln(1/epsilon)) - 1)`.
///
/// The log ratio is base-independent. A perfect channel needs no
/// repetitions, so `epsilon = 0` returns 0 (the raw formula would give -1).
pub fn repetitions_for(epsilon: f64, horizon: usize) -> Result<u32, ChannelError> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(ChannelError::EpsilonOutOfRange(epsilon));
    }
    if horizon < 2 {
        return Err(ChannelError::HorizonTooSmall(horizon));
    }
    if epsilon == 0.0 {
        return Ok(0);
    }
    let ratio = 4.0 * (horizon as f64).ln() / (1.0 / epsilon).ln();
    Ok((ratio.ceil() as u32).saturating_sub(1))
}

/// Repetition budget for a general delay distribution: the smallest `d`
/// with `P(delay <= d) >= 1 - T^-4`, mirroring the erasure case. The
/// distribution is passed as its survival function `sf(d) = P(delay > d)`
/// because `1 - T^-4` is indistinguishable from 1 in f64 at realistic
/// horizons. Returns `None` if the target is not reached within `cap`.
pub fn repetitions_for_delay(
    sf: impl Fn(u32) -> f64,
    horizon: usize,
    cap: u32,
) -> Option<u32> {
    let target = (horizon as f64).powi(-4);
    (0..=cap).find(|&d| sf(d) <= target)
}

/// What one agent currently plays, plus channel bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    /// The action the agent plays right now (last successfully received).
    pub last_received: ArmId,
    /// Length of the current run of consecutive erasures, for diagnostics.
    pub erasure_run: u32,
    /// In-flight message for the delay kind: `(action, rounds remaining)`.
    pending: Option<(ArmId, u32)>,
}

/// Fresh agent with a uniformly random initial action over `[0, k)`.
pub fn init_agent<R: Rng + ?Sized>(rng: &mut R, k: usize) -> AgentState {
    assert!(k >= 1, "need at least one arm");
    AgentState {
        last_received: rng.random_range(0..k),
        erasure_run: 0,
        pending: None,
    }
}

fn sample_geometric_delay<R: Rng + ?Sized>(epsilon: f64, rng: &mut R) -> u32 {
    if epsilon == 0.0 {
        return 0;
    }
    // Inverse CDF of P(D = d) = (1-eps) eps^d.
    let u: f64 = rng.random();
    let d = (1.0 - u).ln() / epsilon.ln();
    if d.is_finite() && d >= 0.0 {
        d.floor().min(u32::MAX as f64) as u32
    } else {
        u32::MAX
    }
}

/// Pushes one sent action through the channel and returns the action the
/// agent actually plays this round.
///
/// Erasure kind: with probability `1 - epsilon` the agent receives `sent`
/// and the erasure run resets; otherwise the state is unchanged apart from
/// the run counter. Reception is instantaneous, so a successful send is
/// already played in the same round.
pub fn transmit<R: Rng + ?Sized>(
    channel: &AgentChannel,
    state: &mut AgentState,
    sent: ArmId,
    rng: &mut R,
) -> ArmId {
    match channel.kind {
        ChannelKind::Erasure => {
            if rng.random::<f64>() >= channel.epsilon {
                state.last_received = sent;
                state.erasure_run = 0;
            } else {
                state.erasure_run += 1;
            }
        }
        ChannelKind::GeometricDelay => {
            if sent == state.last_received {
                // Re-sending the held action supersedes anything in flight.
                state.pending = None;
                state.erasure_run = 0;
            } else {
                let remaining = match state.pending {
                    Some((arm, rem)) if arm == sent => rem,
                    // New instruction supersedes the in-flight one.
                    _ => sample_geometric_delay(channel.epsilon, rng),
                };
                if remaining == 0 {
                    state.last_received = sent;
                    state.erasure_run = 0;
                    state.pending = None;
                } else {
                    state.pending = Some((sent, remaining - 1));
                    state.erasure_run += 1;
                }
            }
        }
    }
    state.last_received
}
