use std::collections::BTreeMap;

use crate::{ArmId, BanditInstance, InstanceError};

/// Per-run regret trace plus diagnostics.
///
/// Regret is accumulated exactly every round; the stored series is
/// downsampled to `stride` (plus the final round) to keep traces small.
/// Play counts are keyed by `(batch, arm)` so per-batch pull symmetry can
/// be checked after the fact, and `violation_count` tallies good-event
/// violation windows reported by the channel layer.
#[derive(Debug, Clone)]
pub struct RegretLedger {
    stride: usize,
    horizon: usize,
    rounds: usize,
    cum: f64,
    cum_realized: f64,
    samples: Vec<(usize, f64)>,
    realized_samples: Option<Vec<(usize, f64)>>,
    play_counts: BTreeMap<(usize, ArmId), u64>,
    violation_count: u64,
}

impl RegretLedger {
    pub fn new(horizon: usize, stride: usize, track_realized: bool) -> Self {
        assert!(stride >= 1, "stride must be at least 1");
        Self {
            stride,
            horizon,
            rounds: 0,
            cum: 0.0,
            cum_realized: 0.0,
            samples: Vec::with_capacity(horizon / stride + 1),
            realized_samples: track_realized.then(|| Vec::with_capacity(horizon / stride + 1)),
            play_counts: BTreeMap::new(),
            violation_count: 0,
        }
    }

    /// Records one round: the arms actually played by all agents, and the
    /// batch index the policy was in when the instructions were sent.
    pub fn record_round(
        &mut self,
        instance: &BanditInstance,
        played: &[ArmId],
        rewards: &[f64],
        batch: usize,
    ) -> Result<(), InstanceError> {
        self.cum += instance.regret_increment(played)?;
        for &arm in played {
            *self.play_counts.entry((batch, arm)).or_insert(0) += 1;
        }
        if self.realized_samples.is_some() {
            let best = instance.best_mean();
            self.cum_realized += rewards.iter().map(|r| best - r).sum::<f64>();
        }
        self.rounds += 1;
        if (self.rounds.is_multiple_of(self.stride) || self.rounds == self.horizon)
            && self.samples.last().map(|&(t, _)| t) != Some(self.rounds)
        {
            self.samples.push((self.rounds, self.cum));
            if let Some(rs) = &mut self.realized_samples {
                rs.push((self.rounds, self.cum_realized));
            }
        }
        Ok(())
    }

    pub fn add_violations(&mut self, count: u64) {
        self.violation_count += count;
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Exact cumulative pseudo-regret after the last recorded round.
    pub fn cumulative(&self) -> f64 {
        self.cum
    }

    /// Downsampled `(round, cumulative pseudo-regret)` series.
    pub fn samples(&self) -> &[(usize, f64)] {
        &self.samples
    }

    pub fn realized_samples(&self) -> Option<&[(usize, f64)]> {
        self.realized_samples.as_deref()
    }

    pub fn play_counts(&self) -> &BTreeMap<(usize, ArmId), u64> {
        &self.play_counts
    }

    pub fn violation_count(&self) -> u64 {
        self.violation_count
    }

    /// Total plays across all batches and arms; equals agents x rounds.
    pub fn total_plays(&self) -> u64 {
        self.play_counts.values().sum()
    }
}
