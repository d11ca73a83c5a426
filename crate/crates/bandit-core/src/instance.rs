use rand::Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::ArmId;

/// Reward-noise model attached to a [`BanditInstance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// Additive Gaussian noise with the given standard deviation.
    Gaussian { sigma: f64 },
    /// Bernoulli rewards; requires every mean in `[0, 1]`.
    Bernoulli,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("a bandit instance needs at least 2 arms, got {0}")]
    TooFewArms(usize),
    #[error("arm mean {mean} at index {arm} is not finite")]
    NonFiniteMean { arm: ArmId, mean: f64 },
    #[error("Bernoulli rewards require means in [0, 1]; arm {arm} has mean {mean}")]
    BernoulliMeanOutOfRange { arm: ArmId, mean: f64 },
    #[error("Gaussian sigma must be non-negative and finite, got {0}")]
    BadSigma(f64),
    #[error("arm {arm} out of range for {num_arms} arms")]
    ArmOutOfRange { arm: ArmId, num_arms: usize },
}

/// Ground truth for one simulated bandit problem: arm means and noise model.
///
/// Immutable after construction; the best mean is cached so gap and regret
/// queries are O(1).
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    means: Vec<f64>,
    noise: NoiseModel,
    best_mean: f64,
}

impl BanditInstance {
    pub fn new(means: Vec<f64>, noise: NoiseModel) -> Result<Self, InstanceError> {
        if means.len() < 2 {
            return Err(InstanceError::TooFewArms(means.len()));
        }
        for (arm, &mean) in means.iter().enumerate() {
            if !mean.is_finite() {
                return Err(InstanceError::NonFiniteMean { arm, mean });
            }
            if noise == NoiseModel::Bernoulli && !(0.0..=1.0).contains(&mean) {
                return Err(InstanceError::BernoulliMeanOutOfRange { arm, mean });
            }
        }
        if let NoiseModel::Gaussian { sigma } = noise {
            if !sigma.is_finite() || sigma < 0.0 {
                return Err(InstanceError::BadSigma(sigma));
            }
        }
        let best_mean = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self { means, noise, best_mean })
    }

    pub fn num_arms(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    /// Cached `max_a mu_a`.
    pub fn best_mean(&self) -> f64 {
        self.best_mean
    }

    /// Index of an arm attaining the best mean (lowest index on ties).
    pub fn best_arm(&self) -> ArmId {
        self.means
            .iter()
            .position(|&m| m == self.best_mean)
            .expect("non-empty means")
    }

    fn check_arm(&self, arm: ArmId) -> Result<(), InstanceError> {
        if arm < self.means.len() {
            Ok(())
        } else {
            Err(InstanceError::ArmOutOfRange { arm, num_arms: self.means.len() })
        }
    }

    /// Draws one reward for `arm` from the instance's noise model.
    pub fn sample_reward<R: Rng + ?Sized>(
        &self,
        arm: ArmId,
        rng: &mut R,
    ) -> Result<f64, InstanceError> {
        self.check_arm(arm)?;
        let mean = self.means[arm];
        Ok(match self.noise {
            NoiseModel::Gaussian { sigma } => {
                if sigma == 0.0 {
                    // Degenerate case; skip the sampler so zero-noise runs
                    // stay exact.
                    mean
                } else {
                    Normal::new(mean, sigma).expect("validated sigma").sample(rng)
                }
            }
            NoiseModel::Bernoulli => {
                if rng.random::<f64>() < mean {
                    1.0
                } else {
                    0.0
                }
            }
        })
    }

    /// Suboptimality gap `mu* - mu_arm`, always non-negative.
    pub fn suboptimality_gap(&self, arm: ArmId) -> Result<f64, InstanceError> {
        self.check_arm(arm)?;
        Ok(self.best_mean - self.means[arm])
    }

    /// One round of pseudo-regret: the summed gaps of the arms the `M`
    /// agents actually played. Independent of reward noise and invariant
    /// under permutation of `played`.
    pub fn regret_increment(&self, played: &[ArmId]) -> Result<f64, InstanceError> {
        let mut total = 0.0;
        for &arm in played {
            total += self.suboptimality_gap(arm)?;
        }
        Ok(total)
    }
}
