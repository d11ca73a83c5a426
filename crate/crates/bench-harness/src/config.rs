use bandit_core::NoiseModel;
use erasure_channels::ChannelKind;
use policies::{PolicyKind, UcbAssignment};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed config JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

/// Reward model as written in config files.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NoiseSpec {
    Gaussian { sigma: f64 },
    Bernoulli,
}

impl NoiseSpec {
    pub fn to_model(&self) -> NoiseModel {
        match self {
            NoiseSpec::Gaussian { sigma } => NoiseModel::Gaussian { sigma: *sigma },
            NoiseSpec::Bernoulli => NoiseModel::Bernoulli,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub means: Vec<f64>,
    pub noise: NoiseSpec,
}

/// One agent, or a group of identical agents.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged, deny_unknown_fields)]
pub enum AgentSpec {
    Epsilon(f64),
    Group { value: f64, count: usize },
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "one")]
    pub c_prime: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for Constants {
    fn default() -> Self {
        Self { c: 1.0, c_prime: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelSpec {
    #[default]
    Erasure,
    GeometricDelay,
}

impl ChannelSpec {
    pub fn to_kind(self) -> ChannelKind {
        match self {
            ChannelSpec::Erasure => ChannelKind::Erasure,
            ChannelSpec::GeometricDelay => ChannelKind::GeometricDelay,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum UcbSpec {
    #[default]
    Independent,
    Diverse,
    SameArm,
}

impl UcbSpec {
    pub fn to_assignment(self) -> UcbAssignment {
        match self {
            UcbSpec::Independent => UcbAssignment::Independent,
            UcbSpec::Diverse => UcbAssignment::Diverse,
            UcbSpec::SameArm => UcbAssignment::SameArm,
        }
    }
}

fn default_stride() -> usize {
    100
}

/// A full experiment: instance, channels, horizon, seeding and outputs.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    /// Per-agent erasure probabilities, single values or grouped.
    pub agents: Vec<AgentSpec>,
    pub horizon: usize,
    pub runs: usize,
    pub seed: u64,
    /// Exact policy names: batchsp2, ma-sae, ma-lsae-v, ma-lsae-h, ma-ucb.
    pub policies: Vec<String>,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub constants: Constants,
    #[serde(default)]
    pub channel: ChannelSpec,
    #[serde(default)]
    pub realized_regret: bool,
    #[serde(default)]
    pub ucb_assignment: UcbSpec,
}

impl ExperimentConfig {
    /// Parses and validates a JSON document; the error lists every
    /// offending field.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Per-agent erasure probabilities with groups expanded.
    pub fn epsilons(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for spec in &self.agents {
            match *spec {
                AgentSpec::Epsilon(e) => out.push(e),
                AgentSpec::Group { value, count } => out.extend(std::iter::repeat_n(value, count)),
            }
        }
        out
    }

    pub fn policy_kinds(&self) -> Vec<PolicyKind> {
        self.policies
            .iter()
            .map(|name| name.parse().expect("validated policy name"))
            .collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut problems = Vec::new();
        let k = self.instance.means.len();
        if k < 2 {
            problems.push(format!("instance.means: need at least 2 arms, got {k}"));
        }
        if self.instance.means.iter().any(|m| !m.is_finite()) {
            problems.push("instance.means: all means must be finite".into());
        }
        match &self.instance.noise {
            NoiseSpec::Gaussian { sigma } if !(sigma.is_finite() && *sigma >= 0.0) => {
                problems.push(format!("instance.noise.sigma: must be non-negative, got {sigma}"));
            }
            NoiseSpec::Bernoulli
                if self.instance.means.iter().any(|m| !(0.0..=1.0).contains(m)) =>
            {
                problems.push("instance.means: Bernoulli requires means in [0, 1]".into());
            }
            _ => {}
        }
        let epsilons = self.epsilons();
        if epsilons.is_empty() {
            problems.push("agents: need at least one agent".into());
        }
        for (idx, &e) in epsilons.iter().enumerate() {
            if !(0.0..1.0).contains(&e) {
                problems.push(format!("agents[{idx}]: erasure probability {e} outside [0, 1)"));
            }
        }
        if self.horizon < 2 {
            problems.push(format!("horizon: must be at least 2, got {}", self.horizon));
        }
        if self.runs < 1 {
            problems.push("runs: must be at least 1".into());
        }
        if self.stride < 1 {
            problems.push("stride: must be at least 1".into());
        }
        if self.policies.is_empty() {
            problems.push("policies: need at least one policy".into());
        }
        for name in &self.policies {
            if name.parse::<PolicyKind>().is_err() {
                problems.push(format!("policies: unknown policy kind {name:?}"));
            }
        }
        let (c, cp) = (self.constants.c, self.constants.c_prime);
        if c <= 0.0 || cp <= 0.0 || c.is_nan() || cp.is_nan() {
            problems.push("constants: c and c_prime must be positive".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(problems))
        }
    }
}
