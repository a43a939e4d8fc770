use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One open channel: a label and its asymptotic wavenumber.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Channel {
    pub label: String,
    pub k: f64,
    /// Relative velocity, needed only for [`WeightMode::VelocityRatio`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity: Option<f64>,
}

impl Channel {
    pub fn new(label: impl Into<String>, k: f64) -> Self {
        Self {
            label: label.into(),
            k,
            velocity: None,
        }
    }

    pub fn with_velocity(mut self, velocity: f64) -> Self {
        self.velocity = Some(velocity);
        self
    }
}

/// Which ratio weights exit channel `beta` relative to the entrance channel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// `k_beta / k_alpha`.
    #[default]
    MomentumRatio,
    /// `v_beta / v_alpha`, for final states with a different reduced mass.
    VelocityRatio,
}

/// The open channels of a reaction and the entrance channel `alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSet {
    channels: Vec<Channel>,
    entrance: usize,
    weight_mode: WeightMode,
}

impl ChannelSet {
    pub fn new(channels: Vec<Channel>, entrance: usize, weight_mode: WeightMode) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::InvalidChannels(
                "at least one open channel is required".into(),
            ));
        }
        for (i, ch) in channels.iter().enumerate() {
            if !(ch.k.is_finite() && ch.k > 0.0) {
                return Err(Error::InvalidChannels(format!(
                    "wavenumber k must be finite and > 0 (channel {i} '{}' has k = {})",
                    ch.label, ch.k
                )));
            }
            if weight_mode == WeightMode::VelocityRatio {
                match ch.velocity {
                    Some(v) if v.is_finite() && v > 0.0 => {}
                    _ => {
                        return Err(Error::InvalidChannels(format!(
                            "velocity_ratio weighting needs a velocity > 0 for channel {i} '{}'",
                            ch.label
                        )))
                    }
                }
            }
        }
        if entrance >= channels.len() {
            return Err(Error::InvalidChannels(format!(
                "entrance index {entrance} is not a channel (have {})",
                channels.len()
            )));
        }
        Ok(Self {
            channels,
            entrance,
            weight_mode,
        })
    }

    /// A single elastic channel with wavenumber `k`.
    pub fn single(k: f64) -> Result<Self> {
        Self::new(
            vec![Channel::new("elastic", k)],
            0,
            WeightMode::MomentumRatio,
        )
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn entrance(&self) -> usize {
        self.entrance
    }

    pub fn weight_mode(&self) -> WeightMode {
        self.weight_mode
    }

    pub fn channel(&self, beta: usize) -> Result<&Channel> {
        self.channels.get(beta).ok_or(Error::UnknownChannel(beta))
    }

    pub fn k(&self, beta: usize) -> Result<f64> {
        Ok(self.channel(beta)?.k)
    }

    pub fn entrance_k(&self) -> f64 {
        self.channels[self.entrance].k
    }

    /// Flux weight `k_beta/k_alpha` or `v_beta/v_alpha`.
    pub fn flux_weight(&self, beta: usize) -> Result<f64> {
        let ch = self.channel(beta)?;
        let entrance = &self.channels[self.entrance];
        Ok(match self.weight_mode {
            WeightMode::MomentumRatio => ch.k / entrance.k,
            // presence checked in `new`
            WeightMode::VelocityRatio => {
                ch.velocity.unwrap_or(f64::NAN) / entrance.velocity.unwrap_or(f64::NAN)
            }
        })
    }

    pub fn with_entrance(&self, entrance: usize) -> Result<Self> {
        Self::new(self.channels.clone(), entrance, self.weight_mode)
    }

    pub fn with_weight_mode(&self, weight_mode: WeightMode) -> Result<Self> {
        Self::new(self.channels.clone(), self.entrance, weight_mode)
    }
}
