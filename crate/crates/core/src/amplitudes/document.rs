//! JSON form of an amplitude set.
//!
//! ```json
//! {
//!   "channels": [{"label": "elastic", "k": 1.0}],
//!   "alpha": 0,
//!   "weight_mode": "momentum_ratio",
//!   "coefficients": [{"beta": 0, "l": 0, "m": 0, "re": 0.5, "im": -0.25}]
//! }
//! ```
//!
//! `weight_mode` defaults to `momentum_ratio`. The optional `incident` field
//! holds the incidence direction as `[x, y, z]` (default `+z`), and each
//! channel may carry a `velocity` for `velocity_ratio` weighting.

use std::collections::BTreeSet;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::channels::{Channel, ChannelSet, WeightMode};
use super::partial_wave::PartialWaveAmplitude;
use crate::error::{Error, Result};
use crate::special::UnitVector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientRecord {
    pub beta: usize,
    pub l: u32,
    pub m: i32,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeDocument {
    pub channels: Vec<Channel>,
    pub alpha: usize,
    #[serde(default)]
    pub weight_mode: WeightMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incident: Option<[f64; 3]>,
    pub coefficients: Vec<CoefficientRecord>,
}

fn invariant(msg: String) -> Error {
    Error::Document(format!("invariant violated: {msg}"))
}

impl AmplitudeDocument {
    pub fn from_parts(channels: &ChannelSet, f: &PartialWaveAmplitude) -> Self {
        let incident = (*f.incident() != UnitVector::z_axis()).then(|| f.incident().as_array());
        Self {
            channels: channels.channels().to_vec(),
            alpha: channels.entrance(),
            weight_mode: channels.weight_mode(),
            incident,
            coefficients: f
                .iter()
                .map(|(k, v)| CoefficientRecord {
                    beta: k.beta,
                    l: k.l,
                    m: k.m,
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        }
    }

    /// Validates every invariant and builds the typed values.
    pub fn into_parts(self) -> Result<(ChannelSet, PartialWaveAmplitude)> {
        for (i, ch) in self.channels.iter().enumerate() {
            if !(ch.k.is_finite() && ch.k > 0.0) {
                return Err(invariant(format!(
                    "channel {i} ('{}') must be open, k > 0 (got k = {})",
                    ch.label, ch.k
                )));
            }
        }
        if self.alpha >= self.channels.len() {
            return Err(invariant(format!(
                "alpha = {} must index one of the {} channels",
                self.alpha,
                self.channels.len()
            )));
        }
        let channels = ChannelSet::new(self.channels, self.alpha, self.weight_mode)
            .map_err(|e| invariant(e.to_string()))?;
        let incident = match self.incident {
            None => UnitVector::z_axis(),
            Some([x, y, z]) => UnitVector::new(x, y, z).map_err(|_| {
                invariant("incident direction must be a nonzero finite vector".into())
            })?,
        };
        let mut f = PartialWaveAmplitude::with_incident(incident);
        let mut seen = BTreeSet::new();
        for c in &self.coefficients {
            if c.beta >= channels.len() {
                return Err(invariant(format!(
                    "coefficient beta = {} names no channel",
                    c.beta
                )));
            }
            if c.m.unsigned_abs() > c.l {
                return Err(invariant(format!(
                    "|m| <= l fails for (l, m) = ({}, {})",
                    c.l, c.m
                )));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(invariant(format!(
                    "coefficient (beta, l, m) = ({}, {}, {}) must be finite",
                    c.beta, c.l, c.m
                )));
            }
            if !seen.insert((c.beta, c.l, c.m)) {
                return Err(invariant(format!(
                    "coefficient (beta, l, m) = ({}, {}, {}) appears twice",
                    c.beta, c.l, c.m
                )));
            }
            f.insert(c.beta, c.l, c.m, Complex64::new(c.re, c.im))?;
        }
        Ok((channels, f))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Document(format!("malformed amplitude document: {e}")))
    }

    /// Pretty-printed JSON with a trailing newline. Floats use the shortest
    /// representation that round-trips, so load/save is byte-stable.
    pub fn to_json(&self) -> String {
        let mut s =
            serde_json::to_string_pretty(self).expect("amplitude documents always serialize");
        s.push('\n');
        s
    }
}

pub fn parse_amplitudes(text: &str) -> Result<(ChannelSet, PartialWaveAmplitude)> {
    AmplitudeDocument::from_json(text)?.into_parts()
}

pub fn format_amplitudes(channels: &ChannelSet, f: &PartialWaveAmplitude) -> String {
    AmplitudeDocument::from_parts(channels, f).to_json()
}

pub fn load_amplitudes(path: &Path) -> Result<(ChannelSet, PartialWaveAmplitude)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Document(format!("cannot read {}: {e}", path.display())))?;
    parse_amplitudes(&text)
}

pub fn save_amplitudes(path: &Path, channels: &ChannelSet, f: &PartialWaveAmplitude) -> Result<()> {
    std::fs::write(path, format_amplitudes(channels, f))
        .map_err(|e| Error::Document(format!("cannot write {}: {e}", path.display())))
}
