//! Run configuration.
//!
//! ```json
//! {
//!   "amplitude": {"hard_sphere": {"k": 1.0, "a": 1.0, "l_max": 6}},
//!   "r": {"log_range": {"min": 0.5, "max": 1000.0, "points": 20}},
//!   "grid_degree": 16,
//!   "format": "csv",
//!   "asymptotic_order": 2,
//!   "per_angle": false
//! }
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use nearfield_core::amplitudes::{
    amplitudes_from_smatrix, hard_sphere_model, load_amplitudes, random_channels,
    random_smatrix_model,
};
use nearfield_core::{AmplitudeFamily, ChannelSet, PartialWaveAmplitude, UnitVector, WeightMode};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AmplitudeSource {
    /// An amplitude document; relative paths resolve against the config file.
    File(PathBuf),
    HardSphere {
        k: f64,
        a: f64,
        l_max: u32,
    },
    SingleMode {
        k: f64,
        l: u32,
        #[serde(default)]
        m: i32,
        re: f64,
        #[serde(default)]
        im: f64,
    },
    RandomUnitary {
        channels: usize,
        l_max: u32,
        seed: u64,
        #[serde(default = "default_k_min")]
        k_min: f64,
        #[serde(default = "default_k_max")]
        k_max: f64,
    },
}

fn default_k_min() -> f64 {
    0.5
}

fn default_k_max() -> f64 {
    2.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Schedule {
    Values(Vec<f64>),
    LogRange { min: f64, max: f64, points: usize },
}

impl Schedule {
    pub fn distances(&self) -> Result<Vec<f64>> {
        let r = match self {
            Schedule::Values(v) => v.clone(),
            Schedule::LogRange { min, max, points } => {
                if *points < 2 || !(*min > 0.0 && max > min) {
                    return Err(CliError::Config(format!(
                        "log_range needs 0 < min < max and points >= 2, got min = {min}, max = {max}, points = {points}"
                    )));
                }
                let (a, b) = (min.ln(), max.ln());
                (0..*points)
                    .map(|i| (a + (b - a) * i as f64 / (*points - 1) as f64).exp())
                    .collect()
            }
        };
        if r.is_empty() {
            return Err(CliError::Config("the R schedule is empty".into()));
        }
        if r.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(CliError::Config("every R must be finite and > 0".into()));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config(
                "the R schedule must be strictly increasing".into(),
            ));
        }
        Ok(r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub conservation: f64,
    pub unitarity: f64,
    pub greens: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            conservation: 1e-9,
            unitarity: 1e-10,
            greens: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub amplitude: AmplitudeSource,
    /// Incidence direction for generated models, default `+z`.
    #[serde(default)]
    pub incident: Option<[f64; 3]>,
    #[serde(default)]
    pub r: Option<Schedule>,
    #[serde(default)]
    pub grid_degree: Option<u32>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub asymptotic_order: Option<u32>,
    #[serde(default)]
    pub weight_mode: Option<WeightMode>,
    #[serde(default)]
    pub per_angle: bool,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// Channels, the amplitude out of the entrance channel and, for generated
/// models, the amplitudes out of every channel.
pub struct Loaded {
    pub channels: ChannelSet,
    pub amplitude: PartialWaveAmplitude,
    pub family: Option<AmplitudeFamily>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("malformed run config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::parse(&text)?;
        config.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(config)
    }

    /// A small three-channel unitary model, used when no config is given.
    pub fn default_model() -> Self {
        Self {
            amplitude: AmplitudeSource::RandomUnitary {
                channels: 3,
                l_max: 4,
                seed: 1,
                k_min: default_k_min(),
                k_max: default_k_max(),
            },
            incident: None,
            r: None,
            grid_degree: None,
            format: OutputFormat::Csv,
            asymptotic_order: None,
            weight_mode: None,
            per_angle: false,
            tolerances: Tolerances::default(),
            base_dir: PathBuf::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(r) = &self.r {
            r.distances()?;
        }
        if let Some(order) = self.asymptotic_order {
            if order > nearfield_core::flux::MAX_ORDER {
                return Err(CliError::Config(format!(
                    "asymptotic_order must be at most {}, got {order}",
                    nearfield_core::flux::MAX_ORDER
                )));
            }
        }
        if self.grid_degree == Some(0) {
            return Err(CliError::Config("grid_degree must be >= 1".into()));
        }
        let t = self.tolerances;
        if [t.conservation, t.unitarity, t.greens]
            .iter()
            .any(|x| !(x.is_finite() && *x > 0.0))
        {
            return Err(CliError::Config("tolerances must be finite and > 0".into()));
        }
        Ok(())
    }

    /// Distances to sample, defaulting to `kR` from 0.2 to 1e4 in the
    /// entrance channel.
    pub fn distances(&self, channels: &ChannelSet) -> Result<Vec<f64>> {
        match &self.r {
            Some(r) => r.distances(),
            None => {
                let k = channels.entrance_k();
                Schedule::LogRange {
                    min: 0.2 / k,
                    max: 1e4 / k,
                    points: 25,
                }
                .distances()
            }
        }
    }

    fn incident(&self) -> Result<UnitVector> {
        match self.incident {
            None => Ok(UnitVector::z_axis()),
            Some([x, y, z]) => UnitVector::new(x, y, z)
                .map_err(|e| CliError::Config(format!("incident direction: {e}"))),
        }
    }

    pub fn load_amplitude(&self) -> Result<Loaded> {
        let incident = self.incident()?;
        let mut loaded = match &self.amplitude {
            AmplitudeSource::File(path) => {
                let path = if path.is_absolute() {
                    path.clone()
                } else {
                    self.base_dir.join(path)
                };
                let (channels, amplitude) = load_amplitudes(&path)?;
                let mut family = AmplitudeFamily::new();
                family.insert(channels.entrance(), amplitude.clone());
                Loaded {
                    channels,
                    amplitude,
                    family: Some(family),
                }
            }
            AmplitudeSource::HardSphere { k, a, l_max } => {
                let channels = ChannelSet::single(*k)?;
                let model = hard_sphere_model(*k, *a, *l_max)?;
                Loaded {
                    amplitude: amplitudes_from_smatrix(&model, &channels, &incident)?,
                    family: Some(AmplitudeFamily::from_smatrix(&model, &channels)?),
                    channels,
                }
            }
            AmplitudeSource::SingleMode { k, l, m, re, im } => {
                let channels = ChannelSet::single(*k)?;
                let amplitude = PartialWaveAmplitude::with_incident(incident).with_mode(
                    0,
                    *l,
                    *m,
                    Complex64::new(*re, *im),
                )?;
                Loaded {
                    channels,
                    amplitude,
                    family: None,
                }
            }
            AmplitudeSource::RandomUnitary {
                channels,
                l_max,
                seed,
                k_min,
                k_max,
            } => {
                if *channels == 0 || !(*k_min > 0.0 && k_max >= k_min) {
                    return Err(CliError::Config(
                        "random_unitary needs channels >= 1 and 0 < k_min <= k_max".into(),
                    ));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let cs = random_channels(&mut rng, *channels, (*k_min, *k_max));
                let model = random_smatrix_model(*channels, *l_max, &mut rng)?;
                let family = AmplitudeFamily::from_smatrix(&model, &cs)?;
                Loaded {
                    amplitude: family.oriented(cs.entrance(), &incident)?,
                    family: Some(family),
                    channels: cs,
                }
            }
        };
        if let Some(mode) = self.weight_mode {
            loaded.channels = loaded.channels.with_weight_mode(mode)?;
        }
        Ok(loaded)
    }
}
