use serde::Serialize;

use crate::amplitudes::{ChannelSet, PartialWaveAmplitude};
use crate::error::{Error, Result};
use crate::numeric::DoubleDouble;
use crate::special::{gauss_legendre_sphere, UnitVector};

use super::cross_sections::cross_sections_on;
use super::evaluator::{default_grid_order, FluxEvaluator};

/// Flux through the sphere of one radius.
#[derive(Clone, Debug, Serialize)]
pub struct FluxSample {
    pub r: f64,
    /// `k_beta R` for every channel.
    pub kr: Vec<f64>,
    /// Set when some open channel has `k_beta R < 1`, below the far-field
    /// regime where the series expansion is meaningful.
    pub near_field: bool,
    pub total: f64,
    pub min_differential: f64,
    pub max_differential: f64,
    /// `dSigma/dOmega` at each grid node.
    pub differential: Vec<f64>,
}

/// Differential and total flux over a schedule of distances.
#[derive(Clone, Debug, Serialize)]
pub struct FluxProfile {
    pub grid_order: u32,
    pub nodes: Vec<UnitVector>,
    pub weights: Vec<f64>,
    /// `sum_beta sigma_{beta alpha}`, the limit every total should equal.
    pub cross_section_sum: f64,
    pub samples: Vec<FluxSample>,
}

impl FluxProfile {
    /// Largest `|total(R) - sum sigma| / sum sigma` over the schedule.
    pub fn conservation_defect(&self) -> f64 {
        let s = self.cross_section_sum;
        let worst = self
            .samples
            .iter()
            .map(|x| (x.total - s).abs())
            .fold(0.0, f64::max);
        if s == 0.0 {
            worst
        } else {
            worst / s
        }
    }
}

/// Samples the flux at each `r` on a grid of degree `grid_order`
/// (default `2 L_max + 4`). Totals are accumulated in double-double so that
/// near-field cancellations do not spoil conservation.
pub fn flux_profile(
    f: &PartialWaveAmplitude,
    channels: &ChannelSet,
    r_values: &[f64],
    grid_order: Option<u32>,
) -> Result<FluxProfile> {
    let order = grid_order.unwrap_or_else(|| default_grid_order(f.l_max().unwrap_or(0)));
    let grid = gauss_legendre_sphere::<DoubleDouble>(order)?;
    let grid64 = gauss_legendre_sphere::<f64>(order)?;
    let evaluator = FluxEvaluator::<DoubleDouble>::new(f, channels)?;
    let cross = cross_sections_on(f, channels, grid64)?;
    let mut samples = Vec::with_capacity(r_values.len());
    for &r in r_values {
        let values = evaluator.differential_exact_grid(r, &grid)?;
        let total = values
            .iter()
            .zip(grid.weights())
            .fold(DoubleDouble::from_f64(0.0), |acc, (&v, &w)| acc + v * w);
        let differential: Vec<f64> = values.iter().map(|v| v.to_f64()).collect();
        let kr: Vec<f64> = channels.channels().iter().map(|c| c.k * r).collect();
        if differential.is_empty() {
            return Err(Error::InvalidArgument("empty angular grid".into()));
        }
        samples.push(FluxSample {
            r,
            near_field: kr.iter().any(|&x| x < 1.0),
            kr,
            total: total.to_f64(),
            min_differential: differential.iter().copied().fold(f64::INFINITY, f64::min),
            max_differential: differential
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max),
            differential,
        });
    }
    Ok(FluxProfile {
        grid_order: order,
        nodes: grid.nodes().iter().map(|n| n.to_f64()).collect(),
        weights: grid.weights().iter().map(|w| w.to_f64()).collect(),
        cross_section_sum: cross.total(),
        samples,
    })
}
