use crate::amplitudes::{ChannelSet, PartialWaveAmplitude};
use crate::error::Result;
use crate::special::{gauss_legendre_sphere, AngularGrid};

use super::evaluator::default_grid_order;

/// Cross sections `sigma_{beta alpha}` out of the entrance channel.
#[derive(Clone, Debug)]
pub struct CrossSections {
    /// `weight_beta sum_lm |B^{lm}_{beta alpha}|^2`, one per channel.
    pub parseval: Vec<f64>,
    /// The same integrals by quadrature of `weight_beta |f_beta|^2`.
    pub quadrature: Vec<f64>,
    /// `dsigma_{beta alpha}/dOmega` at the grid nodes, one row per channel.
    pub differential: Vec<Vec<f64>>,
    pub grid: AngularGrid,
}

impl CrossSections {
    pub fn total(&self) -> f64 {
        self.parseval.iter().sum()
    }

    pub fn total_quadrature(&self) -> f64 {
        self.quadrature.iter().sum()
    }

    /// Largest relative difference between the two paths.
    pub fn path_disagreement(&self) -> f64 {
        let scale = self.total();
        if scale == 0.0 {
            return 0.0;
        }
        self.parseval
            .iter()
            .zip(&self.quadrature)
            .map(|(a, b)| (a - b).abs() / scale)
            .fold(0.0, f64::max)
    }
}

/// Cross sections on the default grid of degree `2 L_max + 4`.
pub fn cross_sections(f: &PartialWaveAmplitude, channels: &ChannelSet) -> Result<CrossSections> {
    let grid = gauss_legendre_sphere(default_grid_order(f.l_max().unwrap_or(0)))?;
    cross_sections_on(f, channels, grid)
}

pub fn cross_sections_on(
    f: &PartialWaveAmplitude,
    channels: &ChannelSet,
    grid: AngularGrid,
) -> Result<CrossSections> {
    f.validate(channels)?;
    let mut parseval = Vec::with_capacity(channels.len());
    let mut quadrature = Vec::with_capacity(channels.len());
    let mut differential = Vec::with_capacity(channels.len());
    for beta in 0..channels.len() {
        let w = channels.flux_weight(beta)?;
        parseval.push(w * f.norm_sqr(beta));
        let row: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|n| w * f.evaluate_unchecked(beta, n).norm_sqr())
            .collect();
        quadrature.push(row.iter().zip(grid.weights()).map(|(v, w)| v * w).sum());
        differential.push(row);
    }
    Ok(CrossSections {
        parseval,
        quadrature,
        differential,
        grid,
    })
}
