//! Unitarity relation and optical theorem.
//!
//! The interference of the incident and scattered waves integrates, at every
//! distance, to `-(4 pi/2i)[f_{gamma alpha}(s; kappa) - conj(f_{alpha gamma}(kappa; s))]`,
//! which must cancel `sum_beta k_beta int dOmega conj(f_{beta gamma}(n; s)) f_{beta alpha}(n; kappa)`.
//! Both sides use momenta `k_beta`, whatever the channel set's weight mode.

use num_complex::Complex64;

use crate::amplitudes::{AmplitudeFamily, ChannelSet, PartialWaveAmplitude};
use crate::error::Result;
use crate::special::UnitVector;

use super::evaluator::FluxEvaluator;
use crate::numeric::Real;
use crate::special::AngularGrid;

fn overlap(left: &PartialWaveAmplitude, right: &PartialWaveAmplitude, beta: usize) -> Complex64 {
    left.modes(beta)
        .map(|(l, m, b)| b.conj() * right.get(beta, l, m))
        .sum()
}

/// Largest residue of the unitarity relation over all channel pairs
/// `(gamma, alpha)`, incident directions `kappa` and outgoing directions `s`,
/// relative to the largest value of the bilinear side.
///
/// Returns 0 when both sides vanish everywhere (no scattering).
pub fn unitarity_defect(
    family: &AmplitudeFamily,
    channels: &ChannelSet,
    incident: &[UnitVector],
    outgoing: &[UnitVector],
) -> Result<f64> {
    let n = channels.len();
    let four_pi_over_2i = Complex64::new(0.0, -2.0 * std::f64::consts::PI);
    let mut oriented_in = Vec::with_capacity(n);
    let mut oriented_out = Vec::with_capacity(n);
    for a in 0..n {
        oriented_in.push(
            incident
                .iter()
                .map(|k| family.oriented(a, k))
                .collect::<Result<Vec<_>>>()?,
        );
        oriented_out.push(
            outgoing
                .iter()
                .map(|s| family.oriented(a, s))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for gamma in 0..n {
        for alpha in 0..n {
            for (ki, kappa) in incident.iter().enumerate() {
                let f_alpha = &oriented_in[alpha][ki];
                for (si, s) in outgoing.iter().enumerate() {
                    let f_gamma = &oriented_out[gamma][si];
                    let mut lhs = Complex64::new(0.0, 0.0);
                    for beta in 0..n {
                        lhs += channels.k(beta)? * overlap(f_gamma, f_alpha, beta);
                    }
                    let forward = f_alpha.evaluate_unchecked(gamma, s);
                    let reverse = f_gamma.evaluate_unchecked(alpha, kappa).conj();
                    let rhs = four_pi_over_2i * (forward - reverse);
                    worst = worst.max((lhs - rhs).norm());
                    scale = scale.max(lhs.norm());
                }
            }
        }
    }
    Ok(if scale == 0.0 {
        if worst == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        worst / scale
    })
}

fn optical_defect(sigma: f64, f: &PartialWaveAmplitude, channels: &ChannelSet) -> f64 {
    let alpha = channels.entrance();
    let k_alpha = channels.entrance_k();
    let forward = f.evaluate_unchecked(alpha, f.incident());
    let theorem = 4.0 * std::f64::consts::PI / k_alpha * forward.im;
    if sigma == 0.0 {
        return if theorem == 0.0 { 0.0 } else { f64::INFINITY };
    }
    (sigma - theorem).abs() / sigma
}

fn momentum_sigma(f: &PartialWaveAmplitude, channels: &ChannelSet) -> Result<f64> {
    let k_alpha = channels.entrance_k();
    let mut sigma = 0.0;
    for beta in f.exit_channels() {
        sigma += channels.k(beta)? / k_alpha * f.norm_sqr(beta);
    }
    Ok(sigma)
}

/// `|sigma_tot - (4 pi/k_alpha) Im f_{alpha alpha}(kappa; kappa)| / sigma_tot`.
pub fn optical_theorem_defect(f: &PartialWaveAmplitude, channels: &ChannelSet) -> Result<f64> {
    f.validate(channels)?;
    Ok(optical_defect(momentum_sigma(f, channels)?, f, channels))
}

/// Optical theorem with `sigma_tot` replaced by the total scattered flux
/// through the sphere of radius `r`.
pub fn optical_theorem_defect_at<T: Real>(
    f: &PartialWaveAmplitude,
    channels: &ChannelSet,
    r: f64,
    grid: &AngularGrid<T>,
) -> Result<f64> {
    let momentum = channels.with_weight_mode(crate::amplitudes::WeightMode::MomentumRatio)?;
    let total = FluxEvaluator::<T>::new(f, &momentum)?.total(r, grid)?;
    Ok(optical_defect(total.to_f64(), f, channels))
}
