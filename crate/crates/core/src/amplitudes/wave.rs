//! The channel wave factor `eta_{beta alpha}(R)`: incident plane wave plus the
//! scattered wave at finite distance.

use num_complex::Complex64;

use super::channels::ChannelSet;
use super::partial_wave::PartialWaveAmplitude;
use crate::error::{Error, Result};
use crate::special::{chi, sph_harm_all, UnitVector};

fn check_radius(r: f64) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("distance R must be > 0, got {r}")));
    }
    Ok(())
}

/// `sum_l chi_l(-i k_beta R) a_l(n) / R`: the scattered wave with every mode's
/// radial factor evaluated exactly.
pub fn scattered_wave_exact(
    f: &PartialWaveAmplitude,
    channels: &ChannelSet,
    beta: usize,
    r: f64,
    n: &UnitVector,
) -> Result<Complex64> {
    check_radius(r)?;
    let k = channels.k(beta)?;
    let Some(l_max) = f.l_max_for(beta) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let ylm = sph_harm_all::<f64>(l_max, n);
    let a = f.mode_sums(beta, &ylm, l_max);
    let z = Complex64::new(0.0, -k * r);
    let mut sum = Complex64::new(0.0, 0.0);
    for (l, a_l) in a.iter().enumerate() {
        if a_l.re != 0.0 || a_l.im != 0.0 {
            sum += chi(l as u32, z)? * a_l;
        }
    }
    Ok(sum / r)
}

/// `e^{ikR}/R [f + sum_{S=1}^{s_max} h_S / (-2ikR)^S]`.
pub fn scattered_wave_asymptotic(
    f: &PartialWaveAmplitude,
    channels: &ChannelSet,
    beta: usize,
    r: f64,
    n: &UnitVector,
    s_max: u32,
) -> Result<Complex64> {
    check_radius(r)?;
    let k = channels.k(beta)?;
    let x = Complex64::new(0.0, -2.0 * k * r).inv();
    let mut sum = f.evaluate_unchecked(beta, n);
    let mut power = Complex64::new(1.0, 0.0);
    for s in 1..=s_max {
        power *= x;
        let h = f.h_coefficient(s)?;
        if h.is_empty() {
            break;
        }
        sum += h.evaluate_unchecked(beta, n) * power;
    }
    Ok(Complex64::from_polar(1.0, k * r) * sum / r)
}

/// Incident plane wave `delta_{beta alpha} e^{i k_alpha (kappa . R)}`.
pub fn incident_wave(
    f: &PartialWaveAmplitude,
    channels: &ChannelSet,
    beta: usize,
    position: [f64; 3],
) -> Result<Complex64> {
    channels.channel(beta)?;
    if beta != channels.entrance() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let kappa = f.incident();
    let phase = kappa.x * position[0] + kappa.y * position[1] + kappa.z * position[2];
    Ok(Complex64::from_polar(1.0, channels.entrance_k() * phase))
}

fn split_position(position: [f64; 3]) -> Result<(f64, UnitVector)> {
    let [x, y, z] = position;
    let r = (x * x + y * y + z * z).sqrt();
    check_radius(r)?;
    Ok((r, UnitVector::new(x, y, z)?))
}

/// Full wave factor with exact radial functions.
pub fn wave_factor(
    f: &PartialWaveAmplitude,
    channels: &ChannelSet,
    beta: usize,
    position: [f64; 3],
) -> Result<Complex64> {
    let (r, n) = split_position(position)?;
    Ok(incident_wave(f, channels, beta, position)?
        + scattered_wave_exact(f, channels, beta, r, &n)?)
}

/// Wave factor with the scattered part expanded through `(kR)^{-s_max}`.
pub fn wave_factor_asymptotic(
    f: &PartialWaveAmplitude,
    channels: &ChannelSet,
    beta: usize,
    position: [f64; 3],
    s_max: u32,
) -> Result<Complex64> {
    let (r, n) = split_position(position)?;
    Ok(incident_wave(f, channels, beta, position)?
        + scattered_wave_asymptotic(f, channels, beta, r, &n, s_max)?)
}
