use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::channels::{Channel, ChannelSet, WeightMode};
use super::partial_wave::PartialWaveAmplitude;

/// `n` channels with wavenumbers drawn uniformly from `k_range`, entrance 0.
pub fn random_channels<R: Rng + ?Sized>(rng: &mut R, n: usize, k_range: (f64, f64)) -> ChannelSet {
    let channels = (0..n)
        .map(|i| Channel::new(format!("c{i}"), rng.random_range(k_range.0..=k_range.1)))
        .collect();
    ChannelSet::new(channels, 0, WeightMode::MomentumRatio).expect("random channels are open")
}

/// Gaussian coefficients for every `(beta, l, m)` with `l <= l_max`, each
/// kept with probability `density`. The top mode `l_max` of channel 0 is
/// always present so the declared `l_max` is attained.
pub fn random_amplitude<R: Rng + ?Sized>(
    rng: &mut R,
    channels: usize,
    l_max: u32,
    density: f64,
) -> PartialWaveAmplitude {
    let mut f = PartialWaveAmplitude::new();
    for beta in 0..channels {
        for l in 0..=l_max {
            for m in -(l as i32)..=(l as i32) {
                let forced = beta == 0 && l == l_max && m == 0;
                if forced || rng.random::<f64>() < density {
                    let c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                    f.insert(beta, l, m, c * std::f64::consts::FRAC_1_SQRT_2)
                        .expect("generated modes are in range");
                }
            }
        }
    }
    f
}
