use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::channels::ChannelSet;
use crate::error::{Error, Result};
use crate::numeric::Real;
use crate::special::{lm_count, lm_index, sph_harm_all, AngularGrid, UnitVector};

/// Key of one stored coefficient `B^{lm}_{beta alpha}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeKey {
    pub beta: usize,
    pub l: u32,
    pub m: i32,
}

/// Partial-wave expansion `f_{beta alpha}(n) = sum_lm Y_l^m(n) B^{lm}_{beta alpha}`
/// of the amplitudes out of one entrance channel, for a fixed incident
/// direction.
///
/// Coefficients are sparse; modes that are not stored are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialWaveAmplitude {
    incident: UnitVector,
    coeffs: BTreeMap<ModeKey, Complex64>,
}

impl Default for PartialWaveAmplitude {
    fn default() -> Self {
        Self::new()
    }
}

impl PartialWaveAmplitude {
    /// Empty amplitude with incidence along `+z`.
    pub fn new() -> Self {
        Self::with_incident(UnitVector::z_axis())
    }

    pub fn with_incident(incident: UnitVector) -> Self {
        Self {
            incident,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn incident(&self) -> &UnitVector {
        &self.incident
    }

    /// Sets (or replaces) `B^{lm}` for exit channel `beta`.
    pub fn insert(&mut self, beta: usize, l: u32, m: i32, value: Complex64) -> Result<()> {
        if m.unsigned_abs() > l {
            return Err(Error::Index(format!("|m| = {} exceeds l = {l}", m.abs())));
        }
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "coefficient (beta={beta}, l={l}, m={m}) is not finite"
            )));
        }
        self.coeffs.insert(ModeKey { beta, l, m }, value);
        Ok(())
    }

    pub fn with_mode(mut self, beta: usize, l: u32, m: i32, value: Complex64) -> Result<Self> {
        self.insert(beta, l, m, value)?;
        Ok(self)
    }

    pub fn get(&self, beta: usize, l: u32, m: i32) -> Complex64 {
        self.coeffs
            .get(&ModeKey { beta, l, m })
            .copied()
            .unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeKey, Complex64)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every stored coefficient is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn l_max(&self) -> Option<u32> {
        self.coeffs.keys().map(|k| k.l).max()
    }

    pub fn l_max_for(&self, beta: usize) -> Option<u32> {
        self.modes(beta).map(|(l, _, _)| l).max()
    }

    /// Exit channels with at least one stored coefficient.
    pub fn exit_channels(&self) -> BTreeSet<usize> {
        self.coeffs.keys().map(|k| k.beta).collect()
    }

    /// `(l, m, B)` for one exit channel.
    pub fn modes(&self, beta: usize) -> impl Iterator<Item = (u32, i32, Complex64)> + '_ {
        let lo = ModeKey {
            beta,
            l: 0,
            m: i32::MIN,
        };
        let hi = ModeKey {
            beta,
            l: u32::MAX,
            m: i32::MAX,
        };
        self.coeffs.range(lo..=hi).map(|(k, v)| (k.l, k.m, *v))
    }

    /// Every exit channel must exist in `channels`.
    pub fn validate(&self, channels: &ChannelSet) -> Result<()> {
        if let Some(beta) = self
            .exit_channels()
            .into_iter()
            .find(|&b| b >= channels.len())
        {
            return Err(Error::UnknownChannel(beta));
        }
        Ok(())
    }

    /// Dense coefficient vector of channel `beta` in [`lm_index`] layout.
    pub fn dense<T: Real>(&self, beta: usize, l_max: u32) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); lm_count(l_max)];
        for (l, m, b) in self.modes(beta) {
            if l <= l_max {
                out[lm_index(l, m)] = Complex::new(T::from_f64(b.re), T::from_f64(b.im));
            }
        }
        out
    }

    /// `a_l(n) = sum_m B^{lm} Y_l^m(n)` for `l = 0..=l_max`.
    pub fn mode_sums<T: Real>(
        &self,
        beta: usize,
        ylm: &[Complex<T>],
        l_max: u32,
    ) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); l_max as usize + 1];
        for (l, m, b) in self.modes(beta) {
            if l <= l_max {
                let y = ylm[lm_index(l, m)];
                let b = Complex::new(T::from_f64(b.re), T::from_f64(b.im));
                out[l as usize] = out[l as usize] + b * y;
            }
        }
        out
    }

    /// Pointwise amplitude `f_{beta alpha}(n)`.
    pub fn evaluate(
        &self,
        channels: &ChannelSet,
        beta: usize,
        n: &UnitVector,
    ) -> Result<Complex64> {
        channels.channel(beta)?;
        Ok(self.evaluate_unchecked(beta, n))
    }

    pub(crate) fn evaluate_unchecked(&self, beta: usize, n: &UnitVector) -> Complex64 {
        let Some(l_max) = self.l_max_for(beta) else {
            return Complex64::new(0.0, 0.0);
        };
        let ylm = sph_harm_all::<f64>(l_max, n);
        self.mode_sums(beta, &ylm, l_max).iter().sum()
    }

    /// Multiplies every mode by `[l(l+1)]^power`, the eigenvalue action of the
    /// squared orbital angular momentum.
    pub fn apply_angular_operator(&self, power: u32) -> Self {
        self.map_by_l(|l| {
            let eig = f64::from(l) * f64::from(l + 1);
            eig.powi(power as i32)
        })
    }

    /// The coefficient `h_S = (1/S!) prod_{mu=1}^{S} [L - mu(mu-1)] f` of the
    /// `(-2ikR)^{-S}` term in the wave-function expansion.
    pub fn h_coefficient(&self, s: u32) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("h_S is defined for S >= 1".into()));
        }
        Ok(self.map_by_l(|l| h_multiplier(l, s).to_f64().unwrap_or(f64::NAN)))
    }

    fn map_by_l(&self, factor: impl Fn(u32) -> f64) -> Self {
        let mut cache: BTreeMap<u32, f64> = BTreeMap::new();
        let coeffs = self
            .coeffs
            .iter()
            .filter_map(|(k, v)| {
                let f = *cache.entry(k.l).or_insert_with(|| factor(k.l));
                (f != 0.0).then(|| (*k, v * f))
            })
            .collect();
        Self {
            incident: self.incident,
            coeffs,
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            incident: self.incident,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * factor)).collect(),
        }
    }

    /// `sum_lm |B^{lm}_{beta alpha}|^2`, i.e. `int |f_beta|^2 dOmega`.
    pub fn norm_sqr(&self, beta: usize) -> f64 {
        self.modes(beta).map(|(_, _, b)| b.norm_sqr()).sum()
    }

    /// True when only `m = 0` modes are stored and the incidence is `+z`.
    pub fn is_axially_symmetric(&self) -> bool {
        let z = UnitVector::z_axis();
        self.incident == z && self.coeffs.keys().all(|k| k.m == 0)
    }
}

impl Add for &PartialWaveAmplitude {
    type Output = PartialWaveAmplitude;

    fn add(self, rhs: Self) -> PartialWaveAmplitude {
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &rhs.coeffs {
            *coeffs.entry(*k).or_default() += v;
        }
        PartialWaveAmplitude {
            incident: self.incident,
            coeffs,
        }
    }
}

impl Mul<Complex64> for &PartialWaveAmplitude {
    type Output = PartialWaveAmplitude;

    fn mul(self, rhs: Complex64) -> PartialWaveAmplitude {
        self.scaled(rhs)
    }
}

/// Exact multiplier `(1/S!) prod_{mu=1}^{S} [l(l+1) - mu(mu-1)]` of mode `l` in `h_S`.
///
/// Vanishes for `S > l` because the factor at `mu = l + 1` is zero.
pub fn h_multiplier(l: u32, s: u32) -> BigRational {
    let eig = BigInt::from(l) * BigInt::from(l + 1);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for mu in 1..=s {
        num *= &eig - BigInt::from(mu) * BigInt::from(mu - 1);
        den *= BigInt::from(mu);
        if num.is_zero() {
            return BigRational::zero();
        }
    }
    BigRational::new(num, den)
}

/// Projects a sampled function onto `Y_l^m`, `l <= l_max`, by quadrature.
///
/// Exact when the function is a spherical polynomial of degree
/// `<= grid.order() - l_max`.
pub fn project<F>(grid: &AngularGrid, l_max: u32, f: F) -> Vec<Complex64>
where
    F: Fn(&UnitVector) -> Complex64,
{
    let mut out = vec![Complex64::new(0.0, 0.0); lm_count(l_max)];
    for (n, w) in grid.iter() {
        let value = f(n) * w;
        let ylm = sph_harm_all::<f64>(l_max, n);
        for (acc, y) in out.iter_mut().zip(&ylm) {
            *acc += y.conj() * value;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_multiplier_matches_hand_values() {
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        assert_eq!(h_multiplier(1, 1), q(2));
        // (1/2!)(12 - 0)(12 - 2) = 60
        assert_eq!(h_multiplier(3, 2), q(60));
        assert_eq!(h_multiplier(3, 4), q(0));
        // equals (l+S)!/(S!(l-S)!)
        assert_eq!(h_multiplier(5, 3), q(40320 / (6 * 2)));
    }

    #[test]
    fn insert_rejects_bad_m() {
        let mut f = PartialWaveAmplitude::new();
        assert!(f.insert(0, 1, 2, Complex64::new(1.0, 0.0)).is_err());
        assert!(f.insert(0, 1, -1, Complex64::new(1.0, 0.0)).is_ok());
    }

    #[test]
    fn modes_are_grouped_by_channel() {
        let f = PartialWaveAmplitude::new()
            .with_mode(1, 2, -1, Complex64::new(1.0, 0.0))
            .unwrap()
            .with_mode(0, 3, 0, Complex64::new(2.0, 0.0))
            .unwrap()
            .with_mode(1, 0, 0, Complex64::new(3.0, 0.0))
            .unwrap();
        let m1: Vec<_> = f.modes(1).map(|(l, m, _)| (l, m)).collect();
        assert_eq!(m1, vec![(0, 0), (2, -1)]);
        assert_eq!(f.l_max(), Some(3));
        assert_eq!(f.l_max_for(1), Some(2));
        assert_eq!(f.l_max_for(5), None);
    }
}
