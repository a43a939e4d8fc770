//! The free outgoing/incoming Green function `e^{+-ik|R-x|}/(4 pi |R-x|)`
//! evaluated directly, as a multipole sum, and as its expansion in `1/(kR)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::chi::chi_partial_sum;
use crate::special::{chi, i_pow, lm_index, regular_psi, sph_harm_all, UnitVector};

/// `+` (outgoing) or `-` (incoming) boundary condition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WaveSign {
    #[default]
    Outgoing,
    Incoming,
}

impl WaveSign {
    /// `+1` for outgoing, `-1` for incoming.
    pub fn value(self) -> f64 {
        match self {
            WaveSign::Outgoing => 1.0,
            WaveSign::Incoming => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreensQuery {
    pub k: f64,
    pub observation: [f64; 3],
    pub source: [f64; 3],
    pub sign: WaveSign,
}

struct Geometry {
    big_r: f64,
    n: UnitVector,
    r: f64,
    s: Option<UnitVector>,
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

impl GreensQuery {
    pub fn new(k: f64, observation: [f64; 3], source: [f64; 3], sign: WaveSign) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "wavenumber must be > 0, got {k}"
            )));
        }
        if observation.iter().chain(&source).any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("points must be finite".into()));
        }
        Ok(Self {
            k,
            observation,
            source,
            sign,
        })
    }

    pub fn outgoing(k: f64, observation: [f64; 3], source: [f64; 3]) -> Result<Self> {
        Self::new(k, observation, source, WaveSign::Outgoing)
    }

    /// `|R|`.
    pub fn big_r(&self) -> f64 {
        norm(self.observation)
    }

    /// `|x|`.
    pub fn r(&self) -> f64 {
        norm(self.source)
    }

    fn expansion_geometry(&self) -> Result<Geometry> {
        let big_r = self.big_r();
        let r = self.r();
        if !(r < big_r) {
            return Err(Error::Domain(format!(
                "the expansion needs |x| < |R|, got |x| = {r}, |R| = {big_r}"
            )));
        }
        let [x, y, z] = self.observation;
        let n = UnitVector::new(x, y, z)?;
        let s = if r > 0.0 {
            let [a, b, c] = self.source;
            Some(UnitVector::new(a, b, c)?)
        } else {
            None
        };
        Ok(Geometry { big_r, n, r, s })
    }

    /// `sum_m Y_l^m(n) conj(Y_l^m(s)) (4 pi/(kr)) i^{-+l} psi_l(kr)` for each `l`,
    /// the plane-wave expansion coefficients of `e^{-+ik(n.x)}`.
    fn plane_wave_modes(&self, g: &Geometry, l_max: u32) -> Result<Vec<Complex64>> {
        let four_pi = 4.0 * std::f64::consts::PI;
        let Some(s) = g.s else {
            // psi_l(kr)/(kr) -> delta_{l0} as r -> 0
            let mut out = vec![Complex64::new(0.0, 0.0); l_max as usize + 1];
            out[0] = Complex64::new(1.0, 0.0);
            return Ok(out);
        };
        let yn = sph_harm_all::<f64>(l_max, &g.n);
        let ys = sph_harm_all::<f64>(l_max, &s);
        let kr = self.k * g.r;
        let sign = self.sign.value() as i64;
        (0..=l_max)
            .map(|l| {
                let li = l as i32;
                let angular: Complex64 = (-li..=li)
                    .map(|m| yn[lm_index(l, m)] * ys[lm_index(l, m)].conj())
                    .sum();
                let radial = four_pi / kr * regular_psi(l, kr)?;
                Ok(angular * radial * i_pow(-sign * i64::from(l)))
            })
            .collect()
    }
}

/// Largest cutoff [`auto_l_max`] will return.
pub const AUTO_L_MAX_CAP: u32 = 1000;

/// `max(ceil(e k r) + 15, ceil(39 / ln(R/r)))`, capped at [`AUTO_L_MAX_CAP`].
///
/// Past `l ~ e k r / 2` the regular solution `psi_l(kr)` falls off faster
/// than geometrically, but once `l > kR` the growth of `chi_l(-ikR)` eats
/// that decay and the terms shrink only like `(r/R)^l`; the second bound
/// pushes that tail below `1e-17`.
pub fn auto_l_max(k: f64, r: f64, big_r: f64) -> u32 {
    let bessel = (std::f64::consts::E * k * r).ceil() + 15.0;
    let geometric = if r > 0.0 {
        (39.0 / (big_r / r).ln()).ceil()
    } else {
        0.0
    };
    let l = bessel.max(geometric);
    if l.is_finite() {
        (l as u32).min(AUTO_L_MAX_CAP)
    } else {
        AUTO_L_MAX_CAP
    }
}

/// Direct evaluation of the point-source kernel.
pub fn greens_point(q: &GreensQuery) -> Result<Complex64> {
    let d = [
        q.observation[0] - q.source[0],
        q.observation[1] - q.source[1],
        q.observation[2] - q.source[2],
    ];
    let dist = norm(d);
    if dist == 0.0 {
        return Err(Error::Domain(
            "observation and source points coincide".into(),
        ));
    }
    Ok(Complex64::from_polar(1.0, q.sign.value() * q.k * dist)
        / (4.0 * std::f64::consts::PI * dist))
}

/// The individual terms `l = 0..=l_max` of the multipole sum.
pub fn multipole_terms(q: &GreensQuery, l_max: u32) -> Result<Vec<Complex64>> {
    let g = q.expansion_geometry()?;
    let modes = q.plane_wave_modes(&g, l_max)?;
    let z = Complex64::new(0.0, -q.sign.value() * q.k * g.big_r);
    let four_pi_r = 4.0 * std::f64::consts::PI * g.big_r;
    modes
        .iter()
        .enumerate()
        .map(|(l, mode)| Ok(chi(l as u32, z)? / four_pi_r * mode))
        .collect()
}

/// Multipole sum truncated at `l_max`.
pub fn greens_multipole(q: &GreensQuery, l_max: u32) -> Result<Complex64> {
    Ok(multipole_terms(q, l_max)?.iter().sum())
}

/// Multipole sum with `l_max` from [`auto_l_max`].
pub fn greens_multipole_auto(q: &GreensQuery) -> Result<Complex64> {
    greens_multipole(q, auto_l_max(q.k, q.r(), q.big_r()))
}

/// Expansion through `(kR)^{-s_max}` with the angular sum cut at `l_max`.
///
/// Every mode's radial series `sum_S c_S (-+2ikR)^{-S}` stops at `S = l` on its
/// own, so for `s_max >= l_max` this reproduces [`greens_multipole`].
pub fn greens_asymptotic_truncated(q: &GreensQuery, s_max: u32, l_max: u32) -> Result<Complex64> {
    let g = q.expansion_geometry()?;
    let modes = q.plane_wave_modes(&g, l_max)?;
    let kr = q.k * g.big_r;
    let t = Complex64::new(0.0, -2.0 * q.sign.value() * kr).inv();
    let sum: Complex64 = modes
        .iter()
        .enumerate()
        .map(|(l, mode)| chi_partial_sum(l as u32, t, s_max) * mode)
        .sum();
    Ok(
        Complex64::from_polar(1.0, q.sign.value() * kr) / (4.0 * std::f64::consts::PI * g.big_r)
            * sum,
    )
}

/// Expansion through `(kR)^{-s_max}` with `l_max` from [`auto_l_max`].
pub fn greens_asymptotic(q: &GreensQuery, s_max: u32) -> Result<Complex64> {
    greens_asymptotic_truncated(q, s_max, auto_l_max(q.k, q.r(), q.big_r()))
}
