//! Orthonormal spherical harmonics with the Condon-Shortley phase.

use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Real;

/// A direction on the unit sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitVector<T = f64> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl UnitVector<f64> {
    /// Normalizes `(x, y, z)`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "cannot normalize direction ({x}, {y}, {z})"
            )));
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            x: st * cp,
            y: st * sp,
            z: ct,
        }
    }

    pub fn theta(&self) -> f64 {
        self.z.clamp(-1.0, 1.0).acos()
    }

    pub fn phi(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl<T: Real> UnitVector<T> {
    /// Wraps components that are already normalized.
    pub fn from_components(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn z_axis() -> Self {
        Self {
            x: T::zero(),
            y: T::zero(),
            z: T::one(),
        }
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn to_f64(&self) -> UnitVector<f64> {
        UnitVector {
            x: self.x.to_f64(),
            y: self.y.to_f64(),
            z: self.z.to_f64(),
        }
    }

    pub fn from_f64(v: &UnitVector<f64>) -> Self {
        Self {
            x: T::from_f64(v.x),
            y: T::from_f64(v.y),
            z: T::from_f64(v.z),
        }
    }
}

/// Flat index of `(l, m)` in the `l^2 + l + m` layout.
#[inline]
pub fn lm_index(l: u32, m: i32) -> usize {
    let l = l as i64;
    (l * l + l + m as i64) as usize
}

/// Number of `(l, m)` pairs with `l <= l_max`.
#[inline]
pub fn lm_count(l_max: u32) -> usize {
    ((l_max + 1) * (l_max + 1)) as usize
}

/// All `Y_l^m(n)` for `l <= l_max`, indexed by [`lm_index`].
pub fn sph_harm_all<T: Real>(l_max: u32, n: &UnitVector<T>) -> Vec<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; lm_count(l_max)];
    let cos_t = n.z;
    let sin_t = (n.x * n.x + n.y * n.y).sqrt();
    let phase = if sin_t > T::zero() {
        Complex::new(n.x / sin_t, n.y / sin_t)
    } else {
        Complex::new(T::one(), T::zero())
    };

    let lm = l_max as usize;
    // Normalized associated Legendre values p[l] for the current m.
    let four_pi = T::from_f64(4.0) * T::pi();
    let mut p_mm = T::one() / four_pi.sqrt();
    let mut e_imphi = Complex::new(T::one(), T::zero());
    for m in 0..=lm {
        if m > 0 {
            let ratio = T::from_usize(2 * m + 1) / T::from_usize(2 * m);
            p_mm = -(ratio.sqrt() * sin_t * p_mm);
            e_imphi = e_imphi * phase;
        }
        let mut p_prev2 = T::zero();
        let mut p_prev = p_mm;
        store(&mut out, m, m, p_mm, e_imphi);
        if m < lm {
            let p = T::from_usize(2 * m + 3).sqrt() * cos_t * p_mm;
            store(&mut out, m + 1, m, p, e_imphi);
            p_prev2 = p_mm;
            p_prev = p;
        }
        let mut a_prev = T::from_usize(2 * m + 3).sqrt();
        for l in (m + 2)..=lm {
            let num = T::from_usize(4 * l * l - 1);
            let den = T::from_usize(l * l - m * m);
            let a = (num / den).sqrt();
            let p = a * (cos_t * p_prev - p_prev2 / a_prev);
            store(&mut out, l, m, p, e_imphi);
            p_prev2 = p_prev;
            p_prev = p;
            a_prev = a;
        }
    }
    out
}

fn store<T: Real>(out: &mut [Complex<T>], l: usize, m: usize, p: T, e_imphi: Complex<T>) {
    let y = Complex::new(p * e_imphi.re, p * e_imphi.im);
    out[lm_index(l as u32, m as i32)] = y;
    if m > 0 {
        // Y_l^{-m} = (-1)^m conj(Y_l^m)
        let conj = y.conj();
        out[lm_index(l as u32, -(m as i32))] = if m % 2 == 0 { conj } else { -conj };
    }
}

/// `Y_l^m(n)`; errors when `|m| > l`.
pub fn sph_harm(l: u32, m: i32, n: &UnitVector<f64>) -> Result<Complex64> {
    if m.unsigned_abs() > l {
        return Err(Error::Index(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    Ok(sph_harm_all(l, n)[lm_index(l, m)])
}

/// Legendre polynomial `P_l(x)` by Bonnet's recurrence.
pub fn legendre(l: u32, x: f64) -> f64 {
    let mut p0 = 1.0;
    if l == 0 {
        return p0;
    }
    let mut p1 = x;
    for k in 1..l {
        let k = f64::from(k);
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}
