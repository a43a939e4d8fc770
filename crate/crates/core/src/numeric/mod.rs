//! Scalar abstraction shared by the f64 and double-double code paths.

mod double_double;

use std::fmt::Debug;
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};

pub use double_double::DoubleDouble;

/// Real scalar used by the generic quadrature, harmonic and flux kernels.
pub trait Real:
    Copy
    + Debug
    + PartialOrd
    + Num
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn pi() -> Self;
    fn from_bigint(x: &BigInt) -> Self;

    fn from_ratio(x: &BigRational) -> Self {
        Self::from_bigint(x.numer()) / Self::from_bigint(x.denom())
    }

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    /// Exact product of two doubles when the type can hold it.
    fn product(a: f64, b: f64) -> Self {
        Self::from_f64(a) * Self::from_f64(b)
    }

    /// `exp(2 pi i k / n)`.
    fn root_of_unity(k: usize, n: usize) -> Complex<Self>;
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn from_bigint(x: &BigInt) -> Self {
        x.to_f64().unwrap_or(f64::NAN)
    }
    fn from_ratio(x: &BigRational) -> Self {
        x.to_f64().unwrap_or(f64::NAN)
    }
    fn root_of_unity(k: usize, n: usize) -> Complex<Self> {
        let phi = 2.0 * std::f64::consts::PI * (k % n) as f64 / n as f64;
        Complex::new(phi.cos(), phi.sin())
    }
}

impl Real for DoubleDouble {
    fn from_f64(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
    fn pi() -> Self {
        DoubleDouble::PI
    }
    fn from_bigint(x: &BigInt) -> Self {
        DoubleDouble::from_bigint(x)
    }
    fn product(a: f64, b: f64) -> Self {
        DoubleDouble::mul_f64(a, b)
    }
    fn root_of_unity(k: usize, n: usize) -> Complex<Self> {
        // Newton on z^n = 1 from the f64 root; one step doubles the digits.
        let seed = <f64 as Real>::root_of_unity(k, n);
        let mut z = Complex::new(Self::from_f64(seed.re), Self::from_f64(seed.im));
        let order = Self::from_usize(n);
        for _ in 0..2 {
            let pow_nm1 = powu(z, n - 1);
            let residual = pow_nm1 * z - Complex::new(Self::from_f64(1.0), Self::zero());
            let step = residual / (pow_nm1 * order);
            z = z - step;
        }
        z
    }
}

/// Integer power by repeated squaring.
pub fn powu<T: Real>(z: Complex<T>, mut exp: usize) -> Complex<T> {
    let mut base = z;
    let mut acc = Complex::new(T::one(), T::zero());
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        exp >>= 1;
    }
    acc
}

/// Converts a complex value to f64 components.
pub fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn from_c64<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

pub fn is_zero_c<T: Real>(z: &Complex<T>) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_double_roots_of_unity_are_accurate() {
        for n in [3usize, 7, 17, 33] {
            for k in 0..n {
                let z: Complex<DoubleDouble> = DoubleDouble::root_of_unity(k, n);
                let norm = z.re * z.re + z.im * z.im - DoubleDouble::from_f64(1.0);
                assert!(norm.to_f64().abs() < 1e-30);
                let zn = powu(z, n);
                assert!((zn.re.to_f64() - 1.0).abs() < 1e-29);
                assert!(zn.im.to_f64().abs() < 1e-29);
                let f = <f64 as Real>::root_of_unity(k, n);
                assert!((z.re.to_f64() - f.re).abs() < 1e-15);
                assert!((z.im.to_f64() - f.im).abs() < 1e-15);
            }
        }
    }
}
