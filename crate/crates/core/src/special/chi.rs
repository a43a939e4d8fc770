//! The irregular free radial solution `chi_l(z) = sqrt(2z/pi) K_{l+1/2}(z)`.
//!
//! For integer `l` it is `exp(-z)` times a finite polynomial in `t = 1/(2z)`:
//!
//! ```text
//! chi_l(z) = exp(-z) * sum_{S=0}^{l} (l+S)! / (S! (l-S)!) * t^S
//! ```
//!
//! The polynomial part is held exactly so that products and Wronskians can be
//! formed with the exponentials cancelled analytically.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numeric::Real;
use crate::poly::RationalPoly;

/// Exact coefficients `c_S = (l+S)! / (S! (l-S)!)` of the finite sum in `t = 1/(2z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiPolynomial {
    l: u32,
    poly: RationalPoly,
}

impl ChiPolynomial {
    pub fn new(l: u32) -> Self {
        let mut coeffs = Vec::with_capacity(l as usize + 1);
        let mut c = BigRational::one();
        coeffs.push(c.clone());
        for s in 0..l {
            // c_{S+1} / c_S = (l+S+1)(l-S) / (S+1)
            let num = BigInt::from(l + s + 1) * BigInt::from(l - s);
            c *= BigRational::new(num, BigInt::from(s + 1));
            coeffs.push(c.clone());
        }
        Self {
            l,
            poly: RationalPoly::new(coeffs),
        }
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// Polynomial in `t = 1/(2z)`.
    pub fn polynomial(&self) -> &RationalPoly {
        &self.poly
    }

    pub fn coefficient(&self, s: usize) -> BigRational {
        self.poly.coeff(s)
    }

    /// `exp(z) * chi_l(z)` at `t = 1/(2z)`.
    pub fn eval_scaled<T: Real>(&self, t: Complex<T>) -> Complex<T> {
        self.poly.eval(t)
    }
}

/// `(1/2) [chi_j(z) d/dz chi_l(-z) - chi_l(-z) d/dz chi_j(z)]` as an exact
/// polynomial in `t = 1/(2z)`.
///
/// With `chi_j(z) = e^{-z} P_j(t)`, `chi_l(-z) = e^{z} P_l(-t)` and
/// `dt/dz = -2 t^2`, the exponentials cancel and
///
/// ```text
/// H(t) = P_j(t) P_l(-t) + t^2 [P_j(t) P_l'(-t) + P_j'(t) P_l(-t)]
/// ```
pub fn half_wronskian_polynomial(j: u32, l: u32) -> RationalPoly {
    let pj = ChiPolynomial::new(j).poly;
    let pl = ChiPolynomial::new(l).poly;
    let pl_reflected = pl.reflect();
    let dpl_reflected = pl.derivative().reflect();
    let dpj = pj.derivative();
    let product = &pj * &pl_reflected;
    let bracket = &(&pj * &dpl_reflected) + &(&dpj * &pl_reflected);
    &product + &bracket.shift(2)
}

/// Floating-point coefficients `c_S`, built by the same ratio recurrence.
#[cfg(test)]
pub(crate) fn chi_coefficients(l: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(l as usize + 1);
    let mut c = 1.0_f64;
    out.push(c);
    for s in 0..l {
        c *= f64::from(l + s + 1) * f64::from(l - s) / f64::from(s + 1);
        out.push(c);
    }
    out
}

fn check_nonzero(z: Complex64) -> Result<()> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("chi_l has a pole at z = 0".into()));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("chi_l argument is not finite: {z}")));
    }
    Ok(())
}

/// `sum_{S=0}^{min(l, s_max)} c_S t^S`, summed term by term so that large `l`
/// cannot overflow the individual coefficients.
pub(crate) fn chi_partial_sum(l: u32, t: Complex64, s_max: u32) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for s in 0..l.min(s_max) {
        term *= t * (f64::from(l + s + 1) * f64::from(l - s) / f64::from(s + 1));
        sum += term;
    }
    sum
}

/// `exp(z) chi_l(z) = sum_S c_S (2z)^{-S}`.
///
/// For `l < |z|` the terms of the finite sum grow well past its value and
/// cancel, so it is evaluated by the upward recurrence
/// `chi_{l+1} = chi_{l-1} + (2l+1)/z chi_l` instead; `chi_l` is the dominant
/// solution of that recurrence for every `z`.
pub fn chi_scaled(l: u32, z: Complex64) -> Result<Complex64> {
    check_nonzero(z)?;
    let inv = z.inv();
    let mut prev = Complex64::new(1.0, 0.0);
    if l == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 + inv;
    for n in 1..l {
        let next = prev + cur * inv * f64::from(2 * n + 1);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `chi_l(z)` for integer `l` and nonzero complex `z`.
pub fn chi(l: u32, z: Complex64) -> Result<Complex64> {
    Ok((-z).exp() * chi_scaled(l, z)?)
}
