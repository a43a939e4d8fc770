//! The half-Wronskian `(1/2)[chi_j(z) <-d-> chi_l(-z)]` and its coefficients
//! `A_n(l, j)`.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::Real;
use crate::poly::RationalPoly;
use crate::special::chi::chi_partial_sum;
use crate::special::{gauss_legendre, half_wronskian_polynomial};

/// `j(j+1) - l(l+1)`.
pub fn delta(j: u32, l: u32) -> i64 {
    let (j, l) = (i64::from(j), i64::from(l));
    j * (j + 1) - l * (l + 1)
}

/// `j(j+1) + l(l+1)`.
pub fn upsilon(j: u32, l: u32) -> i64 {
    let (j, l) = (i64::from(j), i64::from(l));
    j * (j + 1) + l * (l + 1)
}

/// The half-Wronskian written as
/// `1 + Delta_jl sum_{n=0}^{l+j} A_n(l,j) / ((n+1) (2z)^{n+1})`.
///
/// For `j == l` the correction is empty and the series is identically 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WronskianSeries {
    j: u32,
    l: u32,
    delta: i64,
    upsilon: i64,
    correction: Vec<BigRational>,
    polynomial: RationalPoly,
}

/// Extracts `A_n(l, j)` from the exact polynomial in `t = 1/(2z)`.
pub fn wronskian_series(j: u32, l: u32) -> WronskianSeries {
    let polynomial = half_wronskian_polynomial(j, l);
    let d = delta(j, l);
    let correction = if d == 0 {
        Vec::new()
    } else {
        let d = BigRational::from_integer(BigInt::from(d));
        (0..=(l + j) as usize)
            .map(|n| polynomial.coeff(n + 1) * BigRational::from_integer(BigInt::from(n + 1)) / &d)
            .collect()
    };
    WronskianSeries {
        j,
        l,
        delta: d,
        upsilon: upsilon(j, l),
        correction,
        polynomial,
    }
}

impl WronskianSeries {
    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn upsilon(&self) -> i64 {
        self.upsilon
    }

    /// Coefficient of `(2z)^0`; always 1.
    pub fn constant_term(&self) -> BigRational {
        self.polynomial.coeff(0)
    }

    /// `A_0 .. A_{l+j}`, empty when `j == l`.
    pub fn correction(&self) -> &[BigRational] {
        &self.correction
    }

    /// `A_n(l, j)`, zero past `l + j`.
    pub fn a(&self, n: usize) -> BigRational {
        self.correction
            .get(n)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// The half-Wronskian as a polynomial in `t = 1/(2z)`.
    pub fn polynomial(&self) -> &RationalPoly {
        &self.polynomial
    }

    /// `1 + Delta sum_n A_n t^{n+1}/(n+1)` rebuilt from the coefficients.
    pub fn resummed(&self) -> RationalPoly {
        let mut coeffs = vec![BigRational::one()];
        let d = BigRational::from_integer(BigInt::from(self.delta));
        for (n, a) in self.correction.iter().enumerate() {
            coeffs.push(&d * a / BigRational::from_integer(BigInt::from(n + 1)));
        }
        RationalPoly::new(coeffs)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_z(z)?;
        Ok(self.polynomial.eval((2.0 * z).inv()))
    }

    /// Evaluates at `t = 1/(2z)` in any precision.
    pub fn eval_t<T: Real>(&self, t: Complex<T>) -> Complex<T> {
        self.polynomial.eval(t)
    }
}

fn check_z(z: Complex64) -> Result<()> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain(
            "the half-Wronskian has a pole at z = 0".into(),
        ));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("argument is not finite: {z}")));
    }
    Ok(())
}

/// `(1/2)[chi_j(z) <-d-> chi_l(-z)]` with the exponentials cancelled exactly.
pub fn half_wronskian_exact(j: u32, l: u32, z: Complex64) -> Result<Complex64> {
    check_z(z)?;
    Ok(half_wronskian_polynomial(j, l).eval((2.0 * z).inv()))
}

/// Numerical value of `1 + (Delta/2) int_z^inf dzeta/zeta^2 chi_l(-zeta) chi_j(zeta)`
/// for real `z > 0`.
///
/// With `u = 1/zeta` the integral runs over `[0, 1/z]`; the product of the two
/// exponentials is 1, so the integrand is `P_l(-u/2) P_j(u/2)` built from the
/// finite sums. Composite Gauss-Legendre panels are doubled until two
/// successive estimates agree.
pub fn integral_representation_check(j: u32, l: u32, z: f64) -> Result<Complex64> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain(format!(
            "integration path needs real z > 0, got {z}"
        )));
    }
    let d = delta(j, l);
    if d == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let integrand = |u: f64| {
        let t = Complex64::new(0.5 * u, 0.0);
        chi_partial_sum(l, -t, l) * chi_partial_sum(j, t, j)
    };
    let (nodes, weights) = gauss_legendre::<f64>(8);
    let upper = 1.0 / z;
    let estimate = |panels: usize| {
        let h = upper / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in nodes.iter().zip(&weights) {
                acc += integrand(mid + 0.5 * h * x) * (0.5 * h * w);
            }
        }
        acc
    };
    let mut prev = estimate(1);
    let mut panels = 1;
    for _ in 0..16 {
        panels *= 2;
        let next = estimate(panels);
        let diff = (next - prev).norm();
        if diff <= 1e-14 * next.norm().max(f64::MIN_POSITIVE) {
            return Ok(1.0 + 0.5 * d as f64 * next);
        }
        prev = next;
    }
    Err(Error::NotConverged(format!(
        "integral form for (j, l) = ({j}, {l}) at z = {z} did not settle after {panels} panels"
    )))
}
