//! Riccati-type free radial solutions on the real axis.
//!
//! The regular solution `psi_l(x) = x j_l(x)` is the combination
//! `(2i)^{-1} [i^{-l} chi_l(-ix) - i^l chi_l(ix)]`. Evaluating that combination
//! directly cancels catastrophically for `x < l`, so it is computed from the
//! ascending series for small `x`, by Miller's downward recurrence for
//! `x < l`, and by upward recurrence for `x >= l`.

use num_complex::Complex64;

use super::chi::chi;
use crate::error::{Error, Result};

fn check_positive(x: f64, what: &str) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("{what} requires x > 0, got {x}")));
    }
    Ok(())
}

/// Ascending series `x j_l(x) = x^{l+1}/(2l+1)!! sum_k (-x^2/2)^k / (k! prod_{i=1}^k (2l+2i+1))`.
fn regular_series(l: u32, x: f64) -> f64 {
    let mut prefactor = x;
    for i in 1..=l {
        prefactor *= x / f64::from(2 * i + 1);
    }
    let half_x2 = 0.5 * x * x;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..=400u32 {
        term *= -half_x2 / (f64::from(k) * f64::from(2 * l + 2 * k + 1));
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() && f64::from(k) > half_x2 / f64::from(2 * l + 3) {
            break;
        }
    }
    prefactor * sum
}

/// Upward recurrence `j_{n+1} = (2n+1)/x j_n - j_{n-1}`, stable for `n <= x`.
fn regular_upward(l: u32, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if l == 0 {
        return x * j0;
    }
    let mut prev = j0;
    let mut cur = s / (x * x) - c / x;
    for n in 1..l {
        let next = f64::from(2 * n + 1) / x * cur - prev;
        prev = cur;
        cur = next;
    }
    x * cur
}

/// Miller's algorithm: recur down from well above `l`, then fix the scale
/// against `j_m`, `j_{m-1}` from the stable upward recurrence at `m = floor(x)`.
/// Matching two neighbours avoids dividing by a value near a zero.
fn regular_downward(l: u32, x: f64) -> f64 {
    let m = (x.floor() as u32).clamp(1, l);
    let top = l + 20 + (50.0 * f64::from(l)).sqrt().ceil() as u32;
    let (mut next, mut cur) = (0.0_f64, 1e-300_f64);
    let mut at_l = 0.0;
    let mut at_m = 0.0;
    for n in (m - 1..=top).rev() {
        if n == l {
            at_l = cur;
        }
        if n == m {
            at_m = cur;
        }
        if n == m - 1 {
            break;
        }
        let prev = f64::from(2 * n + 1) / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            at_l *= 1e-250;
            at_m *= 1e-250;
        }
    }
    let norm = at_m.abs().max(cur.abs());
    let (at_l, at_m, at_m1) = (at_l / norm, at_m / norm, cur / norm);
    let (jm, jm1) = (regular_upward(m, x) / x, regular_upward(m - 1, x) / x);
    let scale = (at_m * jm + at_m1 * jm1) / (at_m * at_m + at_m1 * at_m1);
    x * at_l * scale
}

/// Spherical Bessel function `j_l(x)` for `x >= 0`.
pub fn spherical_jn(l: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    let x_abs = x.abs();
    // the series terms decrease from the first one when x^2/2 < 2l + 3
    let value = if 0.5 * x_abs * x_abs < f64::from(2 * l + 3) {
        regular_series(l, x_abs) / x_abs
    } else if x_abs < f64::from(l) {
        regular_downward(l, x_abs) / x_abs
    } else {
        regular_upward(l, x_abs) / x_abs
    };
    if x < 0.0 && l % 2 == 1 {
        -value
    } else {
        value
    }
}

/// Regular free radial solution `psi_l(x) = x j_l(x)` for `x > 0`.
pub fn regular_psi(l: u32, x: f64) -> Result<f64> {
    check_positive(x, "regular_psi")?;
    Ok(x * spherical_jn(l, x))
}

/// Irregular solution `x y_l(x) = -Re[i^{-l} chi_l(-ix)]` for `x > 0`.
///
/// The finite sum has no cancellation here: its modulus is dominated by
/// the largest term for small `x`.
pub fn riccati_neumann(l: u32, x: f64) -> Result<f64> {
    check_positive(x, "riccati_neumann")?;
    let value = chi(l, Complex64::new(0.0, -x))? * i_pow(-(l as i64));
    Ok(-value.re)
}

/// `i^n` for any integer `n`.
pub fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn l_zero_and_one_closed_forms() {
        for &x in &[0.05, 0.7, 3.0, 12.5] {
            assert_relative_eq!(regular_psi(0, x).unwrap(), x.sin(), max_relative = 1e-14);
            let want = x.sin() / x - x.cos();
            assert_relative_eq!(regular_psi(1, x).unwrap(), want, max_relative = 1e-12);
            assert_relative_eq!(
                riccati_neumann(0, x).unwrap(),
                -x.cos(),
                max_relative = 1e-14
            );
            let want_y1 = -x.cos() / x - x.sin();
            assert_relative_eq!(
                riccati_neumann(1, x).unwrap(),
                want_y1,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn series_and_recurrence_agree_at_the_switch() {
        for l in 1..12u32 {
            let x = f64::from(l);
            let a = regular_series(l, x);
            let b = regular_upward(l, x);
            assert_relative_eq!(a, b, max_relative = 1e-11);
        }
    }

    #[test]
    fn non_positive_argument_is_a_domain_error() {
        assert!(regular_psi(2, 0.0).is_err());
        assert!(regular_psi(2, -1.0).is_err());
        assert!(riccati_neumann(2, 0.0).is_err());
    }

    #[test]
    fn regular_solution_is_regular_at_origin() {
        // psi_l(x) / x^{l+1} -> 1/(2l+1)!!
        for l in 0..8u32 {
            let dfact: f64 = (1..=l).map(|i| f64::from(2 * i + 1)).product();
            let x = 1e-4;
            let ratio = regular_psi(l, x).unwrap() / x.powi(l as i32 + 1);
            assert_relative_eq!(ratio, 1.0 / dfact, max_relative = 1e-7);
        }
    }
}
