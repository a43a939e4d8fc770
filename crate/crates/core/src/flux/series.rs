//! The far-field expansion of the differential flux in powers of `1/(2kR)`,
//! written with bilinears of `f` and powers of the angular operator `L`, and
//! an exact check of those coefficients against the Wronskian series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::wronskian::{delta, wronskian_series};

/// A bilinear of `g_a = L^a f` at one direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bilinear {
    /// `|g_a|^2`
    Abs(u32),
    /// `Re(conj(g_a) g_b)`
    Re(u32, u32),
    /// `Im(conj(g_a) g_b)`
    Im(u32, u32),
}

/// One term `(num/den) * bilinear`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesTerm {
    pub num: i64,
    pub den: i64,
    pub form: Bilinear,
}

const fn term(num: i64, den: i64, form: Bilinear) -> SeriesTerm {
    SeriesTerm { num, den, form }
}

use Bilinear::{Abs, Im, Re};

/// Coefficient of `(2kR)^{-p}` in the bracket, for `p = 0..=4`.
///
/// The first-order term `-(1/kR) Im[f* L f]` is stored as `-2 Im(0,1)` in
/// units of `1/(2kR)`.
pub const PRINTED_SERIES: [&[SeriesTerm]; 5] = [
    &[term(1, 1, Abs(0))],
    &[term(-2, 1, Im(0, 1))],
    &[term(1, 1, Abs(1)), term(-1, 1, Re(0, 2))],
    &[
        term(1, 3, Im(0, 3)),
        term(-1, 1, Im(1, 2)),
        term(-2, 3, Im(0, 2)),
    ],
    &[
        term(3, 12, Abs(2)),
        term(1, 12, Re(0, 4)),
        term(-4, 12, Re(1, 3)),
        term(12, 12, Re(0, 2)),
        term(-12, 12, Abs(1)),
        term(-8, 12, Re(0, 3)),
        term(8, 12, Re(1, 2)),
    ],
];

/// Highest order of `1/(2kR)` available in [`PRINTED_SERIES`].
pub const MAX_ORDER: u32 = 4;

/// Gaussian rational `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn add_assign(&mut self, other: &Self) {
        self.re += &other.re;
        self.im += &other.im;
    }
}

impl std::fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            write!(f, "{} {sign} {}i", self.re, self.im.abs())
        }
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow(x: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Coefficient multiplying `conj(a_l) a_j` when `form` is expanded over modes
/// `a_l = sum_m B^{lm} Y_l^m`. `L^a` acts on `a_l` as `[l(l+1)]^a`.
pub fn pair_coefficient(form: Bilinear, l: u32, j: u32) -> ExactComplex {
    let lq = int(i64::from(l) * i64::from(l + 1));
    let jq = int(i64::from(j) * i64::from(j + 1));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    match form {
        Abs(a) => ExactComplex {
            re: pow(&lq, a) * pow(&jq, a),
            im: BigRational::zero(),
        },
        Re(a, b) => ExactComplex {
            re: (pow(&lq, a) * pow(&jq, b) + pow(&jq, a) * pow(&lq, b)) * &half,
            im: BigRational::zero(),
        },
        // (x - conj x)/(2i) = -i (x - conj x)/2
        Im(a, b) => ExactComplex {
            re: BigRational::zero(),
            im: -(pow(&lq, a) * pow(&jq, b) - pow(&jq, a) * pow(&lq, b)) * &half,
        },
    }
}

/// Pair coefficient of `(2kR)^{-p}` implied by [`PRINTED_SERIES`].
pub fn printed_pair_coefficient(order: u32, l: u32, j: u32) -> ExactComplex {
    let mut acc = ExactComplex::zero();
    for t in PRINTED_SERIES[order as usize] {
        let c = pair_coefficient(t.form, l, j);
        let scale = BigRational::new(BigInt::from(t.num), BigInt::from(t.den));
        acc.add_assign(&ExactComplex {
            re: c.re * &scale,
            im: c.im * &scale,
        });
    }
    acc
}

/// Pair coefficient of `(2kR)^{-p}` from the Wronskian: with `z = -ikR`,
/// `1/(2z) = i/(2kR)`, so the coefficient is `i^p Delta A_{p-1} / p`.
pub fn exact_pair_coefficient(order: u32, l: u32, j: u32) -> ExactComplex {
    if order == 0 {
        return ExactComplex {
            re: BigRational::one(),
            im: BigRational::zero(),
        };
    }
    let series = wronskian_series(j, l);
    let value = int(delta(j, l)) * series.a(order as usize - 1) / int(i64::from(order));
    match order % 4 {
        0 => ExactComplex {
            re: value,
            im: BigRational::zero(),
        },
        1 => ExactComplex {
            re: BigRational::zero(),
            im: value,
        },
        2 => ExactComplex {
            re: -value,
            im: BigRational::zero(),
        },
        _ => ExactComplex {
            re: BigRational::zero(),
            im: -value,
        },
    }
}

/// One comparison of printed and exact pair coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesCheck {
    pub order: u32,
    pub l: u32,
    pub j: u32,
    pub printed: ExactComplex,
    pub exact: ExactComplex,
}

impl SeriesCheck {
    pub fn agrees(&self) -> bool {
        self.printed == self.exact
    }
}

/// Compares the printed series with the Wronskian coefficients for every
/// order `0..=4` and every mode pair with `l, j <= l_max`.
pub fn printed_series_diagnostic(l_max: u32) -> Vec<SeriesCheck> {
    let mut out = Vec::new();
    for order in 0..=MAX_ORDER {
        for l in 0..=l_max {
            for j in 0..=l_max {
                out.push(SeriesCheck {
                    order,
                    l,
                    j,
                    printed: printed_pair_coefficient(order, l, j),
                    exact: exact_pair_coefficient(order, l, j),
                });
            }
        }
    }
    out
}
