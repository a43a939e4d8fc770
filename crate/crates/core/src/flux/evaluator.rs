use num_complex::Complex;

use super::series::{Bilinear, MAX_ORDER, PRINTED_SERIES};
use super::wronskian::wronskian_series;
use crate::amplitudes::{ChannelSet, PartialWaveAmplitude};
use crate::error::{Error, Result};
use crate::numeric::Real;
use crate::special::{sph_harm_all, AngularGrid, UnitVector};

/// Relative size of the imaginary residue tolerated before a flux value is
/// declared non-Hermitian.
pub const REALNESS_TOLERANCE: f64 = 1e-10;

/// Quadrature degree that integrates every bilinear `conj(Y_l) Y_j`, `l, j <= l_max`,
/// with margin.
pub fn default_grid_order(l_max: u32) -> u32 {
    2 * l_max + 4
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("distance R must be > 0, got {r}")));
    }
    Ok(())
}

struct Exit<T> {
    beta: usize,
    k: f64,
    weight: T,
}

/// Evaluates the finite-distance differential flux of one amplitude set in
/// precision `T`.
///
/// The half-Wronskian polynomials of every mode pair are built once at
/// construction.
pub struct FluxEvaluator<'a, T: Real = f64> {
    l_max: u32,
    exits: Vec<Exit<T>>,
    /// `W_jl` coefficients in `t = 1/(2z)`, at `j * (l_max + 1) + l`.
    wronskians: Vec<Vec<T>>,
    f: &'a PartialWaveAmplitude,
}

impl<'a, T: Real> FluxEvaluator<'a, T> {
    pub fn new(f: &'a PartialWaveAmplitude, channels: &ChannelSet) -> Result<Self> {
        f.validate(channels)?;
        let l_max = f.l_max().unwrap_or(0);
        let exits = f
            .exit_channels()
            .into_iter()
            .map(|beta| {
                Ok(Exit {
                    beta,
                    k: channels.k(beta)?,
                    weight: T::from_f64(channels.flux_weight(beta)?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut wronskians = Vec::with_capacity(((l_max + 1) * (l_max + 1)) as usize);
        for j in 0..=l_max {
            for l in 0..=l_max {
                wronskians.push(wronskian_series(j, l).polynomial().to_real::<T>());
            }
        }
        Ok(Self {
            l_max,
            exits,
            wronskians,
            f,
        })
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn amplitude(&self) -> &PartialWaveAmplitude {
        self.f
    }

    fn wronskian_matrix(&self, k: f64, r: f64) -> Vec<Complex<T>> {
        // z = -ikR, so t = 1/(2z) = i/(2kR)
        let two_kr = T::from_f64(2.0) * T::product(k, r);
        let t = Complex::new(T::zero(), T::one() / two_kr);
        self.wronskians
            .iter()
            .map(|c| crate::poly::horner(c, t))
            .collect()
    }

    fn prepare(&self, r: f64) -> Result<Vec<Vec<Complex<T>>>> {
        check_radius(r)?;
        Ok(self
            .exits
            .iter()
            .map(|e| self.wronskian_matrix(e.k, r))
            .collect())
    }

    fn exact_with(&self, prepared: &[Vec<Complex<T>>], ylm: &[Complex<T>]) -> Result<T> {
        let size = self.l_max as usize + 1;
        let mut total = Complex::new(T::zero(), T::zero());
        let mut scale = T::zero();
        for (exit, w) in self.exits.iter().zip(prepared) {
            let a = self.f.mode_sums(exit.beta, ylm, self.l_max);
            let mut sum = Complex::new(T::zero(), T::zero());
            for (l, al) in a.iter().enumerate() {
                if al.re.is_zero() && al.im.is_zero() {
                    continue;
                }
                let cl = al.conj();
                for (j, aj) in a.iter().enumerate() {
                    let term = cl * aj * w[j * size + l];
                    scale += term.norm_sqr().sqrt();
                    sum = sum + term;
                }
            }
            total = total + sum * exit.weight;
        }
        let residue = total.im.abs();
        if residue > T::from_f64(REALNESS_TOLERANCE) * scale {
            return Err(Error::Hermiticity {
                residue: residue.to_f64(),
                scale: scale.to_f64(),
            });
        }
        Ok(total.re)
    }

    /// Exact differential flux at distance `r` in direction `n`.
    pub fn differential_exact(&self, r: f64, n: &UnitVector<T>) -> Result<T> {
        let prepared = self.prepare(r)?;
        self.exact_with(&prepared, &sph_harm_all(self.l_max, n))
    }

    /// Exact differential flux at every grid node.
    pub fn differential_exact_grid(&self, r: f64, grid: &AngularGrid<T>) -> Result<Vec<T>> {
        let prepared = self.prepare(r)?;
        grid.nodes()
            .iter()
            .map(|n| self.exact_with(&prepared, &sph_harm_all(self.l_max, n)))
            .collect()
    }

    /// `int dOmega dSigma/dOmega` by quadrature.
    pub fn total(&self, r: f64, grid: &AngularGrid<T>) -> Result<T> {
        let values = self.differential_exact_grid(r, grid)?;
        Ok(values
            .iter()
            .zip(grid.weights())
            .fold(T::zero(), |acc, (&v, &w)| acc + v * w))
    }

    /// The bracketed coefficients of `(2 k_beta R)^{-p}`, `p = 0..=4`, for one
    /// exit channel, without the flux weight.
    pub fn series_brackets(&self, beta: usize, n: &UnitVector<T>) -> [T; 5] {
        let ylm = sph_harm_all(self.l_max, n);
        self.brackets_with(beta, &ylm)
    }

    fn brackets_with(&self, beta: usize, ylm: &[Complex<T>]) -> [T; 5] {
        // g_a = L^a f, with the eigenvalues applied in T so that the
        // cancellations between bilinears stay exact
        let mut g = [Complex::new(T::zero(), T::zero()); MAX_ORDER as usize + 1];
        for (l, al) in self
            .f
            .mode_sums(beta, ylm, self.l_max)
            .into_iter()
            .enumerate()
        {
            let eig = T::from_usize(l * (l + 1));
            let mut power = al;
            for ga in g.iter_mut() {
                *ga = *ga + power;
                power = power * eig;
            }
        }
        let mut out = [T::zero(); 5];
        for (p, terms) in PRINTED_SERIES.iter().enumerate() {
            for t in *terms {
                let value = match t.form {
                    Bilinear::Abs(a) => g[a as usize].norm_sqr(),
                    Bilinear::Re(a, b) => (g[a as usize].conj() * g[b as usize]).re,
                    Bilinear::Im(a, b) => (g[a as usize].conj() * g[b as usize]).im,
                };
                out[p] += T::from_f64(t.num as f64) / T::from_f64(t.den as f64) * value;
            }
        }
        out
    }

    /// Weighted sum over exit channels of the series through `(2kR)^{-order}`.
    pub fn differential_asymptotic(&self, r: f64, n: &UnitVector<T>, order: u32) -> Result<T> {
        if order > MAX_ORDER {
            return Err(Error::UnsupportedOrder(order));
        }
        check_radius(r)?;
        let ylm = sph_harm_all(self.l_max, n);
        let mut total = T::zero();
        for exit in &self.exits {
            let b = self.brackets_with(exit.beta, &ylm);
            let x = T::one() / (T::from_f64(2.0) * T::product(exit.k, r));
            let mut power = T::one();
            let mut sum = T::zero();
            for value in b.iter().take(order as usize + 1) {
                sum += *value * power;
                power *= x;
            }
            total += exit.weight * sum;
        }
        Ok(total)
    }

    /// Quadrature of each bracket over the grid, summed over exit channels
    /// with flux weights: entry `p` is `int dOmega` of the `(2kR)^{-p}` coefficient.
    pub fn integrated_brackets(&self, grid: &AngularGrid<T>) -> [T; 5] {
        let mut out = [T::zero(); 5];
        for (n, w) in grid.iter() {
            let ylm = sph_harm_all(self.l_max, n);
            for exit in &self.exits {
                let b = self.brackets_with(exit.beta, &ylm);
                for (acc, v) in out.iter_mut().zip(b) {
                    *acc += w * exit.weight * v;
                }
            }
        }
        out
    }
}

/// Exact differential flux `dSigma_alpha(R)/dOmega(n)`.
pub fn differential_flux_exact(
    f: &PartialWaveAmplitude,
    channels: &ChannelSet,
    r: f64,
    n: &UnitVector,
) -> Result<f64> {
    FluxEvaluator::<f64>::new(f, channels)?.differential_exact(r, n)
}

/// Differential flux from the far-field series through `(2kR)^{-order}`.
pub fn differential_flux_asymptotic(
    f: &PartialWaveAmplitude,
    channels: &ChannelSet,
    r: f64,
    n: &UnitVector,
    order: u32,
) -> Result<f64> {
    FluxEvaluator::<f64>::new(f, channels)?.differential_asymptotic(r, n, order)
}

/// Total scattered flux through the sphere of radius `r`.
pub fn total_flux<T: Real>(
    f: &PartialWaveAmplitude,
    channels: &ChannelSet,
    r: f64,
    grid: &AngularGrid<T>,
) -> Result<T> {
    FluxEvaluator::<T>::new(f, channels)?.total(r, grid)
}
