//! Product Gauss-Legendre x uniform-azimuth quadrature on the unit sphere.

use num_complex::Complex;

use super::harmonics::UnitVector;
use crate::error::{Error, Result};
use crate::numeric::Real;

/// `P_n(x)` and `P_{n-1}(x)` by the three-term recurrence.
fn legendre_pair<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p_prev = T::one();
    let mut p = x;
    for k in 1..n {
        let kf = T::from_usize(k);
        let next = (T::from_usize(2 * k + 1) * x * p - kf * p_prev) / T::from_usize(k + 1);
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

fn newton_step<T: Real>(n: usize, x: T) -> (T, T) {
    let (p, p_prev) = legendre_pair(n, x);
    let nf = T::from_usize(n);
    let dp = nf * (x * p - p_prev) / (x * x - T::one());
    (x - p / dp, dp)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes in decreasing order.
///
/// Nodes are converged in f64 first and then polished in `T`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    if n == 1 {
        nodes.push(T::zero());
        weights.push(T::from_f64(2.0));
        return (nodes, weights);
    }
    for i in 0..n {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = guess;
        for _ in 0..100 {
            let (next, _) = newton_step::<f64>(n, x);
            let done = (next - x).abs() < 1e-15;
            x = next;
            if done {
                break;
            }
        }
        let mut xt = T::from_f64(x);
        for _ in 0..2 {
            xt = newton_step::<T>(n, xt).0;
        }
        let (p, p_prev) = legendre_pair(n, xt);
        let nf = T::from_usize(n);
        let dp = nf * (xt * p - p_prev) / (xt * xt - T::one());
        let w = T::from_f64(2.0) / ((T::one() - xt * xt) * dp * dp);
        nodes.push(xt);
        weights.push(w);
    }
    (nodes, weights)
}

/// Quadrature nodes and weights on the unit sphere.
///
/// `order` is the polynomial degree integrated exactly: every product
/// `Y_l^m conj(Y_j^mu)` with `l + j <= order` integrates to `delta_lj delta_m,mu`.
#[derive(Clone, Debug)]
pub struct AngularGrid<T = f64> {
    order: u32,
    nodes: Vec<UnitVector<T>>,
    weights: Vec<T>,
}

impl<T: Real> AngularGrid<T> {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn nodes(&self) -> &[UnitVector<T>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&UnitVector<T>, T)> {
        self.nodes.iter().zip(self.weights.iter().copied())
    }

    pub fn weight_sum(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, &w| acc + w)
    }

    pub fn integrate<F>(&self, mut f: F) -> Complex<T>
    where
        F: FnMut(&UnitVector<T>) -> Complex<T>,
    {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (n, w) in self.iter() {
            let v = f(n);
            acc.re += w * v.re;
            acc.im += w * v.im;
        }
        acc
    }

    pub fn integrate_real<F>(&self, mut f: F) -> T
    where
        F: FnMut(&UnitVector<T>) -> T,
    {
        self.iter().fold(T::zero(), |acc, (n, w)| acc + w * f(n))
    }
}

/// Product grid exact for spherical polynomials of degree `<= order`.
pub fn gauss_legendre_sphere<T: Real>(order: u32) -> Result<AngularGrid<T>> {
    if order < 1 {
        return Err(Error::InvalidArgument("grid order must be >= 1".into()));
    }
    let n_theta = (order / 2 + 1) as usize;
    let n_phi = (order + 1) as usize;
    let (xs, ws) = gauss_legendre::<T>(n_theta);
    let azimuth_weight = T::from_f64(2.0) * T::pi() / T::from_usize(n_phi);
    let phases: Vec<Complex<T>> = (0..n_phi).map(|k| T::root_of_unity(k, n_phi)).collect();

    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    for (&x, &w) in xs.iter().zip(&ws) {
        let sin_t = ((T::one() - x) * (T::one() + x)).sqrt();
        for phase in &phases {
            nodes.push(UnitVector::from_components(
                sin_t * phase.re,
                sin_t * phase.im,
                x,
            ));
            weights.push(w * azimuth_weight);
        }
    }
    Ok(AngularGrid {
        order,
        nodes,
        weights,
    })
}
