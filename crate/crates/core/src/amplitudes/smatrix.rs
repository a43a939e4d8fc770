use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::channels::ChannelSet;
use super::partial_wave::PartialWaveAmplitude;
use crate::error::{Error, Result};
use crate::special::{lm_index, regular_psi, riccati_neumann, sph_harm_all, UnitVector};

/// Largest `|S^dagger S - 1|` entry accepted by [`amplitudes_from_smatrix`].
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// One `N x N` S-matrix per orbital momentum `l = 0..=L_max`.
///
/// Entry `(beta, alpha)` is the transition from entrance `alpha` to exit `beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct SMatrixModel {
    matrices: Vec<DMatrix<Complex64>>,
}

impl SMatrixModel {
    pub fn new(matrices: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::InvalidArgument(
                "S-matrix model needs at least l = 0".into(),
            ));
        };
        let n = first.nrows();
        if n == 0 {
            return Err(Error::InvalidArgument("S-matrix has no channels".into()));
        }
        for (l, s) in matrices.iter().enumerate() {
            if s.nrows() != n || s.ncols() != n {
                return Err(Error::InvalidArgument(format!(
                    "S_{l} is {}x{}, expected {n}x{n}",
                    s.nrows(),
                    s.ncols()
                )));
            }
        }
        Ok(Self { matrices })
    }

    /// Identity S-matrix (no scattering) for every `l <= l_max`.
    pub fn identity(n: usize, l_max: u32) -> Result<Self> {
        Self::new(vec![DMatrix::identity(n, n); l_max as usize + 1])
    }

    pub fn channel_count(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn l_max(&self) -> u32 {
        (self.matrices.len() - 1) as u32
    }

    pub fn matrix(&self, l: u32) -> Option<&DMatrix<Complex64>> {
        self.matrices.get(l as usize)
    }

    pub fn matrices(&self) -> &[DMatrix<Complex64>] {
        &self.matrices
    }

    /// Largest entry of `|S_l^dagger S_l - 1|` over all `l`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.channel_count();
        let id = DMatrix::<Complex64>::identity(n, n);
        self.matrices
            .iter()
            .map(|s| {
                (s.adjoint() * s - &id)
                    .iter()
                    .map(|c| c.norm())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Hard-sphere phase shift with `tan delta_l = j_l(ka) / y_l(ka)`.
pub fn hard_sphere_phase_shift(l: u32, ka: f64) -> Result<f64> {
    let j = regular_psi(l, ka)?;
    let y = riccati_neumann(l, ka)?;
    Ok((j / y).atan())
}

/// Single-channel hard sphere of radius `a`: `S_l = (y_l + i j_l)/(y_l - i j_l)`.
pub fn hard_sphere_model(k: f64, a: f64, l_max: u32) -> Result<SMatrixModel> {
    if !(k.is_finite() && k > 0.0 && a.is_finite() && a > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "hard sphere needs k > 0 and a > 0, got k = {k}, a = {a}"
        )));
    }
    let ka = k * a;
    let matrices = (0..=l_max)
        .map(|l| {
            let j = regular_psi(l, ka)?;
            let y = riccati_neumann(l, ka)?;
            let s = Complex64::new(y, j) / Complex64::new(y, -j);
            Ok(DMatrix::from_element(1, 1, s))
        })
        .collect::<Result<Vec<_>>>()?;
    SMatrixModel::new(matrices)
}

/// Haar-distributed `n x n` unitary matrix (QR of a complex Ginibre matrix).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        col *= phase;
    }
    q
}

/// Independent random unitary S-matrices for `l = 0..=l_max`.
pub fn random_smatrix_model<R: Rng + ?Sized>(
    n: usize,
    l_max: u32,
    rng: &mut R,
) -> Result<SMatrixModel> {
    SMatrixModel::new((0..=l_max).map(|_| random_unitary(n, rng)).collect())
}

/// Partial-wave amplitudes out of the entrance channel of `channels`:
/// `B^{l0}_{beta alpha} = sqrt(4 pi (2l+1)) (S_{l,beta alpha} - delta_{beta alpha}) / (2i sqrt(k_alpha k_beta))`
/// for incidence along `+z`, rotated rigidly to `incident` otherwise.
pub fn amplitudes_from_smatrix(
    model: &SMatrixModel,
    channels: &ChannelSet,
    incident: &UnitVector,
) -> Result<PartialWaveAmplitude> {
    if model.channel_count() != channels.len() {
        return Err(Error::InvalidArgument(format!(
            "S-matrix has {} channels but the channel set has {}",
            model.channel_count(),
            channels.len()
        )));
    }
    let defect = model.unitarity_defect();
    if !(defect <= UNITARITY_TOLERANCE) {
        return Err(Error::NonUnitary(defect));
    }
    let alpha = channels.entrance();
    let k_alpha = channels.entrance_k();
    let mut f = PartialWaveAmplitude::new();
    for (l, s) in model.matrices().iter().enumerate() {
        let norm = (4.0 * std::f64::consts::PI * (2 * l + 1) as f64).sqrt();
        for beta in 0..channels.len() {
            let delta = if beta == alpha { 1.0 } else { 0.0 };
            let t = s[(beta, alpha)] - delta;
            if t.re == 0.0 && t.im == 0.0 {
                continue;
            }
            let k_beta = channels.k(beta)?;
            let b = t * norm / (Complex64::new(0.0, 2.0) * (k_alpha * k_beta).sqrt());
            f.insert(beta, l as u32, 0, b)?;
        }
    }
    rotate_axial(&f, incident)
}

/// Re-expresses an axially symmetric amplitude (incidence `+z`, `m = 0` only)
/// for incidence along `incident`:
/// `B^{lm}(kappa) = B^{l0} sqrt(4 pi/(2l+1)) conj(Y_l^m(kappa))`.
pub fn rotate_axial(
    f: &PartialWaveAmplitude,
    incident: &UnitVector,
) -> Result<PartialWaveAmplitude> {
    if f.incident() == incident {
        return Ok(f.clone());
    }
    if !f.is_axially_symmetric() {
        let beta = f.iter().find(|(k, _)| k.m != 0).map_or(0, |(k, _)| k.beta);
        return Err(Error::NotRotatable(beta));
    }
    let Some(l_max) = f.l_max() else {
        return Ok(PartialWaveAmplitude::with_incident(*incident));
    };
    let ylm = sph_harm_all::<f64>(l_max, incident);
    let mut out = PartialWaveAmplitude::with_incident(*incident);
    for (key, b) in f.iter() {
        let l = key.l;
        let scale = (4.0 * std::f64::consts::PI / f64::from(2 * l + 1)).sqrt();
        for m in -(l as i32)..=(l as i32) {
            let c = b * scale * ylm[lm_index(l, m)].conj();
            if c.re != 0.0 || c.im != 0.0 {
                out.insert(key.beta, l, m, c)?;
            }
        }
    }
    Ok(out)
}

/// Amplitudes out of every entrance channel, as needed by the unitarity
/// relation, which pairs `f_{beta gamma}` with `f_{beta alpha}` and
/// `f_{alpha gamma}` with `f_{gamma alpha}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AmplitudeFamily {
    members: BTreeMap<usize, PartialWaveAmplitude>,
}

impl AmplitudeFamily {
    pub fn new() -> Self {
        Self::default()
    }

    /// Amplitudes for every entrance channel of a unitary model, incidence `+z`.
    pub fn from_smatrix(model: &SMatrixModel, channels: &ChannelSet) -> Result<Self> {
        let mut family = Self::new();
        for alpha in 0..channels.len() {
            let cs = channels.with_entrance(alpha)?;
            family.insert(
                alpha,
                amplitudes_from_smatrix(model, &cs, &UnitVector::z_axis())?,
            );
        }
        Ok(family)
    }

    pub fn insert(&mut self, entrance: usize, f: PartialWaveAmplitude) {
        self.members.insert(entrance, f);
    }

    pub fn entrances(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.keys().copied()
    }

    pub fn get(&self, entrance: usize) -> Result<&PartialWaveAmplitude> {
        self.members
            .get(&entrance)
            .ok_or(Error::MissingReciprocal(entrance))
    }

    /// Amplitude out of `entrance` for incidence along `incident`.
    pub fn oriented(&self, entrance: usize, incident: &UnitVector) -> Result<PartialWaveAmplitude> {
        rotate_axial(self.get(entrance)?, incident)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            members: self
                .members
                .iter()
                .map(|(a, f)| (*a, f.scaled(factor)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=5 {
            let model = random_smatrix_model(n, 3, &mut rng).unwrap();
            assert!(model.unitarity_defect() < 1e-13);
        }
    }

    #[test]
    fn hard_sphere_s_wave_and_unit_modulus() {
        let ka = 0.8;
        let delta0 = hard_sphere_phase_shift(0, ka).unwrap();
        assert_relative_eq!(delta0, -ka, max_relative = 1e-13);
        let model = hard_sphere_model(2.0, 0.4, 10).unwrap();
        for l in 0..=10 {
            assert_relative_eq!(
                model.matrix(l).unwrap()[(0, 0)].norm(),
                1.0,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn p_wave_low_energy_limit() {
        let ka = 0.01;
        let delta1 = hard_sphere_phase_shift(1, ka).unwrap();
        assert_relative_eq!(delta1, -ka.powi(3) / 3.0, max_relative = 0.01);
    }

    #[test]
    fn identity_model_gives_zero_amplitude() {
        let cs = ChannelSet::single(1.3).unwrap();
        let f = amplitudes_from_smatrix(
            &SMatrixModel::identity(1, 4).unwrap(),
            &cs,
            &UnitVector::z_axis(),
        )
        .unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn non_unitary_model_is_rejected() {
        let cs = ChannelSet::single(1.0).unwrap();
        let s = DMatrix::from_element(1, 1, Complex64::new(1.1, 0.0));
        let model = SMatrixModel::new(vec![s]).unwrap();
        assert!(matches!(
            amplitudes_from_smatrix(&model, &cs, &UnitVector::z_axis()),
            Err(Error::NonUnitary(_))
        ));
    }

    #[test]
    fn single_partial_wave_modulus() {
        let k = 1.7;
        let delta = 0.6f64;
        let l = 2usize;
        let mut mats = vec![DMatrix::identity(1, 1); 3];
        mats[l] = DMatrix::from_element(1, 1, Complex64::from_polar(1.0, 2.0 * delta));
        let model = SMatrixModel::new(mats).unwrap();
        let cs = ChannelSet::single(k).unwrap();
        let f = amplitudes_from_smatrix(&model, &cs, &UnitVector::z_axis()).unwrap();
        let want = (4.0 * std::f64::consts::PI * 5.0).sqrt() * delta.sin().abs() / k;
        assert_relative_eq!(f.get(0, 2, 0).norm(), want, max_relative = 1e-14);
    }

    #[test]
    fn rotation_matches_legendre_form() {
        let model = hard_sphere_model(1.0, 1.2, 5).unwrap();
        let cs = ChannelSet::single(1.0).unwrap();
        let z = amplitudes_from_smatrix(&model, &cs, &UnitVector::z_axis()).unwrap();
        let kappa = UnitVector::new(0.3, -0.5, 0.8).unwrap();
        let rotated = rotate_axial(&z, &kappa).unwrap();
        // f depends only on n . kappa
        let n = UnitVector::new(-0.2, 0.9, 0.1).unwrap();
        let cos = n.dot(&kappa);
        let n_z = UnitVector::from_angles(cos.acos(), 0.0);
        let a = rotated.evaluate(&cs, 0, &n).unwrap();
        let b = z.evaluate(&cs, 0, &n_z).unwrap();
        assert!((a - b).norm() < 1e-12 * b.norm());
    }

    #[test]
    fn missing_entrance_is_reported() {
        let family = AmplitudeFamily::new();
        assert!(matches!(family.get(1), Err(Error::MissingReciprocal(1))));
    }
}
