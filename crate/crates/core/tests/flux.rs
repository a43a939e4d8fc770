use nearfield_core::amplitudes::{
    amplitudes_from_smatrix, hard_sphere_model, hard_sphere_phase_shift, random_amplitude,
    random_channels, random_smatrix_model, Channel, ChannelSet, PartialWaveAmplitude, WeightMode,
};
use nearfield_core::flux::{
    cross_sections, delta, differential_flux_asymptotic, differential_flux_exact,
    half_wronskian_exact, integral_representation_check, optical_theorem_defect,
    optical_theorem_defect_at, printed_series_diagnostic, total_flux, unitarity_defect, upsilon,
    wronskian_series, FluxEvaluator,
};
use nearfield_core::special::{gauss_legendre_sphere, sph_harm, UnitVector};
use nearfield_core::{AmplitudeFamily, DoubleDouble, SMatrixModel};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn directions() -> Vec<UnitVector> {
    vec![
        UnitVector::z_axis(),
        UnitVector::new(0.3, -0.8, 0.1).unwrap(),
        UnitVector::new(-0.5, 0.2, -0.9).unwrap(),
        UnitVector::from_angles(2.0, 4.0),
    ]
}

#[test]
fn low_order_wronskian_coefficients() {
    for j in 0..=8u32 {
        for l in 0..=8u32 {
            let w = wronskian_series(j, l);
            assert_eq!(w.constant_term(), BigRational::one());
            assert_eq!(w.resummed(), *w.polynomial());
            if j == l {
                assert!(w.correction().is_empty());
                continue;
            }
            let (d, u) = (delta(j, l), upsilon(j, l));
            assert_eq!(w.a(0), BigRational::one(), "A_0({l},{j})");
            assert_eq!(w.a(1), int(d), "A_1({l},{j})");
            assert_eq!(w.a(2), int(d * d) / int(2) - int(u), "A_2({l},{j})");
            assert_eq!(w.correction().len(), (l + j + 1) as usize);
        }
    }
}

#[test]
fn wronskian_table_for_l_three() {
    let want: [&[i64]; 3] = [
        &[1, -12, 60, -120],
        &[1, -10, 36, 0, -240],
        &[1, -6, 0, 96, 0, -1440],
    ];
    for (j, row) in want.iter().enumerate() {
        let w = wronskian_series(j as u32, 3);
        let got: Vec<BigRational> = w.correction().to_vec();
        let row: Vec<BigRational> = row.iter().map(|&x| int(x)).collect();
        assert_eq!(got, row, "j = {j}");
    }
    assert!(wronskian_series(3, 3).correction().is_empty());
}

#[test]
fn half_wronskian_examples() {
    let z = c(0.7, -2.1);
    for l in 0..6 {
        assert_eq!(half_wronskian_exact(l, l, z).unwrap(), c(1.0, 0.0));
    }
    // j=1, l=0: Delta = 2, A = [1, 2]
    let want = 1.0 + 1.0 / z + 1.0 / (2.0 * z * z);
    assert!((half_wronskian_exact(1, 0, z).unwrap() - want).norm() < 1e-15);
    let far = half_wronskian_exact(4, 2, c(1e8, 0.0)).unwrap();
    assert!((far - 1.0).norm() < 1e-6);
    assert!(half_wronskian_exact(1, 2, c(0.0, 0.0)).is_err());
}

#[test]
fn hermitian_pairing() {
    for (j, l) in [(0, 3), (2, 5), (4, 1)] {
        for kr in [0.4, 3.0, 50.0] {
            let z = c(0.0, -kr);
            let a = half_wronskian_exact(j, l, z).unwrap();
            // real coefficients in 1/(2z) on the imaginary axis
            let reversed = half_wronskian_exact(l, j, -z).unwrap();
            let swapped = half_wronskian_exact(l, j, z).unwrap();
            assert!(
                (a - reversed).norm() < 1e-13 * a.norm(),
                "({j},{l}) at {kr}"
            );
            assert!(
                (a - swapped.conj()).norm() < 1e-13 * a.norm(),
                "({j},{l}) at {kr}"
            );
        }
    }
}

#[test]
fn integral_form_matches_polynomial() {
    for (j, l, z) in [(1, 0, 2.0), (3, 0, 5.0), (2, 4, 1.5), (5, 5, 0.3)] {
        let a = integral_representation_check(j, l, z).unwrap();
        let b = half_wronskian_exact(j, l, c(z, 0.0)).unwrap();
        assert!(
            (a - b).norm() < 1e-8 * b.norm(),
            "({j},{l},{z}): {a} vs {b}"
        );
    }
    assert!(integral_representation_check(1, 0, -1.0).is_err());
}

#[test]
fn single_mode_flux_ignores_distance() {
    let cs = ChannelSet::new(
        vec![Channel::new("a", 2.0), Channel::new("b", 0.5)],
        0,
        WeightMode::MomentumRatio,
    )
    .unwrap();
    let b = c(-0.3, 0.9);
    let f = PartialWaveAmplitude::new().with_mode(1, 4, 3, b).unwrap();
    for n in directions() {
        let want = 0.25 * b.norm_sqr() * sph_harm(4, 3, &n).unwrap().norm_sqr();
        for r in [0.01, 0.7, 30.0, 1e5] {
            let got = differential_flux_exact(&f, &cs, r, &n).unwrap();
            assert!((got - want).abs() <= 1e-14 * want, "r = {r}");
        }
    }
}

#[test]
fn far_field_is_the_cross_section_integrand() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let cs = random_channels(&mut rng, 3, (0.5, 2.0));
    let f = random_amplitude(&mut rng, 3, 5, 0.8);
    let r = 1e6
        / cs.channels()
            .iter()
            .map(|ch| ch.k)
            .fold(f64::INFINITY, f64::min);
    for n in directions() {
        let want: f64 = (0..3)
            .map(|beta| {
                cs.flux_weight(beta).unwrap() * f.evaluate(&cs, beta, &n).unwrap().norm_sqr()
            })
            .sum();
        let got = differential_flux_exact(&f, &cs, r, &n).unwrap();
        assert!((got - want).abs() < 1e-5 * want);
    }
}

#[test]
fn two_low_modes_end_at_second_order() {
    let k = 1.3;
    let cs = ChannelSet::single(k).unwrap();
    let f = PartialWaveAmplitude::new()
        .with_mode(0, 0, 0, c(0.8, -0.4))
        .unwrap()
        .with_mode(0, 1, 0, c(-0.2, 1.1))
        .unwrap();
    let r = 5.0 / k;
    let eval = FluxEvaluator::<f64>::new(&f, &cs).unwrap();
    for n in directions() {
        let exact = eval.differential_exact(r, &n).unwrap();
        let second = eval.differential_asymptotic(r, &n, 2).unwrap();
        let third = eval.series_brackets(0, &n)[3] / (2.0 * k * r).powi(3);
        assert!((exact - second).abs() <= third.abs() + 1e-13 * exact.abs());
    }
}

#[test]
fn single_l_series_has_no_corrections() {
    let cs = ChannelSet::single(0.8).unwrap();
    let f = PartialWaveAmplitude::new()
        .with_mode(0, 3, -1, c(0.4, 0.3))
        .unwrap()
        .with_mode(0, 3, 2, c(-1.0, 0.2))
        .unwrap();
    // the order-4 bracket carries [l(l+1)]^4 cancellations, so sum in double-double
    let eval = FluxEvaluator::<DoubleDouble>::new(&f, &cs).unwrap();
    for n in directions() {
        let n = UnitVector::<DoubleDouble>::from_f64(&n);
        let base = eval.differential_asymptotic(2.0, &n, 0).unwrap().to_f64();
        for order in 1..=4 {
            for r in [0.5, 2.0, 40.0] {
                let v = eval.differential_asymptotic(r, &n, order).unwrap().to_f64();
                assert!(
                    (v - base).abs() <= 1e-12 * base,
                    "order {order}, r = {r}: {v} vs {base}"
                );
            }
        }
    }
}

#[test]
fn first_order_term_by_hand() {
    let k = 0.9;
    let cs = ChannelSet::single(k).unwrap();
    let (b0, b1) = (c(0.5, 0.7), c(-1.2, 0.4));
    let f = PartialWaveAmplitude::new()
        .with_mode(0, 0, 0, b0)
        .unwrap()
        .with_mode(0, 1, 0, b1)
        .unwrap();
    for n in directions() {
        let y1 = sph_harm(1, 0, &n).unwrap();
        let fv = b0 * sph_harm(0, 0, &n).unwrap() + b1 * y1;
        for r in [3.0, 17.0] {
            let want = -(fv.conj() * 2.0 * b1 * y1).im / (k * r);
            let got = differential_flux_asymptotic(&f, &cs, r, &n, 1).unwrap()
                - differential_flux_asymptotic(&f, &cs, r, &n, 0).unwrap();
            assert!((got - want).abs() < 1e-14 * fv.norm_sqr());
        }
    }
}

#[test]
fn correction_terms_integrate_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cs = random_channels(&mut rng, 2, (0.3, 3.0));
    let f = random_amplitude(&mut rng, 2, 6, 0.9);
    let grid = gauss_legendre_sphere::<f64>(16).unwrap();
    let b = FluxEvaluator::<f64>::new(&f, &cs)
        .unwrap()
        .integrated_brackets(&grid);
    for (p, v) in b.iter().enumerate().skip(1) {
        assert!(v.abs() < 1e-10 * b[0], "order {p}: {v:e}");
    }
}

#[test]
fn printed_series_agrees_with_wronskians() {
    let checks = printed_series_diagnostic(4);
    assert!(!checks.is_empty());
    for check in checks {
        assert!(check.agrees(), "{check:?}");
    }
}

#[test]
fn cross_section_examples() {
    let cs = ChannelSet::new(
        vec![Channel::new("a", 2.0), Channel::new("b", 3.0)],
        0,
        WeightMode::MomentumRatio,
    )
    .unwrap();
    let v = c(1.5, -0.5);
    let f = PartialWaveAmplitude::new().with_mode(1, 0, 0, v).unwrap();
    let x = cross_sections(&f, &cs).unwrap();
    assert!((x.total() - 1.5 * v.norm_sqr()).abs() < 1e-15);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cs = random_channels(&mut rng, 3, (0.4, 2.5));
    let f = random_amplitude(&mut rng, 3, 7, 0.5);
    assert!(cross_sections(&f, &cs).unwrap().path_disagreement() < 1e-10);
}

#[test]
fn hard_sphere_cross_section() {
    let (k, a) = (1.0, 0.5);
    let cs = ChannelSet::single(k).unwrap();
    let f = amplitudes_from_smatrix(
        &hard_sphere_model(k, a, 8).unwrap(),
        &cs,
        &UnitVector::z_axis(),
    )
    .unwrap();
    let sigma = cross_sections(&f, &cs).unwrap().total();
    let want: f64 = (0..=8u32)
        .map(|l| {
            4.0 * PI
                * f64::from(2 * l + 1)
                * hard_sphere_phase_shift(l, k * a).unwrap().sin().powi(2)
                / (k * k)
        })
        .sum();
    assert!((sigma - want).abs() < 0.01 * want);
    let s_wave = 4.0 * PI * (k * a).sin().powi(2) / (k * k);
    assert!(sigma > s_wave && sigma < 1.2 * s_wave);
}

#[test]
fn total_flux_is_distance_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let cs = random_channels(&mut rng, 3, (0.5, 1.5));
    let f = random_amplitude(&mut rng, 3, 4, 0.8);
    let sigma = cross_sections(&f, &cs).unwrap().total();
    let k = cs.entrance_k();
    let grid = gauss_legendre_sphere::<DoubleDouble>(12).unwrap();
    for kr in [0.5, 2.0, 100.0] {
        let total = total_flux(&f, &cs, kr / k, &grid).unwrap().to_f64();
        assert!(
            (total - sigma).abs() < 1e-9 * sigma,
            "kR = {kr}: {total} vs {sigma}"
        );
    }

    let cs = ChannelSet::single(2.0).unwrap();
    let b = c(0.3, 0.4);
    let f = PartialWaveAmplitude::new().with_mode(0, 2, 1, b).unwrap();
    let grid = gauss_legendre_sphere::<f64>(8).unwrap();
    for r in [0.1, 10.0] {
        assert!((total_flux(&f, &cs, r, &grid).unwrap() - b.norm_sqr()).abs() < 1e-14);
    }
}

fn directions_for_unitarity() -> Vec<UnitVector> {
    vec![
        UnitVector::z_axis(),
        UnitVector::new(1.0, 0.5, -0.3).unwrap(),
        UnitVector::from_angles(2.5, -1.0),
    ]
}

#[test]
fn unitarity_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cs = random_channels(&mut rng, 3, (0.5, 2.0));
    let model = random_smatrix_model(3, 3, &mut rng).unwrap();
    let family = AmplitudeFamily::from_smatrix(&model, &cs).unwrap();
    let dirs = directions_for_unitarity();
    assert!(unitarity_defect(&family, &cs, &dirs, &dirs).unwrap() < 1e-10);
    let broken = family.scaled(c(1.1, 0.0));
    assert!(unitarity_defect(&broken, &cs, &dirs, &dirs).unwrap() > 0.01);

    let quiet = AmplitudeFamily::from_smatrix(&SMatrixModel::identity(3, 2).unwrap(), &cs).unwrap();
    assert_eq!(unitarity_defect(&quiet, &cs, &dirs, &dirs).unwrap(), 0.0);

    let mut partial = AmplitudeFamily::new();
    partial.insert(0, family.get(0).unwrap().clone());
    assert!(unitarity_defect(&partial, &cs, &dirs, &dirs).is_err());
}

#[test]
fn optical_theorem_examples() {
    let cs = ChannelSet::single(1.3).unwrap();
    let f = amplitudes_from_smatrix(
        &hard_sphere_model(1.3, 0.8, 8).unwrap(),
        &cs,
        &UnitVector::z_axis(),
    )
    .unwrap();
    assert!(optical_theorem_defect(&f, &cs).unwrap() < 1e-10);
    let grid = gauss_legendre_sphere::<DoubleDouble>(20).unwrap();
    for r in [0.4, 5.0, 300.0] {
        assert!(optical_theorem_defect_at(&f, &cs, r, &grid).unwrap() < 1e-10);
    }

    let real = PartialWaveAmplitude::new()
        .with_mode(0, 2, 0, c(0.6, 0.0))
        .unwrap();
    assert!((optical_theorem_defect(&real, &cs).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(
        optical_theorem_defect(&PartialWaveAmplitude::new(), &cs).unwrap(),
        0.0
    );
}

#[test]
fn multichannel_optical_theorem_in_any_direction() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let cs = random_channels(&mut rng, 3, (0.5, 2.0));
    let model = random_smatrix_model(3, 4, &mut rng).unwrap();
    let family = AmplitudeFamily::from_smatrix(&model, &cs).unwrap();
    for alpha in 0..3 {
        let entrance = cs.with_entrance(alpha).unwrap();
        let f = family
            .oriented(alpha, &UnitVector::new(0.2, -0.6, 0.4).unwrap())
            .unwrap();
        assert!(optical_theorem_defect(&f, &entrance).unwrap() < 1e-10);
    }
}

#[test]
fn flux_is_positive_away_from_the_scatterer() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let grid = gauss_legendre_sphere::<f64>(20).unwrap();
    for _ in 0..5 {
        let cs = random_channels(&mut rng, 2, (0.5, 2.0));
        let model = random_smatrix_model(2, 5, &mut rng).unwrap();
        let f = amplitudes_from_smatrix(&model, &cs, &UnitVector::z_axis()).unwrap();
        let eval = FluxEvaluator::<f64>::new(&f, &cs).unwrap();
        let k_min = cs
            .channels()
            .iter()
            .map(|ch| ch.k)
            .fold(f64::INFINITY, f64::min);
        for kr in [10.0, 40.0, 1000.0] {
            let values = eval.differential_exact_grid(kr / k_min, &grid).unwrap();
            let peak = values.iter().copied().fold(0.0, f64::max);
            assert!(values.iter().all(|&v| v >= -1e-10 * peak), "kR = {kr}");
        }
    }
}

#[test]
fn flux_does_not_depend_on_harmonic_phase_convention() {
    // Rewriting f in the conjugate basis conj(Y_l^m) = (-1)^m Y_l^{-m} and
    // evaluating it with the standard harmonics mirrors the function in phi.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cs = random_channels(&mut rng, 2, (0.5, 2.0));
    let f = random_amplitude(&mut rng, 2, 4, 0.9);
    let mut g = PartialWaveAmplitude::new();
    for (key, v) in f.iter() {
        let sign = if key.m % 2 == 0 { 1.0 } else { -1.0 };
        g.insert(key.beta, key.l, -key.m, v * sign).unwrap();
    }
    for n in directions() {
        let [x, y, z] = n.as_array();
        let mirrored = UnitVector::new(x, -y, z).unwrap();
        for r in [0.3, 4.0, 200.0] {
            let a = differential_flux_exact(&f, &cs, r, &n).unwrap();
            let b = differential_flux_exact(&g, &cs, r, &mirrored).unwrap();
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
        }
    }
}
