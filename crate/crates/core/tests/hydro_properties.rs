use std::f64::consts::PI;

use apnls::harness::InitialData;
use apnls::hydro::{self, cfl_dt, lax_wendroff_sweep, strang_step, HydroModel, HydroState, RunOptions, TimeStep};
use apnls::{spectral, ComplexField, Nonlinearity, PeriodicGrid, RealField, RealVectorField};
use num_complex::Complex64;
use proptest::prelude::*;

fn no_phase(step: TimeStep) -> RunOptions {
    RunOptions {
        time_step: step,
        phase: None,
        ..RunOptions::default()
    }
}

fn order(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[test]
fn cubic_and_general_closure_agree() {
    let g = PeriodicGrid::line(-0.5, 1.5, 256).unwrap();
    let s = InitialData::GaussLogcosh1d.hydro_state(&g, 0.02).unwrap();
    let opts = no_phase(TimeStep::default());
    let cubic = hydro::run(&s, 0.08, &HydroModel::cubic(), &opts).unwrap();
    for nl in [
        Nonlinearity::general(|y| y, |_| 1.0),
        Nonlinearity::CubicQuintic { lambda: 0.0 },
    ] {
        let other = hydro::run(&s, 0.08, &HydroModel::new(nl), &opts).unwrap();
        let scale = cubic.last().a.max_abs();
        for (x, y) in cubic.last().a.values.iter().zip(&other.last().a.values) {
            assert!((x - y).norm() <= 1e-13 * scale);
        }
        assert_eq!(cubic.steps, other.steps);
    }
}

#[test]
fn zero_epsilon_step_is_the_bare_sweep_in_1d() {
    let g = PeriodicGrid::line(-0.5, 1.5, 128).unwrap();
    let s = InitialData::GaussLogcosh1d.hydro_state(&g, 0.0).unwrap();
    let model = HydroModel::new(Nonlinearity::Saturated {
        delta: 0.5,
        eta: 1.0,
        lambda: 2.0,
    });
    let dt = 4e-3;
    let stepped = strang_step(&s, dt, &model).unwrap();
    let (a, v) = lax_wendroff_sweep(&s.a, &s.v, dt, 0, 0.0, &model).unwrap();
    assert_eq!(stepped.a.values, a.values);
    assert_eq!(stepped.v.components, v.components);
}

#[test]
fn mass_drift_is_second_order() {
    let drifts: Vec<f64> = [128, 256, 512]
        .iter()
        .map(|&j| {
            let g = PeriodicGrid::line(-0.5, 1.5, j).unwrap();
            let s = InitialData::GaussLogcosh1d.hydro_state(&g, 0.05).unwrap();
            let m0 = s.a.norm_sq();
            let end = hydro::run(&s, 0.05, &HydroModel::cubic(), &no_phase(TimeStep::default())).unwrap();
            (end.last().a.norm_sq() - m0).abs() / m0
        })
        .collect();
    for p in order(&drifts) {
        assert!(p >= 1.7, "{drifts:?}");
    }
}

#[test]
fn curl_stays_second_order_small() {
    // smooth periodic potential flow, so the initial curl is round-off
    let curls: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&j| {
            let g = PeriodicGrid::square(0.0, 1.0, j).unwrap();
            let a = ComplexField::from_fn(&g, |x| {
                Complex64::new((-25.0 * ((x[0] - 0.5).powi(2) + (x[1] - 0.5).powi(2))).exp(), 0.0)
            });
            let phi = RealField::from_fn(&g, |x| 0.1 * (2.0 * PI * x[0]).cos() * (2.0 * PI * x[1]).cos());
            let s = HydroState::from_phase(a, phi, 0.05).unwrap();
            assert!(spectral::curl(&s.v).unwrap().max_abs() < 1e-12);
            let end = hydro::run(&s, 0.05, &HydroModel::cubic(), &no_phase(TimeStep::Fixed(0.1 / j as f64))).unwrap();
            spectral::curl(&end.last().v).unwrap().max_abs()
        })
        .collect();
    for p in order(&curls) {
        assert!(p >= 1.7, "{curls:?}");
    }
}

#[test]
fn radial_data_keep_grid_symmetry() {
    let j = 64;
    let g = PeriodicGrid::square(-0.5, 1.5, j).unwrap();
    let s = InitialData::GaussLogcosh2d.hydro_state(&g, 5e-3).unwrap();
    let mut worst = 0.0f64;
    hydro::run_with(&s, 0.12, &HydroModel::cubic(), &no_phase(TimeStep::default()), |st| {
        let rho = st.a.modulus_sq();
        let c = j / 2;
        for i in 0..j {
            worst = worst.max((rho.values[i * j + c] - rho.values[c * j + i]).abs());
            // the full transpose too
            for k in 0..j {
                worst = worst.max((rho.values[i * j + k] - rho.values[k * j + i]).abs());
            }
        }
    })
    .unwrap();
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn maxwell_run_stays_finite() {
    let g = PeriodicGrid::square(-0.5, 1.5, 64).unwrap();
    let s = InitialData::MAXWELL_DEFAULT.hydro_state(&g, 0.05).unwrap();
    let out = hydro::run(&s, 0.02, &HydroModel::cubic(), &RunOptions::default()).unwrap();
    assert!(out.last().is_finite());
    // zero initial phase: the velocity starts at rest and is driven by pressure only
    assert!(out.last().v.max_component_abs() > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constant_states_are_fixed_points(
        re in -1.5f64..1.5, im in -1.5f64..1.5, w0 in -1.0f64..1.0, w1 in -1.0f64..1.0,
        eps in 0.0f64..1.0, dt in 1e-4f64..5e-3, m in 3u32..7, two_d in any::<bool>(),
    ) {
        let j = 1usize << m;
        let g = if two_d { PeriodicGrid::square(0.0, 1.0, j) } else { PeriodicGrid::line(0.0, 1.0, j) }.unwrap();
        let c = Complex64::new(re, im);
        let w = if two_d { [w0, w1] } else { [w0, 0.0] };
        let s = HydroState::new(
            ComplexField::from_fn(&g, |_| c),
            RealVectorField::from_fn(&g, |_| w),
            RealField::zeros(&g),
            0.0,
            eps,
        ).unwrap();
        let out = hydro::run(&s, 5.0 * dt, &HydroModel::cubic(), &no_phase(TimeStep::Fixed(dt))).unwrap();
        let end = out.last();
        let scale = c.norm().max(1e-300);
        for z in &end.a.values {
            prop_assert!((z - c).norm() <= 1e-13 * scale.max(1.0));
        }
        for (d, comp) in end.v.components.iter().enumerate() {
            for x in comp {
                prop_assert!((x - w[d]).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn cfl_step_is_homogeneous(scale in 1.1f64..4.0, eps in 0.0f64..0.5) {
        let g = PeriodicGrid::line(-0.5, 1.5, 128).unwrap();
        let s = InitialData::GaussLogcosh1d.hydro_state(&g, eps).unwrap();
        let mut big = s.clone();
        big.a.values.iter_mut().for_each(|z| *z *= scale);
        big.v.components[0].iter_mut().for_each(|x| *x *= scale);
        let model = HydroModel::cubic();
        let ratio = cfl_dt(&s, 0.8, 1e9, &model) / cfl_dt(&big, 0.8, 1e9, &model);
        prop_assert!((ratio - scale).abs() < 1e-12 * scale);
    }
}
