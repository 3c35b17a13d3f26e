//! Fast invariant suite behind the `selftest` subcommand.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eikonal::{cole_hopf_with_rate, eikonal_residual};
use crate::error::Result;
use crate::grid::{ComplexField, PeriodicGrid, RealField, RealVectorField};
use crate::hydro::{self, HydroModel, HydroState, RunOptions};
use crate::nonlinearity::Nonlinearity;
use crate::observables::observables;
use crate::reference::{strang_solve, WaveState};
use crate::spectral;

use super::config::ExperimentConfig;
use super::initial::InitialData;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:<40} {:.3e} (tol {:.0e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.tolerance
        )
    }
}

fn random_field(rng: &mut ChaCha8Rng, j: usize) -> Result<ComplexField> {
    let g = PeriodicGrid::line(0.0, 1.0, j)?;
    let values = (0..j)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexField::from_values(&g, values)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Runs every check; random inputs are drawn from `seed`.
pub fn run_selftest(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let u = random_field(&mut rng, 128)?;
    let back = spectral::inverse(&u.grid, spectral::forward(&u))?;
    checks.push(Check {
        name: "fft round trip",
        value: max_diff(&back.values, &u.values),
        tolerance: 1e-13,
    });

    let eps = rng.gen_range(0.01..1.0);
    let evolved = spectral::schrodinger_propagate(&u, eps, 0.37)?;
    checks.push(Check {
        name: "schrodinger flow is unitary",
        value: (evolved.norm_sq() - u.norm_sq()).abs() / u.norm_sq(),
        tolerance: 1e-13,
    });

    let re = u.real_part();
    let heated = spectral::heat_propagate_real(&re, 0.3, 0.2)?;
    checks.push(Check {
        name: "heat flow keeps the mean",
        value: (heated.mean() - re.mean()).abs(),
        tolerance: 1e-13,
    });

    let g = PeriodicGrid::line(-0.5, 1.5, 64)?;
    let c = Complex64::new(rng.gen_range(0.2..1.0), rng.gen_range(-0.5..0.5));
    let w = rng.gen_range(-1.0..1.0);
    let state = HydroState::new(
        ComplexField::from_fn(&g, |_| c),
        RealVectorField::from_fn(&g, |_| [w, 0.0]),
        RealField::zeros(&g),
        0.0,
        0.1,
    )?;
    let next = hydro::strang_step(&state, 1e-3, &HydroModel::cubic())?;
    checks.push(Check {
        name: "constant state is a fixed point",
        value: max_diff(&next.a.values, &state.a.values) / c.norm()
            + next.v.components[0].iter().map(|x| (x - w).abs()).fold(0.0, f64::max),
        tolerance: 1e-13,
    });

    let plane = WaveState::new(ComplexField::from_fn(&g, |_| c), 0.0, 0.05)?;
    let t = 0.3;
    let out = strang_solve(&plane, t, 0.013, &Nonlinearity::Cubic, &[])?;
    let exact = c * Complex64::from_polar(1.0, -c.norm_sqr() * t / 0.05);
    checks.push(Check {
        name: "plane wave is exact",
        value: out[0].u.values.iter().map(|z| (z - exact).norm()).fold(0.0, f64::max),
        tolerance: 1e-10,
    });

    let g256 = PeriodicGrid::line(-0.5, 1.5, 256)?;
    let wave = InitialData::GaussLogcosh1d.wave_state(&g256, 0.5)?;
    let m0 = wave.mass();
    let after = strang_solve(&wave, 1.0, 1e-3, &Nonlinearity::Cubic, &[])?;
    checks.push(Check {
        name: "splitting mass over 1000 steps",
        value: (after[0].mass() - m0).abs() / m0,
        tolerance: 1e-12,
    });

    let gl = PeriodicGrid::line(0.0, 1.0, 128)?;
    let phi0 = RealField::from_fn(&gl, |x| (2.0 * PI * x[0]).cos());
    let (phi, rate) = cole_hopf_with_rate(&phi0, 1.0, 0.1)?;
    checks.push(Check {
        name: "cole-hopf residual",
        value: eikonal_residual(&phi, &rate, &RealField::zeros(&gl), 1.0).max_abs(),
        tolerance: 1e-8,
    });

    let a = ComplexField::from_fn(&g, |x| Complex64::new((-25.0 * (x[0] - 0.5).powi(2)).exp(), 0.0));
    let v = RealVectorField::from_fn(&g, |x| [(2.0 * PI * x[0]).sin(), 0.0]);
    let obs = observables(&a, &v, 0.1)?;
    checks.push(Check {
        name: "current of a real amplitude is rho v",
        value: (0..g.len())
            .map(|i| (obs.current.components[0][i] - obs.rho.values[i] * v.components[0][i]).abs())
            .fold(0.0, f64::max),
        tolerance: 1e-14,
    });

    let sq = PeriodicGrid::square(-0.5, 1.5, 32)?;
    let s2 = InitialData::GaussLogcosh2d.hydro_state(&sq, 0.01)?;
    let opts = RunOptions {
        phase: None,
        ..RunOptions::default()
    };
    let end = hydro::run(&s2, 0.02, &HydroModel::cubic(), &opts)?;
    let rho = end.last().a.modulus_sq();
    let centre = 16;
    checks.push(Check {
        name: "2d midline symmetry",
        value: (0..32)
            .map(|i| (rho.values[i * 32 + centre] - rho.values[centre * 32 + i]).abs())
            .fold(0.0, f64::max),
        tolerance: 1e-10,
    });

    let config = ExperimentConfig::desk_2d();
    let parsed: ExperimentConfig = config.to_string().parse()?;
    checks.push(Check {
        name: "config round trip",
        value: if parsed == config { 0.0 } else { 1.0 },
        tolerance: 0.0,
    });

    Ok(checks)
}
