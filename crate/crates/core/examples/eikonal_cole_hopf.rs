// The linear pathway: the viscous eikonal equation checked against its
// Cole–Hopf solution, then the amplitude transported along the phase.

use std::f64::consts::PI;

use apnls::eikonal::{eikonal_run, linear_amplitude_run};
use apnls::harness::studies::eikonal_verify;
use apnls::hydro::TimeStep;
use apnls::nonlinearity::Potential;
use apnls::{ComplexField, PeriodicGrid, RealField, Result};
use num_complex::Complex64;

pub struct Summary {
    pub orders: Vec<(usize, f64, Option<f64>)>,
    pub mass_before: f64,
    pub mass_after: f64,
}

pub fn run_example() -> Result<Summary> {
    let orders = eikonal_verify(&[32, 64, 128], 1.0, 0.05, 0.1)?
        .into_iter()
        .map(|r| (r.points, r.error, r.order))
        .collect();

    let grid = PeriodicGrid::line(0.0, 1.0, 128)?;
    let phi0 = RealField::from_fn(&grid, |x| 0.1 * (2.0 * PI * x[0]).sin());
    let potential = Potential::Cosine { amplitude: 0.5 };
    let phases = eikonal_run(&phi0, &potential, 0.01, 0.1, TimeStep::Fixed(1e-3))?;
    let a0 = ComplexField::from_fn(&grid, |x| Complex64::new((-40.0 * (x[0] - 0.5).powi(2)).exp(), 0.0));
    let amplitudes = linear_amplitude_run(&a0, &phases, 0.05)?;
    Ok(Summary {
        orders,
        mass_before: a0.norm_sq(),
        mass_after: amplitudes.last().unwrap().norm_sq(),
    })
}

fn main() -> Result<()> {
    let s = run_example()?;
    for (j, err, order) in &s.orders {
        println!("J={j:>4} err={err:.3e} order={}", order.map_or("-".into(), |o| format!("{o:.2}")));
    }
    println!("amplitude mass {:.6} -> {:.6}", s.mass_before, s.mass_after);
    Ok(())
}
