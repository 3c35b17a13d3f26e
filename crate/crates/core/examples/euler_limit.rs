// The scheme at ε = 0 is a Lax–Wendroff solver for compressible Euler;
// densities at small ε approach it as ε shrinks.

use apnls::harness::InitialData;
use apnls::hydro::{self, HydroModel, RunOptions};
use apnls::observables::rel_l1_error;
use apnls::{PeriodicGrid, RealField, Result};

pub struct Summary {
    /// `(ε, ‖ρ^ε − ρ⁰‖₁ / ‖ρ⁰‖₁)`.
    pub gaps: Vec<(f64, f64)>,
}

fn density(grid: &apnls::GridRef, eps: f64) -> Result<RealField> {
    let state = InitialData::GaussLogcosh1d.hydro_state(grid, eps)?;
    let traj = hydro::run(&state, 0.05, &HydroModel::cubic(), &RunOptions::default())?;
    Ok(traj.last().a.modulus_sq())
}

pub fn run_example() -> Result<Summary> {
    let grid = PeriodicGrid::line(-0.5, 1.5, 512)?;
    let euler = density(&grid, 0.0)?;
    let gaps = [1.6e-2, 8e-3, 4e-3]
        .iter()
        .map(|&eps| Ok((eps, rel_l1_error(&density(&grid, eps)?, &euler)?)))
        .collect::<Result<_>>()?;
    Ok(Summary { gaps })
}

fn main() -> Result<()> {
    let s = run_example()?;
    for w in s.gaps.windows(2) {
        println!(
            "eps {} -> {}: gap {:.3e} -> {:.3e} (ratio {:.2})",
            w[0].0,
            w[1].0,
            w[0].1,
            w[1].1,
            w[0].1 / w[1].1
        );
    }
    Ok(())
}
