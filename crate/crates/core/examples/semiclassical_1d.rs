// March the hydrodynamic scheme on the 1D Gaussian/log-cosh data for a
// few values of ε and print the density and current at the centre.

use apnls::harness::InitialData;
use apnls::hydro::{self, HydroModel, RunOptions};
use apnls::observables::observables;
use apnls::{PeriodicGrid, Result};

pub struct Summary {
    /// `(ε, steps, ρ at x = ½, max ρ)` after the run.
    pub rows: Vec<(f64, usize, f64, f64)>,
}

pub fn run_example() -> Result<Summary> {
    let grid = PeriodicGrid::line(-0.5, 1.5, 256)?;
    let centre = grid.len() / 2;
    let model = HydroModel::cubic();
    let mut rows = Vec::new();
    for eps in [0.1, 0.01, 0.001, 0.0] {
        let state = InitialData::GaussLogcosh1d.hydro_state(&grid, eps)?;
        let traj = hydro::run(&state, 0.05, &model, &RunOptions::default())?;
        let end = traj.last();
        let obs = observables(&end.a, &end.v, eps)?;
        let peak = obs.rho.values.iter().cloned().fold(0.0, f64::max);
        rows.push((eps, traj.steps, obs.rho.values[centre], peak));
    }
    Ok(Summary { rows })
}

fn main() -> Result<()> {
    let summary = run_example()?;
    println!("{:>8} {:>6} {:>12} {:>12}", "eps", "steps", "rho(0.5)", "max rho");
    for (eps, steps, mid, peak) in summary.rows {
        println!("{eps:>8} {steps:>6} {mid:>12.6} {peak:>12.6}");
    }
    Ok(())
}
