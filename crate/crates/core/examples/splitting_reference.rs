// The time-splitting spectral solver: mass is conserved to round-off and
// the energy drift shrinks quadratically with the time step.

use apnls::harness::InitialData;
use apnls::reference::strang_solve;
use apnls::{Nonlinearity, PeriodicGrid, Result};

pub struct Summary {
    pub mass_drift: f64,
    /// `(Δt, relative energy drift)`.
    pub energy: Vec<(f64, f64)>,
}

pub fn run_example() -> Result<Summary> {
    let eps = 0.5;
    let grid = PeriodicGrid::line(-0.5, 1.5, 256)?;
    let nl = Nonlinearity::Cubic;
    let initial = InitialData::GaussLogcosh1d.wave_state(&grid, eps)?;
    let (m0, e0) = (initial.mass(), initial.energy(&nl)?);
    let mut energy = Vec::new();
    let mut mass_drift = 0.0f64;
    for dt in [2e-2, 1e-2, 5e-3] {
        let end = strang_solve(&initial, 0.4, dt, &nl, &[])?.pop().unwrap();
        mass_drift = mass_drift.max((end.mass() - m0).abs() / m0);
        energy.push((dt, (end.energy(&nl)? - e0).abs() / e0));
    }
    Ok(Summary { mass_drift, energy })
}

fn main() -> Result<()> {
    let s = run_example()?;
    println!("max relative mass drift {:.2e}", s.mass_drift);
    for w in s.energy.windows(2) {
        println!(
            "dt {:.0e} -> {:.0e}: energy drift {:.3e} -> {:.3e}, order {:.2}",
            w[0].0,
            w[1].0,
            w[0].1,
            w[1].1,
            (w[0].1 / w[1].1).log2()
        );
    }
    Ok(())
}
