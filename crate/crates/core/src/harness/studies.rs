//! Canned studies: Cole–Hopf convergence and wavefunction reconstruction.

use std::f64::consts::PI;

use crate::eikonal::{cole_hopf_oracle, eikonal_run};
use crate::error::Result;
use crate::grid::{ComplexField, PeriodicGrid, RealField};
use crate::hydro::{self, RunOptions, TimeStep};
use crate::nonlinearity::Potential;
use crate::observables::{reconstruct, rel_l1_error};

use super::cache::ReferenceCache;
use super::config::ExperimentConfig;
use super::sweep::nls_reference;

#[derive(Debug, Clone, PartialEq)]
pub struct OrderRow {
    pub points: usize,
    pub error: f64,
    /// `log₂` of the error ratio to the previous (coarser) row.
    pub order: Option<f64>,
}

/// Fills in successive orders for rows whose grids double.
pub fn with_orders(rows: Vec<(usize, f64)>) -> Vec<OrderRow> {
    let mut out: Vec<OrderRow> = Vec::with_capacity(rows.len());
    for (points, error) in rows {
        let order = out
            .last()
            .map(|prev| (prev.error / error).ln() / (points as f64 / prev.points as f64).ln());
        out.push(OrderRow { points, error, order });
    }
    out
}

/// Viscous eikonal solver against the Cole–Hopf solution for
/// `φ₀ = cos 2πx` on `[0, 1]`, `V = 0`, with `Δt = dt_per_dx · Δx`.
/// Errors are relative maximum norms at `t_final`.
pub fn eikonal_verify(points: &[usize], viscosity: f64, t_final: f64, dt_per_dx: f64) -> Result<Vec<OrderRow>> {
    let mut rows = Vec::with_capacity(points.len());
    for &j in points {
        let grid = PeriodicGrid::line(0.0, 1.0, j)?;
        let phi0 = RealField::from_fn(&grid, |x| (2.0 * PI * x[0]).cos());
        let dt = dt_per_dx * grid.spacing(0);
        let traj = eikonal_run(&phi0, &Potential::Zero, viscosity, t_final, TimeStep::Fixed(dt))?;
        let exact = cole_hopf_oracle(&phi0, viscosity, t_final)?;
        let diff = traj
            .final_phase()
            .values
            .iter()
            .zip(&exact.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        rows.push((j, diff / exact.max_abs()));
    }
    Ok(with_orders(rows))
}

/// AP solve with phase accumulation and `u = a e^{iφ/ε}` at every output time.
pub fn reconstruct_run(config: &ExperimentConfig, epsilon: f64, points: usize) -> Result<Vec<(f64, ComplexField)>> {
    let grid = config.grid(points)?;
    let state = config.initial.hydro_state(&grid, epsilon)?;
    let options = RunOptions {
        time_step: config.time_step(),
        output_times: config.times.clone(),
        phase: Some(config.phase_rule),
    };
    let traj = hydro::run(&state, config.t_final(), &config.model()?, &options)?;
    traj.snapshots
        .iter()
        .map(|s| Ok((s.t, reconstruct(&s.a, &s.phi, epsilon)?)))
        .collect()
}

/// Relative ℓ¹ error of `Re u` from [`reconstruct_run`] against the
/// splitting reference, per output time.
pub fn reconstruction_errors(
    config: &ExperimentConfig,
    epsilon: f64,
    points: usize,
    cache: Option<&ReferenceCache>,
) -> Result<Vec<(f64, f64)>> {
    let fine = config.grid(config.reference_points)?;
    let (reference, _) = nls_reference(config, epsilon, cache)?;
    reconstruct_run(config, epsilon, points)?
        .iter()
        .zip(&reference)
        .map(|((t, u), r)| {
            let u_ref = r.to_complex(&fine)?;
            Ok((*t, rel_l1_error(&u.real_part(), &u_ref.real_part())?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_a_power_law() {
        let rows = with_orders(vec![(64, 1.6e-3), (128, 4e-4), (256, 1e-4)]);
        assert_eq!(rows[0].order, None);
        assert!((rows[1].order.unwrap() - 2.0).abs() < 1e-12);
        assert!((rows[2].order.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn coarse_eikonal_study_converges() {
        let rows = eikonal_verify(&[32, 64], 1.0, 0.02, 0.1).unwrap();
        assert!(rows[1].error < rows[0].error);
        assert!(rows[1].order.unwrap() > 1.5);
    }

    #[test]
    fn reconstruction_keeps_modulus() {
        let config = ExperimentConfig {
            times: vec![0.01],
            ..ExperimentConfig::desk_1d()
        };
        let out = reconstruct_run(&config, 0.05, 64).unwrap();
        assert_eq!(out.len(), 1);
        let grid = config.grid(64).unwrap();
        let a0 = config.initial.amplitude(&grid).unwrap();
        // modulus moves little over a short time
        let drift = out[0]
            .1
            .values
            .iter()
            .zip(&a0.values)
            .map(|(u, a)| (u.norm() - a.norm()).abs())
            .fold(0.0, f64::max);
        assert!(drift < 0.1, "{drift}");
    }
}
