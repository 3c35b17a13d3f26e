//! Linear Schrödinger pathway: the viscous eikonal equation
//! `∂t φ + ½|∇φ|² + V = ν Δφ`, the amplitude transport driven by its
//! solution, and the Cole–Hopf closed form used to verify the former.

use crate::error::{Error, Result};
use crate::grid::{ComplexField, RealField, RealVectorField};
use crate::hydro::{self, HydroModel, HydroState, RunOptions, TimeStep, VelocityMode, Viscosity};
use crate::nonlinearity::{Nonlinearity, Potential};
use crate::observables::PhaseRule;
use crate::spectral;

/// Phase and velocity after every accepted step, starting with the data.
#[derive(Debug, Clone)]
pub struct PhaseTrajectory {
    pub times: Vec<f64>,
    pub phases: Vec<RealField>,
    pub velocities: Vec<RealVectorField>,
    pub viscosity: f64,
}

impl PhaseTrajectory {
    pub fn final_phase(&self) -> &RealField {
        self.phases.last().expect("trajectory holds the initial phase")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds the initial time")
    }
}

/// Solve the viscous eikonal equation by marching `v = ∇φ` with the Strang
/// scheme (heat with `ν`, Burgers transport with a split `−∇V` source) and
/// integrating `½|v|² + V − ν div v` in time with the trapezoidal rule.
pub fn eikonal_run(phi0: &RealField, potential: &Potential, viscosity: f64, t_final: f64, time_step: TimeStep) -> Result<PhaseTrajectory> {
    let (initial, model, options) = eikonal_setup(phi0, potential, viscosity, time_step, Vec::new())?;
    let mut out = PhaseTrajectory {
        times: vec![initial.t],
        phases: vec![initial.phi.clone()],
        velocities: vec![initial.v.clone()],
        viscosity,
    };
    hydro::run_with(&initial, t_final, &model, &options, |s| {
        out.times.push(s.t);
        out.phases.push(s.phi.clone());
        out.velocities.push(s.v.clone());
    })?;
    Ok(out)
}

/// [`eikonal_run`] sampled only at the given increasing times; the march
/// lands exactly on each of them.
pub fn eikonal_snapshots(
    phi0: &RealField,
    potential: &Potential,
    viscosity: f64,
    times: &[f64],
    time_step: TimeStep,
) -> Result<Vec<(RealField, RealVectorField)>> {
    let t_final = *times
        .last()
        .ok_or_else(|| Error::InvalidArgument("no output times".into()))?;
    let (initial, model, options) = eikonal_setup(phi0, potential, viscosity, time_step, times.to_vec())?;
    let traj = hydro::run(&initial, t_final, &model, &options)?;
    Ok(traj.snapshots.into_iter().map(|s| (s.phi, s.v)).collect())
}

fn eikonal_setup(
    phi0: &RealField,
    potential: &Potential,
    viscosity: f64,
    time_step: TimeStep,
    output_times: Vec<f64>,
) -> Result<(HydroState, HydroModel, RunOptions)> {
    if !(viscosity > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "viscous eikonal needs viscosity > 0, got {viscosity}"
        )));
    }
    let grid = phi0.grid.clone();
    let initial = HydroState::from_phase(ComplexField::zeros(&grid), phi0.clone(), 0.0)?;
    let model = HydroModel::new(Nonlinearity::LinearPotential(potential.clone()))
        .with_viscosity(Viscosity::Fixed(viscosity));
    let options = RunOptions {
        time_step,
        output_times,
        phase: Some(PhaseRule::Trapezoid),
    };
    Ok((initial, model, options))
}

/// Closed-form solution for `V = 0`: `φ(T) = −2ν ln(e^{νTΔ} e^{−φ₀/2ν})`,
/// with the heat flow solved spectrally. `ν = 1` is the classical case.
pub fn cole_hopf_oracle(phi0: &RealField, viscosity: f64, t: f64) -> Result<RealField> {
    Ok(cole_hopf_with_rate(phi0, viscosity, t)?.0)
}

/// The Cole–Hopf solution together with its exact time derivative
/// `∂t φ = −2ν² Δψ / ψ`.
pub fn cole_hopf_with_rate(phi0: &RealField, viscosity: f64, t: f64) -> Result<(RealField, RealField)> {
    if !(viscosity > 0.0) || !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need viscosity > 0 and t >= 0, got {viscosity} and {t}"
        )));
    }
    let shift = phi0.values.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = 2.0 * viscosity;
    let psi0 = RealField {
        grid: phi0.grid.clone(),
        values: phi0.values.iter().map(|p| (-(p - shift) / scale).exp()).collect(),
    };
    if psi0.values.iter().any(|&p| !(p > f64::MIN_POSITIVE)) {
        return Err(Error::InvalidArgument(
            "exp(-phi0 / 2nu) underflows; initial phase range is too large".into(),
        ));
    }
    let psi = spectral::heat_propagate_real(&psi0, viscosity, t)?;
    if psi.values.iter().any(|&p| !(p > 0.0)) {
        return Err(Error::InvalidArgument(
            "transformed field lost positivity; the grid does not resolve the data".into(),
        ));
    }
    let lap = spectral::laplacian(&psi);
    let phi = RealField {
        grid: phi0.grid.clone(),
        values: psi.values.iter().map(|p| shift - scale * p.ln()).collect(),
    };
    let rate = RealField {
        grid: phi0.grid.clone(),
        values: psi
            .values
            .iter()
            .zip(&lap.values)
            .map(|(p, l)| -scale * viscosity * l / p)
            .collect(),
    };
    Ok((phi, rate))
}

/// Pointwise residual `∂t φ + ½|∇φ|² + V − νΔφ`, spatial derivatives spectral.
pub fn eikonal_residual(phi: &RealField, phi_t: &RealField, potential: &RealField, viscosity: f64) -> RealField {
    let grad = spectral::gradient_real(phi);
    let lap = spectral::laplacian(phi);
    let values = (0..phi.values.len())
        .map(|i| phi_t.values[i] + 0.5 * grad.norm_sq_at(i) + potential.values[i] - viscosity * lap.values[i])
        .collect();
    RealField {
        grid: phi.grid.clone(),
        values,
    }
}

/// March `∂t a + v·∇a + ½ a div v = i(ε/2)Δa − iε a div v` with `v = ∇φ`
/// taken from `phases` (mean of the velocities at both ends of each step). Returns `a`
/// at every time of the trajectory. The phase is never influenced by `a`.
pub fn linear_amplitude_run(a0: &ComplexField, phases: &PhaseTrajectory, epsilon: f64) -> Result<Vec<ComplexField>> {
    let grid = a0.grid.clone();
    let model = HydroModel::new(Nonlinearity::LinearPotential(Potential::Zero)).with_velocity(VelocityMode::Prescribed);
    let mut state = HydroState::new(
        a0.clone(),
        RealVectorField::zeros(&grid),
        RealField::zeros(&grid),
        phases.times[0],
        epsilon,
    )?;
    let mut out = Vec::with_capacity(phases.times.len());
    out.push(a0.clone());
    for n in 0..phases.times.len() - 1 {
        let dt = phases.times[n + 1] - phases.times[n];
        state.v = RealVectorField {
            grid: grid.clone(),
            components: phases.velocities[n]
                .components
                .iter()
                .zip(&phases.velocities[n + 1].components)
                .map(|(p, q)| p.iter().zip(q).map(|(x, y)| 0.5 * (x + y)).collect())
                .collect(),
        };
        state = hydro::strang_step(&state, dt, &model)?;
        state.t = phases.times[n + 1];
        out.push(state.a.clone());
    }
    Ok(out)
}
