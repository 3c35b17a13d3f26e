//! Time-splitting spectral solver for `i ε ∂t u + (ε²/2) Δu = f(|u|²) u`
//! (or `V u`), used to produce reference solutions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::ComplexField;
use crate::nonlinearity::Nonlinearity;
use crate::spectral;

#[derive(Debug, Clone)]
pub struct WaveState {
    pub u: ComplexField,
    pub t: f64,
    pub epsilon: f64,
}

impl WaveState {
    pub fn new(u: ComplexField, t: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "the splitting solver needs epsilon > 0, got {epsilon}"
            )));
        }
        if !u.is_finite() {
            return Err(Error::InvalidArgument("wavefunction must be finite".into()));
        }
        Ok(WaveState { u, t, epsilon })
    }

    pub fn mass(&self) -> f64 {
        self.u.norm_sq()
    }

    /// `‖ε∇u‖² + 2 Σ F(|u|²) Δx`, the conserved energy for antiderivative `F`.
    pub fn energy(&self, nonlinearity: &Nonlinearity) -> Result<f64> {
        let grid = &self.u.grid;
        let mut kinetic = 0.0;
        for d in 0..grid.dim() {
            kinetic += spectral::gradient(&self.u, d)?.norm_sq();
        }
        let potential: f64 = self
            .u
            .values
            .iter()
            .map(|z| {
                nonlinearity.antiderivative(z.norm_sqr()).ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "no antiderivative for the {} coupling",
                        nonlinearity.tag()
                    ))
                })
            })
            .sum::<Result<f64>>()?;
        Ok(self.epsilon * self.epsilon * kinetic + 2.0 * grid.cell_volume() * potential)
    }
}

/// Exact free flow `∂t u = i(ε/2) Δu` over `dt`.
pub fn kinetic_substep(u: &ComplexField, dt: f64, epsilon: f64) -> Result<ComplexField> {
    spectral::schrodinger_propagate(u, epsilon, dt)
}

/// Exact pointwise flow `u ← u·exp(−i f(|u|²) Δt/ε)`; in the linear case the
/// potential is frozen at `t`.
pub fn nonlinear_substep(u: &ComplexField, t: f64, dt: f64, epsilon: f64, nonlinearity: &Nonlinearity) -> Result<ComplexField> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument("nonlinear substep needs epsilon > 0".into()));
    }
    let mut out = u.clone();
    nonlinear_in_place(&mut out, t, dt, epsilon, nonlinearity)?;
    Ok(out)
}

fn nonlinear_in_place(u: &mut ComplexField, t: f64, dt: f64, epsilon: f64, nonlinearity: &Nonlinearity) -> Result<()> {
    let scale = dt / epsilon;
    match nonlinearity.potential() {
        Some(p) => {
            if p.is_zero() {
                return Ok(());
            }
            let v = p.sample(&u.grid, t)?;
            for (z, vi) in u.values.iter_mut().zip(&v.values) {
                *z *= Complex64::from_polar(1.0, -vi * scale);
            }
        }
        None => {
            for z in u.values.iter_mut() {
                let f = nonlinearity.f(z.norm_sqr());
                *z *= Complex64::from_polar(1.0, -f * scale);
            }
        }
    }
    Ok(())
}

/// One kinetic-first Strang step `K(Δt/2) N(Δt) K(Δt/2)`.
pub fn strang_step(state: &WaveState, dt: f64, nonlinearity: &Nonlinearity) -> Result<WaveState> {
    let mut out = state.clone();
    step_in_place(&mut out, dt, nonlinearity)?;
    Ok(out)
}

fn step_in_place(state: &mut WaveState, dt: f64, nonlinearity: &Nonlinearity) -> Result<()> {
    let grid = state.u.grid.clone();
    spectral::schrodinger_in_place(&grid, &mut state.u.values, state.epsilon, 0.5 * dt);
    nonlinear_in_place(&mut state.u, state.t + 0.5 * dt, dt, state.epsilon, nonlinearity)?;
    spectral::schrodinger_in_place(&grid, &mut state.u.values, state.epsilon, 0.5 * dt);
    state.t += dt;
    Ok(())
}

/// March to `t_final` with steps of at most `dt`, recording a snapshot at
/// every output time (and at `t_final`). The last step before each output
/// time is shortened to land on it.
pub fn strang_solve(
    initial: &WaveState,
    t_final: f64,
    dt: f64,
    nonlinearity: &Nonlinearity,
    output_times: &[f64],
) -> Result<Vec<WaveState>> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    if !(t_final > initial.t) {
        return Err(Error::InvalidArgument(format!(
            "final time {t_final} must exceed {}",
            initial.t
        )));
    }
    let mut targets: Vec<f64> = output_times.to_vec();
    if targets.windows(2).any(|w| !(w[0] < w[1])) || targets.iter().any(|&t| !(t > initial.t && t <= t_final)) {
        return Err(Error::InvalidArgument(
            "output times must increase strictly inside (t0, T]".into(),
        ));
    }
    if targets.last().map_or(true, |&t| t < t_final) {
        targets.push(t_final);
    }
    let mut state = initial.clone();
    let mut out = Vec::with_capacity(targets.len());
    for &target in &targets {
        let span = target - state.t;
        let steps = (span / dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        for _ in 0..steps {
            step_in_place(&mut state, h, nonlinearity)?;
        }
        state.t = target;
        if !state.u.is_finite() {
            return Err(Error::BlowUp {
                time: state.t,
                detail: "non-finite wavefunction".into(),
                last_valid: None,
            });
        }
        out.push(state.clone());
    }
    Ok(out)
}
