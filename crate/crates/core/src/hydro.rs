//! The asymptotic-preserving Strang scheme for the viscous amplitude/velocity
//! system
//!
//! ```text
//! ∂t a + v·∇a + ½ a div v = i(ε/2) Δa − i ε a div v
//! ∂t v + v·∇v + ∇f(|a|²)   = ν Δv,            ν = ε² by default
//! ```
//!
//! Each step applies the exact spectral flows of the right-hand sides over
//! `Δt/2`, a Lax–Wendroff solve of the transport part over `Δt`, then the
//! spectral flows again over `Δt/2`. In real variables `U = (Re a, Im a, v)`
//! the transport part reads `∂t U + Σ_j M^j(U) ∂_j U = 0` with
//! `M^j = A^j − ε B^j` (see [`assemble_matrix`]).

use std::time::Instant;

use crate::error::{Error, Result};
use crate::grid::{ensure_same_grid, ComplexField, GridRef, RealField, RealVectorField};
use crate::nonlinearity::Nonlinearity;
use crate::observables::{self, PhaseRule};
use crate::spectral;

/// Largest system size: two amplitude components plus two velocity components.
pub const MAX_UNKNOWNS: usize = 4;

type Node = [f64; MAX_UNKNOWNS];

#[derive(Debug, Clone)]
pub struct HydroState {
    pub a: ComplexField,
    pub v: RealVectorField,
    /// Accumulated phase; only advanced by [`run`], never read by the march.
    pub phi: RealField,
    pub t: f64,
    pub epsilon: f64,
}

impl HydroState {
    pub fn new(a: ComplexField, v: RealVectorField, phi: RealField, t: f64, epsilon: f64) -> Result<Self> {
        ensure_same_grid(&a.grid, &v.grid, "amplitude and velocity")?;
        ensure_same_grid(&a.grid, &phi.grid, "amplitude and phase")?;
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!("time must be >= 0, got {t}")));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must lie in [0, 1], got {epsilon}"
            )));
        }
        if !a.is_finite() || !v.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidArgument("initial fields must be finite".into()));
        }
        Ok(HydroState { a, v, phi, t, epsilon })
    }

    /// State with `v = ∇φ₀` computed spectrally.
    pub fn from_phase(a: ComplexField, phi: RealField, epsilon: f64) -> Result<Self> {
        let v = spectral::gradient_real(&phi);
        Self::new(a, v, phi, 0.0, epsilon)
    }

    pub fn grid(&self) -> &GridRef {
        &self.a.grid
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.v.is_finite() && self.phi.is_finite()
    }
}

/// How the velocity rows of the system are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VelocityMode {
    /// `v` is marched with the amplitude.
    Evolved,
    /// `v` is supplied from outside; only `a` is updated.
    Prescribed,
}

/// Lax–Wendroff flavour used for the transport substep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaxWendroff {
    /// Two-step Richtmyer form with the matrix evaluated at time-centred
    /// states. Second order for state-dependent `M`.
    Richtmyer,
    /// One-step `U − (Δt/2Δx) M_k δU + (Δt²/2Δx²) M_k δ(M δU)`. Matches
    /// `Richtmyer` for constant `M` but drops the `∂M/∂t` term, so it is
    /// only first order in time for nonlinear systems.
    Quasilinear,
}

/// Viscosity on the velocity equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Viscosity {
    EpsilonSquared,
    Fixed(f64),
}

#[derive(Debug, Clone)]
pub struct HydroModel {
    pub nonlinearity: Nonlinearity,
    pub viscosity: Viscosity,
    pub velocity: VelocityMode,
    pub lax_wendroff: LaxWendroff,
}

impl HydroModel {
    pub fn new(nonlinearity: Nonlinearity) -> Self {
        HydroModel {
            nonlinearity,
            viscosity: Viscosity::EpsilonSquared,
            velocity: VelocityMode::Evolved,
            lax_wendroff: LaxWendroff::Richtmyer,
        }
    }

    pub fn cubic() -> Self {
        Self::new(Nonlinearity::Cubic)
    }

    pub fn with_viscosity(mut self, viscosity: Viscosity) -> Self {
        self.viscosity = viscosity;
        self
    }

    pub fn with_velocity(mut self, velocity: VelocityMode) -> Self {
        self.velocity = velocity;
        self
    }

    pub fn with_lax_wendroff(mut self, lw: LaxWendroff) -> Self {
        self.lax_wendroff = lw;
        self
    }

    pub fn viscosity_for(&self, epsilon: f64) -> f64 {
        match self.viscosity {
            Viscosity::EpsilonSquared => epsilon * epsilon,
            Viscosity::Fixed(nu) => nu,
        }
    }
}

/// Dense `(d+2)×(d+2)` matrix `A^j(U) − ε B^j(U)` at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasilinearMatrix {
    pub size: usize,
    pub entries: [[f64; MAX_UNKNOWNS]; MAX_UNKNOWNS],
}

impl QuasilinearMatrix {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row][col]
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        (0..self.size)
            .map(|r| (0..self.size).map(|c| self.entries[r][c] * x[c]).sum())
            .collect()
    }
}

/// Nonzero pattern of `M^j(U)`: a diagonal plus column `j+2` in the two
/// amplitude rows and the two amplitude columns in row `j+2`.
#[derive(Debug, Clone, Copy)]
struct Coefficients {
    diag: f64,
    velocity_diag: f64,
    col0: f64,
    col1: f64,
    row0: f64,
    row1: f64,
}

#[derive(Clone, Copy)]
struct SweepContext<'a> {
    size: usize,
    direction: usize,
    epsilon: f64,
    nonlinearity: &'a Nonlinearity,
    velocity: VelocityMode,
}

impl SweepContext<'_> {
    fn coefficients(&self, u: &Node) -> Coefficients {
        let vj = u[self.direction + 2];
        let (re, im) = (u[0], u[1]);
        let evolved = self.velocity == VelocityMode::Evolved;
        let pressure = if evolved && !self.nonlinearity.is_linear() {
            2.0 * self.nonlinearity.df(re * re + im * im)
        } else {
            0.0
        };
        Coefficients {
            diag: vj,
            velocity_diag: if evolved { vj } else { 0.0 },
            col0: 0.5 * re - self.epsilon * im,
            col1: 0.5 * im + self.epsilon * re,
            row0: pressure * re,
            row1: pressure * im,
        }
    }

    fn apply(&self, u: &Node, x: &Node) -> Node {
        let c = self.coefficients(u);
        let j = self.direction + 2;
        let mut y = [0.0; MAX_UNKNOWNS];
        y[0] = c.diag * x[0] + c.col0 * x[j];
        y[1] = c.diag * x[1] + c.col1 * x[j];
        for k in 2..self.size {
            y[k] = c.velocity_diag * x[k];
        }
        y[j] += c.row0 * x[0] + c.row1 * x[1];
        y
    }
}

/// `M^j(U) = A^j(U) − ε B^j(U)` with the pressure entries carrying `f′`.
/// The pressure entries vanish for the linear-potential coupling; with a
/// prescribed velocity every velocity row is zero.
pub fn assemble_matrix(
    u: &[f64],
    direction: usize,
    epsilon: f64,
    nonlinearity: &Nonlinearity,
    velocity: VelocityMode,
) -> Result<QuasilinearMatrix> {
    let size = u.len();
    if !(3..=MAX_UNKNOWNS).contains(&size) || direction + 2 >= size {
        return Err(Error::InvalidArgument(format!(
            "state of length {size} has no direction {direction}"
        )));
    }
    if u.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("nodal state must be finite".into()));
    }
    let mut node = [0.0; MAX_UNKNOWNS];
    node[..size].copy_from_slice(u);
    let ctx = SweepContext {
        size,
        direction,
        epsilon,
        nonlinearity,
        velocity,
    };
    let c = ctx.coefficients(&node);
    let j = direction + 2;
    let mut entries = [[0.0; MAX_UNKNOWNS]; MAX_UNKNOWNS];
    entries[0][0] = c.diag;
    entries[1][1] = c.diag;
    for (k, row) in entries.iter_mut().enumerate().take(size).skip(2) {
        row[k] = c.velocity_diag;
    }
    entries[0][j] = c.col0;
    entries[1][j] = c.col1;
    entries[j][0] = c.row0;
    entries[j][1] = c.row1;
    Ok(QuasilinearMatrix { size, entries })
}

fn midpoint(a: &Node, b: &Node) -> Node {
    let mut m = [0.0; MAX_UNKNOWNS];
    for k in 0..MAX_UNKNOWNS {
        m[k] = 0.5 * (a[k] + b[k]);
    }
    m
}

fn diff(a: &Node, b: &Node) -> Node {
    let mut m = [0.0; MAX_UNKNOWNS];
    for k in 0..MAX_UNKNOWNS {
        m[k] = a[k] - b[k];
    }
    m
}

/// One Lax–Wendroff update of a periodic line with ratio `lambda = Δt/Δx`.
fn sweep_line(line: &[Node], out: &mut [Node], scratch: &mut Vec<Node>, lambda: f64, ctx: &SweepContext, variant: LaxWendroff) {
    let n = line.len();
    match variant {
        LaxWendroff::Richtmyer => {
            // scratch[k] holds the predicted state at (x_{k+1/2}, t + Δt/2)
            scratch.clear();
            for k in 0..n {
                let (uk, ur) = (&line[k], &line[(k + 1) % n]);
                let mid = midpoint(uk, ur);
                let flux = ctx.apply(&mid, &diff(ur, uk));
                let mut half = mid;
                for c in 0..ctx.size {
                    half[c] -= 0.5 * lambda * flux[c];
                }
                scratch.push(half);
            }
            for k in 0..n {
                let (hl, hr) = (&scratch[(k + n - 1) % n], &scratch[k]);
                let centre = midpoint(hl, hr);
                let flux = ctx.apply(&centre, &diff(hr, hl));
                let mut next = line[k];
                for c in 0..ctx.size {
                    next[c] -= lambda * flux[c];
                }
                out[k] = next;
            }
        }
        LaxWendroff::Quasilinear => {
            for k in 0..n {
                let (ul, uk, ur) = (&line[(k + n - 1) % n], &line[k], &line[(k + 1) % n]);
                let central = ctx.apply(uk, &diff(ur, ul));
                let right = ctx.apply(&midpoint(uk, ur), &diff(ur, uk));
                let left = ctx.apply(&midpoint(ul, uk), &diff(uk, ul));
                let correction = ctx.apply(uk, &diff(&right, &left));
                let mut next = *uk;
                for c in 0..ctx.size {
                    next[c] += -0.5 * lambda * central[c] + 0.5 * lambda * lambda * correction[c];
                }
                out[k] = next;
            }
        }
    }
}

fn pack(state_a: &ComplexField, v: &RealVectorField) -> Vec<Node> {
    (0..state_a.values.len())
        .map(|i| {
            let mut node = [0.0; MAX_UNKNOWNS];
            node[0] = state_a.values[i].re;
            node[1] = state_a.values[i].im;
            for (d, comp) in v.components.iter().enumerate() {
                node[2 + d] = comp[i];
            }
            node
        })
        .collect()
}

fn unpack(nodes: &[Node], a: &mut ComplexField, v: &mut RealVectorField) {
    for (i, node) in nodes.iter().enumerate() {
        a.values[i].re = node[0];
        a.values[i].im = node[1];
        for (d, comp) in v.components.iter_mut().enumerate() {
            comp[i] = node[2 + d];
        }
    }
}

fn sweep_nodes(grid: &GridRef, nodes: &mut [Node], dt: f64, ctx: &SweepContext, variant: LaxWendroff) {
    let direction = ctx.direction;
    let n = grid.points(direction);
    let lambda = dt / grid.spacing(direction);
    let mut line = vec![[0.0; MAX_UNKNOWNS]; n];
    let mut out = vec![[0.0; MAX_UNKNOWNS]; n];
    let mut scratch = Vec::with_capacity(n);
    if grid.dim() == 1 || direction == 1 {
        for chunk in nodes.chunks_exact_mut(n) {
            line.copy_from_slice(chunk);
            sweep_line(&line, &mut out, &mut scratch, lambda, ctx, variant);
            chunk.copy_from_slice(&out);
        }
    } else {
        let stride = grid.points(1);
        for col in 0..stride {
            for i in 0..n {
                line[i] = nodes[i * stride + col];
            }
            sweep_line(&line, &mut out, &mut scratch, lambda, ctx, variant);
            for i in 0..n {
                nodes[i * stride + col] = out[i];
            }
        }
    }
}

fn check_finite(nodes: &[Node], size: usize, t: f64, what: &str) -> Result<()> {
    if let Some(i) = nodes.iter().position(|n| n[..size].iter().any(|x| !x.is_finite())) {
        return Err(Error::BlowUp {
            time: t,
            detail: format!("non-finite value at node {i} after {what}"),
            last_valid: None,
        });
    }
    Ok(())
}

/// One Lax–Wendroff update of `(a, v)` in `direction` over `dt`.
pub fn lax_wendroff_sweep(
    a: &ComplexField,
    v: &RealVectorField,
    dt: f64,
    direction: usize,
    epsilon: f64,
    model: &HydroModel,
) -> Result<(ComplexField, RealVectorField)> {
    ensure_same_grid(&a.grid, &v.grid, "sweep")?;
    let grid = a.grid.clone();
    if direction >= grid.dim() {
        return Err(Error::InvalidArgument(format!(
            "direction {direction} out of range"
        )));
    }
    let ctx = SweepContext {
        size: grid.dim() + 2,
        direction,
        epsilon,
        nonlinearity: &model.nonlinearity,
        velocity: model.velocity,
    };
    let mut nodes = pack(a, v);
    sweep_nodes(&grid, &mut nodes, dt, &ctx, model.lax_wendroff);
    check_finite(&nodes, ctx.size, f64::NAN, "sweep")?;
    let (mut a2, mut v2) = (a.clone(), v.clone());
    unpack(&nodes, &mut a2, &mut v2);
    Ok((a2, v2))
}

/// Directionally split transport over `dt`. In 2D the result is the mean of
/// the `x(½) y(1) x(½)` and `y(½) x(1) y(½)` orderings, which is invariant
/// under exchange of the axes.
fn transport(grid: &GridRef, nodes: &mut Vec<Node>, dt: f64, epsilon: f64, model: &HydroModel) {
    let size = grid.dim() + 2;
    let ctx = |direction| SweepContext {
        size,
        direction,
        epsilon,
        nonlinearity: &model.nonlinearity,
        velocity: model.velocity,
    };
    let variant = model.lax_wendroff;
    if grid.dim() == 1 {
        sweep_nodes(grid, nodes, dt, &ctx(0), variant);
        return;
    }
    let mut xyx = nodes.clone();
    sweep_nodes(grid, &mut xyx, 0.5 * dt, &ctx(0), variant);
    sweep_nodes(grid, &mut xyx, dt, &ctx(1), variant);
    sweep_nodes(grid, &mut xyx, 0.5 * dt, &ctx(0), variant);
    sweep_nodes(grid, nodes, 0.5 * dt, &ctx(1), variant);
    sweep_nodes(grid, nodes, dt, &ctx(0), variant);
    sweep_nodes(grid, nodes, 0.5 * dt, &ctx(1), variant);
    for (n, m) in nodes.iter_mut().zip(&xyx) {
        for c in 0..size {
            n[c] = 0.5 * (n[c] + m[c]);
        }
    }
}

fn kick(nodes: &mut [Node], gradient: &RealVectorField, tau: f64) {
    for (i, node) in nodes.iter_mut().enumerate() {
        for (d, comp) in gradient.components.iter().enumerate() {
            node[2 + d] -= tau * comp[i];
        }
    }
}

fn spectral_half(state: &mut HydroState, tau: f64, model: &HydroModel) {
    let grid = state.a.grid.clone();
    spectral::schrodinger_in_place(&grid, &mut state.a.values, state.epsilon, tau);
    if model.velocity == VelocityMode::Evolved {
        spectral::heat_vector_in_place(&mut state.v, model.viscosity_for(state.epsilon), tau);
    }
}

/// One Strang step of length `dt`: spectral half step, Lax–Wendroff
/// transport (with a split `−∇V` kick in the linear case), spectral half
/// step. The phase field is carried through unchanged.
pub fn strang_step(state: &HydroState, dt: f64, model: &HydroModel) -> Result<HydroState> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    let grid = state.grid().clone();
    let mut next = state.clone();
    spectral_half(&mut next, 0.5 * dt, model);

    let mut nodes = pack(&next.a, &next.v);
    let potential_gradient = match (&model.nonlinearity, model.velocity) {
        (Nonlinearity::LinearPotential(p), VelocityMode::Evolved) if !p.is_zero() => {
            Some(p.gradient(&grid, state.t + 0.5 * dt)?)
        }
        _ => None,
    };
    if let Some(g) = &potential_gradient {
        kick(&mut nodes, g, 0.5 * dt);
    }
    transport(&grid, &mut nodes, dt, state.epsilon, model);
    if let Some(g) = &potential_gradient {
        kick(&mut nodes, g, 0.5 * dt);
    }
    check_finite(&nodes, grid.dim() + 2, state.t + dt, "transport").map_err(|e| with_last(e, state))?;
    unpack(&nodes, &mut next.a, &mut next.v);

    spectral_half(&mut next, 0.5 * dt, model);
    next.t = state.t + dt;
    if !next.a.is_finite() || !next.v.is_finite() {
        return Err(Error::BlowUp {
            time: next.t,
            detail: "non-finite value after spectral substep".into(),
            last_valid: Some(Box::new(state.clone())),
        });
    }
    Ok(next)
}

fn with_last(err: Error, state: &HydroState) -> Error {
    match err {
        Error::BlowUp { time, detail, .. } => Error::BlowUp {
            time,
            detail,
            last_valid: Some(Box::new(state.clone())),
        },
        other => other,
    }
}

/// Largest characteristic speed over the nodes: `max_d |v_d| + √f′·|a|`.
pub fn max_wave_speed(state: &HydroState, model: &HydroModel) -> f64 {
    let nl = &model.nonlinearity;
    (0..state.a.values.len())
        .map(|i| {
            let vmax = state
                .v
                .components
                .iter()
                .map(|c| c[i].abs())
                .fold(0.0, f64::max);
            let sound = if model.velocity == VelocityMode::Evolved {
                nl.sound_speed(state.a.values[i].norm_sqr())
            } else {
                0.0
            };
            vmax + sound
        })
        .fold(0.0, f64::max)
}

/// `CFL · Δx_min / max(|v| + |a|)`, or `dt_max` when the speed vanishes.
pub fn cfl_dt(state: &HydroState, cfl: f64, dt_max: f64, model: &HydroModel) -> f64 {
    let speed = max_wave_speed(state, model);
    if speed < 1e-14 {
        dt_max
    } else {
        (cfl * state.grid().min_spacing() / speed).min(dt_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    /// Recompute `Δt` from the CFL rule at every step.
    Cfl { cfl: f64, dt_max: f64 },
    Fixed(f64),
}

impl Default for TimeStep {
    fn default() -> Self {
        TimeStep::Cfl {
            cfl: DEFAULT_CFL,
            dt_max: 1e-2,
        }
    }
}

pub const DEFAULT_CFL: f64 = 0.8;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub time_step: TimeStep,
    /// Snapshot times inside `(t₀, T]`; `T` itself is always recorded.
    pub output_times: Vec<f64>,
    pub phase: Option<PhaseRule>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            time_step: TimeStep::default(),
            output_times: Vec::new(),
            phase: Some(PhaseRule::LeftRectangle),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<HydroState>,
    pub steps: usize,
    pub wall_time: f64,
}

impl Trajectory {
    pub fn last(&self) -> &HydroState {
        self.snapshots.last().expect("a trajectory has at least one snapshot")
    }

    pub fn at(&self, t: f64) -> Option<&HydroState> {
        self.snapshots.iter().find(|s| (s.t - t).abs() <= 1e-12 * t.abs().max(1.0))
    }
}

/// Time loop: `Δt` from the step rule, clipped to land on output times;
/// the phase is accumulated once per accepted step.
pub fn run(initial: &HydroState, t_final: f64, model: &HydroModel, options: &RunOptions) -> Result<Trajectory> {
    run_with(initial, t_final, model, options, |_| {})
}

/// [`run`] with a callback invoked on every accepted state.
pub fn run_with(
    initial: &HydroState,
    t_final: f64,
    model: &HydroModel,
    options: &RunOptions,
    mut on_step: impl FnMut(&HydroState),
) -> Result<Trajectory> {
    if !(t_final > initial.t) {
        return Err(Error::InvalidArgument(format!(
            "final time {t_final} must exceed the initial time {}",
            initial.t
        )));
    }
    let mut targets = options.output_times.clone();
    if targets.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("output times must be strictly increasing".into()));
    }
    if targets.iter().any(|&t| !(t > initial.t && t <= t_final)) {
        return Err(Error::InvalidArgument(format!(
            "output times must lie in ({}, {t_final}]",
            initial.t
        )));
    }
    if targets.last().map_or(true, |&t| t < t_final) {
        targets.push(t_final);
    }
    match options.time_step {
        TimeStep::Cfl { cfl, dt_max } if !(cfl > 0.0 && dt_max > 0.0) => {
            return Err(Error::InvalidArgument("CFL and dt_max must be positive".into()))
        }
        TimeStep::Fixed(dt) if !(dt > 0.0) => {
            return Err(Error::InvalidArgument("fixed time step must be positive".into()))
        }
        _ => {}
    }

    let started = Instant::now();
    let mut state = initial.clone();
    let mut snapshots = Vec::with_capacity(targets.len());
    let mut steps = 0;
    for &target in &targets {
        while state.t < target {
            let proposed = match options.time_step {
                TimeStep::Cfl { cfl, dt_max } => cfl_dt(&state, cfl, dt_max, model),
                TimeStep::Fixed(dt) => dt,
            };
            // a collapsing CFL step means the wave speed has run away
            if !(proposed > 4.0 * f64::EPSILON * target.abs().max(1.0)) {
                return Err(Error::BlowUp {
                    time: state.t,
                    detail: format!("time step collapsed to {proposed:e}"),
                    last_valid: Some(Box::new(state)),
                });
            }
            let remaining = target - state.t;
            // avoid a sliver step from accumulated round-off
            let (dt, lands) = if proposed >= remaining * (1.0 - 1e-10) {
                (remaining, true)
            } else {
                (proposed, false)
            };
            let mut next = strang_step(&state, dt, model)?;
            if let Some(rule) = options.phase {
                next.phi = observables::advance_phase(&state, &next, dt, model, rule)?;
            }
            if lands {
                next.t = target;
            }
            if !next.phi.is_finite() {
                return Err(Error::BlowUp {
                    time: next.t,
                    detail: "non-finite phase".into(),
                    last_valid: Some(Box::new(state)),
                });
            }
            state = next;
            steps += 1;
            on_step(&state);
        }
        snapshots.push(state.clone());
    }
    Ok(Trajectory {
        snapshots,
        steps,
        wall_time: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PeriodicGrid;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn constant_state(grid: &GridRef, a: Complex64, v: [f64; 2], eps: f64) -> HydroState {
        HydroState::new(
            ComplexField::from_fn(grid, |_| a),
            RealVectorField::from_fn(grid, |_| v),
            RealField::zeros(grid),
            0.0,
            eps,
        )
        .unwrap()
    }

    #[test]
    fn matrix_entries_for_cubic() {
        let nl = Nonlinearity::Cubic;
        let m = assemble_matrix(&[1.0, 0.0, 2.0], 0, 0.0, &nl, VelocityMode::Evolved).unwrap();
        let expected = [[2.0, 0.0, 0.5], [0.0, 2.0, 0.0], [2.0, 0.0, 2.0]];
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(m.get(r, c), expected[r][c], "({r},{c})");
            }
        }
        let m = assemble_matrix(&[1.0, 0.0, 2.0], 0, 0.1, &nl, VelocityMode::Evolved).unwrap();
        assert!((m.get(1, 2) - 0.1).abs() < 1e-15);
        assert_eq!(m.get(0, 2), 0.5);
        let zero = assemble_matrix(&[0.0; 3], 0, 0.3, &nl, VelocityMode::Evolved).unwrap();
        assert!(zero.entries.iter().flatten().all(|&x| x == 0.0));
    }

    #[test]
    fn matrix_in_two_dimensions() {
        let nl = Nonlinearity::CubicQuintic { lambda: 0.5 };
        let u = [0.6, -0.8, 0.3, -1.1];
        let eps = 0.2;
        let m = assemble_matrix(&u, 1, eps, &nl, VelocityMode::Evolved).unwrap();
        let fp = nl.df(1.0);
        // diagonal is the swept velocity component
        for k in 0..4 {
            assert_eq!(m.get(k, k), -1.1);
        }
        assert!((m.get(0, 3) - (0.3 + eps * 0.8)).abs() < 1e-15);
        assert!((m.get(1, 3) - (-0.4 + eps * 0.6)).abs() < 1e-15);
        assert!((m.get(3, 0) - 2.0 * fp * 0.6).abs() < 1e-15);
        assert!((m.get(3, 1) + 2.0 * fp * 0.8).abs() < 1e-15);
        assert_eq!(m.get(2, 0), 0.0);
        assert_eq!(m.get(0, 2), 0.0);
        // S·A is symmetric for S = diag(1, 1, 1/(4f'), 1/(4f'))
        let a = assemble_matrix(&u, 1, 0.0, &nl, VelocityMode::Evolved).unwrap();
        let s = [1.0, 1.0, 0.25 / fp, 0.25 / fp];
        for r in 0..4 {
            for c in 0..4 {
                let lhs = s[r] * a.get(r, c);
                let rhs = s[c] * a.get(c, r);
                assert!((lhs - rhs).abs() < 1e-14, "({r},{c})");
            }
        }
        assert!(assemble_matrix(&u, 2, eps, &nl, VelocityMode::Evolved).is_err());
    }

    #[test]
    fn linear_and_prescribed_matrices() {
        let nl = Nonlinearity::LinearPotential(crate::nonlinearity::Potential::Zero);
        let m = assemble_matrix(&[1.0, 0.5, 2.0], 0, 0.0, &nl, VelocityMode::Evolved).unwrap();
        assert_eq!(m.get(2, 0), 0.0);
        assert_eq!(m.get(2, 1), 0.0);
        assert_eq!(m.get(2, 2), 2.0);
        let m = assemble_matrix(&[1.0, 0.5, 2.0], 0, 0.0, &Nonlinearity::Cubic, VelocityMode::Prescribed).unwrap();
        assert!(m.entries[2].iter().all(|&x| x == 0.0));
        assert_eq!(m.get(0, 0), 2.0);
    }

    #[test]
    fn frozen_coefficient_amplification() {
        // M ≡ v0·I: with a ≡ 0 only the velocity diagonal acts, and the
        // velocity equation becomes linear advection if v is prescribed.
        // Use the amplitude rows with prescribed constant velocity instead.
        let j = 64;
        let grid = PeriodicGrid::line(0.0, 1.0, j).unwrap();
        let v0 = 0.7;
        let dx = grid.spacing(0);
        let dt = 0.5 * dx / v0;
        let nu = v0 * dt / dx;
        let mode = 5.0;
        let k = 2.0 * PI * mode;
        let a = ComplexField::from_fn(&grid, |x| Complex64::new(0.0, k * x[0]).exp() * 1e-8);
        let v = RealVectorField::from_fn(&grid, |_| [v0, 0.0]);
        let g = Complex64::new(1.0 - nu * nu * (1.0 - (k * dx).cos()), -nu * (k * dx).sin());
        for variant in [LaxWendroff::Richtmyer, LaxWendroff::Quasilinear] {
            let model = HydroModel::cubic()
                .with_velocity(VelocityMode::Prescribed)
                .with_lax_wendroff(variant);
            let (a1, v1) = lax_wendroff_sweep(&a, &v, dt, 0, 0.0, &model).unwrap();
            // div v = 0, so a is purely advected by the constant velocity
            for (out, inp) in a1.values.iter().zip(&a.values) {
                assert!((out - g * inp).norm() < 1e-20, "{variant:?}");
            }
            assert_eq!(v1.components, v.components);
        }
    }

    #[test]
    fn constant_states_are_fixed_points() {
        let g1 = PeriodicGrid::line(-0.5, 1.5, 64).unwrap();
        let g2 = PeriodicGrid::square(-0.5, 1.5, 16).unwrap();
        for grid in [g1, g2] {
            for eps in [0.0, 0.05, 1.0] {
                let s = constant_state(&grid, Complex64::new(0.8, 0.0), [0.0, 0.0], eps);
                let next = strang_step(&s, 0.01, &HydroModel::cubic()).unwrap();
                for (x, y) in next.a.values.iter().zip(&s.a.values) {
                    assert!((x - y).norm() < 1e-13);
                }
                assert!(next.v.max_component_abs() < 1e-13);
                assert_eq!(next.t, 0.01);
            }
        }
    }

    #[test]
    fn cfl_rule() {
        let grid = PeriodicGrid::line(-0.5, 1.5, 512).unwrap();
        let model = HydroModel::cubic();
        let s = constant_state(&grid, Complex64::new(0.0, 0.0), [0.0, 0.0], 0.1);
        assert_eq!(cfl_dt(&s, 0.8, 0.5, &model), 0.5);
        let s = constant_state(&grid, Complex64::new(0.75, 0.0), [0.5, 0.0], 0.1);
        assert!((cfl_dt(&s, 0.8, 1.0, &model) - 0.0025).abs() < 1e-15);
        let s2 = constant_state(&grid, Complex64::new(1.5, 0.0), [1.0, 0.0], 0.1);
        assert!((cfl_dt(&s2, 0.8, 1.0, &model) - 0.00125).abs() < 1e-15);
    }

    #[test]
    fn zero_epsilon_step_is_bare_transport() {
        let grid = PeriodicGrid::line(-0.5, 1.5, 128).unwrap();
        let s = HydroState::new(
            ComplexField::from_fn(&grid, |x| Complex64::new((-25.0 * (x[0] - 0.5).powi(2)).exp(), 0.0)),
            RealVectorField::from_fn(&grid, |x| [-(5.0 * (x[0] - 0.5)).tanh(), 0.0]),
            RealField::zeros(&grid),
            0.0,
            0.0,
        )
        .unwrap();
        let model = HydroModel::cubic();
        let next = strang_step(&s, 0.003, &model).unwrap();
        let (a, v) = lax_wendroff_sweep(&s.a, &s.v, 0.003, 0, 0.0, &model).unwrap();
        assert_eq!(next.a.values, a.values);
        assert_eq!(next.v.components, v.components);
    }

    #[test]
    fn run_lands_on_output_times() {
        let grid = PeriodicGrid::line(0.0, 1.0, 32).unwrap();
        let s = constant_state(&grid, Complex64::new(1.0, 0.0), [0.0, 0.0], 0.1);
        let options = RunOptions {
            output_times: vec![0.013, 0.05],
            ..Default::default()
        };
        let traj = run(&s, 0.1, &HydroModel::cubic(), &options).unwrap();
        let times: Vec<f64> = traj.snapshots.iter().map(|s| s.t).collect();
        assert_eq!(times, vec![0.013, 0.05, 0.1]);
        // constant integrand: φ = −|c|² t exactly up to round-off
        for snap in &traj.snapshots {
            assert!(snap.phi.values.iter().all(|p| (p + snap.t).abs() < 1e-13));
        }
        // a final time shorter than one CFL step gives one clipped step
        let short = run(&s, 1e-5, &HydroModel::cubic(), &RunOptions::default()).unwrap();
        assert_eq!(short.steps, 1);
        assert_eq!(short.last().t, 1e-5);
        assert!(run(&s, 0.0, &HydroModel::cubic(), &RunOptions::default()).is_err());
        let bad = RunOptions {
            output_times: vec![0.2],
            ..Default::default()
        };
        assert!(run(&s, 0.1, &HydroModel::cubic(), &bad).is_err());
    }

    #[test]
    fn blow_up_is_reported_with_last_state() {
        let grid = PeriodicGrid::line(0.0, 1.0, 32).unwrap();
        let s = HydroState::new(
            ComplexField::from_fn(&grid, |x| Complex64::new(1.0 + 0.5 * (2.0 * PI * x[0]).sin(), 0.0)),
            RealVectorField::from_fn(&grid, |x| [(2.0 * PI * x[0]).cos(), 0.0]),
            RealField::zeros(&grid),
            0.0,
            0.0,
        )
        .unwrap();
        // wildly CFL-violating fixed step
        let options = RunOptions {
            time_step: TimeStep::Fixed(5.0),
            ..Default::default()
        };
        let err = run(&s, 1000.0, &HydroModel::cubic(), &options).unwrap_err();
        match err {
            Error::BlowUp { last_valid, .. } => assert!(last_valid.unwrap().is_finite()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
