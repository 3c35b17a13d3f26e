//! Asymptotic-preserving solvers for the semiclassical nonlinear
//! Schrödinger equation
//!
//! ```text
//! i ε ∂t u + (ε²/2) Δu = f(|u|²) u
//! ```
//!
//! written as a viscous amplitude/velocity system `u = a e^{iφ/ε}`,
//! `v = ∇φ` and discretized by Strang splitting: exact spectral flows for
//! the dispersive and diffusive parts, Lax–Wendroff for the transport part.
//! The scheme stays consistent with the compressible Euler limit as `ε → 0`.
//!
//! Alongside the scheme the crate provides a classical time-splitting
//! reference solver ([`reference`]), observables and wavefunction
//! reconstruction ([`observables`]), the linear/eikonal pathway with a
//! Cole–Hopf oracle ([`eikonal`]) and an experiment harness ([`harness`]).

pub mod eikonal;
pub mod error;
pub mod grid;
pub mod harness;
pub mod hydro;
pub mod nonlinearity;
pub mod observables;
pub mod reference;
pub mod snapshot;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::{Axis, ComplexField, GridRef, PeriodicGrid, RealField, RealVectorField};
pub use hydro::{HydroModel, HydroState, RunOptions, TimeStep, Trajectory};
pub use nonlinearity::{Nonlinearity, Potential};
pub use observables::{ObservableSet, PhaseRule};
pub use reference::WaveState;
