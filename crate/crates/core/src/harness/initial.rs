//! Catalog of initial data.

use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ComplexField, GridRef, RealField, RealVectorField};
use crate::hydro::HydroState;
use crate::observables::reconstruct;
use crate::reference::WaveState;
use crate::snapshot::Snapshot;

/// Centre of the catalog's domain `[−0.5, 1.5]^d`.
pub const CENTRE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    /// `a₀ = e^{−25(x−½)²}`, `v₀ = −tanh(5(x−½))`, `φ₀ = −ln cosh(5(x−½))/5`.
    GaussLogcosh1d,
    /// Radial analogue with `r = |x − (½, ½)|`.
    GaussLogcosh2d,
    /// Anisotropic Gaussian amplitude with zero phase.
    Maxwell2Temp { theta1: f64, theta2: f64 },
    PlaneWave { amplitude: Complex64 },
    /// Amplitude read from a complex snapshot; zero phase.
    CustomSnapshot { path: PathBuf },
}

impl InitialData {
    pub const MAXWELL_DEFAULT: InitialData = InitialData::Maxwell2Temp {
        theta1: 0.05,
        theta2: 0.015,
    };

    pub fn tag(&self) -> &'static str {
        match self {
            InitialData::GaussLogcosh1d => "gauss-logcosh-1d",
            InitialData::GaussLogcosh2d => "gauss-logcosh-2d",
            InitialData::Maxwell2Temp { .. } => "maxwell-2temp",
            InitialData::PlaneWave { .. } => "plane-wave",
            InitialData::CustomSnapshot { .. } => "custom-snapshot",
        }
    }

    /// Canonical text used in config files and cache keys.
    pub fn describe(&self) -> String {
        match self {
            InitialData::Maxwell2Temp { theta1, theta2 } => {
                format!("maxwell-2temp theta1={theta1:e} theta2={theta2:e}")
            }
            InitialData::PlaneWave { amplitude } => {
                format!("plane-wave re={:e} im={:e}", amplitude.re, amplitude.im)
            }
            InitialData::CustomSnapshot { path } => format!("custom-snapshot path={}", path.display()),
            other => other.tag().to_owned(),
        }
    }

    fn required_dim(&self) -> Option<usize> {
        match self {
            InitialData::GaussLogcosh1d => Some(1),
            InitialData::GaussLogcosh2d | InitialData::Maxwell2Temp { .. } => Some(2),
            _ => None,
        }
    }

    fn check_dim(&self, grid: &GridRef) -> Result<()> {
        match self.required_dim() {
            Some(d) if d != grid.dim() => Err(Error::Config(format!(
                "{} needs a {d}-dimensional grid",
                self.tag()
            ))),
            _ => Ok(()),
        }
    }

    pub fn amplitude(&self, grid: &GridRef) -> Result<ComplexField> {
        self.check_dim(grid)?;
        let real = |f: &dyn Fn([f64; 2]) -> f64| ComplexField::from_fn(grid, |x| Complex64::new(f(x), 0.0));
        Ok(match self {
            InitialData::GaussLogcosh1d => real(&|x| (-25.0 * (x[0] - CENTRE).powi(2)).exp()),
            InitialData::GaussLogcosh2d => real(&|x| (-25.0 * radius_sq(x)).exp()),
            InitialData::Maxwell2Temp { theta1, theta2 } => {
                let norm = 0.5 / (2.0 * PI * theta1.sqrt() * theta2.sqrt());
                real(&|x| {
                    norm * (-(x[0] - CENTRE).powi(2) / (2.0 * theta1) - (x[1] - CENTRE).powi(2) / (2.0 * theta2)).exp()
                })
            }
            InitialData::PlaneWave { amplitude } => ComplexField::from_fn(grid, |_| *amplitude),
            InitialData::CustomSnapshot { path } => {
                let snap = Snapshot::read(path)?;
                if snap.axes != grid.axes() {
                    return Err(Error::Config(format!(
                        "snapshot {} lives on {:?}, not {:?}",
                        path.display(),
                        snap.axes,
                        grid.axes()
                    )));
                }
                snap.to_complex(grid)?
            }
        })
    }

    pub fn phase(&self, grid: &GridRef) -> Result<RealField> {
        self.check_dim(grid)?;
        Ok(match self {
            InitialData::GaussLogcosh1d => RealField::from_fn(grid, |x| -ln_cosh(5.0 * (x[0] - CENTRE)) / 5.0),
            InitialData::GaussLogcosh2d => RealField::from_fn(grid, |x| -ln_cosh(5.0 * radius_sq(x).sqrt()) / 5.0),
            _ => RealField::zeros(grid),
        })
    }

    /// Closed-form `v₀ = ∇φ₀`.
    pub fn velocity(&self, grid: &GridRef) -> Result<RealVectorField> {
        self.check_dim(grid)?;
        Ok(match self {
            InitialData::GaussLogcosh1d => RealVectorField::from_fn(grid, |x| [-(5.0 * (x[0] - CENTRE)).tanh(), 0.0]),
            InitialData::GaussLogcosh2d => RealVectorField::from_fn(grid, |x| {
                let (dx, dy) = (x[0] - CENTRE, x[1] - CENTRE);
                let r = (dx * dx + dy * dy).sqrt();
                if r == 0.0 {
                    [0.0, 0.0]
                } else {
                    let s = -(5.0 * r).tanh() / r;
                    [s * dx, s * dy]
                }
            }),
            _ => RealVectorField::zeros(grid),
        })
    }

    pub fn hydro_state(&self, grid: &GridRef, epsilon: f64) -> Result<HydroState> {
        HydroState::new(
            self.amplitude(grid)?,
            self.velocity(grid)?,
            self.phase(grid)?,
            0.0,
            epsilon,
        )
    }

    /// `u₀ = a₀ e^{iφ₀/ε}`.
    pub fn wave_state(&self, grid: &GridRef, epsilon: f64) -> Result<WaveState> {
        let u = reconstruct(&self.amplitude(grid)?, &self.phase(grid)?, epsilon)?;
        WaveState::new(u, 0.0, epsilon)
    }
}

fn radius_sq(x: [f64; 2]) -> f64 {
    (x[0] - CENTRE).powi(2) + (x[1] - CENTRE).powi(2)
}

fn ln_cosh(s: f64) -> f64 {
    let a = s.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}
