//! Nonlinearities `f(|u|²)` and the external potential of the linear case.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{GridRef, RealField, RealVectorField};
use crate::spectral;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type PotentialFn = Arc<dyn Fn(f64, [f64; 2]) -> f64 + Send + Sync>;

/// An external potential `V(t, x)`.
#[derive(Clone)]
pub enum Potential {
    Zero,
    /// `amplitude · cos(2π (x − lower) / length)` along the first axis.
    Cosine { amplitude: f64 },
    /// Static nodal samples; the grid they are used on must match in size.
    Table(Arc<Vec<f64>>),
    Function(PotentialFn),
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Zero => write!(f, "Zero"),
            Potential::Cosine { amplitude } => write!(f, "Cosine({amplitude})"),
            Potential::Table(v) => write!(f, "Table(len={})", v.len()),
            Potential::Function(_) => write!(f, "Function(..)"),
        }
    }
}

impl Potential {
    pub fn is_static(&self) -> bool {
        !matches!(self, Potential::Function(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Potential::Zero)
    }

    pub fn sample(&self, grid: &GridRef, t: f64) -> Result<RealField> {
        match self {
            Potential::Zero => Ok(RealField::zeros(grid)),
            Potential::Cosine { amplitude } => {
                let ax = *grid.axis(0);
                Ok(RealField::from_fn(grid, |x| {
                    amplitude * (2.0 * PI * (x[0] - ax.lower) / ax.length).cos()
                }))
            }
            Potential::Table(values) => RealField::from_values(grid, values.as_ref().clone()),
            Potential::Function(f) => {
                let field = RealField::from_fn(grid, |x| f(t, x));
                if !field.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "potential is not finite at t = {t}"
                    )));
                }
                Ok(field)
            }
        }
    }

    /// Spectral gradient of the sampled potential.
    pub fn gradient(&self, grid: &GridRef, t: f64) -> Result<RealVectorField> {
        if self.is_zero() {
            return Ok(RealVectorField::zeros(grid));
        }
        Ok(spectral::gradient_real(&self.sample(grid, t)?))
    }
}

/// The coupling in `i ε ∂t u + (ε²/2) Δu = f(|u|²) u`, or `V u` in the
/// linear case.
#[derive(Clone)]
pub enum Nonlinearity {
    Cubic,
    /// `f(y) = y + λ y²`, `λ ≥ 0`.
    CubicQuintic { lambda: f64 },
    /// `f(y) = δ y + η y / (1 + λ y)`, all parameters positive.
    Saturated { delta: f64, eta: f64, lambda: f64 },
    /// User-supplied `f`, `f′` and optionally the antiderivative `F`.
    General {
        f: ScalarFn,
        df: ScalarFn,
        antiderivative: Option<ScalarFn>,
    },
    LinearPotential(Potential),
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nonlinearity::Cubic => write!(f, "Cubic"),
            Nonlinearity::CubicQuintic { lambda } => write!(f, "CubicQuintic(lambda={lambda})"),
            Nonlinearity::Saturated { delta, eta, lambda } => {
                write!(f, "Saturated(delta={delta}, eta={eta}, lambda={lambda})")
            }
            Nonlinearity::General { .. } => write!(f, "General(..)"),
            Nonlinearity::LinearPotential(p) => write!(f, "LinearPotential({p:?})"),
        }
    }
}

impl Nonlinearity {
    pub fn general(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Nonlinearity::General {
            f: Arc::new(f),
            df: Arc::new(df),
            antiderivative: None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Nonlinearity::Cubic => "cubic",
            Nonlinearity::CubicQuintic { .. } => "cubic-quintic",
            Nonlinearity::Saturated { .. } => "saturated",
            Nonlinearity::General { .. } => "general",
            Nonlinearity::LinearPotential(_) => "linear-potential",
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Nonlinearity::LinearPotential(_))
    }

    pub fn potential(&self) -> Option<&Potential> {
        match self {
            Nonlinearity::LinearPotential(p) => Some(p),
            _ => None,
        }
    }

    /// `f(y)`; zero for the linear tag, whose coupling is the potential.
    pub fn f(&self, y: f64) -> f64 {
        match self {
            Nonlinearity::Cubic => y,
            Nonlinearity::CubicQuintic { lambda } => y + lambda * y * y,
            Nonlinearity::Saturated { delta, eta, lambda } => delta * y + eta * y / (1.0 + lambda * y),
            Nonlinearity::General { f, .. } => f(y),
            Nonlinearity::LinearPotential(_) => 0.0,
        }
    }

    /// `f′(y)`; zero for the linear tag.
    pub fn df(&self, y: f64) -> f64 {
        match self {
            Nonlinearity::Cubic => 1.0,
            Nonlinearity::CubicQuintic { lambda } => 1.0 + 2.0 * lambda * y,
            Nonlinearity::Saturated { delta, eta, lambda } => {
                let s = 1.0 + lambda * y;
                delta + eta / (s * s)
            }
            Nonlinearity::General { df, .. } => df(y),
            Nonlinearity::LinearPotential(_) => 0.0,
        }
    }

    /// `F(y) = ∫₀^y f(r) dr`, when known in closed form.
    pub fn antiderivative(&self, y: f64) -> Option<f64> {
        match self {
            Nonlinearity::Cubic => Some(0.5 * y * y),
            Nonlinearity::CubicQuintic { lambda } => Some(0.5 * y * y + lambda * y * y * y / 3.0),
            Nonlinearity::Saturated { delta, eta, lambda } => {
                Some(0.5 * delta * y * y + eta / lambda * (y - (lambda * y).ln_1p() / lambda))
            }
            Nonlinearity::General { antiderivative, .. } => antiderivative.as_ref().map(|g| g(y)),
            Nonlinearity::LinearPotential(_) => None,
        }
    }

    /// Checks parameter signs and `f′(y) ≥ δ > 0` on a sample of `y ∈ [0, 10⁴]`.
    pub fn validate(&self) -> Result<()> {
        match self {
            Nonlinearity::Cubic | Nonlinearity::LinearPotential(_) => return Ok(()),
            Nonlinearity::CubicQuintic { lambda } if !(*lambda >= 0.0) => {
                return Err(Error::InvalidArgument(format!(
                    "cubic-quintic needs lambda >= 0, got {lambda}"
                )))
            }
            Nonlinearity::Saturated { delta, eta, lambda }
                if !(*delta > 0.0 && *eta > 0.0 && *lambda > 0.0) =>
            {
                return Err(Error::InvalidArgument(format!(
                    "saturated needs delta, eta, lambda > 0, got {delta}, {eta}, {lambda}"
                )))
            }
            _ => {}
        }
        let samples = std::iter::once(0.0).chain((0..=64).map(|i| 10f64.powf(-4.0 + 8.0 * i as f64 / 64.0)));
        for y in samples {
            let d = self.df(y);
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "f'({y}) = {d} violates f' >= delta > 0"
                )));
            }
        }
        Ok(())
    }

    /// Local sound speed `√f′(|a|²)·|a|`; zero in the linear case.
    pub fn sound_speed(&self, modulus_sq: f64) -> f64 {
        if self.is_linear() {
            0.0
        } else {
            (self.df(modulus_sq) * modulus_sq).max(0.0).sqrt()
        }
    }
}
