//! Quadratic observables, phase accumulation, wavefunction reconstruction and
//! the relative ℓ¹ error used throughout the experiments.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ensure_same_grid, ComplexField, GridRef, RealField, RealVectorField};
use crate::hydro::{HydroModel, HydroState};
use crate::nonlinearity::Nonlinearity;
use crate::spectral;

/// Particle density, current density and energy density.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    pub rho: RealField,
    pub current: RealVectorField,
    pub energy: RealField,
}

/// `ρ = |a|²`, `j = ε Im(ā∇a) + ρv`, `e = |ε∇a + i a v|² + |a|⁴`, with `∇a`
/// computed spectrally.
pub fn observables(a: &ComplexField, v: &RealVectorField, epsilon: f64) -> Result<ObservableSet> {
    ensure_same_grid(&a.grid, &v.grid, "observables")?;
    let grid = a.grid.clone();
    let gradients: Vec<ComplexField> = (0..grid.dim())
        .map(|d| spectral::gradient(a, d))
        .collect::<Result<_>>()?;
    let n = grid.len();
    let mut rho = vec![0.0; n];
    let mut energy = vec![0.0; n];
    let mut current = vec![vec![0.0; n]; grid.dim()];
    for i in 0..n {
        let ai = a.values[i];
        let r = ai.norm_sqr();
        rho[i] = r;
        let mut e = r * r;
        for d in 0..grid.dim() {
            let g = gradients[d].values[i];
            let vd = v.components[d][i];
            current[d][i] = epsilon * (ai.conj() * g).im + r * vd;
            e += (epsilon * g + Complex64::new(0.0, vd) * ai).norm_sqr();
        }
        energy[i] = e;
    }
    Ok(ObservableSet {
        rho: RealField { grid: grid.clone(), values: rho },
        current: RealVectorField {
            grid: grid.clone(),
            components: current,
        },
        energy: RealField { grid, values: energy },
    })
}

/// Observables of a wavefunction: `ρ = |u|²`, `j = ε Im(ū∇u)`,
/// `e = |ε∇u|² + |u|⁴`.
pub fn wave_observables(u: &ComplexField, epsilon: f64) -> Result<ObservableSet> {
    observables(u, &RealVectorField::zeros(&u.grid), epsilon)
}

/// Quadrature rule for the phase integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseRule {
    /// Integrand at the left end of each step.
    LeftRectangle,
    /// Mean of the integrand at both ends of each step.
    Trapezoid,
}

/// `½|v|² + g − ν div v`, where `g` is `f(|a|²)` or `V(t, x)` in the linear case.
pub fn phase_integrand(
    a: &ComplexField,
    v: &RealVectorField,
    t: f64,
    viscosity: f64,
    nonlinearity: &Nonlinearity,
) -> Result<RealField> {
    ensure_same_grid(&a.grid, &v.grid, "phase integrand")?;
    let grid = a.grid.clone();
    let div = if viscosity != 0.0 {
        Some(spectral::divergence(v))
    } else {
        None
    };
    let potential = match nonlinearity.potential() {
        Some(p) if !p.is_zero() => Some(p.sample(&grid, t)?),
        _ => None,
    };
    let values = (0..grid.len())
        .map(|i| {
            let coupling = match &potential {
                Some(p) => p.values[i],
                None => nonlinearity.f(a.values[i].norm_sqr()),
            };
            let mut value = 0.5 * v.norm_sq_at(i) + coupling;
            if let Some(div) = &div {
                value -= viscosity * div.values[i];
            }
            value
        })
        .collect();
    Ok(RealField { grid, values })
}

/// One rectangle-rule update `φ ← φ − Δt·(½|v|² + f(|a|²) − ν div v)` with
/// the step's left-endpoint `(a, v)` at time `t`.
pub fn accumulate_phase(
    phi: &RealField,
    a: &ComplexField,
    v: &RealVectorField,
    epsilon: f64,
    t: f64,
    dt: f64,
    model: &HydroModel,
) -> Result<RealField> {
    ensure_same_grid(&phi.grid, &a.grid, "phase")?;
    let integrand = phase_integrand(a, v, t, model.viscosity_for(epsilon), &model.nonlinearity)?;
    Ok(RealField {
        grid: phi.grid.clone(),
        values: phi
            .values
            .iter()
            .zip(&integrand.values)
            .map(|(p, g)| p - dt * g)
            .collect(),
    })
}

/// Phase at the end of the step `prev → next` under `rule`.
pub fn advance_phase(
    prev: &HydroState,
    next: &HydroState,
    dt: f64,
    model: &HydroModel,
    rule: PhaseRule,
) -> Result<RealField> {
    match rule {
        PhaseRule::LeftRectangle => {
            accumulate_phase(&prev.phi, &prev.a, &prev.v, prev.epsilon, prev.t, dt, model)
        }
        PhaseRule::Trapezoid => {
            let nu = model.viscosity_for(prev.epsilon);
            let left = phase_integrand(&prev.a, &prev.v, prev.t, nu, &model.nonlinearity)?;
            let right = phase_integrand(&next.a, &next.v, prev.t + dt, nu, &model.nonlinearity)?;
            Ok(RealField {
                grid: prev.phi.grid.clone(),
                values: prev
                    .phi
                    .values
                    .iter()
                    .zip(left.values.iter().zip(&right.values))
                    .map(|(p, (l, r))| p - 0.5 * dt * (l + r))
                    .collect(),
            })
        }
    }
}

/// `u = a·e^{iφ/ε}`.
pub fn reconstruct(a: &ComplexField, phi: &RealField, epsilon: f64) -> Result<ComplexField> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "reconstruction needs epsilon > 0, got {epsilon}"
        )));
    }
    ensure_same_grid(&a.grid, &phi.grid, "reconstruction")?;
    Ok(ComplexField {
        grid: a.grid.clone(),
        values: a
            .values
            .iter()
            .zip(&phi.values)
            .map(|(ai, p)| ai * Complex64::from_polar(1.0, p / epsilon))
            .collect(),
    })
}

/// Real nodal data with one or more components, for norm computations.
pub trait NodalData {
    fn grid(&self) -> &GridRef;
    fn components(&self) -> Vec<&[f64]>;
}

impl NodalData for RealField {
    fn grid(&self) -> &GridRef {
        &self.grid
    }

    fn components(&self) -> Vec<&[f64]> {
        vec![&self.values]
    }
}

impl NodalData for RealVectorField {
    fn grid(&self) -> &GridRef {
        &self.grid
    }

    fn components(&self) -> Vec<&[f64]> {
        self.components.iter().map(Vec::as_slice).collect()
    }
}

/// `Δx Σ_j Σ_c |x_c(j)|`.
pub fn l1_norm<T: NodalData>(x: &T) -> f64 {
    x.grid().cell_volume()
        * x.components()
            .iter()
            .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
            .sum::<f64>()
}

/// `‖ref − x‖₁ / ‖ref‖₁`. A reference on a finer nested grid is restricted
/// to the nodes of `x` by subsampling; vector fields sum componentwise
/// absolute values.
pub fn rel_l1_error<T: NodalData>(x: &T, reference: &T) -> Result<f64> {
    let coarse = x.grid();
    let indices = coarse.subsample_indices(reference.grid())?;
    let xc = x.components();
    let rc = reference.components();
    if xc.len() != rc.len() {
        return Err(Error::GridMismatch("component counts differ".into()));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (xs, rs) in xc.iter().zip(&rc) {
        for (i, &fi) in indices.iter().enumerate() {
            num += (rs[fi] - xs[i]).abs();
            den += rs[fi].abs();
        }
    }
    if !(den > 0.0) {
        return Err(Error::InvalidArgument(
            "reference has zero l1 norm; the experiment is misconfigured".into(),
        ));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PeriodicGrid;
    use crate::hydro::RunOptions;

    #[test]
    fn observables_of_real_gaussian() {
        let g = PeriodicGrid::line(-0.5, 1.5, 128).unwrap();
        let a = ComplexField::from_fn(&g, |x| Complex64::new((-25.0 * (x[0] - 0.5).powi(2)).exp(), 0.0));
        let v = RealVectorField::zeros(&g);
        let obs = observables(&a, &v, 0.0).unwrap();
        for i in 0..g.len() {
            let ai = a.values[i].re;
            assert_eq!(obs.rho.values[i], ai * ai);
            assert_eq!(obs.current.components[0][i], 0.0);
            assert!((obs.energy.values[i] - ai.powi(4)).abs() < 1e-15);
        }
    }

    #[test]
    fn observables_of_constants() {
        let g = PeriodicGrid::square(0.0, 1.0, 8).unwrap();
        let c = Complex64::new(0.6, 0.8);
        let a = ComplexField::from_fn(&g, |_| c);
        let v = RealVectorField::from_fn(&g, |_| [0.5, -2.0]);
        let obs = observables(&a, &v, 0.3).unwrap();
        let w2 = 0.25 + 4.0;
        for i in 0..g.len() {
            assert!((obs.current.components[0][i] - 0.5).abs() < 1e-14);
            assert!((obs.current.components[1][i] + 2.0).abs() < 1e-14);
            assert!((obs.energy.values[i] - (w2 + 1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn current_of_reconstructed_wave_matches() {
        // u = a e^{iφ/ε} with v = ∇φ exactly: ε Im(ū∇u) = ε Im(ā∇a) + ρ∇φ
        let g = PeriodicGrid::line(0.0, 1.0, 256).unwrap();
        let eps = 0.05;
        let tau = std::f64::consts::TAU;
        let a = ComplexField::from_fn(&g, |x| Complex64::new(1.0 + 0.3 * (tau * x[0]).cos(), 0.2 * (tau * x[0]).sin()));
        // φ chosen so that φ/ε has an integer winding number: periodic u
        let phi = RealField::from_fn(&g, |x| eps * 0.5 * (tau * x[0]).sin());
        let v = spectral::gradient_real(&phi);
        let u = reconstruct(&a, &phi, eps).unwrap();
        let ap = observables(&a, &v, eps).unwrap();
        let wave = wave_observables(&u, eps).unwrap();
        let err = rel_l1_error(&wave.current, &ap.current).unwrap();
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn reconstruction_properties() {
        let g = PeriodicGrid::line(0.0, 1.0, 16).unwrap();
        let a = ComplexField::from_fn(&g, |x| Complex64::new(x[0], 1.0 - x[0]));
        let zero = RealField::zeros(&g);
        assert_eq!(reconstruct(&a, &zero, 0.1).unwrap().values, a.values);
        let phi = RealField::from_fn(&g, |x| 3.0 * x[0]);
        let u = reconstruct(&a, &phi, 0.01).unwrap();
        for (ui, ai) in u.values.iter().zip(&a.values) {
            assert!((ui.norm() - ai.norm()).abs() < 1e-15);
        }
        let real = ComplexField::from_fn(&g, |_| Complex64::new(2.0, 0.0));
        let theta = 0.7;
        let u = reconstruct(&real, &RealField::from_fn(&g, |_| 0.1 * theta), 0.1).unwrap();
        assert!((u.values[3] - 2.0 * Complex64::from_polar(1.0, theta)).norm() < 1e-14);
        assert!(reconstruct(&a, &zero, 0.0).is_err());
    }

    #[test]
    fn relative_l1_basics() {
        let g = PeriodicGrid::line(0.0, 1.0, 32).unwrap();
        let r = RealField::from_fn(&g, |x| 1.0 + x[0]);
        assert_eq!(rel_l1_error(&r, &r).unwrap(), 0.0);
        let twice = RealField::from_values(&g, r.values.iter().map(|x| 2.0 * x).collect()).unwrap();
        assert!((rel_l1_error(&twice, &r).unwrap() - 1.0).abs() < 1e-15);
        assert!(rel_l1_error(&r, &RealField::zeros(&g)).is_err());
        // subsampling from a nested finer grid
        let fine = PeriodicGrid::line(0.0, 1.0, 128).unwrap();
        let rf = RealField::from_fn(&fine, |x| 1.0 + x[0]);
        assert!(rel_l1_error(&r, &rf).unwrap() < 1e-15);
    }

    #[test]
    fn phase_of_constant_state_is_linear_in_time() {
        let g = PeriodicGrid::line(0.0, 1.0, 16).unwrap();
        let c = Complex64::new(0.9, 0.0);
        let s = HydroState::new(
            ComplexField::from_fn(&g, |_| c),
            RealVectorField::zeros(&g),
            RealField::from_fn(&g, |x| x[0]),
            0.0,
            0.1,
        )
        .unwrap();
        let model = HydroModel::cubic();
        let traj = crate::hydro::run(&s, 0.07, &model, &RunOptions::default()).unwrap();
        let last = traj.last();
        for i in 0..g.len() {
            let expected = g.coords(i)[0] - 0.81 * 0.07;
            assert!((last.phi.values[i] - expected).abs() < 1e-14);
        }
        // no motion: φ unchanged when a = v = 0
        let out = accumulate_phase(&s.phi, &ComplexField::zeros(&g), &RealVectorField::zeros(&g), 0.1, 0.0, 0.3, &model).unwrap();
        assert_eq!(out.values, s.phi.values);
    }
}
