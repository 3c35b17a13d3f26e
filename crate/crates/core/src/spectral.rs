//! Exact Fourier-space operators on periodic grids: differentiation and the
//! heat and free-Schrödinger propagators.
//!
//! Forward transforms are unnormalized and inverse transforms carry the `1/N`
//! factor, so forward-then-inverse is the identity. Derivative multipliers
//! vanish at the Nyquist slot; propagator multipliers use `|k|²` with the
//! Nyquist wavenumber included.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ComplexField, PeriodicGrid, RealField, RealVectorField};

fn transform_axis(grid: &PeriodicGrid, data: &mut [Complex64], d: usize, inverse: bool) {
    let plan = if inverse {
        grid.inverse_plan(d)
    } else {
        grid.forward_plan(d)
    };
    if grid.dim() == 1 || d == 1 {
        // contiguous rows
        plan.process(data);
        return;
    }
    let n0 = grid.points(0);
    let n1 = grid.points(1);
    let mut scratch = vec![Complex64::new(0.0, 0.0); data.len()];
    for i in 0..n0 {
        for j in 0..n1 {
            scratch[j * n0 + i] = data[i * n1 + j];
        }
    }
    plan.process(&mut scratch);
    for i in 0..n0 {
        for j in 0..n1 {
            data[i * n1 + j] = scratch[j * n0 + i];
        }
    }
}

/// In-place forward transform of nodal values to spectral coefficients.
pub fn forward_in_place(grid: &PeriodicGrid, data: &mut [Complex64]) {
    for d in (0..grid.dim()).rev() {
        transform_axis(grid, data, d, false);
    }
}

/// In-place normalized inverse transform.
pub fn inverse_in_place(grid: &PeriodicGrid, data: &mut [Complex64]) {
    for d in 0..grid.dim() {
        transform_axis(grid, data, d, true);
    }
    let scale = 1.0 / grid.len() as f64;
    for z in data.iter_mut() {
        *z *= scale;
    }
}

pub fn forward(field: &ComplexField) -> Vec<Complex64> {
    let mut data = field.values.clone();
    forward_in_place(&field.grid, &mut data);
    data
}

pub fn inverse(grid: &crate::grid::GridRef, mut coeffs: Vec<Complex64>) -> Result<ComplexField> {
    if coeffs.len() != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} coefficients, got {}",
            grid.len(),
            coeffs.len()
        )));
    }
    inverse_in_place(grid, &mut coeffs);
    ComplexField::from_values(grid, coeffs)
}

/// Multiply spectral slot `[i0, i1]` by `multiplier([k0, k1], [i0, i1])`.
pub(crate) fn apply_multiplier<F>(grid: &PeriodicGrid, data: &mut [Complex64], multiplier: F)
where
    F: Fn([f64; 2], [usize; 2]) -> Complex64,
{
    forward_in_place(grid, data);
    for (flat, z) in data.iter_mut().enumerate() {
        let idx = grid.unflatten(flat);
        let mut k = [0.0; 2];
        for (d, kd) in k.iter_mut().enumerate().take(grid.dim()) {
            *kd = grid.wavenumbers(d)[idx[d]];
        }
        *z *= multiplier(k, idx);
    }
    inverse_in_place(grid, data);
}

fn check_axis(grid: &PeriodicGrid, axis: usize) -> Result<()> {
    if axis >= grid.dim() {
        return Err(Error::InvalidArgument(format!(
            "axis {axis} out of range for a {}-dimensional grid",
            grid.dim()
        )));
    }
    Ok(())
}

pub(crate) fn derivative_in_place(grid: &PeriodicGrid, data: &mut [Complex64], axis: usize) {
    let ax = *grid.axis(axis);
    apply_multiplier(grid, data, |k, idx| {
        if ax.is_nyquist(idx[axis]) {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, k[axis])
        }
    });
}

/// Exact derivative of the trigonometric interpolant along `axis`.
pub fn gradient(field: &ComplexField, axis: usize) -> Result<ComplexField> {
    check_axis(&field.grid, axis)?;
    let mut data = field.values.clone();
    derivative_in_place(&field.grid, &mut data, axis);
    Ok(ComplexField {
        grid: field.grid.clone(),
        values: data,
    })
}

pub fn derivative(field: &RealField, axis: usize) -> Result<RealField> {
    check_axis(&field.grid, axis)?;
    let mut data = field.to_complex().values;
    derivative_in_place(&field.grid, &mut data, axis);
    Ok(RealField {
        grid: field.grid.clone(),
        values: data.iter().map(|z| z.re).collect(),
    })
}

/// Spectral gradient of a scalar field.
pub fn gradient_real(field: &RealField) -> RealVectorField {
    let components = (0..field.grid.dim())
        .map(|d| derivative(field, d).expect("axis in range").values)
        .collect();
    RealVectorField {
        grid: field.grid.clone(),
        components,
    }
}

pub fn divergence(v: &RealVectorField) -> RealField {
    let mut out = vec![0.0; v.grid.len()];
    for (d, comp) in v.components.iter().enumerate() {
        let mut data: Vec<Complex64> = comp.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        derivative_in_place(&v.grid, &mut data, d);
        for (o, z) in out.iter_mut().zip(&data) {
            *o += z.re;
        }
    }
    RealField {
        grid: v.grid.clone(),
        values: out,
    }
}

/// `∂x v₂ − ∂y v₁` of a 2D vector field.
pub fn curl(v: &RealVectorField) -> Result<RealField> {
    if v.grid.dim() != 2 {
        return Err(Error::InvalidArgument(
            "curl needs a two-dimensional field".into(),
        ));
    }
    let dx_vy = derivative(&v.component(1), 0)?;
    let dy_vx = derivative(&v.component(0), 1)?;
    Ok(RealField {
        grid: v.grid.clone(),
        values: dx_vy
            .values
            .iter()
            .zip(&dy_vx.values)
            .map(|(a, b)| a - b)
            .collect(),
    })
}

pub fn laplacian(field: &RealField) -> RealField {
    let mut data = field.to_complex().values;
    apply_multiplier(&field.grid, &mut data, |k, _| {
        Complex64::new(-(k[0] * k[0] + k[1] * k[1]), 0.0)
    });
    RealField {
        grid: field.grid.clone(),
        values: data.iter().map(|z| z.re).collect(),
    }
}

pub(crate) fn heat_in_place(grid: &PeriodicGrid, data: &mut [Complex64], nu: f64, tau: f64) {
    if nu == 0.0 || tau == 0.0 {
        return;
    }
    apply_multiplier(grid, data, |k, _| {
        Complex64::new((-nu * (k[0] * k[0] + k[1] * k[1]) * tau).exp(), 0.0)
    });
}

pub(crate) fn schrodinger_in_place(grid: &PeriodicGrid, data: &mut [Complex64], eps: f64, tau: f64) {
    if eps == 0.0 || tau == 0.0 {
        return;
    }
    apply_multiplier(grid, data, |k, _| {
        let phase = -0.5 * eps * (k[0] * k[0] + k[1] * k[1]) * tau;
        Complex64::new(phase.cos(), phase.sin())
    });
}

fn check_duration(name: &str, value: f64, tau: f64) -> Result<()> {
    if !(value >= 0.0) || !(tau >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "{name} and duration must be nonnegative, got {value} and {tau}"
        )));
    }
    Ok(())
}

/// Exact solution of `∂t w = ν Δw` over `tau`.
pub fn heat_propagate(field: &ComplexField, nu: f64, tau: f64) -> Result<ComplexField> {
    check_duration("diffusivity", nu, tau)?;
    let mut out = field.clone();
    heat_in_place(&field.grid, &mut out.values, nu, tau);
    Ok(out)
}

pub fn heat_propagate_real(field: &RealField, nu: f64, tau: f64) -> Result<RealField> {
    check_duration("diffusivity", nu, tau)?;
    let mut data = field.to_complex().values;
    heat_in_place(&field.grid, &mut data, nu, tau);
    Ok(RealField {
        grid: field.grid.clone(),
        values: data.iter().map(|z| z.re).collect(),
    })
}

/// Heat flow on each component. Two real components share one complex
/// transform, which is exact because the multiplier is real and even.
pub fn heat_propagate_vector(v: &RealVectorField, nu: f64, tau: f64) -> Result<RealVectorField> {
    check_duration("diffusivity", nu, tau)?;
    let mut out = v.clone();
    heat_vector_in_place(&mut out, nu, tau);
    Ok(out)
}

pub(crate) fn heat_vector_in_place(v: &mut RealVectorField, nu: f64, tau: f64) {
    if nu == 0.0 || tau == 0.0 {
        return;
    }
    let grid = v.grid.clone();
    for pair in v.components.chunks_mut(2) {
        let mut data: Vec<Complex64> = if pair.len() == 2 {
            pair[0]
                .iter()
                .zip(&pair[1])
                .map(|(&x, &y)| Complex64::new(x, y))
                .collect()
        } else {
            pair[0].iter().map(|&x| Complex64::new(x, 0.0)).collect()
        };
        heat_in_place(&grid, &mut data, nu, tau);
        for (i, z) in data.iter().enumerate() {
            pair[0][i] = z.re;
            if pair.len() == 2 {
                pair[1][i] = z.im;
            }
        }
    }
}

/// Exact solution of `∂t a = i(ε/2) Δa` over `tau`.
pub fn schrodinger_propagate(field: &ComplexField, eps: f64, tau: f64) -> Result<ComplexField> {
    check_duration("epsilon", eps, tau)?;
    let mut out = field.clone();
    schrodinger_in_place(&field.grid, &mut out.values, eps, tau);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PeriodicGrid;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn random_field(grid: &crate::grid::GridRef, seed: u64) -> ComplexField {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexField::from_values(grid, values).unwrap()
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let g = PeriodicGrid::line(0.0, 3.0, 32).unwrap();
        let f = ComplexField::from_fn(&g, |_| Complex64::new(2.5, -1.0));
        let d = gradient(&f, 0).unwrap();
        assert!(d.max_abs() < 1e-13);
    }

    #[test]
    fn single_mode_derivatives() {
        let l = 3.0;
        let g = PeriodicGrid::line(0.0, l, 64).unwrap();
        let f = RealField::from_fn(&g, |x| (2.0 * PI * x[0] / l).sin());
        let d = derivative(&f, 0).unwrap();
        for (i, v) in d.values.iter().enumerate() {
            let x = g.coords(i)[0];
            assert!((v - 2.0 * PI / l * (2.0 * PI * x / l).cos()).abs() < 1e-12);
        }
        let k = 2.0 * 2.0 * PI / l;
        let e = ComplexField::from_fn(&g, |x| Complex64::new(0.0, k * x[0]).exp());
        let de = gradient(&e, 0).unwrap();
        for (i, v) in de.values.iter().enumerate() {
            let expected = Complex64::new(0.0, k) * e.values[i];
            assert!((v - expected).norm() < 1e-11);
        }
    }

    #[test]
    fn nyquist_derivative_is_zero() {
        let g = PeriodicGrid::line(0.0, 1.0, 8).unwrap();
        let f = RealField::from_fn(&g, |x| (8.0 * PI * x[0]).cos());
        let d = derivative(&f, 0).unwrap();
        assert!(d.max_abs() < 1e-12);
    }

    #[test]
    fn second_axis_derivative() {
        let g = PeriodicGrid::make(2, &[(0.0, 1.0), (0.0, 2.0)], &[16, 32]).unwrap();
        let f = RealField::from_fn(&g, |x| (2.0 * PI * x[0]).sin() * (PI * x[1]).cos());
        let dy = derivative(&f, 1).unwrap();
        for i in 0..g.len() {
            let x = g.coords(i);
            let expected = -PI * (2.0 * PI * x[0]).sin() * (PI * x[1]).sin();
            assert!((dy.values[i] - expected).abs() < 1e-11);
        }
        assert!(derivative(&f, 2).is_err());
    }

    #[test]
    fn heat_identities() {
        let g = PeriodicGrid::line(0.0, 1.0, 32).unwrap();
        let f = random_field(&g, 3);
        let same = heat_propagate(&f, 0.0, 1.0).unwrap();
        assert!(max_diff(&same.values, &f.values) < 1e-15);
        let same = heat_propagate(&f, 1.0, 0.0).unwrap();
        assert!(max_diff(&same.values, &f.values) < 1e-15);
        let c = ComplexField::from_fn(&g, |_| Complex64::new(0.3, 0.1));
        let out = heat_propagate(&c, 2.0, 0.5).unwrap();
        assert!(max_diff(&out.values, &c.values) < 1e-15);
        assert!(heat_propagate(&f, -1.0, 1.0).is_err());
    }

    #[test]
    fn heat_single_mode_decay() {
        let l = 2.0 * PI;
        let g = PeriodicGrid::line(0.0, l, 32).unwrap();
        let k = 3.0;
        let f = ComplexField::from_fn(&g, |x| Complex64::new(0.0, k * x[0]).exp());
        let out = heat_propagate(&f, 1.0, 0.1).unwrap();
        let amp = (-0.1 * k * k).exp();
        for (o, i) in out.values.iter().zip(&f.values) {
            assert!((o - i * amp).norm() < 1e-13);
        }
    }

    #[test]
    fn schrodinger_identities() {
        let g = PeriodicGrid::line(0.0, 1.0, 64).unwrap();
        let f = random_field(&g, 9);
        let same = schrodinger_propagate(&f, 0.0, 0.7).unwrap();
        assert_eq!(same.values, f.values);
        let c = ComplexField::from_fn(&g, |_| Complex64::new(-1.0, 0.5));
        let out = schrodinger_propagate(&c, 0.3, 0.2).unwrap();
        assert!(max_diff(&out.values, &c.values) < 1e-15);
    }

    #[test]
    fn curl_invariant_under_heat() {
        let g = PeriodicGrid::square(0.0, 1.0, 32).unwrap();
        let v = RealVectorField::from_fn(&g, |x| {
            [
                (2.0 * PI * x[1]).sin() + 0.3 * (4.0 * PI * x[0]).cos(),
                (2.0 * PI * x[0]).cos() * (2.0 * PI * x[1]).sin(),
            ]
        });
        let before = curl(&v).unwrap();
        let v2 = heat_propagate_vector(&v, 0.0, 0.0).unwrap();
        let after_identity = curl(&v2).unwrap();
        assert!(before
            .values
            .iter()
            .zip(&after_identity.values)
            .all(|(a, b)| (a - b).abs() < 1e-12));
        // heat commutes with curl: curl(heat v) == heat(curl v)
        let hv = heat_propagate_vector(&v, 0.01, 0.3).unwrap();
        let lhs = curl(&hv).unwrap();
        let rhs = heat_propagate_real(&before, 0.01, 0.3).unwrap();
        for (a, b) in lhs.values.iter().zip(&rhs.values) {
            assert!((a - b).abs() < 1e-11);
        }
        // a gradient field stays curl-free
        let phi = RealField::from_fn(&g, |x| (2.0 * PI * x[0]).sin() * (2.0 * PI * x[1]).cos());
        let grad = gradient_real(&phi);
        let hv = heat_propagate_vector(&grad, 0.05, 0.2).unwrap();
        assert!(curl(&hv).unwrap().max_abs() < 1e-11);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn round_trip_is_identity(seed in any::<u64>(), two_d in any::<bool>()) {
            let g = if two_d {
                PeriodicGrid::square(-0.5, 1.5, 16).unwrap()
            } else {
                PeriodicGrid::line(-0.5, 1.5, 128).unwrap()
            };
            let f = random_field(&g, seed);
            let back = inverse(&g, forward(&f)).unwrap();
            let scale = f.max_abs();
            prop_assert!(max_diff(&back.values, &f.values) <= 1e-13 * scale);
        }

        #[test]
        fn schrodinger_is_unitary_and_composes(seed in any::<u64>(), eps in 0.0f64..1.0, t1 in 0.0f64..0.5, t2 in 0.0f64..0.5) {
            let g = PeriodicGrid::square(0.0, 1.0, 16).unwrap();
            let f = random_field(&g, seed);
            let once = schrodinger_propagate(&f, eps, t1).unwrap();
            let rel = (once.norm_sq() - f.norm_sq()).abs() / f.norm_sq();
            prop_assert!(rel < 1e-13);
            let twice = schrodinger_propagate(&once, eps, t2).unwrap();
            let direct = schrodinger_propagate(&f, eps, t1 + t2).unwrap();
            prop_assert!(max_diff(&twice.values, &direct.values) < 1e-12);
        }

        #[test]
        fn heat_keeps_mean_and_contracts(seed in any::<u64>(), nu in 0.0f64..1.0, tau in 0.0f64..0.1) {
            let g = PeriodicGrid::line(0.0, 1.0, 64).unwrap();
            let f = random_field(&g, seed).real_part();
            let out = heat_propagate_real(&f, nu, tau).unwrap();
            prop_assert!((out.mean() - f.mean()).abs() < 1e-13);
            let n_in: f64 = f.values.iter().map(|x| x * x).sum();
            let n_out: f64 = out.values.iter().map(|x| x * x).sum();
            prop_assert!(n_out <= n_in * (1.0 + 1e-13));
        }
    }
}
