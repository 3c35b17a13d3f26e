//! Periodic rectangular grids and the nodal field containers that live on them.
//!
//! Nodes are stored row-major with the last axis fastest: in 2D the flat index
//! of node `(i, j)` is `i * points(1) + j`. The right endpoint of every axis is
//! excluded, since it coincides with the left one under periodicity.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// One periodic axis: `points` nodes on `[lower, lower + length)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lower: f64,
    pub length: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(lower: f64, upper: f64, points: usize) -> Self {
        Axis {
            lower,
            length: upper - lower,
            points,
        }
    }

    pub fn upper(&self) -> f64 {
        self.lower + self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        self.lower + j as f64 * self.spacing()
    }

    /// Integer mode of transform slot `i`: `0, 1, .., J/2-1, -J/2, .., -1`.
    pub fn mode(&self, i: usize) -> i64 {
        let n = self.points as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    pub fn wavenumber(&self, i: usize) -> f64 {
        2.0 * PI * self.mode(i) as f64 / self.length
    }

    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.points / 2
    }
}

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// A rectangular periodic grid in one or two dimensions, carrying the FFT
/// plans and wavenumber tables used by the spectral operators.
pub struct PeriodicGrid {
    axes: Vec<Axis>,
    plans: Vec<Plans>,
    wavenumbers: Vec<Vec<f64>>,
}

pub type GridRef = Arc<PeriodicGrid>;

impl fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicGrid")
            .field("axes", &self.axes)
            .finish()
    }
}

impl PartialEq for PeriodicGrid {
    fn eq(&self, other: &Self) -> bool {
        self.axes == other.axes
    }
}

impl PeriodicGrid {
    pub fn new(axes: &[Axis]) -> Result<GridRef> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::InvalidGrid(format!(
                "dimension must be 1 or 2, got {}",
                axes.len()
            )));
        }
        for (d, axis) in axes.iter().enumerate() {
            if !axis.points.is_power_of_two() || axis.points < 4 {
                return Err(Error::InvalidGrid(format!(
                    "axis {d}: point count {} is not a power of two >= 4",
                    axis.points
                )));
            }
            if !(axis.length > 0.0) || !axis.length.is_finite() || !axis.lower.is_finite() {
                return Err(Error::InvalidGrid(format!(
                    "axis {d}: length must be positive and finite, got {}",
                    axis.length
                )));
            }
        }
        let mut planner = FftPlanner::new();
        let plans = axes
            .iter()
            .map(|a| Plans {
                forward: planner.plan_fft_forward(a.points),
                inverse: planner.plan_fft_inverse(a.points),
            })
            .collect();
        let wavenumbers = axes
            .iter()
            .map(|a| (0..a.points).map(|i| a.wavenumber(i)).collect())
            .collect();
        Ok(Arc::new(PeriodicGrid {
            axes: axes.to_vec(),
            plans,
            wavenumbers,
        }))
    }

    /// `dim` axes with the given `(lower, upper)` bounds and point counts.
    pub fn make(dim: usize, bounds: &[(f64, f64)], points: &[usize]) -> Result<GridRef> {
        if bounds.len() != dim || points.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "expected {dim} bounds and point counts, got {} and {}",
                bounds.len(),
                points.len()
            )));
        }
        let axes: Vec<Axis> = bounds
            .iter()
            .zip(points)
            .map(|(&(lo, hi), &n)| Axis::new(lo, hi, n))
            .collect();
        Self::new(&axes)
    }

    pub fn line(lower: f64, upper: f64, points: usize) -> Result<GridRef> {
        Self::new(&[Axis::new(lower, upper, points)])
    }

    pub fn square(lower: f64, upper: f64, points: usize) -> Result<GridRef> {
        let axis = Axis::new(lower, upper, points);
        Self::new(&[axis, axis])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, d: usize) -> &Axis {
        &self.axes[d]
    }

    pub fn points(&self, d: usize) -> usize {
        self.axes[d].points
    }

    pub fn spacing(&self, d: usize) -> f64 {
        self.axes[d].spacing()
    }

    pub fn min_spacing(&self) -> f64 {
        self.axes
            .iter()
            .map(Axis::spacing)
            .fold(f64::INFINITY, f64::min)
    }

    /// Volume of one grid cell, the weight of the discrete ℓ¹ and ℓ² norms.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).product()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn wavenumbers(&self, d: usize) -> &[f64] {
        &self.wavenumbers[d]
    }

    /// Per-axis index of a flat node index.
    pub fn unflatten(&self, flat: usize) -> [usize; 2] {
        if self.dim() == 1 {
            [flat, 0]
        } else {
            let n1 = self.axes[1].points;
            [flat / n1, flat % n1]
        }
    }

    pub fn flatten(&self, index: [usize; 2]) -> usize {
        if self.dim() == 1 {
            index[0]
        } else {
            index[0] * self.axes[1].points + index[1]
        }
    }

    /// Physical coordinates of a flat node index; unused trailing entries are 0.
    pub fn coords(&self, flat: usize) -> [f64; 2] {
        let idx = self.unflatten(flat);
        let mut x = [0.0; 2];
        for (d, axis) in self.axes.iter().enumerate() {
            x[d] = axis.node(idx[d]);
        }
        x
    }

    /// Whether `fine` refines `self` by an integer power-of-two factor per
    /// axis on identical bounds, so its nodes contain ours.
    pub fn nests_in(&self, fine: &PeriodicGrid) -> bool {
        self.dim() == fine.dim()
            && self.axes.iter().zip(&fine.axes).all(|(c, f)| {
                f.points >= c.points
                    && f.points % c.points == 0
                    && (c.lower - f.lower).abs() <= 1e-12 * c.length.max(1.0)
                    && (c.length - f.length).abs() <= 1e-12 * c.length.max(1.0)
            })
    }

    /// Flat indices in `fine` of every node of `self`, in our node order.
    pub fn subsample_indices(&self, fine: &PeriodicGrid) -> Result<Vec<usize>> {
        if !self.nests_in(fine) {
            return Err(Error::GridMismatch(format!(
                "{:?} is not nested in {:?}",
                self.axes, fine.axes
            )));
        }
        let strides: Vec<usize> = self
            .axes
            .iter()
            .zip(&fine.axes)
            .map(|(c, f)| f.points / c.points)
            .collect();
        Ok((0..self.len())
            .map(|flat| {
                let idx = self.unflatten(flat);
                let mut fine_idx = [0; 2];
                for d in 0..self.dim() {
                    fine_idx[d] = idx[d] * strides[d];
                }
                fine.flatten(fine_idx)
            })
            .collect())
    }

    pub(crate) fn forward_plan(&self, d: usize) -> &Arc<dyn Fft<f64>> {
        &self.plans[d].forward
    }

    pub(crate) fn inverse_plan(&self, d: usize) -> &Arc<dyn Fft<f64>> {
        &self.plans[d].inverse
    }
}

pub(crate) fn ensure_same_grid(a: &GridRef, b: &GridRef, what: &str) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::GridMismatch(format!(
            "{what}: {:?} vs {:?}",
            a.axes(),
            b.axes()
        )))
    }
}

/// Complex values at the nodes of a grid.
#[derive(Debug, Clone)]
pub struct ComplexField {
    pub grid: GridRef,
    pub values: Vec<Complex64>,
}

impl ComplexField {
    pub fn zeros(grid: &GridRef) -> Self {
        ComplexField {
            grid: grid.clone(),
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_values(grid: &GridRef, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} nodal values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(ComplexField {
            grid: grid.clone(),
            values,
        })
    }

    pub fn from_fn(grid: &GridRef, f: impl Fn([f64; 2]) -> Complex64) -> Self {
        ComplexField {
            grid: grid.clone(),
            values: (0..grid.len()).map(|i| f(grid.coords(i))).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Discrete ‖·‖²_{ℓ²} with the cell-volume weight.
    pub fn norm_sq(&self) -> f64 {
        self.grid.cell_volume() * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn real_part(&self) -> RealField {
        RealField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|z| z.re).collect(),
        }
    }

    pub fn imag_part(&self) -> RealField {
        RealField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|z| z.im).collect(),
        }
    }

    pub fn modulus_sq(&self) -> RealField {
        RealField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|z| z.norm_sqr()).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Real scalar values at the nodes of a grid.
#[derive(Debug, Clone)]
pub struct RealField {
    pub grid: GridRef,
    pub values: Vec<f64>,
}

impl RealField {
    pub fn zeros(grid: &GridRef) -> Self {
        RealField {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_values(grid: &GridRef, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} nodal values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(RealField {
            grid: grid.clone(),
            values,
        })
    }

    pub fn from_fn(grid: &GridRef, f: impl Fn([f64; 2]) -> f64) -> Self {
        RealField {
            grid: grid.clone(),
            values: (0..grid.len()).map(|i| f(grid.coords(i))).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn to_complex(&self) -> ComplexField {
        ComplexField {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
        }
    }
}

/// A real vector field with one component per grid axis.
#[derive(Debug, Clone)]
pub struct RealVectorField {
    pub grid: GridRef,
    pub components: Vec<Vec<f64>>,
}

impl RealVectorField {
    pub fn zeros(grid: &GridRef) -> Self {
        RealVectorField {
            grid: grid.clone(),
            components: vec![vec![0.0; grid.len()]; grid.dim()],
        }
    }

    pub fn from_components(grid: &GridRef, components: Vec<Vec<f64>>) -> Result<Self> {
        if components.len() != grid.dim() {
            return Err(Error::InvalidArgument(format!(
                "expected {} components, got {}",
                grid.dim(),
                components.len()
            )));
        }
        if components.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::InvalidArgument(format!(
                "every component needs {} nodal values",
                grid.len()
            )));
        }
        Ok(RealVectorField {
            grid: grid.clone(),
            components,
        })
    }

    pub fn from_fn(grid: &GridRef, f: impl Fn([f64; 2]) -> [f64; 2]) -> Self {
        let mut out = Self::zeros(grid);
        for i in 0..grid.len() {
            let v = f(grid.coords(i));
            for (d, comp) in out.components.iter_mut().enumerate() {
                comp[i] = v[d];
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_finite(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.iter().all(|x| x.is_finite()))
    }

    pub fn component(&self, d: usize) -> RealField {
        RealField {
            grid: self.grid.clone(),
            values: self.components[d].clone(),
        }
    }

    /// Largest single-component magnitude over all nodes.
    pub fn max_component_abs(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .map(|x| x.abs())
            .fold(0.0, f64::max)
    }

    pub fn norm_sq_at(&self, i: usize) -> f64 {
        self.components.iter().map(|c| c[i] * c[i]).sum()
    }
}
