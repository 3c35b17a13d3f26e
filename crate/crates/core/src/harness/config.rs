//! Experiment configuration: flat `key = value` text with `[section]`
//! headers and comma-separated lists.
//!
//! ```text
//! [experiment]
//! equation = ap-nls
//! dim = 1
//! bounds = -0.5, 1.5
//!
//! [coupling]
//! nonlinearity = cubic
//!
//! [initial]
//! tag = gauss-logcosh-1d
//!
//! [sweep]
//! epsilons = 0.1, 0.01, 0.001
//! points = 32, 64, 128, 256, 512, 1024
//! times = 0.05, 0.13
//!
//! [reference]
//! points = 4096
//! dt_factor = 0.01
//!
//! [output]
//! dir = out
//! cache = cache
//! ```
//!
//! Omitted keys take the defaults of [`ExperimentConfig::desk_1d`].

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{GridRef, PeriodicGrid};
use crate::hydro::{HydroModel, TimeStep, Viscosity, DEFAULT_CFL};
use crate::nonlinearity::{Nonlinearity, Potential};
use crate::observables::PhaseRule;

use super::initial::InitialData;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    /// The asymptotic-preserving hydrodynamic scheme.
    ApNls,
    /// The time-splitting spectral solver on the sweep grids.
    SplittingNls,
    /// The viscous eikonal equation with a linear potential.
    Eikonal,
    /// The AP scheme for the linear equation with an external potential.
    Linear,
}

impl Equation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Equation::ApNls => "ap-nls",
            Equation::SplittingNls => "splitting-nls",
            Equation::Eikonal => "eikonal",
            Equation::Linear => "linear",
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Equation::Eikonal | Equation::Linear)
    }
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ap-nls" => Equation::ApNls,
            "splitting-nls" => Equation::SplittingNls,
            "eikonal" => Equation::Eikonal,
            "linear" => Equation::Linear,
            other => return Err(Error::Config(format!("unknown equation `{other}`"))),
        })
    }
}

/// Nonlinearities expressible in a config file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NonlinearitySpec {
    Cubic,
    CubicQuintic { lambda: f64 },
    Saturated { delta: f64, eta: f64, lambda: f64 },
}

impl NonlinearitySpec {
    pub fn build(&self) -> Nonlinearity {
        match *self {
            NonlinearitySpec::Cubic => Nonlinearity::Cubic,
            NonlinearitySpec::CubicQuintic { lambda } => Nonlinearity::CubicQuintic { lambda },
            NonlinearitySpec::Saturated { delta, eta, lambda } => Nonlinearity::Saturated { delta, eta, lambda },
        }
    }

    pub fn describe(&self) -> String {
        match self {
            NonlinearitySpec::Cubic => "cubic".into(),
            NonlinearitySpec::CubicQuintic { lambda } => format!("cubic-quintic lambda={lambda:?}"),
            NonlinearitySpec::Saturated { delta, eta, lambda } => {
                format!("saturated delta={delta:?} eta={eta:?} lambda={lambda:?}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Zero,
    Cosine { amplitude: f64 },
    /// One nodal value per line, sampled on the sweep grid.
    Table { path: PathBuf },
}

impl PotentialSpec {
    pub fn build(&self) -> Result<Potential> {
        Ok(match self {
            PotentialSpec::Zero => Potential::Zero,
            PotentialSpec::Cosine { amplitude } => Potential::Cosine { amplitude: *amplitude },
            PotentialSpec::Table { path } => {
                let text = fs::read_to_string(path)?;
                let values = text
                    .split_whitespace()
                    .map(|s| {
                        s.parse::<f64>()
                            .map_err(|_| Error::Config(format!("bad potential sample `{s}` in {}", path.display())))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Potential::Table(Arc::new(values))
            }
        })
    }

    pub fn describe(&self) -> String {
        match self {
            PotentialSpec::Zero => "zero".into(),
            PotentialSpec::Cosine { amplitude } => format!("cosine amplitude={amplitude:?}"),
            PotentialSpec::Table { path } => format!("table path={}", path.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub equation: Equation,
    pub dim: usize,
    /// Bounds shared by every axis.
    pub bounds: (f64, f64),
    pub nonlinearity: NonlinearitySpec,
    pub potential: PotentialSpec,
    /// `None` means `ν = ε²` for the Schrödinger pathways and `ν = 1` for
    /// the eikonal equation.
    pub viscosity: Option<f64>,
    pub initial: InitialData,
    pub epsilons: Vec<f64>,
    pub points: Vec<usize>,
    pub times: Vec<f64>,
    pub cfl: f64,
    pub dt_max: f64,
    pub phase_rule: PhaseRule,
    pub reference_points: usize,
    /// Reference time step is `dt_factor · ε`.
    pub reference_dt_factor: f64,
    pub out_dir: PathBuf,
    pub cache_dir: PathBuf,
    /// Record wall times in tables. Off keeps tables byte-reproducible.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::desk_1d()
    }
}

impl ExperimentConfig {
    /// 1D gauss-logcosh sweep at desk scale.
    pub fn desk_1d() -> Self {
        ExperimentConfig {
            equation: Equation::ApNls,
            dim: 1,
            bounds: (-0.5, 1.5),
            nonlinearity: NonlinearitySpec::Cubic,
            potential: PotentialSpec::Zero,
            viscosity: None,
            initial: InitialData::GaussLogcosh1d,
            epsilons: vec![1e-1, 1e-2, 1e-3],
            points: (5..=10).map(|m| 1 << m).collect(),
            times: vec![0.05, 0.13],
            cfl: DEFAULT_CFL,
            dt_max: 1e-2,
            phase_rule: PhaseRule::LeftRectangle,
            reference_points: 1 << 12,
            reference_dt_factor: 1e-2,
            out_dir: PathBuf::from("out"),
            cache_dir: PathBuf::from("cache"),
            timing: false,
        }
    }

    /// Radial 2D sweep at desk scale.
    pub fn desk_2d() -> Self {
        ExperimentConfig {
            dim: 2,
            initial: InitialData::GaussLogcosh2d,
            epsilons: vec![5e-2, 1e-2, 5e-3],
            points: (5..=9).map(|m| 1 << m).collect(),
            times: vec![0.05],
            reference_points: 1 << 10,
            ..Self::desk_1d()
        }
    }

    pub fn grid(&self, points: usize) -> Result<GridRef> {
        PeriodicGrid::make(self.dim, &[self.bounds; 2][..self.dim], &[points; 2][..self.dim])
    }

    pub fn t_final(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn time_step(&self) -> TimeStep {
        TimeStep::Cfl {
            cfl: self.cfl,
            dt_max: self.dt_max,
        }
    }

    /// The coupling the solvers see: the nonlinearity, or the potential for
    /// linear equations.
    pub fn coupling(&self) -> Result<Nonlinearity> {
        if self.equation.is_linear() {
            Ok(Nonlinearity::LinearPotential(self.potential.build()?))
        } else {
            Ok(self.nonlinearity.build())
        }
    }

    pub fn model(&self) -> Result<HydroModel> {
        let mut model = HydroModel::new(self.coupling()?);
        if let Some(nu) = self.viscosity {
            model = model.with_viscosity(Viscosity::Fixed(nu));
        }
        Ok(model)
    }

    /// The eikonal viscosity (defaults to one).
    pub fn eikonal_viscosity(&self) -> f64 {
        self.viscosity.unwrap_or(1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !(1..=2).contains(&self.dim) {
            return fail(format!("dim must be 1 or 2, got {}", self.dim));
        }
        if !(self.bounds.0 < self.bounds.1) || !self.bounds.0.is_finite() || !self.bounds.1.is_finite() {
            return fail(format!("bounds {:?} must be finite and increasing", self.bounds));
        }
        if self.epsilons.is_empty() || self.points.is_empty() || self.times.is_empty() {
            return fail("epsilons, points and times must be non-empty".into());
        }
        if self.epsilons.iter().any(|e| !(*e >= 0.0) || !e.is_finite()) {
            return fail("epsilons must be finite and non-negative".into());
        }
        if self.points.iter().any(|j| !j.is_power_of_two() || *j < 4) {
            return fail(format!("points {:?} must be powers of two >= 4", self.points));
        }
        if self.points.windows(2).any(|w| w[0] >= w[1]) {
            return fail(format!("points {:?} must be strictly ascending", self.points));
        }
        if self.times.windows(2).any(|w| !(w[0] < w[1])) || !(self.times[0] > 0.0) {
            return fail(format!("times {:?} must be positive and strictly ascending", self.times));
        }
        let largest = *self.points.last().unwrap();
        if self.reference_points <= largest || self.reference_points % largest != 0 {
            return fail(format!(
                "reference points {} must exceed and be a multiple of every sweep J",
                self.reference_points
            ));
        }
        if !(self.cfl > 0.0) || !(self.dt_max > 0.0) || !(self.reference_dt_factor > 0.0) {
            return fail("cfl, dt_max and dt_factor must be positive".into());
        }
        if let Some(nu) = self.viscosity {
            if !(nu >= 0.0) {
                return fail(format!("viscosity must be non-negative, got {nu}"));
            }
        }
        if self.equation == Equation::Eikonal && !(self.eikonal_viscosity() > 0.0) {
            return fail("the eikonal equation needs a positive viscosity".into());
        }
        self.nonlinearity.build().validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_string())?;
        Ok(())
    }

    /// Metadata lines recorded beside every table.
    pub fn metadata(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "equation {}", self.equation.as_str());
        let _ = writeln!(out, "coupling {}", self.coupling_description());
        let _ = writeln!(out, "initial {}", self.initial.describe());
        let _ = writeln!(out, "epsilons {}", join(&self.epsilons));
        let _ = writeln!(out, "current_norm componentwise-sum");
        out
    }

    pub fn coupling_description(&self) -> String {
        if self.equation.is_linear() {
            format!("linear-potential {}", self.potential.describe())
        } else {
            self.nonlinearity.describe()
        }
    }
}

fn join<T: fmt::Debug>(xs: &[T]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

fn phase_rule_name(rule: PhaseRule) -> &'static str {
    match rule {
        PhaseRule::LeftRectangle => "left-rectangle",
        PhaseRule::Trapezoid => "trapezoid",
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[experiment]")?;
        writeln!(f, "equation = {}", self.equation.as_str())?;
        writeln!(f, "dim = {}", self.dim)?;
        writeln!(f, "bounds = {:?}, {:?}", self.bounds.0, self.bounds.1)?;

        writeln!(f, "\n[coupling]")?;
        match self.nonlinearity {
            NonlinearitySpec::Cubic => writeln!(f, "nonlinearity = cubic")?,
            NonlinearitySpec::CubicQuintic { lambda } => {
                writeln!(f, "nonlinearity = cubic-quintic\nlambda = {lambda:?}")?
            }
            NonlinearitySpec::Saturated { delta, eta, lambda } => writeln!(
                f,
                "nonlinearity = saturated\ndelta = {delta:?}\neta = {eta:?}\nlambda = {lambda:?}"
            )?,
        }
        match &self.potential {
            PotentialSpec::Zero => writeln!(f, "potential = zero")?,
            PotentialSpec::Cosine { amplitude } => writeln!(f, "potential = cosine\namplitude = {amplitude:?}")?,
            PotentialSpec::Table { path } => writeln!(f, "potential = table\ntable = {}", path.display())?,
        }
        match self.viscosity {
            Some(nu) => writeln!(f, "viscosity = {nu:?}")?,
            None => writeln!(f, "viscosity = default")?,
        }

        writeln!(f, "\n[initial]")?;
        writeln!(f, "tag = {}", self.initial.tag())?;
        match &self.initial {
            InitialData::Maxwell2Temp { theta1, theta2 } => writeln!(f, "theta1 = {theta1:?}\ntheta2 = {theta2:?}")?,
            InitialData::PlaneWave { amplitude } => writeln!(f, "re = {:?}\nim = {:?}", amplitude.re, amplitude.im)?,
            InitialData::CustomSnapshot { path } => writeln!(f, "path = {}", path.display())?,
            _ => {}
        }

        writeln!(f, "\n[sweep]")?;
        writeln!(f, "epsilons = {}", join(&self.epsilons))?;
        writeln!(f, "points = {}", join(&self.points))?;
        writeln!(f, "times = {}", join(&self.times))?;
        writeln!(f, "cfl = {:?}", self.cfl)?;
        writeln!(f, "dt_max = {:?}", self.dt_max)?;
        writeln!(f, "phase_rule = {}", phase_rule_name(self.phase_rule))?;

        writeln!(f, "\n[reference]")?;
        writeln!(f, "points = {}", self.reference_points)?;
        writeln!(f, "dt_factor = {:?}", self.reference_dt_factor)?;

        writeln!(f, "\n[output]")?;
        writeln!(f, "dir = {}", self.out_dir.display())?;
        writeln!(f, "cache = {}", self.cache_dir.display())?;
        writeln!(f, "timing = {}", self.timing)
    }
}

/// Raw `(section, key) → (value, line)` entries, consumed as they are read
/// so leftovers can be reported.
struct Entries(BTreeMap<(String, String), (String, usize)>);

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut section = String::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = n + 1;
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_owned();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {lineno}: expected `key = value`")))?;
            let k = (section.clone(), key.trim().to_owned());
            if map.insert(k.clone(), (value.trim().to_owned(), lineno)).is_some() {
                return Err(Error::Config(format!("line {lineno}: duplicate key `{}.{}`", k.0, k.1)));
            }
        }
        Ok(Entries(map))
    }

    fn take(&mut self, section: &str, key: &str) -> Option<(String, usize)> {
        self.0.remove(&(section.to_owned(), key.to_owned()))
    }

    fn get<T: FromStr>(&mut self, section: &str, key: &str) -> Result<Option<T>> {
        match self.take(section, key) {
            None => Ok(None),
            Some((value, line)) => value
                .parse()
                .map(Some)
                .map_err(|_| Error::Config(format!("line {line}: bad value `{value}` for `{section}.{key}`"))),
        }
    }

    fn list<T: FromStr>(&mut self, section: &str, key: &str) -> Result<Option<Vec<T>>> {
        match self.take(section, key) {
            None => Ok(None),
            Some((value, line)) => value
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("line {line}: bad list item `{}` in `{section}.{key}`", s.trim())))
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    fn require<T: FromStr>(&mut self, section: &str, key: &str) -> Result<T> {
        self.get(section, key)?
            .ok_or_else(|| Error::Config(format!("missing `{section}.{key}`")))
    }

    fn finish(self) -> Result<()> {
        match self.0.into_iter().next() {
            None => Ok(()),
            Some(((s, k), (_, line))) => Err(Error::Config(format!("line {line}: unknown key `{s}.{k}`"))),
        }
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut e = Entries::parse(text)?;
        let mut c = ExperimentConfig::desk_1d();

        if let Some(eq) = e.get("experiment", "equation")? {
            c.equation = eq;
        }
        if let Some(dim) = e.get("experiment", "dim")? {
            c.dim = dim;
            if dim == 2 {
                let d2 = ExperimentConfig::desk_2d();
                c.initial = d2.initial;
                c.epsilons = d2.epsilons;
                c.points = d2.points;
                c.times = d2.times;
                c.reference_points = d2.reference_points;
            }
        }
        if let Some(b) = e.list::<f64>("experiment", "bounds")? {
            match b[..] {
                [lo, hi] => c.bounds = (lo, hi),
                _ => return Err(Error::Config("bounds takes two values".into())),
            }
        }

        let nl: Option<String> = e.get("coupling", "nonlinearity")?;
        c.nonlinearity = match nl.as_deref() {
            None | Some("cubic") => NonlinearitySpec::Cubic,
            Some("cubic-quintic") => NonlinearitySpec::CubicQuintic {
                lambda: e.require("coupling", "lambda")?,
            },
            Some("saturated") => NonlinearitySpec::Saturated {
                delta: e.require("coupling", "delta")?,
                eta: e.require("coupling", "eta")?,
                lambda: e.require("coupling", "lambda")?,
            },
            Some(other) => return Err(Error::Config(format!("unknown nonlinearity `{other}`"))),
        };
        let pot: Option<String> = e.get("coupling", "potential")?;
        c.potential = match pot.as_deref() {
            None | Some("zero") => PotentialSpec::Zero,
            Some("cosine") => PotentialSpec::Cosine {
                amplitude: e.require("coupling", "amplitude")?,
            },
            Some("table") => PotentialSpec::Table {
                path: e.require::<String>("coupling", "table")?.into(),
            },
            Some(other) => return Err(Error::Config(format!("unknown potential `{other}`"))),
        };
        let visc: Option<String> = e.get("coupling", "viscosity")?;
        c.viscosity = match visc.as_deref() {
            None | Some("default") => None,
            Some(s) => Some(s.parse().map_err(|_| Error::Config(format!("bad viscosity `{s}`")))?),
        };

        let tag: Option<String> = e.get("initial", "tag")?;
        if let Some(tag) = tag {
            c.initial = match tag.as_str() {
                "gauss-logcosh-1d" => InitialData::GaussLogcosh1d,
                "gauss-logcosh-2d" => InitialData::GaussLogcosh2d,
                "maxwell-2temp" => {
                    let InitialData::Maxwell2Temp { theta1, theta2 } = InitialData::MAXWELL_DEFAULT else {
                        unreachable!()
                    };
                    InitialData::Maxwell2Temp {
                        theta1: e.get("initial", "theta1")?.unwrap_or(theta1),
                        theta2: e.get("initial", "theta2")?.unwrap_or(theta2),
                    }
                }
                "plane-wave" => InitialData::PlaneWave {
                    amplitude: Complex64::new(
                        e.get("initial", "re")?.unwrap_or(1.0),
                        e.get("initial", "im")?.unwrap_or(0.0),
                    ),
                },
                "custom-snapshot" => InitialData::CustomSnapshot {
                    path: e.require::<String>("initial", "path")?.into(),
                },
                other => return Err(Error::Config(format!("unknown initial data `{other}`"))),
            };
        }

        if let Some(v) = e.list("sweep", "epsilons")? {
            c.epsilons = v;
        }
        if let Some(v) = e.list("sweep", "points")? {
            c.points = v;
        }
        if let Some(v) = e.list("sweep", "times")? {
            c.times = v;
        }
        if let Some(v) = e.get("sweep", "cfl")? {
            c.cfl = v;
        }
        if let Some(v) = e.get("sweep", "dt_max")? {
            c.dt_max = v;
        }
        let rule: Option<String> = e.get("sweep", "phase_rule")?;
        c.phase_rule = match rule.as_deref() {
            None | Some("left-rectangle") => PhaseRule::LeftRectangle,
            Some("trapezoid") => PhaseRule::Trapezoid,
            Some(other) => return Err(Error::Config(format!("unknown phase rule `{other}`"))),
        };

        if let Some(v) = e.get("reference", "points")? {
            c.reference_points = v;
        }
        if let Some(v) = e.get("reference", "dt_factor")? {
            c.reference_dt_factor = v;
        }

        if let Some(v) = e.get::<String>("output", "dir")? {
            c.out_dir = v.into();
        }
        if let Some(v) = e.get::<String>("output", "cache")? {
            c.cache_dir = v.into();
        }
        if let Some(v) = e.get("output", "timing")? {
            c.timing = v;
        }
        e.finish()?;
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn desk_defaults_validate() {
        ExperimentConfig::desk_1d().validate().unwrap();
        ExperimentConfig::desk_2d().validate().unwrap();
        assert_eq!(ExperimentConfig::desk_1d().points, vec![32, 64, 128, 256, 512, 1024]);
    }

    #[test]
    fn minimal_file_takes_defaults() {
        let c: ExperimentConfig = "[sweep]\nepsilons = 0.05\npoints = 128, 256\ntimes = 0.05\n".parse().unwrap();
        assert_eq!(c.epsilons, vec![0.05]);
        assert_eq!(c.equation, Equation::ApNls);
        assert_eq!(c.reference_points, 4096);
    }

    #[test]
    fn rejects_invalid_files() {
        for bad in [
            "[sweep]\npoints = 256, 128\n",
            "[sweep]\npoints = 100\n",
            "[sweep]\ntimes = 0.13, 0.05\n",
            "[reference]\npoints = 1024\n",
            "[reference]\npoints = 1536\n",
            "[sweep]\ncolour = blue\n",
            "[experiment]\nequation = heat\n",
            "[coupling]\nnonlinearity = cubic-quintic\n",
            "[coupling]\nnonlinearity = cubic-quintic\nlambda = -1\n",
            "no equals sign\n",
        ] {
            assert!(matches!(bad.parse::<ExperimentConfig>(), Err(Error::Config(_))), "{bad}");
        }
    }

    fn arb_config() -> impl Strategy<Value = ExperimentConfig> {
        (
            prop_oneof![
                Just(Equation::ApNls),
                Just(Equation::SplittingNls),
                Just(Equation::Eikonal),
                Just(Equation::Linear)
            ],
            prop_oneof![
                Just(NonlinearitySpec::Cubic),
                (0.0f64..3.0).prop_map(|lambda| NonlinearitySpec::CubicQuintic { lambda }),
                (0.01f64..2.0, 0.01f64..2.0, 0.01f64..5.0)
                    .prop_map(|(delta, eta, lambda)| NonlinearitySpec::Saturated { delta, eta, lambda }),
            ],
            prop_oneof![
                Just(PotentialSpec::Zero),
                (-2.0f64..2.0).prop_map(|amplitude| PotentialSpec::Cosine { amplitude }),
            ],
            proptest::option::of(0.01f64..2.0),
            proptest::collection::btree_set(1u32..10_000, 1..4),
            (3usize..8, 1usize..4, 1usize..3),
            proptest::collection::btree_set(1u32..1000, 1..4),
            any::<bool>(),
        )
            .prop_map(|(equation, nonlinearity, potential, viscosity, eps, (m0, count, extra), times, timing)| {
                let points: Vec<usize> = (m0..m0 + count).map(|m| 1 << m).collect();
                ExperimentConfig {
                    equation,
                    nonlinearity,
                    potential,
                    viscosity,
                    epsilons: eps.into_iter().rev().map(|k| k as f64 * 1e-4).collect(),
                    reference_points: points.last().unwrap() << extra,
                    points,
                    times: times.into_iter().map(|t| t as f64 * 1e-3).collect(),
                    timing,
                    phase_rule: if timing { PhaseRule::Trapezoid } else { PhaseRule::LeftRectangle },
                    ..ExperimentConfig::desk_1d()
                }
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn parse_serialize_round_trip(c in arb_config()) {
            let text = c.to_string();
            let back: ExperimentConfig = text.parse().unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(back.to_string(), text);
        }
    }

    #[test]
    fn two_dimensional_round_trip_with_maxwell() {
        let c = ExperimentConfig {
            initial: InitialData::MAXWELL_DEFAULT,
            ..ExperimentConfig::desk_2d()
        };
        let back: ExperimentConfig = c.to_string().parse().unwrap();
        assert_eq!(back, c);
    }
}
