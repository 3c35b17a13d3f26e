//! `(ε, J)` error sweeps against cached fine-grid references.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::eikonal;
use crate::error::{Error, Result};
use crate::grid::{GridRef, RealField, RealVectorField};
use crate::hydro::{self, RunOptions};
use crate::observables::{observables, rel_l1_error, wave_observables};
use crate::reference::strang_solve;
use crate::snapshot::{Snapshot, SnapshotKind};
use crate::spectral;

use super::cache::{ReferenceCache, ReferenceKey};
use super::config::{Equation, ExperimentConfig};

pub const CSV_HEADER: &str = "epsilon,J,t,err_rho,err_j,walltime_s,status";

#[derive(Debug, Clone, PartialEq)]
pub enum CellStatus {
    Ok,
    BlowUp { time: f64 },
    Failed(String),
}

impl CellStatus {
    fn from_error(e: &Error) -> Self {
        match e {
            Error::BlowUp { time, .. } => CellStatus::BlowUp { time: *time },
            other => CellStatus::Failed(other.to_string()),
        }
    }

    pub fn is_ok(&self) -> bool {
        matches!(self, CellStatus::Ok)
    }

    fn to_field(&self) -> String {
        match self {
            CellStatus::Ok => "ok".into(),
            CellStatus::BlowUp { time } => format!("blowup@{time}"),
            CellStatus::Failed(msg) => format!("failed: {}", msg.replace([',', '\n'], ";")),
        }
    }

    fn from_field(s: &str) -> Result<Self> {
        if s == "ok" {
            Ok(CellStatus::Ok)
        } else if let Some(t) = s.strip_prefix("blowup@") {
            t.parse()
                .map(|time| CellStatus::BlowUp { time })
                .map_err(|_| Error::Format(format!("bad status `{s}`")))
        } else if let Some(msg) = s.strip_prefix("failed: ") {
            Ok(CellStatus::Failed(msg.to_owned()))
        } else {
            Err(Error::Format(format!("bad status `{s}`")))
        }
    }
}

/// One row of an error table. For the eikonal equation the two error
/// columns hold the phase and its gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    pub epsilon: f64,
    pub points: usize,
    pub time: f64,
    pub err_rho: f64,
    pub err_j: f64,
    pub wall_time: Option<f64>,
    pub status: CellStatus,
}

impl ErrorRecord {
    fn csv_row(&self) -> String {
        let wall = self.wall_time.map(|w| format!("{w:.6}")).unwrap_or_default();
        format!(
            "{},{},{},{:.10e},{:.10e},{},{}",
            self.epsilon,
            self.points,
            self.time,
            self.err_rho,
            self.err_j,
            wall,
            self.status.to_field()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub records: Vec<ErrorRecord>,
}

impl SweepTable {
    pub fn times(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = Vec::new();
        for r in &self.records {
            if !ts.contains(&r.time) {
                ts.push(r.time);
            }
        }
        ts
    }

    pub fn at_time(&self, t: f64) -> impl Iterator<Item = &ErrorRecord> {
        self.records.iter().filter(move |r| r.time == t)
    }

    /// CSV text for the rows at time `t`, or all rows.
    pub fn to_csv(&self, t: Option<f64>) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for r in self.records.iter().filter(|r| t.map_or(true, |t| r.time == t)) {
            let _ = writeln!(out, "{}", r.csv_row());
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => return Err(Error::Format(format!("unexpected table header {other:?}"))),
        }
        let mut records = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let cols: Vec<&str> = line.splitn(7, ',').collect();
            if cols.len() != 7 {
                return Err(Error::Format(format!("short table row `{line}`")));
            }
            let num = |s: &str| -> Result<f64> {
                s.trim().parse().map_err(|_| Error::Format(format!("bad number `{s}`")))
            };
            records.push(ErrorRecord {
                epsilon: num(cols[0])?,
                points: cols[1]
                    .trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("bad J `{}`", cols[1])))?,
                time: num(cols[2])?,
                err_rho: num(cols[3])?,
                err_j: num(cols[4])?,
                wall_time: if cols[5].is_empty() { None } else { Some(num(cols[5])?) },
                status: CellStatus::from_field(cols[6].trim())?,
            });
        }
        Ok(SweepTable { records })
    }

    /// Reads every `errors-t*.csv` in `dir`.
    pub fn read_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let mut paths: Vec<PathBuf> = fs::read_dir(dir.as_ref())?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.file_name()
                    .and_then(|n| n.to_str())
                    .map_or(false, |n| n.starts_with("errors-t") && n.ends_with(".csv"))
            })
            .collect();
        paths.sort();
        let mut table = SweepTable::default();
        for p in paths {
            table.records.extend(Self::parse_csv(&fs::read_to_string(&p)?)?.records);
        }
        if table.records.is_empty() {
            return Err(Error::Config(format!("no error tables in {}", dir.as_ref().display())));
        }
        Ok(table)
    }

    /// One CSV per output time plus `errors-meta.txt`.
    pub fn write(&self, dir: impl AsRef<Path>, config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for t in self.times() {
            let path = dir.join(format!("errors-t{t}.csv"));
            fs::write(&path, self.to_csv(Some(t)))?;
            written.push(path);
        }
        let meta = dir.join("errors-meta.txt");
        fs::write(&meta, config.metadata())?;
        written.push(meta);
        Ok(written)
    }
}

/// The two compared quantities of one solution at one time.
#[derive(Debug, Clone)]
pub struct Compared {
    pub scalar: RealField,
    pub vector: RealVectorField,
}

fn compare(x: &Compared, reference: &Compared) -> Result<(f64, f64)> {
    Ok((
        rel_l1_error(&x.scalar, &reference.scalar)?,
        rel_l1_error(&x.vector, &reference.vector)?,
    ))
}

fn nls_reference_key(config: &ExperimentConfig, epsilon: f64) -> ReferenceKey {
    ReferenceKey {
        equation: "splitting-nls".into(),
        coupling: config.coupling_description(),
        initial: config.initial.describe(),
        dim: config.dim,
        bounds: config.bounds,
        points: config.reference_points,
        epsilon,
        dt: config.reference_dt_factor * epsilon,
        times: config.times.clone(),
    }
}

/// Splitting-solver reference `u` at every output time, on the reference
/// grid with `Δt = dt_factor·ε`. Requires `Δx ≤ ε/2`.
pub fn nls_reference(config: &ExperimentConfig, epsilon: f64, cache: Option<&ReferenceCache>) -> Result<(Vec<Snapshot>, bool)> {
    if !(epsilon > 0.0) {
        return Err(Error::Config(format!("a splitting reference needs epsilon > 0, got {epsilon}")));
    }
    let grid = config.grid(config.reference_points)?;
    if grid.min_spacing() > 0.5 * epsilon * (1.0 + 1e-12) {
        return Err(Error::Config(format!(
            "reference grid spacing {} exceeds epsilon/2 = {}; raise reference points",
            grid.min_spacing(),
            0.5 * epsilon
        )));
    }
    let compute = || -> Result<Vec<Snapshot>> {
        let initial = config.initial.wave_state(&grid, epsilon)?;
        let dt = config.reference_dt_factor * epsilon;
        let states = strang_solve(&initial, config.t_final(), dt, &config.coupling()?, &config.times)?;
        Ok(states.iter().map(|s| Snapshot::from_complex(&s.u, epsilon, s.t)).collect())
    };
    match cache {
        Some(c) => c.get_or_compute(&nls_reference_key(config, epsilon), compute),
        None => Ok((compute()?, false)),
    }
}

fn eikonal_reference(config: &ExperimentConfig, cache: Option<&ReferenceCache>) -> Result<Vec<Compared>> {
    let grid = config.grid(config.reference_points)?;
    let phi0 = config.initial.phase(&grid)?;
    let nu = config.eikonal_viscosity();
    let potential = config.potential.build()?;
    let phases: Vec<RealField> = if potential.is_zero() {
        config
            .times
            .iter()
            .map(|&t| eikonal::cole_hopf_oracle(&phi0, nu, t))
            .collect::<Result<_>>()?
    } else {
        let key = ReferenceKey {
            equation: "eikonal".into(),
            coupling: format!("{} viscosity={nu:?} cfl={:?}", config.coupling_description(), config.cfl),
            initial: config.initial.describe(),
            dim: config.dim,
            bounds: config.bounds,
            points: config.reference_points,
            epsilon: 0.0,
            dt: config.dt_max,
            times: config.times.clone(),
        };
        let compute = || -> Result<Vec<Snapshot>> {
            let snaps = eikonal::eikonal_snapshots(&phi0, &potential, nu, &config.times, config.time_step())?;
            Ok(snaps
                .iter()
                .zip(&config.times)
                .map(|((phi, _), &t)| Snapshot::from_scalar(phi, SnapshotKind::Phase, 0.0, t))
                .collect())
        };
        let snaps = match cache {
            Some(c) => c.get_or_compute(&key, compute)?.0,
            None => compute()?,
        };
        snaps.iter().map(|s| s.to_scalar(&grid)).collect::<Result<_>>()?
    };
    Ok(phases
        .into_iter()
        .map(|phi| Compared {
            vector: spectral::gradient_real(&phi),
            scalar: phi,
        })
        .collect())
}

fn reference_observables(config: &ExperimentConfig, epsilon: f64, cache: Option<&ReferenceCache>) -> Result<Vec<Compared>> {
    if config.equation == Equation::Eikonal {
        return eikonal_reference(config, cache);
    }
    let grid = config.grid(config.reference_points)?;
    let (snaps, _) = nls_reference(config, epsilon, cache)?;
    snaps
        .iter()
        .map(|s| {
            let obs = wave_observables(&s.to_complex(&grid)?, epsilon)?;
            Ok(Compared {
                scalar: obs.rho,
                vector: obs.current,
            })
        })
        .collect()
}

/// The compared quantities of a sweep-grid solve at every output time.
pub fn solve_cell(config: &ExperimentConfig, epsilon: f64, grid: &GridRef) -> Result<Vec<Compared>> {
    match config.equation {
        Equation::ApNls | Equation::Linear => {
            let state = config.initial.hydro_state(grid, epsilon)?;
            let options = RunOptions {
                time_step: config.time_step(),
                output_times: config.times.clone(),
                phase: None,
            };
            let traj = hydro::run(&state, config.t_final(), &config.model()?, &options)?;
            traj.snapshots
                .iter()
                .map(|s| {
                    let obs = observables(&s.a, &s.v, epsilon)?;
                    Ok(Compared {
                        scalar: obs.rho,
                        vector: obs.current,
                    })
                })
                .collect()
        }
        Equation::SplittingNls => {
            let initial = config.initial.wave_state(grid, epsilon)?;
            let dt = config.reference_dt_factor * epsilon;
            strang_solve(&initial, config.t_final(), dt, &config.coupling()?, &config.times)?
                .iter()
                .map(|s| {
                    let obs = wave_observables(&s.u, epsilon)?;
                    Ok(Compared {
                        scalar: obs.rho,
                        vector: obs.current,
                    })
                })
                .collect()
        }
        Equation::Eikonal => {
            let phi0 = config.initial.phase(grid)?;
            let snaps = eikonal::eikonal_snapshots(
                &phi0,
                &config.potential.build()?,
                config.eikonal_viscosity(),
                &config.times,
                config.time_step(),
            )?;
            Ok(snaps
                .into_iter()
                .map(|(phi, v)| Compared { scalar: phi, vector: v })
                .collect())
        }
    }
}

/// Run every `(ε, J)` cell and compare with the references. Cells are
/// independent jobs on a pool of `threads` workers (all cores when `None`);
/// the table is assembled in config order, time-major. A failing cell or
/// reference is recorded in the status column and does not stop the sweep.
pub fn run_sweep(config: &ExperimentConfig, cache: Option<&ReferenceCache>, threads: Option<usize>) -> Result<SweepTable> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    // the eikonal equation does not depend on ε
    let epsilons: Vec<f64> = if config.equation == Equation::Eikonal {
        vec![0.0]
    } else {
        config.epsilons.clone()
    };
    let grids = config
        .points
        .iter()
        .map(|&j| config.grid(j))
        .collect::<Result<Vec<_>>>()?;

    pool.install(|| {
        let references: Vec<Result<Vec<Compared>>> = epsilons
            .par_iter()
            .map(|&eps| reference_observables(config, eps, cache))
            .collect();
        let cells: Vec<(usize, usize)> = (0..epsilons.len())
            .flat_map(|e| (0..grids.len()).map(move |g| (e, g)))
            .collect();
        let results: Vec<Vec<ErrorRecord>> = cells
            .par_iter()
            .map(|&(e, g)| {
                let eps = epsilons[e];
                let points = config.points[g];
                let failed = |status: CellStatus| -> Vec<ErrorRecord> {
                    config
                        .times
                        .iter()
                        .map(|&t| ErrorRecord {
                            epsilon: eps,
                            points,
                            time: t,
                            err_rho: f64::NAN,
                            err_j: f64::NAN,
                            wall_time: None,
                            status: status.clone(),
                        })
                        .collect()
                };
                let reference = match &references[e] {
                    Ok(r) => r,
                    Err(err) => return failed(CellStatus::Failed(format!("reference: {err}"))),
                };
                let started = Instant::now();
                let solved = solve_cell(config, eps, &grids[g]);
                let wall = config.timing.then(|| started.elapsed().as_secs_f64());
                let solved = match solved {
                    Ok(s) => s,
                    Err(err) => return failed(CellStatus::from_error(&err)),
                };
                config
                    .times
                    .iter()
                    .zip(solved.iter().zip(reference))
                    .map(|(&t, (x, r))| {
                        let (err_rho, err_j, status) = match compare(x, r) {
                            Ok((a, b)) => (a, b, CellStatus::Ok),
                            Err(err) => (f64::NAN, f64::NAN, CellStatus::Failed(err.to_string())),
                        };
                        ErrorRecord {
                            epsilon: eps,
                            points,
                            time: t,
                            err_rho,
                            err_j,
                            wall_time: wall,
                            status,
                        }
                    })
                    .collect()
            })
            .collect();
        let mut records = Vec::with_capacity(results.len() * config.times.len());
        for k in 0..config.times.len() {
            records.extend(results.iter().map(|cell| cell[k].clone()));
        }
        Ok(SweepTable { records })
    })
}
