//! Single solves written to disk as snapshots plus key-value metadata.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::eikonal::eikonal_snapshots;
use crate::error::Result;
use crate::hydro::{self, RunOptions};
use crate::observables::{observables, wave_observables, ObservableSet};
use crate::reference::strang_solve;
use crate::snapshot::{Snapshot, SnapshotKind};

use super::config::{Equation, ExperimentConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub epsilon: f64,
    pub points: usize,
    pub steps: usize,
    pub wall_time: f64,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    pub fn metadata(&self, config: &ExperimentConfig) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "equation = {}", config.equation.as_str());
        let _ = writeln!(out, "epsilon = {:?}", self.epsilon);
        let _ = writeln!(out, "J = {}", self.points);
        let _ = writeln!(out, "cfl = {:?}", config.cfl);
        let _ = writeln!(out, "coupling = {}", config.coupling_description());
        let _ = writeln!(out, "initial = {}", config.initial.describe());
        let _ = writeln!(out, "steps = {}", self.steps);
        let _ = writeln!(out, "walltime_s = {:.6}", self.wall_time);
        out
    }
}

fn write_observables(dir: &Path, stem: &str, obs: &ObservableSet, eps: f64, t: f64, files: &mut Vec<PathBuf>) -> Result<()> {
    let items = [
        (Snapshot::from_scalar(&obs.rho, SnapshotKind::Rho, eps, t), "rho"),
        (Snapshot::from_vector(&obs.current, SnapshotKind::Current, eps, t), "current"),
        (Snapshot::from_scalar(&obs.energy, SnapshotKind::Energy, eps, t), "energy"),
    ];
    for (snap, name) in items {
        let path = dir.join(format!("{stem}-{name}-t{t}.dat"));
        snap.write(&path)?;
        files.push(path);
    }
    Ok(())
}

/// Solve one `(ε, J)` cell of `config` and write its snapshots into `dir`
/// under the stem `eps<ε>-J<J>`, followed by `<stem>-meta.txt`.
pub fn run_and_write(config: &ExperimentConfig, epsilon: f64, points: usize, dir: impl AsRef<Path>) -> Result<RunSummary> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let grid = config.grid(points)?;
    let stem = format!("eps{epsilon}-J{points}");
    let mut files = Vec::new();
    let started = Instant::now();
    let steps = match config.equation {
        Equation::ApNls | Equation::Linear => {
            let state = config.initial.hydro_state(&grid, epsilon)?;
            let options = RunOptions {
                time_step: config.time_step(),
                output_times: config.times.clone(),
                phase: Some(config.phase_rule),
            };
            let traj = hydro::run(&state, config.t_final(), &config.model()?, &options)?;
            for s in &traj.snapshots {
                write_observables(dir, &stem, &observables(&s.a, &s.v, epsilon)?, epsilon, s.t, &mut files)?;
                let path = dir.join(format!("{stem}-phase-t{}.dat", s.t));
                Snapshot::from_scalar(&s.phi, SnapshotKind::Phase, epsilon, s.t).write(&path)?;
                files.push(path);
            }
            traj.steps
        }
        Equation::SplittingNls => {
            let initial = config.initial.wave_state(&grid, epsilon)?;
            let dt = config.reference_dt_factor * epsilon;
            let states = strang_solve(&initial, config.t_final(), dt, &config.coupling()?, &config.times)?;
            for s in &states {
                write_observables(dir, &stem, &wave_observables(&s.u, epsilon)?, epsilon, s.t, &mut files)?;
                let path = dir.join(format!("{stem}-u-t{}.dat", s.t));
                Snapshot::from_complex(&s.u, epsilon, s.t).write(&path)?;
                files.push(path);
            }
            // same step count as the solver's landing rule
            let mut prev = 0.0;
            let mut steps = 0;
            for &t in &config.times {
                steps += ((t - prev) / dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
                prev = t;
            }
            steps
        }
        Equation::Eikonal => {
            let phi0 = config.initial.phase(&grid)?;
            let snaps = eikonal_snapshots(
                &phi0,
                &config.potential.build()?,
                config.eikonal_viscosity(),
                &config.times,
                config.time_step(),
            )?;
            for ((phi, v), &t) in snaps.iter().zip(&config.times) {
                for (snap, name) in [
                    (Snapshot::from_scalar(phi, SnapshotKind::Phase, 0.0, t), "phase"),
                    (Snapshot::from_vector(v, SnapshotKind::RealVec, 0.0, t), "velocity"),
                ] {
                    let path = dir.join(format!("{stem}-{name}-t{t}.dat"));
                    snap.write(&path)?;
                    files.push(path);
                }
            }
            0
        }
    };
    let mut summary = RunSummary {
        epsilon,
        points,
        steps,
        wall_time: started.elapsed().as_secs_f64(),
        files,
    };
    let meta = dir.join(format!("{stem}-meta.txt"));
    fs::write(&meta, summary.metadata(config))?;
    summary.files.push(meta);
    Ok(summary)
}
