//! Grouping of error tables into log-log series with fitted slopes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

use super::sweep::ErrorRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMode {
    /// One series per `(t, ε)`, abscissa `J`.
    VsJ,
    /// One series per `(t, J)`, abscissa `ε`.
    VsEps,
}

impl PlotMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlotMode::VsJ => "vs-J",
            PlotMode::VsEps => "vs-eps",
        }
    }
}

impl FromStr for PlotMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vs-J" | "vs-j" => Ok(PlotMode::VsJ),
            "vs-eps" => Ok(PlotMode::VsEps),
            other => Err(Error::Config(format!("unknown plot mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub mode: PlotMode,
    pub time: f64,
    /// The ε (vs-J) or J (vs-eps) shared by the series.
    pub fixed: f64,
    /// `(abscissa, err_rho, err_j)`, failed cells dropped.
    pub rows: Vec<(f64, f64, f64)>,
    pub slope_rho: Option<f64>,
    pub slope_j: Option<f64>,
}

impl Series {
    pub fn file_name(&self) -> String {
        match self.mode {
            PlotMode::VsJ => format!("vsJ-t{}-eps{}.dat", self.time, self.fixed),
            PlotMode::VsEps => format!("vsEps-t{}-J{}.dat", self.time, self.fixed),
        }
    }

    pub fn to_text(&self) -> String {
        let (fixed_name, abscissa) = match self.mode {
            PlotMode::VsJ => ("epsilon", "J"),
            PlotMode::VsEps => ("J", "epsilon"),
        };
        let mut out = String::new();
        let _ = writeln!(out, "# mode {}", self.mode.as_str());
        let _ = writeln!(out, "# t {}", self.time);
        let _ = writeln!(out, "# {fixed_name} {}", self.fixed);
        if let Some(s) = self.slope_rho {
            let _ = writeln!(out, "# slope_rho {s:.4}");
        }
        if let Some(s) = self.slope_j {
            let _ = writeln!(out, "# slope_j {s:.4}");
        }
        let _ = writeln!(out, "{abscissa} err_rho err_j");
        for (x, r, j) in &self.rows {
            let _ = writeln!(out, "{x} {r:.10e} {j:.10e}");
        }
        out
    }
}

/// Least-squares slope of `log y` against `log x`. `None` for fewer than two
/// usable (positive, finite) points.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Convergence order in `J`: minus the fitted slope of error against `J`.
pub fn convergence_order(points: &[usize], errors: &[f64]) -> Option<f64> {
    let xs: Vec<f64> = points.iter().map(|&j| j as f64).collect();
    fit_slope(&xs, errors).map(|s| -s)
}

pub fn series(records: &[ErrorRecord], mode: PlotMode) -> Vec<Series> {
    let mut groups: Vec<(f64, f64, Vec<&ErrorRecord>)> = Vec::new();
    for r in records.iter().filter(|r| r.status.is_ok()) {
        let fixed = match mode {
            PlotMode::VsJ => r.epsilon,
            PlotMode::VsEps => r.points as f64,
        };
        match groups.iter_mut().find(|(t, f, _)| *t == r.time && *f == fixed) {
            Some(g) => g.2.push(r),
            None => groups.push((r.time, fixed, vec![r])),
        }
    }
    groups
        .into_iter()
        .map(|(time, fixed, mut rs)| {
            let key = |r: &&ErrorRecord| match mode {
                PlotMode::VsJ => r.points as f64,
                PlotMode::VsEps => r.epsilon,
            };
            rs.sort_by(|a, b| key(a).total_cmp(&key(b)));
            let rows: Vec<(f64, f64, f64)> = rs.iter().map(|r| (key(r), r.err_rho, r.err_j)).collect();
            let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let slope = |ys: Vec<f64>| fit_slope(&xs, &ys);
            Series {
                mode,
                time,
                fixed,
                slope_rho: slope(rows.iter().map(|r| r.1).collect()),
                slope_j: slope(rows.iter().map(|r| r.2).collect()),
                rows,
            }
        })
        .collect()
}

pub fn emit_plotdata(records: &[ErrorRecord], mode: PlotMode, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::Config("no error records to plot".into()));
    }
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    series(records, mode)
        .iter()
        .map(|s| {
            let path = dir.join(s.file_name());
            fs::write(&path, s.to_text())?;
            Ok(path)
        })
        .collect()
}
