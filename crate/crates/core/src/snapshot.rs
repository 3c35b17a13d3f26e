//! Plain-text field snapshots.
//!
//! ```text
//! dim 1
//! J 256
//! bounds -0.5 1.5
//! epsilon 0.05
//! time 0.05
//! kind complex
//! <one node per line, row-major>
//! ```
//!
//! Complex snapshots carry `re im` per node, vector kinds one value per
//! component, scalar kinds a single value. Floats are written with 17
//! significant digits so a write/read cycle is lossless.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Axis, ComplexField, GridRef, PeriodicGrid, RealField, RealVectorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotKind {
    Complex,
    RealVec,
    Rho,
    Current,
    Energy,
    Phase,
}

impl SnapshotKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SnapshotKind::Complex => "complex",
            SnapshotKind::RealVec => "realvec",
            SnapshotKind::Rho => "rho",
            SnapshotKind::Current => "current",
            SnapshotKind::Energy => "energy",
            SnapshotKind::Phase => "phase",
        }
    }

    fn columns(&self, dim: usize) -> usize {
        match self {
            SnapshotKind::Complex => 2,
            SnapshotKind::RealVec | SnapshotKind::Current => dim,
            SnapshotKind::Rho | SnapshotKind::Energy | SnapshotKind::Phase => 1,
        }
    }
}

impl FromStr for SnapshotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "complex" => SnapshotKind::Complex,
            "realvec" => SnapshotKind::RealVec,
            "rho" => SnapshotKind::Rho,
            "current" => SnapshotKind::Current,
            "energy" => SnapshotKind::Energy,
            "phase" => SnapshotKind::Phase,
            other => return Err(Error::Format(format!("unknown kind `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub axes: Vec<Axis>,
    pub epsilon: f64,
    pub time: f64,
    pub kind: SnapshotKind,
    /// One vector per column, each with one entry per node.
    pub columns: Vec<Vec<f64>>,
}

impl Snapshot {
    pub fn from_complex(field: &ComplexField, epsilon: f64, time: f64) -> Self {
        Snapshot {
            axes: field.grid.axes().to_vec(),
            epsilon,
            time,
            kind: SnapshotKind::Complex,
            columns: vec![
                field.values.iter().map(|z| z.re).collect(),
                field.values.iter().map(|z| z.im).collect(),
            ],
        }
    }

    pub fn from_vector(field: &RealVectorField, kind: SnapshotKind, epsilon: f64, time: f64) -> Self {
        Snapshot {
            axes: field.grid.axes().to_vec(),
            epsilon,
            time,
            kind,
            columns: field.components.clone(),
        }
    }

    pub fn from_scalar(field: &RealField, kind: SnapshotKind, epsilon: f64, time: f64) -> Self {
        Snapshot {
            axes: field.grid.axes().to_vec(),
            epsilon,
            time,
            kind,
            columns: vec![field.values.clone()],
        }
    }

    pub fn grid(&self) -> Result<GridRef> {
        PeriodicGrid::new(&self.axes)
    }

    pub fn to_complex(&self, grid: &GridRef) -> Result<ComplexField> {
        self.expect_kind(&[SnapshotKind::Complex])?;
        let values = self.columns[0]
            .iter()
            .zip(&self.columns[1])
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        ComplexField::from_values(grid, values)
    }

    pub fn to_vector(&self, grid: &GridRef) -> Result<RealVectorField> {
        self.expect_kind(&[SnapshotKind::RealVec, SnapshotKind::Current])?;
        RealVectorField::from_components(grid, self.columns.clone())
    }

    pub fn to_scalar(&self, grid: &GridRef) -> Result<RealField> {
        self.expect_kind(&[SnapshotKind::Rho, SnapshotKind::Energy, SnapshotKind::Phase])?;
        RealField::from_values(grid, self.columns[0].clone())
    }

    fn expect_kind(&self, allowed: &[SnapshotKind]) -> Result<()> {
        if allowed.contains(&self.kind) {
            Ok(())
        } else {
            Err(Error::Format(format!(
                "snapshot kind `{}` cannot be read as {allowed:?}",
                self.kind.as_str()
            )))
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dim {}", self.axes.len());
        let counts: Vec<String> = self.axes.iter().map(|a| a.points.to_string()).collect();
        let _ = writeln!(out, "J {}", counts.join(" "));
        let bounds: Vec<String> = self
            .axes
            .iter()
            .map(|a| format!("{:.16e} {:.16e}", a.lower, a.upper()))
            .collect();
        let _ = writeln!(out, "bounds {}", bounds.join(" "));
        let _ = writeln!(out, "epsilon {:.16e}", self.epsilon);
        let _ = writeln!(out, "time {:.16e}", self.time);
        let _ = writeln!(out, "kind {}", self.kind.as_str());
        let n = self.columns.first().map_or(0, Vec::len);
        for i in 0..n {
            let row: Vec<String> = self.columns.iter().map(|c| format!("{:.16e}", c[i])).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let mut header = |key: &str| -> Result<Vec<String>> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Format(format!("missing `{key}` line")))?;
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some(k) if k == key => Ok(parts.map(str::to_owned).collect()),
                other => Err(Error::Format(format!("expected `{key}`, found {other:?}"))),
            }
        };
        let dim: usize = parse_one(&header("dim")?, "dim")?;
        let counts: Vec<usize> = parse_all(&header("J")?)?;
        let bounds: Vec<f64> = parse_all(&header("bounds")?)?;
        let epsilon: f64 = parse_one(&header("epsilon")?, "epsilon")?;
        let time: f64 = parse_one(&header("time")?, "time")?;
        let kind: SnapshotKind = header("kind")?
            .first()
            .ok_or_else(|| Error::Format("empty kind".into()))?
            .parse()?;
        if counts.len() != dim || bounds.len() != 2 * dim {
            return Err(Error::Format(format!(
                "dim {dim} does not match {} counts and {} bounds",
                counts.len(),
                bounds.len()
            )));
        }
        let axes: Vec<Axis> = (0..dim)
            .map(|d| Axis::new(bounds[2 * d], bounds[2 * d + 1], counts[d]))
            .collect();
        let ncols = kind.columns(dim);
        let nodes: usize = counts.iter().product();
        let mut columns = vec![Vec::with_capacity(nodes); ncols];
        let mut rows = 0;
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let values: Vec<f64> = parse_all(&line.split_whitespace().map(str::to_owned).collect::<Vec<_>>())?;
            if values.len() != ncols {
                return Err(Error::Format(format!(
                    "row {rows} has {} values, expected {ncols}",
                    values.len()
                )));
            }
            for (c, v) in columns.iter_mut().zip(values) {
                c.push(v);
            }
            rows += 1;
        }
        if rows != nodes {
            return Err(Error::Format(format!("expected {nodes} rows, found {rows}")));
        }
        Ok(Snapshot {
            axes,
            epsilon,
            time,
            kind,
            columns,
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }
}

fn parse_one<T: FromStr>(parts: &[String], key: &str) -> Result<T> {
    match parts {
        [one] => one
            .parse()
            .map_err(|_| Error::Format(format!("bad value `{one}` for `{key}`"))),
        _ => Err(Error::Format(format!("`{key}` takes one value"))),
    }
}

fn parse_all<T: FromStr>(parts: &[String]) -> Result<Vec<T>> {
    parts
        .iter()
        .map(|p| p.parse().map_err(|_| Error::Format(format!("bad number `{p}`"))))
        .collect()
}
