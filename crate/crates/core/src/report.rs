//! Parameter sweeps comparing the soliton test with minimality of the orbit,
//! and the JSON / CSV / table emitters used by the command-line front end.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::Family;
use crate::moduli::{check_lambda, representative_matrix};
use crate::orbit::{orbit_at_in, MINIMAL_TOL};
use crate::soliton::{soliton_from_frame_in, SOLITON_TOL};
use crate::Arithmetic;

/// One grid point of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub family: String,
    pub a: Option<f64>,
    pub lambda: f64,
    pub is_soliton: bool,
    pub soliton_residual: f64,
    #[serde(rename = "H_norm")]
    pub h_norm: f64,
    pub orbit_dim: usize,
    pub agrees: bool,
}

pub const CSV_HEADER: &str = "family,a,lambda,is_soliton,soliton_residual,H_norm,orbit_dim,agrees";

#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    /// `start + (stop − start)·i/(count − 1)`; endpoints are hit exactly.
    Linear {
        start: f64,
        stop: f64,
        count: usize,
    },
    /// Geometric spacing between positive endpoints.
    Log {
        start: f64,
        stop: f64,
        count: usize,
    },
    Explicit(Vec<f64>),
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            Grid::Linear { start, stop, count } => {
                spaced(start, stop, count, |t| start + (stop - start) * t)
            }
            Grid::Log { start, stop, count } => {
                let (l0, l1) = (start.ln(), stop.ln());
                spaced(start, stop, count, |t| (l0 + (l1 - l0) * t).exp())
            }
            Grid::Explicit(ref v) => v.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        match *self {
            Grid::Linear { start, stop, count } | Grid::Log { start, stop, count } => {
                if count == 0 {
                    return bad("grid count must be at least 1".into());
                }
                if !(start.is_finite() && stop.is_finite()) {
                    return bad(format!("grid endpoints must be finite: {start}, {stop}"));
                }
                if matches!(self, Grid::Log { .. }) && !(start > 0.0 && stop > 0.0) {
                    return bad("log grid needs positive endpoints".into());
                }
                Ok(())
            }
            Grid::Explicit(ref v) if v.is_empty() => bad("empty lambda list".into()),
            Grid::Explicit(_) => Ok(()),
        }
    }
}

fn spaced(start: f64, stop: f64, count: usize, at: impl Fn(f64) -> f64) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let last = count - 1;
    (0..count)
        .map(|i| match i {
            0 => start,
            i if i == last => stop,
            i => at(i as f64 / last as f64),
        })
        .collect()
}

impl FromStr for Grid {
    type Err = Error;

    /// `start:stop:count` (linear) or `log:start:stop:count`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || {
            Error::Parse(format!(
                "grid must be start:stop:count or log:start:stop:count, got {s:?}"
            ))
        };
        let (log, rest) = match s.strip_prefix("log:") {
            Some(r) => (true, r),
            None => (false, s),
        };
        let parts: Vec<&str> = rest.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(err());
        };
        let start: f64 = a.trim().parse().map_err(|_| err())?;
        let stop: f64 = b.trim().parse().map_err(|_| err())?;
        let count: usize = n.trim().parse().map_err(|_| err())?;
        Ok(if log {
            Grid::Log { start, stop, count }
        } else {
            Grid::Linear { start, stop, count }
        })
    }
}

/// Sweep used when no grid is given.
pub fn default_grid(f: &Family) -> Grid {
    match f {
        Family::R3 => Grid::Log {
            start: 0.1,
            stop: 10.0,
            count: 50,
        },
        Family::R3a(a) if *a != 1.0 => Grid::Linear {
            start: -5.0,
            stop: 5.0,
            count: 51,
        },
        Family::R3pa(_) => Grid::Linear {
            start: 1.0,
            stop: 5.0,
            count: 41,
        },
        // a single orbit
        _ => Grid::Explicit(vec![1.0]),
    }
}

/// Families swept by `verify --all`.
pub fn default_families() -> Vec<Family> {
    let mut v = vec![Family::R3];
    v.extend([-1.0, -0.5, 0.0, 0.5].map(Family::R3a));
    v.extend([0.0, 1.0, 2.0].map(Family::R3pa));
    v.extend([Family::H3, Family::R31]);
    v
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "table",
        })
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub families: Vec<Family>,
    /// `None` uses [`default_grid`] per family.
    pub grid: Option<Grid>,
    pub soliton_tol: f64,
    pub minimal_tol: f64,
    pub mode: Arithmetic,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            families: default_families(),
            grid: None,
            soliton_tol: SOLITON_TOL,
            minimal_tol: MINIMAL_TOL,
            mode: Arithmetic::Float,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn single(f: Family) -> Self {
        RunConfig {
            families: vec![f],
            ..Default::default()
        }
    }

    pub fn with_grid(mut self, grid: Grid) -> Self {
        self.grid = Some(grid);
        self
    }

    /// Every `(family, λ)` pair of the sweep, in output order.
    pub fn jobs(&self) -> Result<Vec<(Family, f64)>> {
        self.validate()?;
        let mut out = Vec::new();
        for f in &self.families {
            let grid = self.grid.clone().unwrap_or_else(|| default_grid(f));
            out.extend(grid.points().into_iter().map(|l| (*f, l)));
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if self.families.is_empty() {
            return Err(Error::InvalidConfig("no families selected".into()));
        }
        for (name, t) in [
            ("soliton_tol", self.soliton_tol),
            ("minimal_tol", self.minimal_tol),
        ] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {t}"
                )));
            }
        }
        for f in &self.families {
            f.validate()
                .map_err(|e| Error::InvalidConfig(e.to_string()))?;
            let grid = self.grid.clone().unwrap_or_else(|| default_grid(f));
            grid.validate()?;
            for l in grid.points() {
                check_lambda(f, l).map_err(|e| Error::InvalidConfig(e.to_string()))?;
            }
        }
        Ok(())
    }
}

/// Soliton test and mean curvature at `g_λ`.
pub fn verify_row(f: &Family, lambda: f64, cfg: &RunConfig) -> Result<VerifyRow> {
    let verdict = soliton_from_frame_in(f, lambda, cfg.soliton_tol, cfg.mode)?;
    let g = representative_matrix(f, lambda)?;
    let h = orbit_at_in(f, &g, cfg.mode)?;
    let residual = verdict
        .certificate
        .as_ref()
        .map_or(f64::NAN, |c| c.residual);
    let minimal = h.norm < cfg.minimal_tol;
    Ok(VerifyRow {
        family: f.tag().to_string(),
        a: f.param(),
        lambda,
        is_soliton: verdict.is_soliton,
        soliton_residual: residual,
        h_norm: h.norm,
        orbit_dim: h.orbit_dim,
        agrees: verdict.is_soliton == minimal,
    })
}

/// Rows in grid order; computed in parallel.
pub fn verify_main_theorem(cfg: &RunConfig) -> Result<Vec<VerifyRow>> {
    let jobs = cfg.jobs()?;
    jobs.par_iter()
        .map(|(f, l)| verify_row(f, *l, cfg))
        .collect()
}

/// 0 when every row agrees, 1 otherwise.
pub fn exit_status(rows: &[VerifyRow]) -> i32 {
    if rows.iter().all(|r| r.agrees) {
        0
    } else {
        1
    }
}

pub fn emit_report(rows: &[VerifyRow], format: Format) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyReport);
    }
    Ok(match format {
        Format::Json => serde_json::to_string(rows)? + "\n",
        Format::Csv => to_csv(rows)?,
        Format::Table => to_table(rows),
    })
}

fn opt(a: Option<f64>) -> String {
    a.map(|v| v.to_string()).unwrap_or_default()
}

fn to_csv(rows: &[VerifyRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writes UTF-8 for UTF-8 input"))
}

fn to_table(rows: &[VerifyRow]) -> String {
    let header: Vec<String> = CSV_HEADER.split(',').map(String::from).collect();
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.family.clone(),
                opt(r.a),
                format!("{:.6}", r.lambda),
                r.is_soliton.to_string(),
                format!("{:.3e}", r.soliton_residual),
                format!("{:.3e}", r.h_norm),
                r.orbit_dim.to_string(),
                r.agrees.to_string(),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            body.iter()
                .map(|row| row[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut s = String::new();
    for line in std::iter::once(&header).chain(body.iter()) {
        let cells: Vec<String> = line
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        s.push_str(cells.join("  ").trim_end());
        s.push('\n');
    }
    s
}
