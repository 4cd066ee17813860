//! Artifact writers. JSON is canonical and carries provenance; CSV is a
//! bare numeric view of the same grid.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use landscape_core::{Direction, ParameterVector, PlaneKind, Scan1DResult, Scan2DResult, ScanKind};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ModelSpec};
use crate::error::{CliError, CliResult};
use crate::SPEC_VERSION;

/// Provenance shared by every JSON artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub model: ModelSpec,
    pub seed: u64,
    pub eval_count: u64,
    pub config: ExperimentConfig,
}

impl Provenance {
    pub fn new(config: &ExperimentConfig, eval_count: u64) -> CliResult<Self> {
        let config = config.provenance()?;
        Ok(Self {
            model: config.model.clone(),
            seed: config.seed,
            eval_count,
            config,
        })
    }
}

/// Top-level JSON layout: version and kind first, then provenance, then
/// the payload fields, then the full configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document<T> {
    pub spec_version: String,
    pub kind: String,
    pub model: ModelSpec,
    pub seed: u64,
    pub eval_count: u64,
    #[serde(flatten)]
    pub body: T,
    pub config: ExperimentConfig,
}

impl<T> Document<T> {
    pub fn new(kind: &str, provenance: &Provenance, body: T) -> Self {
        Self {
            spec_version: SPEC_VERSION.to_string(),
            kind: kind.to_string(),
            model: provenance.model.clone(),
            seed: provenance.seed,
            eval_count: provenance.eval_count,
            body,
            config: provenance.config.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionJson {
    pub vector: Vec<f64>,
    pub norm: f64,
}

impl From<&Direction> for DirectionJson {
    fn from(d: &Direction) -> Self {
        Self {
            vector: d.as_slice().to_vec(),
            norm: d.norm(),
        }
    }
}

/// Payload of a scan artifact. `values` is row-major over `axes[0]`, so
/// cell `(i, j)` is `values[i * shape[1] + j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanBody {
    pub scan_kind: String,
    pub origin: Vec<f64>,
    pub directions: Vec<DirectionJson>,
    pub axes: Vec<Vec<f64>>,
    pub shape: Vec<usize>,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<Vec<f64>>,
    /// Projected trajectories or chains drawn over the grid, in axis units.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overlays: Vec<Vec<[f64; 2]>>,
}

fn scan_kind_name(k: ScanKind) -> &'static str {
    match k {
        ScanKind::Linear => "linear",
        ScanKind::Interpolation => "interpolation",
        ScanKind::Piecewise => "piecewise",
    }
}

impl ScanBody {
    pub fn from_1d(scan: &Scan1DResult) -> Self {
        Self {
            scan_kind: scan_kind_name(scan.kind).into(),
            origin: scan.origin.to_vec(),
            directions: vec![(&scan.direction).into()],
            axes: vec![scan.ts.clone()],
            shape: vec![scan.ts.len()],
            values: scan.values.clone(),
            end: None,
            overlays: Vec::new(),
        }
    }

    pub fn from_2d(scan: &Scan2DResult, overlays: &[Vec<[f64; 2]>]) -> Self {
        let (scan_kind, end) = match &scan.kind {
            PlaneKind::Linear => ("linear", None),
            PlaneKind::Interpolation { end } => ("interpolation", Some(end.to_vec())),
            PlaneKind::Pca => ("pca", None),
        };
        Self {
            scan_kind: scan_kind.into(),
            origin: scan.origin.to_vec(),
            directions: vec![(&scan.dir_x).into(), (&scan.dir_y).into()],
            axes: vec![scan.ts_x.clone(), scan.ts_y.clone()],
            shape: vec![scan.resolution_x(), scan.resolution_y()],
            values: scan.values.clone(),
            end,
            overlays: overlays.to_vec(),
        }
    }

    /// Rebuilds the 2D result. Errors if the body is not a 2D scan.
    pub fn to_2d(&self) -> CliResult<Scan2DResult> {
        if self.shape.len() != 2 || self.axes.len() != 2 || self.directions.len() != 2 {
            return Err(CliError::usage("not a 2D scan document"));
        }
        let interval = |ts: &[f64]| -> CliResult<landscape_core::Interval> {
            Ok(landscape_core::Interval::new(ts[0], ts[ts.len() - 1])?)
        };
        let kind = match (self.scan_kind.as_str(), &self.end) {
            ("interpolation", Some(e)) => PlaneKind::Interpolation {
                end: ParameterVector::new(e.clone())?,
            },
            ("pca", _) => PlaneKind::Pca,
            _ => PlaneKind::Linear,
        };
        Ok(Scan2DResult {
            values: self.values.clone(),
            ts_x: self.axes[0].clone(),
            ts_y: self.axes[1].clone(),
            origin: ParameterVector::new(self.origin.clone())?,
            dir_x: Direction::from_vec(self.directions[0].vector.clone())?,
            dir_y: Direction::from_vec(self.directions[1].vector.clone())?,
            grid: landscape_core::GridSpec::new(
                interval(&self.axes[0])?,
                interval(&self.axes[1])?,
                self.shape[0],
                self.shape[1],
            ),
            kind,
        })
    }
}

/// Pretty-printed JSON with a trailing newline. Non-finite floats are
/// written as `null`.
pub fn to_json_string<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, doc: &T) -> CliResult<()> {
    write_text(path, &to_json_string(doc))
}

pub fn emit_scan_json(
    scan: &Scan2DResult,
    overlays: &[Vec<[f64; 2]>],
    kind: &str,
    provenance: &Provenance,
    path: &Path,
) -> CliResult<()> {
    write_json(path, &Document::new(kind, provenance, ScanBody::from_2d(scan, overlays)))
}

pub fn emit_scan1d_json(scan: &Scan1DResult, kind: &str, provenance: &Provenance, path: &Path) -> CliResult<()> {
    write_json(path, &Document::new(kind, provenance, ScanBody::from_1d(scan)))
}

fn fmt_float(out: &mut String, v: f64) {
    // 17 significant digits: re-parsing gives back the same double.
    write!(out, "{v:.16e}").unwrap();
}

/// `t1,t2,value` rows in row-major order, `ts_x` outermost.
pub fn scan_csv_string(scan: &Scan2DResult) -> String {
    let mut out = String::with_capacity(64 * (scan.values.len() + 1));
    out.push_str("t1,t2,value\n");
    for (i, &t1) in scan.ts_x.iter().enumerate() {
        for (j, &t2) in scan.ts_y.iter().enumerate() {
            fmt_float(&mut out, t1);
            out.push(',');
            fmt_float(&mut out, t2);
            out.push(',');
            fmt_float(&mut out, scan.value(i, j));
            out.push('\n');
        }
    }
    out
}

/// `t,value` rows.
pub fn scan1d_csv_string(scan: &Scan1DResult) -> String {
    let mut out = String::from("t,value\n");
    for (&t, &v) in scan.ts.iter().zip(&scan.values) {
        fmt_float(&mut out, t);
        out.push(',');
        fmt_float(&mut out, v);
        out.push('\n');
    }
    out
}

pub fn emit_scan_csv(scan: &Scan2DResult, path: &Path) -> CliResult<()> {
    write_text(path, &scan_csv_string(scan))
}

pub fn emit_scan1d_csv(scan: &Scan1DResult, path: &Path) -> CliResult<()> {
    write_text(path, &scan1d_csv_string(scan))
}

/// Parses a `t1,t2,value` file back into `(t1, t2, value)` triples.
pub fn parse_scan_csv(text: &str) -> CliResult<Vec<[f64; 3]>> {
    let mut lines = text.lines();
    if lines.next() != Some("t1,t2,value") {
        return Err(CliError::usage("CSV header must be t1,t2,value"));
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let mut row = [0.0; 3];
            let mut fields = line.split(',');
            for slot in row.iter_mut() {
                *slot = fields
                    .next()
                    .and_then(|f| f.parse().ok())
                    .ok_or_else(|| CliError::usage(format!("bad CSV row {}", k + 2)))?;
            }
            if fields.next().is_some() {
                return Err(CliError::usage(format!("bad CSV row {}", k + 2)));
            }
            Ok(row)
        })
        .collect()
}
