//! File formats: score pools (CSV), ROC specifications (JSON) and the
//! tabular outputs.
//!
//! Numbers are written in Rust's shortest round-trip decimal form, so a value
//! read back is bit-identical to the one written.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error as CoreError;
use crate::roc::{empirical_roc, CurveKind, LabeledSample, RocCurve, RocPoint, ScorePool};

pub const POOL_HEADER: &str = "score,label";
pub const DEFAULT_POWER_GRID: usize = 1024;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}: {msg}")]
    Parse { row: usize, msg: String },
    #[error("pool file has no data rows")]
    EmptyPool,
    #[error("ROC spec field `{field}`: {msg}")]
    Spec { field: String, msg: String },
    #[error(transparent)]
    Core(#[from] CoreError),
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses a `score,label` CSV. Rows are numbered from 1 after the header;
/// blank lines and `#` comments are skipped.
pub fn parse_pool(text: &str) -> Result<ScorePool, FormatError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some(h) if h.replace(' ', "") == POOL_HEADER => {}
        Some(h) => {
            return Err(FormatError::Parse {
                row: 0,
                msg: format!("expected header `{POOL_HEADER}`, found `{h}`"),
            })
        }
        None => return Err(FormatError::EmptyPool),
    }
    let mut samples = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = i + 1;
        let err = |msg: String| FormatError::Parse { row, msg };
        let mut cols = line.split(',').map(str::trim);
        let (Some(score), Some(label), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(err(format!("expected two columns, found `{line}`")));
        };
        let score: f64 = score
            .parse()
            .map_err(|_| err(format!("score `{score}` is not a number")))?;
        if !score.is_finite() || !(0.0..=1.0).contains(&score) {
            return Err(err(format!("score {score} is outside [0, 1]")));
        }
        let label = match label {
            "0" => false,
            "1" => true,
            other => return Err(err(format!("label `{other}` is not 0 or 1"))),
        };
        samples.push(LabeledSample { score, label });
    }
    if samples.is_empty() {
        return Err(FormatError::EmptyPool);
    }
    Ok(ScorePool::new(samples)?)
}

pub fn load_pool(path: &Path) -> Result<ScorePool, FormatError> {
    parse_pool(&read(path)?)
}

pub fn format_pool(pool: &ScorePool) -> String {
    let mut out = String::from(POOL_HEADER);
    out.push('\n');
    for s in pool.samples() {
        let _ = writeln!(out, "{},{}", s.score, u8::from(s.label));
    }
    out
}

/// A ROC curve description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RocSpec {
    /// Empirical curve of a pool file; relative paths resolve against the
    /// spec file's directory.
    Empirical { pool_path: PathBuf },
    Points { points: Vec<[f64; 2]> },
    LinearSlope { alpha: f64 },
    Power {
        gamma: f64,
        #[serde(default = "default_grid")]
        grid: usize,
    },
    TwoSegment {
        #[serde(default)]
        intercept: f64,
        knee: [f64; 2],
    },
}

fn default_grid() -> usize {
    DEFAULT_POWER_GRID
}

fn spec_err(field: &str, e: impl std::fmt::Display) -> FormatError {
    FormatError::Spec {
        field: field.to_string(),
        msg: e.to_string(),
    }
}

impl RocSpec {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            // serde names the field in backticks for missing/unknown keys
            let field = msg
                .split('`')
                .nth(1)
                .filter(|_| msg.contains("field"))
                .unwrap_or("type")
                .to_string();
            FormatError::Spec { field, msg }
        })
    }

    /// Builds the curve; `base` resolves relative pool paths.
    pub fn build(&self, base: &Path) -> Result<RocCurve, FormatError> {
        match self {
            RocSpec::Empirical { pool_path } => {
                let path = if pool_path.is_absolute() {
                    pool_path.clone()
                } else {
                    base.join(pool_path)
                };
                let pool = load_pool(&path).map_err(|e| spec_err("pool_path", e))?;
                empirical_roc(&pool).map_err(|e| spec_err("pool_path", e))
            }
            RocSpec::Points { points } => RocCurve::from_points(
                points.iter().map(|&[f, t]| RocPoint::new(f, t)),
                CurveKind::Piecewise,
            )
            .map_err(|e| spec_err("points", e)),
            RocSpec::LinearSlope { alpha } => {
                RocCurve::linear_slope(*alpha).map_err(|e| spec_err("alpha", e))
            }
            RocSpec::Power { gamma, grid } => {
                if *grid == 0 {
                    return Err(spec_err("grid", "must be at least 1"));
                }
                RocCurve::power(*gamma, *grid).map_err(|e| spec_err("gamma", e))
            }
            RocSpec::TwoSegment { intercept, knee } => {
                RocCurve::two_segment(*intercept, (knee[0], knee[1])).map_err(|e| spec_err("knee", e))
            }
        }
    }

    /// `points` spec reproducing `curve` vertex for vertex.
    pub fn from_curve(curve: &RocCurve) -> Self {
        RocSpec::Points {
            points: curve.points().iter().map(|p| [p.fpr, p.tpr]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

pub fn load_roc_spec(path: &Path) -> Result<RocCurve, FormatError> {
    let spec = RocSpec::parse(&read(path)?)?;
    let base = path.parent().unwrap_or(Path::new("."));
    spec.build(base)
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// CSV table preceded by `#` comment lines. Non-finite numbers are written
/// as empty cells.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Self::default()
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) if x.is_finite() => x.to_string(),
                    Cell::Num(_) | Cell::Empty => String::new(),
                    Cell::Int(i) => i.to_string(),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}
