//! File formats: JSON-lines a-points, CSV tables, two-column plot data.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use symzeta::{APoint, ComplexPoint};

/// `{"re": .., "im": ..}`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReIm {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexPoint> for ReIm {
    fn from(z: ComplexPoint) -> Self {
        ReIm { re: z.re, im: z.im }
    }
}

pub fn write_apoints(path: &Path, points: &[APoint]) -> Result<()> {
    let mut out = Vec::new();
    for p in points {
        serde_json::to_writer(&mut out, p)?;
        out.push(b'\n');
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

pub fn read_apoints(path: &Path) -> Result<Vec<APoint>> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut points = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let p = serde_json::from_str(&line).with_context(|| format!("{} line {}", path.display(), i + 1))?;
        points.push(p);
    }
    Ok(points)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Whitespace-separated `x y` lines.
pub fn write_plot(path: &Path, points: impl IntoIterator<Item = (f64, f64)>) -> Result<()> {
    let mut out = Vec::new();
    for (x, y) in points {
        writeln!(out, "{x} {y}")?;
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}
