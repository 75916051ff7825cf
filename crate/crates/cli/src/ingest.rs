//! Reading and writing `theta1,theta2` sample files.

use std::io::{Read, Write};
use std::path::Path;

use trpca::curve::fmt17;
use trpca::geometry::wrap;
use trpca::TorusPoint;

use crate::{CliError, CliResult};

pub const HEADER: [&str; 2] = ["theta1", "theta2"];

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub points: Vec<TorusPoint>,
    /// Values outside `[-π, π)` that were wrapped on ingest.
    pub wrapped: usize,
}

pub fn read_sample_file(path: &Path) -> CliResult<Sample> {
    let file = std::fs::File::open(path).map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    read_sample(file).map_err(|e| match e {
        CliError::Data(m) => CliError::Data(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Parses a CSV with header `theta1,theta2` (radians). Angles are wrapped into `[-π, π)`.
pub fn read_sample<R: Read>(input: R) -> CliResult<Sample> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader.headers().map_err(|e| CliError::Data(format!("unreadable header: {e}")))?;
    if header.is_empty() || header.iter().collect::<Vec<_>>() != HEADER {
        return Err(CliError::Data(format!(
            "expected header `theta1,theta2`, found `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut points = Vec::new();
    let mut wrapped = 0;
    let mut record = csv::StringRecord::new();
    loop {
        let more = reader.read_record(&mut record).map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            CliError::Data(format!("line {line}: {e}"))
        })?;
        if !more {
            break;
        }
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 2 {
            return Err(CliError::Data(format!("line {line}: expected 2 fields, found {}", record.len())));
        }
        let mut v = [0.0; 2];
        for (slot, cell) in v.iter_mut().zip(record.iter()) {
            let x: f64 = cell
                .parse()
                .map_err(|_| CliError::Data(format!("line {line}: `{cell}` is not a number")))?;
            if !x.is_finite() {
                return Err(CliError::Data(format!("line {line}: `{cell}` is not finite")));
            }
            let w = wrap(x);
            if w != x {
                wrapped += 1;
            }
            *slot = w;
        }
        points.push(TorusPoint::new(v[0], v[1]));
    }
    if wrapped > 0 {
        log::warn!("{wrapped} values outside [-pi, pi) were wrapped");
    }
    Ok(Sample { points, wrapped })
}

pub fn write_sample<W: Write>(mut out: W, points: &[TorusPoint]) -> std::io::Result<()> {
    writeln!(out, "{}", HEADER.join(","))?;
    for p in points {
        writeln!(out, "{},{}", fmt17(p.theta1()), fmt17(p.theta2()))?;
    }
    out.flush()
}
