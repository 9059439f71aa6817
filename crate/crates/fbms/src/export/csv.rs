use std::fmt::Write as _;
use std::path::Path;

use fbms_core::catenoid::ProfileSample;
use fbms_core::equivariant::AngularState;

use super::json::format_float;
use crate::{Error, Result};

pub const ORBIT_HEADER: [&str; 6] = ["t", "x", "y", "r", "phi", "theta"];
pub const CATENOID_HEADER: [&str; 3] = ["z", "r", "rdot"];

fn table<const N: usize>(header: [&str; N], rows: impl Iterator<Item = [f64; N]>) -> Result<String> {
    let mut out = header.join(",");
    out.push('\n');
    let mut count = 0;
    for row in rows {
        for (i, x) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", format_float(*x));
        }
        out.push('\n');
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

/// Orbit-space samples `(t, state)` as `t,x,y,r,phi,theta` rows.
pub fn orbit_csv(samples: &[(f64, AngularState)]) -> Result<String> {
    table(
        ORBIT_HEADER,
        samples.iter().map(|(t, s)| {
            let (x, y) = s.point();
            [*t, x, y, s.r, s.phi, s.theta]
        }),
    )
}

/// Catenoid samples as `z,r,rdot` rows.
pub fn catenoid_csv(samples: &[ProfileSample]) -> Result<String> {
    table(CATENOID_HEADER, samples.iter().map(|s| [s.z, s.r, s.rdot]))
}

/// Fails with [`Error::EmptyInput`] before touching the filesystem when
/// there is nothing to write.
pub fn write_orbit_csv(samples: &[(f64, AngularState)], path: &Path) -> Result<()> {
    super::write_bytes(path, orbit_csv(samples)?.as_bytes())
}

pub fn write_catenoid_csv(samples: &[ProfileSample], path: &Path) -> Result<()> {
    super::write_bytes(path, catenoid_csv(samples)?.as_bytes())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn read_csv(path: &Path) -> Result<CsvTable> {
    let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
    let malformed = |reason: String| Error::Malformed { path: path.to_path_buf(), reason };
    let mut lines = text.lines();
    let header: Vec<String> =
        lines.next().ok_or_else(|| malformed("no header".into()))?.split(',').map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|f| f.parse::<f64>().map_err(|e| malformed(format!("row {}: {e}", i + 1))))
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != header.len() {
            return Err(malformed(format!("row {} has {} fields", i + 1, row.len())));
        }
        rows.push(row);
    }
    Ok(CsvTable { header, rows })
}
