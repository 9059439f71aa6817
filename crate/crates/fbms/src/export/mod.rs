//! File formats: profile CSV, canonical JSON, OBJ revolution meshes and run
//! manifests. Every writer has an in-memory counterpart so outputs can be
//! hashed and compared byte for byte.

mod csv;
mod json;
mod manifest;
mod mesh;

pub use csv::{catenoid_csv, orbit_csv, read_csv, write_catenoid_csv, write_orbit_csv, CsvTable};
pub use json::{format_float, to_canonical_json, write_canonical_json};
pub use manifest::{sha256_hex, FileEntry, RunManifest};
pub use mesh::{parse_obj, revolve, revolve_to_obj, EdgeReport, Mesh, MIN_SEGMENTS};

use std::path::Path;

use crate::{Error, Result};

/// Write `bytes` to `path`, creating parent directories.
pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(Error::io(dir))?;
    }
    std::fs::write(path, bytes).map_err(Error::io(path))
}
