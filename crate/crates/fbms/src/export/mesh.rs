use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::Path;

use fbms_core::catenoid::ProfileSample;

use super::json::format_float;
use crate::{Error, Result};

pub const MIN_SEGMENTS: usize = 8;

/// Triangle mesh with 0-based vertex indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
}

/// Edge incidence summary used to check that a mesh is an oriented
/// manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeReport {
    /// Edges shared by two faces traversing them in opposite directions.
    pub interior: usize,
    /// Edges on a single face.
    pub boundary: usize,
    /// Edges on more than two faces.
    pub non_manifold: usize,
    /// Edges on two faces traversing them the same way.
    pub inconsistent: usize,
    pub euler_characteristic: i64,
}

impl EdgeReport {
    pub fn is_oriented_manifold(&self) -> bool {
        self.non_manifold == 0 && self.inconsistent == 0
    }
}

/// Revolve `(z, r)` samples about the `z`-axis. Rings follow the sample
/// order; the seam is closed by wrapping segment indices, so no vertex is
/// duplicated. Faces are wound so their normals point away from the axis
/// when `z` increases along the samples.
pub fn revolve(profile: &[(f64, f64)], segments: usize) -> Result<Mesh> {
    if segments < MIN_SEGMENTS {
        return Err(Error::TooFewSegments(segments));
    }
    if profile.len() < 2 {
        return Err(Error::EmptyInput);
    }
    if let Some(&(_, r)) = profile.iter().find(|(_, r)| !(*r > 0.0)) {
        return Err(Error::NonPositiveRadius(r));
    }
    let angles: Vec<(f64, f64)> =
        (0..segments).map(|j| (TAU * j as f64 / segments as f64).sin_cos()).map(|(s, c)| (c, s)).collect();
    let vertices = profile.iter().flat_map(|&(z, r)| angles.iter().map(move |&(c, s)| [r * c, r * s, z])).collect();
    let mut faces = Vec::with_capacity(2 * segments * (profile.len() - 1));
    for i in 0..profile.len() - 1 {
        for j in 0..segments {
            let a = i * segments + j;
            let b = i * segments + (j + 1) % segments;
            let c = b + segments;
            let d = a + segments;
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    Ok(Mesh { vertices, faces })
}

/// Revolve a catenoid profile and write it as OBJ. Only surfaces in `R³`
/// (`n = 2`) can be meshed.
pub fn revolve_to_obj(profile: &[ProfileSample], n: u32, segments: usize, path: &Path) -> Result<Mesh> {
    if n != 2 {
        return Err(Error::DimensionUnsupported(n + 1));
    }
    let pts: Vec<(f64, f64)> = profile.iter().map(|s| (s.z, s.r)).collect();
    let mesh = revolve(&pts, segments)?;
    super::write_bytes(path, mesh.to_obj().as_bytes())?;
    Ok(mesh)
}

impl Mesh {
    /// `v x y z` and `f i j k` records with 1-based indices.
    pub fn to_obj(&self) -> String {
        let mut out = String::with_capacity(64 * self.vertices.len() + 24 * self.faces.len());
        for v in &self.vertices {
            let _ = writeln!(out, "v {} {} {}", format_float(v[0]), format_float(v[1]), format_float(v[2]));
        }
        for f in &self.faces {
            let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
        out
    }

    pub fn edge_report(&self) -> EdgeReport {
        // undirected edge -> traversal directions seen
        let mut edges: BTreeMap<(usize, usize), Vec<bool>> = BTreeMap::new();
        for f in &self.faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                edges.entry((a.min(b), a.max(b))).or_default().push(a < b);
            }
        }
        let mut report =
            EdgeReport { interior: 0, boundary: 0, non_manifold: 0, inconsistent: 0, euler_characteristic: 0 };
        for dirs in edges.values() {
            match dirs.as_slice() {
                [_] => report.boundary += 1,
                [a, b] if a != b => report.interior += 1,
                [_, _] => report.inconsistent += 1,
                _ => report.non_manifold += 1,
            }
        }
        report.euler_characteristic = self.vertices.len() as i64 - edges.len() as i64 + self.faces.len() as i64;
        report
    }

    /// Faces whose normal does not point away from the `z`-axis.
    pub fn inward_faces(&self) -> usize {
        self.faces
            .iter()
            .filter(|f| {
                let [a, b, c] = f.map(|i| self.vertices[i]);
                let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
                let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
                let nrm = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2]];
                let centroid = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0];
                nrm[0] * centroid[0] + nrm[1] * centroid[1] <= 0.0
            })
            .count()
    }

    pub fn max_norm(&self) -> f64 {
        self.vertices.iter().map(|v| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()).fold(0.0, f64::max)
    }
}

/// Read back the `v`/`f` records of an OBJ file written by [`Mesh::to_obj`].
pub fn parse_obj(bytes: &[u8]) -> Result<Mesh> {
    let malformed = |reason: String| Error::Malformed { path: "<obj>".into(), reason };
    let text = std::str::from_utf8(bytes).map_err(|e| malformed(e.to_string()))?;
    let mut mesh = Mesh { vertices: Vec::new(), faces: Vec::new() };
    for (i, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let v: Vec<f64> = parts
                    .map(|p| p.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| malformed(format!("line {}: {e}", i + 1)))?;
                let [x, y, z] = v[..] else {
                    return Err(malformed(format!("line {}: expected 3 coordinates", i + 1)));
                };
                mesh.vertices.push([x, y, z]);
            }
            Some("f") => {
                let f: Vec<usize> = parts
                    .map(|p| p.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| malformed(format!("line {}: {e}", i + 1)))?;
                match f[..] {
                    [a, b, c] if a.min(b).min(c) >= 1 => mesh.faces.push([a - 1, b - 1, c - 1]),
                    _ => return Err(malformed(format!("line {}: expected 3 one-based indices", i + 1))),
                }
            }
            _ => return Err(malformed(format!("line {}: unexpected record", i + 1))),
        }
    }
    if let Some(f) = mesh.faces.iter().find(|f| f.iter().any(|&i| i >= mesh.vertices.len())) {
        return Err(malformed(format!("face {f:?} references a missing vertex")));
    }
    Ok(mesh)
}
