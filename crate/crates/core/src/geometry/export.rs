//! OBJ, CSV and JSON output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extremal::ExtremalSolution;

use super::conjugate::MaxwellCurve;
use super::mesh::BodyMesh;

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_with(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let file = File::create(path).map_err(io_error(path))?;
    let mut w = BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(io_error(path))
}

/// Writes `v x y z` and 1-based `f i j k` records. An empty mesh is an error
/// and leaves no file behind.
pub fn export_obj(mesh: &BodyMesh, path: &Path) -> Result<()> {
    if mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }
    write_with(path, |w| {
        writeln!(w, "# M = {:e}, p0 = {:e}", mesh.height, mesh.p0)?;
        for v in &mesh.vertices {
            writeln!(w, "v {:.12e} {:.12e} {:.12e}", v[0], v[1], v[2])?;
        }
        for f in &mesh.faces {
            writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        Ok(())
    })
}

/// Writes the samples of `v*` under the header `x1,z`.
pub fn export_profile_csv(curve: &MaxwellCurve, path: &Path) -> Result<()> {
    write_with(path, |w| {
        writeln!(w, "x1,z")?;
        for (x, z) in &curve.samples {
            writeln!(w, "{x:.12e},{z:.12e}")?;
        }
        Ok(())
    })
}

/// Summary of a solved body.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Serialize)]
pub struct BodySummary {
    pub M: f64,
    pub p0: f64,
    pub r: f64,
    pub slope0: f64,
    pub J: f64,
    /// `2J`
    pub resistance: f64,
}

impl From<&ExtremalSolution> for BodySummary {
    fn from(sol: &ExtremalSolution) -> Self {
        Self {
            M: sol.M,
            p0: sol.p0,
            r: sol.r,
            slope0: sol.slope0,
            J: sol.J,
            resistance: 2.0 * sol.J,
        }
    }
}

pub fn export_sidecar(sol: &ExtremalSolution, path: &Path) -> Result<()> {
    let summary = BodySummary::from(sol);
    write_with(path, |w| {
        serde_json::to_writer_pretty(&mut *w, &summary).map_err(std::io::Error::other)?;
        writeln!(w)
    })
}

/// Vertex and face counts of an OBJ file.
pub fn read_obj_counts(path: &Path) -> Result<(usize, usize)> {
    let text = std::fs::read_to_string(path).map_err(io_error(path))?;
    let mut counts = (0, 0);
    for line in text.lines() {
        match line.split_whitespace().next() {
            Some("v") => counts.0 += 1,
            Some("f") => counts.1 += 1,
            _ => {}
        }
    }
    Ok(counts)
}
