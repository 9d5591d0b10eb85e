//! ASCII mesh files.
//!
//! ```text
//! dim V C
//! x y [z]        (V lines)
//! i j k [l]      (C lines, 0-based vertex indices)
//! ```
//!
//! Blank lines and anything after `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use pdn_core::mesh::SimplicialMesh;
use pdn_core::{Error, Result};

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

/// Parses mesh text.
pub fn parse_mesh(text: &str) -> Result<SimplicialMesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty mesh file".into()))?;
    let head: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|e| parse_err(hl, format!("{t:?}: {e}"))))
        .collect::<Result<_>>()?;
    let [dim, nv, nc] = head[..] else {
        return Err(parse_err(hl, "header must be `dim V C`"));
    };
    if dim != 2 && dim != 3 {
        return Err(parse_err(hl, format!("dimension {dim} is not 2 or 3")));
    }

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {nv} vertices")))?;
        let xs: Vec<f64> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| parse_err(ln, format!("{t:?}: {e}"))))
            .collect::<Result<_>>()?;
        if xs.len() != dim {
            return Err(parse_err(
                ln,
                format!("expected {dim} coordinates, got {}", xs.len()),
            ));
        }
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(parse_err(ln, "coordinate is not finite"));
        }
        let mut p = [0.0; 3];
        p[..dim].copy_from_slice(&xs);
        vertices.push(p);
    }

    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {nc} cells")))?;
        let c: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| parse_err(ln, format!("{t:?}: {e}"))))
            .collect::<Result<_>>()?;
        cells.push(c);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing data after the last cell"));
    }
    SimplicialMesh::new(dim, vertices, &cells)
}

pub fn read_mesh(path: &Path) -> Result<SimplicialMesh> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_mesh(&text)
}

/// Mesh text with coordinates written at full precision. Cell vertices come
/// out in ascending order.
pub fn write_mesh(mesh: &SimplicialMesh) -> String {
    let d = mesh.dim();
    let mut s = format!("{} {} {}\n", d, mesh.num_vertices(), mesh.num_cells());
    for v in mesh.vertices() {
        let coords: Vec<String> = v[..d].iter().map(|x| format!("{x:e}")).collect();
        let _ = writeln!(s, "{}", coords.join(" "));
    }
    for c in 0..mesh.num_cells() {
        let idx: Vec<String> = mesh.cell(c).iter().map(|i| i.to_string()).collect();
        let _ = writeln!(s, "{}", idx.join(" "));
    }
    s
}
