//! Field files and atomic writes.
//!
//! A field file is a JSON object:
//!
//! ```json
//! {"format_version": 1, "lattice": "qan", "dim": 4,
//!  "cell": "+bamb[0 1 2 3 4]@(-2,0,0,0,0)",
//!  "values": {"-1,1,0,0,0": -0.618, "...": 1.0}}
//! ```
//!
//! Values are written in the shortest decimal form that reads back to the
//! same `f64`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cell_complex::{LatticeKind, OrientedCell, Point};
use crate::dkp::Field;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const FIELD_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldFile {
    pub format_version: u32,
    pub lattice: LatticeKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell: Option<String>,
    pub values: BTreeMap<String, f64>,
}

impl FieldFile {
    pub fn from_field<T: Real>(field: &Field<T>, lattice: LatticeKind, dim: usize, cell: Option<&OrientedCell>) -> Self {
        FieldFile {
            format_version: FIELD_FORMAT_VERSION,
            lattice,
            dim,
            cell: cell.map(|c| c.to_string()),
            values: field.iter().map(|(p, v)| (p.key(), v.to_f64_lossy())).collect(),
        }
    }

    /// Parses keys, checks lattice membership and nonzero values.
    pub fn to_field(&self) -> Result<Field<f64>> {
        if self.format_version != FIELD_FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported field format_version {}", self.format_version)));
        }
        let mut field = Field::new();
        for (key, &v) in &self.values {
            let p = Point::parse(key)?;
            if !self.lattice.contains(self.dim, &p) {
                return Err(Error::InvalidPoint(format!(
                    "{p} is not a point of the {} lattice of rank {}",
                    self.lattice.name(),
                    self.dim
                )));
            }
            field.insert(p, v)?;
        }
        Ok(field)
    }

    pub fn cell(&self) -> Result<Option<OrientedCell>> {
        self.cell.as_deref().map(str::parse).transpose()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io_err = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_preserves_values() {
        let mut f = Field::new();
        f.insert(Point::new(vec![1, -1, 0, 0]), 0.1_f64 + 0.2).unwrap();
        f.insert(Point::new(vec![0, 0, 1, -1]), -1.0 / 3.0).unwrap();
        let file = FieldFile::from_field(&f, LatticeKind::RootA, 3, None);
        let back = FieldFile::from_json(&file.to_json().unwrap()).unwrap().to_field().unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_off_lattice_points() {
        let json = r#"{"format_version":1,"lattice":"qan","dim":3,"values":{"1,0,0,0":1.0}}"#;
        let file = FieldFile::from_json(json).unwrap();
        assert!(matches!(file.to_field(), Err(Error::InvalidPoint(_))));
        let json = r#"{"format_version":1,"lattice":"cubic","dim":3,"values":{"1,0,0":0.0}}"#;
        assert!(matches!(FieldFile::from_json(json).unwrap().to_field(), Err(Error::ZeroValue(_))));
    }
}
