//! Text formats: the line-oriented vector file and the polygon norm file.
//!
//! A vector file has one JSON array of numbers per line. Blank lines and
//! lines starting with `#` are skipped, and every vector must have the same
//! dimension. Numbers are written in shortest round-trip form, so parsing
//! and re-serializing is byte-stable.

use crate::error::{Error, Result};
use crate::norms::{NormSpec, Vector};

pub fn parse_vector_file(text: &str) -> Result<Vec<Vector>> {
    let mut vectors: Vec<Vector> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: i + 1,
            message,
        };
        let coords: Vec<f64> =
            serde_json::from_str(line).map_err(|e| parse_err(format!("expected an array of numbers: {e}")))?;
        let v = Vector::new(coords).map_err(|e| parse_err(e.to_string()))?;
        if let Some(first) = vectors.first() {
            if first.dim() != v.dim() {
                return Err(parse_err(format!(
                    "dimension {} differs from the first vector's dimension {}",
                    v.dim(),
                    first.dim()
                )));
            }
        }
        vectors.push(v);
    }
    Ok(vectors)
}

pub fn write_vector_file(vectors: &[Vector]) -> String {
    let mut out = String::new();
    for v in vectors {
        out.push_str(&serde_json::to_string(v.coords()).expect("finite floats serialize"));
        out.push('\n');
    }
    out
}

/// Parses a JSON array of `[x, y]` pairs into a polygon norm.
pub fn parse_polygon_file(text: &str) -> Result<NormSpec> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: format!("expected an array of [x, y] pairs: {e}"),
    })?;
    NormSpec::polygon_from_pairs(&pairs)
}
