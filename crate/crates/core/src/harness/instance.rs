use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::geometry::{GeometryError, Point, PointSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Geometry { line: usize, source: GeometryError },
    #[error("instance has no points")]
    Empty,
    #[error(transparent)]
    Invalid(#[from] GeometryError),
}

/// Parses `x y` integer pairs, one per line. Blank lines and lines starting
/// with `#` are skipped.
pub fn parse_instance(text: &str) -> Result<PointSet, InstanceError> {
    let mut points = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut fields = body.split_whitespace();
        let mut coord = |name: &str| -> Result<i64, InstanceError> {
            let field = fields
                .next()
                .ok_or_else(|| InstanceError::Syntax { line, message: format!("missing {name} coordinate") })?;
            field
                .parse::<i64>()
                .map_err(|e| InstanceError::Syntax { line, message: format!("bad {name} coordinate {field:?}: {e}") })
        };
        let (x, y) = (coord("x")?, coord("y")?);
        if let Some(extra) = fields.next() {
            return Err(InstanceError::Syntax { line, message: format!("unexpected trailing field {extra:?}") });
        }
        points.push(Point::new(x, y));
        lines.push(line);
    }
    if points.is_empty() {
        return Err(InstanceError::Empty);
    }
    // Re-attach line numbers to errors that name a point index.
    PointSet::new(points).map_err(|e| match point_index(&e) {
        Some(i) => InstanceError::Geometry { line: lines[i], source: e },
        None => InstanceError::Invalid(e),
    })
}

fn point_index(e: &GeometryError) -> Option<usize> {
    match *e {
        GeometryError::CoordinateOutOfRange { index, .. } => Some(index),
        GeometryError::Duplicate(_, b) => Some(b),
        GeometryError::Collinear(_, _, c) => Some(c),
        _ => None,
    }
}

/// Canonical text form: optional `#` header lines, then one point per line.
pub fn write_instance(points: &PointSet, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        for line in h.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for p in points.points() {
        let _ = writeln!(out, "{} {}", p.x, p.y);
    }
    out
}

/// SHA-256 of the coordinates in the canonical form, ignoring comments.
pub fn instance_digest(points: &PointSet) -> String {
    hex::encode(Sha256::digest(write_instance(points, &[]).as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_with_comments() {
        let text = "# five points\n0 0\n\n10 1\n  12 9  \n3 11\n# trailing\n5 5\n";
        let points = parse_instance(text).unwrap();
        assert_eq!(points.len(), 5);
        let written = write_instance(&points, &["five points".to_string()]);
        assert_eq!(parse_instance(&written).unwrap(), points);
        assert_eq!(instance_digest(&points), instance_digest(&parse_instance(&written).unwrap()));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_instance("0 0\n1 x\n"),
            Err(InstanceError::Syntax { line: 2, message: "bad y coordinate \"x\": invalid digit found in string".into() })
        );
        assert!(matches!(parse_instance("0 0\n1\n"), Err(InstanceError::Syntax { line: 2, .. })));
        assert!(matches!(parse_instance("0 0 0\n"), Err(InstanceError::Syntax { line: 1, .. })));
        assert!(matches!(
            parse_instance("# c\n0 0\n1 1\n# c\n2 2\n"),
            Err(InstanceError::Geometry { line: 5, source: GeometryError::Collinear(0, 1, 2) })
        ));
        assert!(matches!(parse_instance("0 0\n0 0\n"), Err(InstanceError::Geometry { line: 2, .. })));
        assert_eq!(parse_instance("# nothing\n"), Err(InstanceError::Empty));
    }
}
