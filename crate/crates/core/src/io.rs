//! CSV and JSON readers/writers for point sets and reports.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::PointSet;

/// Round-trippable decimal text for a coordinate (17 significant digits).
pub fn format_coord(x: f64) -> String {
    format!("{x:.16e}")
}

/// Point set as CSV text: header `d0,d1,...`, one row per agent.
pub fn points_to_csv(points: &PointSet) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..points.dims()).map(|d| format!("d{d}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for p in points.iter() {
        let row: Vec<String> = p.iter().map(|&x| format_coord(x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_points_csv(path: &Path, points: &PointSet) -> Result<()> {
    write_text(path, &points_to_csv(points))
}

/// Parse a point set written by [`points_to_csv`]. The header must name the
/// columns `d0..d{D-1}` in order.
pub fn read_points<R: Read>(reader: R) -> Result<PointSet> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers()?.clone();
    let dims = header.len();
    for (d, name) in header.iter().enumerate() {
        if name != format!("d{d}") {
            return Err(Error::InvalidConfig(format!(
                "point CSV header column {d} is `{name}`, expected `d{d}`"
            )));
        }
    }
    let mut coords = Vec::new();
    for record in rdr.records() {
        let record = record?;
        if record.len() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                actual: record.len(),
            });
        }
        for field in record.iter() {
            let x: f64 = field
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("not a number in point CSV: `{field}`")))?;
            coords.push(x);
        }
    }
    PointSet::new(dims, coords)
}

pub fn read_points_csv(path: &Path) -> Result<PointSet> {
    read_points(File::open(path)?)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json(value)?)
}

/// Write a CSV table with a header row.
pub fn write_csv_rows(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    write_bytes(path, &bytes)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    write_bytes(path, text.as_bytes())
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut f = File::create(path)?;
    f.write_all(bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_layout() {
        let p = PointSet::from_points(&[vec![0.5, 1.0 / 3.0], vec![0.0, 1e-300]]).unwrap();
        let text = points_to_csv(&p);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "d0,d1");
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "5.0000000000000000e-1,3.3333333333333331e-1");
    }

    #[test]
    fn rejects_bad_headers_and_values() {
        assert!(read_points("x,y\n1,2\n".as_bytes()).is_err());
        assert!(read_points("d0,d1\n1,abc\n".as_bytes()).is_err());
        assert!(matches!(read_points("d0,d1\n1,NaN\n".as_bytes()), Err(Error::NonFinite(_))));
        assert!(read_points("d0,d1\n1\n".as_bytes()).is_err());
    }

    #[test]
    fn empty_body_gives_empty_set() {
        let p = read_points("d0,d1,d2\n".as_bytes()).unwrap();
        assert_eq!((p.dims(), p.len()), (3, 0));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/points.csv");
        let p = PointSet::from_points(&[vec![0.1, 0.2, 0.3]]).unwrap();
        write_points_csv(&path, &p).unwrap();
        assert_eq!(read_points_csv(&path).unwrap(), p);
    }

    proptest! {
        #[test]
        fn text_round_trip_is_exact(xs in proptest::collection::vec(-1e6f64..1e6, 1..40), dims in 1usize..4) {
            let n = xs.len() / dims;
            prop_assume!(n > 0);
            let p = PointSet::new(dims, xs[..n * dims].to_vec()).unwrap();
            let back = read_points(points_to_csv(&p).as_bytes()).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
