//! CSV and JSON writers.
//!
//! Reals are written in scientific notation with 17 significant digits so
//! every `f64` survives a round trip.

use std::io::Write;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl Cell {
    fn render(&self) -> String {
        match *self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(x) => format_real(x),
        }
    }
}

/// A header and rows of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.header.iter().position(|h| h == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[c] {
                    Cell::Int(v) => v as f64,
                    Cell::Real(x) => x,
                })
                .collect(),
        )
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Square matrix with vertex ids as row and column headers.
pub fn write_matrix_csv<W: Write>(matrix: &[Vec<f64>], out: W) -> csv::Result<()> {
    let n = matrix.len();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(std::iter::once("vertex".to_string()).chain((0..n).map(|k| k.to_string())))?;
    for (j, row) in matrix.iter().enumerate() {
        w.write_record(std::iter::once(j.to_string()).chain(row.iter().map(|&x| format_real(x))))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(value: &T, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt() / 2.0, 1e-300, 6.02e23, -0.0] {
            let s = format_real(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            assert!(!s.contains(','));
        }
        assert_eq!(format_real(0.999), "9.9900000000000000e-1");
    }

    #[test]
    fn table_csv() {
        let mut t = Table::new(["l", "d"]);
        t.push(vec![1usize.into(), 0.5.into()]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "l,d\n1,5.0000000000000000e-1\n");
        assert_eq!(t.column("d"), Some(vec![0.5]));
    }

    #[test]
    fn matrix_csv_has_vertex_headers() {
        let mut buf = Vec::new();
        write_matrix_csv(&[vec![0.0, 1.0], vec![1.0, 0.0]], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("vertex,0,1\n0,"));
        assert_eq!(text.lines().count(), 3);
    }
}
