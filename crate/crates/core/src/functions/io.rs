//! CSV ingestion and emission for datasets.
//!
//! * point clouds: one row per point, comma-separated reals, no header;
//! * bipartite graphs: header `u,v`, then `left_index,right_index` rows;
//! * value matrices: one row per component, one column per element, no header.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::{BipartiteDataset, Metric, PointCloudDataset};
use crate::error::{invalid, Result};

fn reader<R: Read>(r: R, header: bool) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(header)
        .trim(csv::Trim::All)
        .from_reader(r)
}

fn parse_f64(s: &str, row: usize) -> Result<f64> {
    s.parse()
        .map_err(|_| invalid(format!("row {row}: {s:?} is not a number")))
}

fn read_matrix<R: Read>(r: R) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (i, rec) in reader(r, false).records().enumerate() {
        let rec = rec?;
        rows.push(
            rec.iter()
                .map(|f| parse_f64(f, i + 1))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(rows)
}

fn write_matrix<W: Write>(w: W, rows: &[Vec<f64>]) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for r in rows {
        out.write_record(r.iter().map(|x| format!("{x}")))?;
    }
    out.flush()?;
    Ok(())
}

pub fn parse_points<R: Read>(r: R, metric: Metric) -> Result<PointCloudDataset> {
    PointCloudDataset::new(read_matrix(r)?, metric)
}

pub fn read_points(path: &Path, metric: Metric) -> Result<PointCloudDataset> {
    parse_points(File::open(path)?, metric)
}

pub fn write_points(path: &Path, points: &[Vec<f64>]) -> Result<()> {
    write_matrix(BufWriter::new(File::create(path)?), points)
}

/// Parses `u,v` edge rows. Node counts are one past the largest index seen
/// unless given explicitly.
pub fn parse_bipartite<R: Read>(
    r: R,
    left_size: Option<usize>,
    right_size: Option<usize>,
) -> Result<BipartiteDataset> {
    let mut rdr = reader(r, true);
    let header = rdr.headers()?.clone();
    if header.len() != 2 || &header[0] != "u" || &header[1] != "v" {
        return Err(invalid(format!(
            "bipartite CSV header must be \"u,v\", got {header:?}"
        )));
    }
    let mut edges = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(invalid(format!("row {}: expected 2 fields", i + 2)));
        }
        let idx = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| invalid(format!("row {}: bad index {s:?}", i + 2)))
        };
        edges.push((idx(&rec[0])?, idx(&rec[1])?));
    }
    let left = left_size.unwrap_or_else(|| edges.iter().map(|e| e.0 + 1).max().unwrap_or(0));
    let right = right_size.unwrap_or_else(|| edges.iter().map(|e| e.1 + 1).max().unwrap_or(0));
    BipartiteDataset::new(left, right, edges)
}

pub fn read_bipartite(path: &Path) -> Result<BipartiteDataset> {
    parse_bipartite(File::open(path)?, None, None)
}

pub fn write_bipartite(path: &Path, data: &BipartiteDataset) -> Result<()> {
    let mut out = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    out.write_record(["u", "v"])?;
    for &(u, v) in data.edges() {
        out.write_record([u.to_string(), v.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn parse_values<R: Read>(r: R) -> Result<Vec<Vec<f64>>> {
    read_matrix(r)
}

pub fn read_values(path: &Path) -> Result<Vec<Vec<f64>>> {
    read_matrix(File::open(path)?)
}

pub fn write_values(path: &Path, rows: &[Vec<f64>]) -> Result<()> {
    write_matrix(BufWriter::new(File::create(path)?), rows)
}
