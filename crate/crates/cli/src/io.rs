//! Array and table files.
//!
//! An array file is CSV: a `rows,cols` header, one line with the two
//! dimensions, then one line per row. Values use the shortest decimal form
//! that reads back to the same f64.

use std::fs::File;
use std::path::Path;

use anyhow::{bail, Context, Result};
use photon_gain::simpipe::Frame;
use serde::Serialize;

pub fn write_frame(path: &Path, f: &Frame) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["rows", "cols"])?;
    w.write_record([f.rows.to_string(), f.cols.to_string()])?;
    for row in f.data.chunks(f.cols) {
        w.write_record(row.iter().map(|x| x.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_frame(path: &Path) -> Result<Frame> {
    let mut r = csv::ReaderBuilder::new()
        .flexible(true)
        .has_headers(true)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut records = r.records();
    let dims = records.next().context("missing dimension line")??;
    if dims.len() != 2 {
        bail!("{}: dimension line must hold rows,cols", path.display());
    }
    let rows: usize = dims[0].trim().parse().context("rows")?;
    let cols: usize = dims[1].trim().parse().context("cols")?;
    let mut data = Vec::with_capacity(rows * cols);
    for (i, rec) in records.enumerate() {
        let rec = rec?;
        if rec.len() != cols {
            bail!("{}: row {i} has {} values, expected {cols}", path.display(), rec.len());
        }
        for v in rec.iter() {
            data.push(v.trim().parse::<f64>().with_context(|| format!("{}: bad value {v:?}", path.display()))?);
        }
    }
    if data.len() != rows * cols {
        bail!("{}: {} values for a {rows}×{cols} array", path.display(), data.len());
    }
    Ok(Frame { rows, cols, data })
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(f, v)?;
    Ok(())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(std::io::BufReader::new(f)).with_context(|| format!("parsing {}", path.display()))
}
