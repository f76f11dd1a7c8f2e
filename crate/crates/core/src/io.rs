//! Point-cloud CSV format: a `# dim=<d>` header line, then one
//! comma-separated row per point with `d` coordinates and an optional
//! trailing weight column. Values are written with 17 significant digits so
//! clouds round-trip bit-exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::models::PointCloud;

pub fn write_cloud<W: Write>(mut w: W, cloud: &PointCloud) -> Result<()> {
    writeln!(w, "# dim={}", cloud.ambient_dim)?;
    for (i, p) in cloud.points.iter().enumerate() {
        let mut row: Vec<String> = p.iter().map(|v| format!("{v:.16e}")).collect();
        if let Some(ws) = &cloud.weights {
            row.push(format!("{:.16e}", ws[i]));
        }
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn read_cloud<R: BufRead>(r: R) -> Result<PointCloud> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty cloud file".into()))??;
    let dim: usize = header
        .trim()
        .strip_prefix("# dim=")
        .ok_or_else(|| Error::Parse("first line must be '# dim=<d>'".into()))?
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad dimension: {e}")))?;
    if dim == 0 {
        return Err(Error::Parse("dimension must be >= 1".into()));
    }
    let mut points = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut has_weights: Option<bool> = None;
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let vals: Vec<f64> = t
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 2)))
            })
            .collect::<Result<_>>()?;
        let weighted = match vals.len() {
            l if l == dim => false,
            l if l == dim + 1 => true,
            l => {
                return Err(Error::Parse(format!(
                    "line {}: expected {dim} or {} values, got {l}",
                    lineno + 2,
                    dim + 1
                )))
            }
        };
        match has_weights {
            None => has_weights = Some(weighted),
            Some(w) if w != weighted => {
                return Err(Error::Parse(format!(
                    "line {}: inconsistent weight column",
                    lineno + 2
                )))
            }
            _ => {}
        }
        if weighted {
            weights.push(vals[dim]);
            points.push(vals[..dim].to_vec());
        } else {
            points.push(vals);
        }
    }
    let weights = if has_weights == Some(true) { Some(weights) } else { None };
    PointCloud::new(dim, points, weights)
}

pub fn write_cloud_file<P: AsRef<Path>>(path: P, cloud: &PointCloud) -> Result<()> {
    write_cloud(BufWriter::new(File::create(path)?), cloud)
}

pub fn read_cloud_file<P: AsRef<Path>>(path: P) -> Result<PointCloud> {
    read_cloud(BufReader::new(File::open(path)?))
}
