//! Text serialization of sampled fields.
//!
//! A file is a block of `# key=value` metadata lines followed by one
//! comma-separated record per line, row-major with the second coordinate
//! fastest:
//!
//! ```text
//! # kind=phase_space_field
//! # t=1
//! # qgrid=-6,6,257
//! # pgrid=-8,8,257
//! # columns=q,p,value
//! -6.0000000000000000e0,-8.0000000000000000e0,1.2345678901234567e-40
//! ```
//!
//! Record numbers carry 17 significant digits, so values survive a
//! write/read cycle bit for bit; header numbers use the shortest
//! round-tripping decimal form. Coordinates in records are regenerated from
//! the grid on write and checked against it on read.

use crate::error::{Error, Result};
use crate::field::{DensityMatrixField, PhaseSpaceField, WaveFunctionField};
use crate::grid::UniformGrid1D;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// Sampled gauge phase `phi(t)` on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCurve {
    pub tgrid: UniformGrid1D,
    pub values: Vec<f64>,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldFile {
    PhaseSpace(PhaseSpaceField),
    DensityMatrix(DensityMatrixField),
    WaveFunction(WaveFunctionField),
    PhaseCurve(PhaseCurve),
}

impl FieldFile {
    pub fn kind(&self) -> &'static str {
        match self {
            FieldFile::PhaseSpace(_) => "phase_space_field",
            FieldFile::DensityMatrix(_) => "density_matrix",
            FieldFile::WaveFunction(_) => "wave_function",
            FieldFile::PhaseCurve(_) => "phase_curve",
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# kind={}", self.kind());
        match self {
            FieldFile::PhaseSpace(f) => {
                let _ = writeln!(out, "# t={}", f.time);
                let _ = writeln!(out, "# qgrid={}", grid_spec(&f.qgrid));
                let _ = writeln!(out, "# pgrid={}", grid_spec(&f.pgrid));
                let _ = writeln!(out, "# classical={}", f.classical);
                out.push_str("# columns=q,p,value\n");
                let np = f.pgrid.len();
                for i in 0..f.qgrid.len() {
                    let q = f.qgrid.point(i);
                    for j in 0..np {
                        record(&mut out, &[q, f.pgrid.point(j), f.values[i * np + j]]);
                    }
                }
            }
            FieldFile::DensityMatrix(r) => {
                let _ = writeln!(out, "# t={}", r.time);
                let _ = writeln!(out, "# xgrid={}", grid_spec(&r.xgrid));
                out.push_str("# columns=x,xp,re,im\n");
                let n = r.dim();
                for i in 0..n {
                    let x = r.xgrid.point(i);
                    for j in 0..n {
                        let v = r.values[i * n + j];
                        record(&mut out, &[x, r.xgrid.point(j), v.re, v.im]);
                    }
                }
            }
            FieldFile::WaveFunction(w) => {
                let _ = writeln!(out, "# t={}", w.time);
                let _ = writeln!(out, "# xgrid={}", grid_spec(&w.xgrid));
                match w.gauge_anchor {
                    Some(a) => {
                        let _ = writeln!(out, "# gauge_anchor={a}");
                    }
                    None => out.push_str("# gauge_anchor=none\n"),
                }
                out.push_str("# columns=x,re,im\n");
                for (i, v) in w.values.iter().enumerate() {
                    record(&mut out, &[w.xgrid.point(i), v.re, v.im]);
                }
            }
            FieldFile::PhaseCurve(c) => {
                let _ = writeln!(out, "# method={}", c.method);
                let _ = writeln!(out, "# tgrid={}", grid_spec(&c.tgrid));
                out.push_str("# columns=t,phi\n");
                for (i, v) in c.values.iter().enumerate() {
                    record(&mut out, &[c.tgrid.point(i), *v]);
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut meta = BTreeMap::new();
        let mut records = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if !records.is_empty() {
                    return Err(Error::Malformed(format!("line {}: metadata after data records", lineno + 1)));
                }
                let (k, v) = rest
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| Error::Malformed(format!("line {}: expected key=value", lineno + 1)))?;
                meta.insert(k.trim().to_string(), v.trim().to_string());
            } else {
                let nums = line
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::Malformed(format!("line {}: {e}", lineno + 1)))?;
                records.push(nums);
            }
        }
        let kind = meta.get("kind").ok_or_else(|| Error::Malformed("missing kind".into()))?.as_str();
        match kind {
            "phase_space_field" => {
                let qgrid = parse_grid(&meta, "qgrid")?;
                let pgrid = parse_grid(&meta, "pgrid")?;
                let cols = expect_records(&records, qgrid.len() * pgrid.len(), 3)?;
                let mut values = Vec::with_capacity(cols.len());
                for (k, r) in cols.iter().enumerate() {
                    let (i, j) = (k / pgrid.len(), k % pgrid.len());
                    check_coord(r[0], qgrid.point(i), k)?;
                    check_coord(r[1], pgrid.point(j), k)?;
                    values.push(r[2]);
                }
                let mut f = PhaseSpaceField::new(qgrid, pgrid, values, parse_num(&meta, "t")?)?;
                f.classical = match meta.get("classical").map(String::as_str) {
                    None | Some("false") => false,
                    Some("true") => true,
                    Some(o) => return Err(Error::Malformed(format!("classical={o}"))),
                };
                Ok(FieldFile::PhaseSpace(f))
            }
            "density_matrix" => {
                let xgrid = parse_grid(&meta, "xgrid")?;
                let n = xgrid.len();
                let cols = expect_records(&records, n * n, 4)?;
                let mut values = Vec::with_capacity(cols.len());
                for (k, r) in cols.iter().enumerate() {
                    check_coord(r[0], xgrid.point(k / n), k)?;
                    check_coord(r[1], xgrid.point(k % n), k)?;
                    values.push(Complex64::new(r[2], r[3]));
                }
                Ok(FieldFile::DensityMatrix(DensityMatrixField::new(xgrid, values, parse_num(&meta, "t")?)?))
            }
            "wave_function" => {
                let xgrid = parse_grid(&meta, "xgrid")?;
                let cols = expect_records(&records, xgrid.len(), 3)?;
                let mut values = Vec::with_capacity(cols.len());
                for (k, r) in cols.iter().enumerate() {
                    check_coord(r[0], xgrid.point(k), k)?;
                    values.push(Complex64::new(r[1], r[2]));
                }
                let anchor = match meta.get("gauge_anchor").map(String::as_str) {
                    None | Some("none") => None,
                    Some(s) => Some(s.parse::<usize>().map_err(|e| Error::Malformed(format!("gauge_anchor: {e}")))?),
                };
                Ok(FieldFile::WaveFunction(WaveFunctionField::new(xgrid, values, parse_num(&meta, "t")?, anchor)?))
            }
            "phase_curve" => {
                let tgrid = parse_grid(&meta, "tgrid")?;
                let cols = expect_records(&records, tgrid.len(), 2)?;
                let mut values = Vec::with_capacity(cols.len());
                for (k, r) in cols.iter().enumerate() {
                    check_coord(r[0], tgrid.point(k), k)?;
                    values.push(r[1]);
                }
                let method = meta.get("method").cloned().unwrap_or_else(|| "closed".into());
                Ok(FieldFile::PhaseCurve(PhaseCurve { tgrid, values, method }))
            }
            other => Err(Error::Malformed(format!("unknown kind {other}"))),
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }
}

fn grid_spec(g: &UniformGrid1D) -> String {
    format!("{},{},{}", g.min(), g.max(), g.len())
}

/// Parses `min,max,n`.
pub fn parse_grid_spec(s: &str) -> Result<UniformGrid1D> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Malformed(format!("grid spec {s:?} is not min,max,n")));
    }
    let num = |t: &str| t.parse::<f64>().map_err(|e| Error::Malformed(format!("grid spec {s:?}: {e}")));
    let n = parts[2].parse::<usize>().map_err(|e| Error::Malformed(format!("grid spec {s:?}: {e}")))?;
    UniformGrid1D::new(num(parts[0])?, num(parts[1])?, n)
}

fn parse_grid(meta: &BTreeMap<String, String>, key: &str) -> Result<UniformGrid1D> {
    let s = meta.get(key).ok_or_else(|| Error::Malformed(format!("missing {key}")))?;
    parse_grid_spec(s)
}

fn parse_num(meta: &BTreeMap<String, String>, key: &str) -> Result<f64> {
    let s = meta.get(key).ok_or_else(|| Error::Malformed(format!("missing {key}")))?;
    s.parse().map_err(|e| Error::Malformed(format!("{key}: {e}")))
}

fn expect_records(records: &[Vec<f64>], count: usize, width: usize) -> Result<&[Vec<f64>]> {
    if records.len() != count {
        return Err(Error::Malformed(format!("expected {count} records, found {}", records.len())));
    }
    if let Some((k, r)) = records.iter().enumerate().find(|(_, r)| r.len() != width) {
        return Err(Error::Malformed(format!("record {k} has {} fields, expected {width}", r.len())));
    }
    Ok(records)
}

fn check_coord(found: f64, expected: f64, k: usize) -> Result<()> {
    if (found - expected).abs() > 1e-9 * expected.abs().max(1.0) {
        return Err(Error::Malformed(format!("record {k}: coordinate {found} does not match grid value {expected}")));
    }
    Ok(())
}

fn record(out: &mut String, nums: &[f64]) {
    for (k, v) in nums.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v:.16e}");
    }
    out.push('\n');
}
