//! Plot-data schemas. Curves: `t,mc_mean,mc_se,exact,ilt`; distributions:
//! `t,k,freq,p_hat,p_ref`. Missing values are empty fields.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::CountDistribution;
use crate::analytics::{CurveSample, Method};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub t: f64,
    pub mc_mean: Option<f64>,
    pub mc_se: Option<f64>,
    pub exact: Option<f64>,
    pub ilt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub t: f64,
    pub k: u64,
    pub freq: u64,
    pub p_hat: f64,
    pub p_ref: Option<f64>,
}

/// Join curves sampled on a common grid into rows. The first Monte Carlo
/// curve fills the `mc_*` columns.
pub fn curve_rows(curves: &[CurveSample]) -> Result<Vec<CurveRow>> {
    let Some(first) = curves.first() else {
        return Ok(Vec::new());
    };
    let grid: Vec<f64> = first.points.iter().map(|p| p.t).collect();
    for c in curves {
        if c.points.len() != grid.len() || c.points.iter().zip(&grid).any(|(p, &t)| p.t != t) {
            return Err(Error::domain("curves do not share a time grid"));
        }
    }
    let pick = |m: Method| curves.iter().find(|c| c.method == m);
    let (mc, exact, ilt) = (pick(Method::MonteCarlo), pick(Method::Exact), pick(Method::Ilt));
    Ok(grid
        .iter()
        .enumerate()
        .map(|(i, &t)| CurveRow {
            t,
            mc_mean: mc.map(|c| c.points[i].value),
            mc_se: mc.and_then(|c| c.points[i].error_estimate),
            exact: exact.map(|c| c.points[i].value),
            ilt: ilt.map(|c| c.points[i].value),
        })
        .collect())
}

/// One row per `k` in `0..=max` per distribution.
pub fn distribution_rows(dists: &[CountDistribution]) -> Vec<DistributionRow> {
    let mut rows = Vec::new();
    for d in dists {
        for (k, p_hat) in d.pmf() {
            rows.push(DistributionRow {
                t: d.t,
                k,
                freq: d.counts.get(&k).copied().unwrap_or(0),
                p_hat,
                p_ref: d.reference.as_ref().map(|r| r.pmf.get(&k).copied().unwrap_or(0.0)),
            });
        }
    }
    rows
}

fn write_rows<W: Write, T: Serialize>(w: W, rows: &[T]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

fn read_rows<R: Read, T: for<'de> Deserialize<'de>>(r: R) -> Result<Vec<T>> {
    csv::Reader::from_reader(r).deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn write_curves_csv<W: Write>(w: W, rows: &[CurveRow]) -> Result<()> {
    write_rows(w, rows)
}

pub fn read_curves_csv<R: Read>(r: R) -> Result<Vec<CurveRow>> {
    read_rows(r)
}

pub fn write_distributions_csv<W: Write>(w: W, rows: &[DistributionRow]) -> Result<()> {
    write_rows(w, rows)
}

pub fn read_distributions_csv<R: Read>(r: R) -> Result<Vec<DistributionRow>> {
    read_rows(r)
}

/// Pretty JSON followed by a newline.
pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{CurvePoint, ModelParams};
    use crate::sim::Engine;

    fn curve(method: Method, vals: &[(f64, f64)]) -> CurveSample {
        CurveSample {
            method,
            engine: None,
            points: vals
                .iter()
                .map(|&(t, v)| CurvePoint {
                    t,
                    value: v,
                    error_estimate: Some(v * 1e-3),
                })
                .collect(),
        }
    }

    #[test]
    fn curve_rows_round_trip() {
        let curves = [
            curve(Method::MonteCarlo, &[(1.0, 1.1), (2.0, 2.3)]),
            curve(Method::Exact, &[(1.0, 0.1 + 0.2), (2.0, 1.0 / 3.0)]),
        ];
        let rows = curve_rows(&curves).unwrap();
        assert_eq!(rows[0].ilt, None);
        let mut buf = Vec::new();
        write_curves_csv(&mut buf, &rows).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("t,mc_mean,mc_se,exact,ilt\n"));
        assert_eq!(read_curves_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let curves = [curve(Method::MonteCarlo, &[(1.0, 1.0)]), curve(Method::Exact, &[(2.0, 1.0)])];
        assert!(curve_rows(&curves).is_err());
    }

    #[test]
    fn distribution_rows_round_trip() {
        let p = ModelParams::new(1.0, 0.1, 0.5, 1.0).unwrap();
        let d = CountDistribution::from_samples(2.5, Engine::Thinning, p, &[0, 2, 2, 7]);
        let rows = distribution_rows(&[d]);
        assert_eq!(rows.len(), 8);
        assert_eq!(rows.iter().map(|r| r.p_hat).sum::<f64>(), 1.0);
        let mut buf = Vec::new();
        write_distributions_csv(&mut buf, &rows).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("t,k,freq,p_hat,p_ref\n"));
        assert_eq!(read_distributions_csv(buf.as_slice()).unwrap(), rows);
    }
}
