use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Engine, EventSequence};
use crate::analytics::ModelParams;
use crate::error::{Error, Result};

/// Lossless JSON form of a batch of simulated paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationRecord {
    pub params: ModelParams,
    pub engine: Engine,
    pub horizon: f64,
    pub seed: u64,
    pub replicas: u64,
    pub sequences: Vec<EventSequence>,
}

impl SimulationRecord {
    pub fn to_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn from_json<R: Read>(r: R) -> Result<Self> {
        Ok(serde_json::from_reader(r)?)
    }
}

#[derive(Serialize, Deserialize)]
struct Row {
    replica: u64,
    k: u64,
    #[serde(rename = "T_k")]
    t_k: f64,
}

/// CSV with columns `replica,k,T_k`, one row per event (`k` from 1).
/// Replicas without events produce no rows.
pub fn write_events_csv<W: Write>(w: W, seqs: &[EventSequence]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for s in seqs {
        for (i, &t) in s.epochs.iter().enumerate() {
            out.serialize(Row {
                replica: s.replica,
                k: i as u64 + 1,
                t_k: t,
            })?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Epochs per replica from [`write_events_csv`] output.
pub fn read_events_csv<R: Read>(r: R) -> Result<BTreeMap<u64, Vec<f64>>> {
    let mut rd = csv::Reader::from_reader(r);
    let mut out: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for row in rd.deserialize() {
        let row: Row = row?;
        let v = out.entry(row.replica).or_default();
        if row.k != v.len() as u64 + 1 {
            return Err(Error::Parse(format!("replica {} rows out of order at k = {}", row.replica, row.k)));
        }
        v.push(row.t_k);
    }
    Ok(out)
}
