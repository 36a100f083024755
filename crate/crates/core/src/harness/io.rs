//! CSV and JSON emission. Every file is written to a temporary sibling and
//! renamed into place, so readers never see a partial file.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::adapt::RunRecord;
use crate::error::Result;

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    write_atomic(path, &bytes)
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()?)
}

/// One line of a per-instance run file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub instance_id: usize,
    pub algo: String,
    pub mode: String,
    pub pool: String,
    pub delta: f64,
    pub layer: usize,
    pub energy: f64,
    pub norm_error: f64,
    pub ent_middle: f64,
    pub ent_single_avg: f64,
    pub mixer_token: String,
    pub cnot_cumulative: usize,
    pub n_params: usize,
    pub optimizer_evals: usize,
}

pub fn run_rows(record: &RunRecord) -> Vec<RunRow> {
    record
        .layers
        .iter()
        .map(|l| RunRow {
            instance_id: record.instance_id,
            algo: record.algo.to_string(),
            mode: record.mode.to_string(),
            pool: record.pool_label(),
            delta: record.delta,
            layer: l.layer,
            energy: l.energy,
            norm_error: l.norm_error,
            ent_middle: l.ent_middle,
            ent_single_avg: l.ent_single_avg,
            mixer_token: l.mixer.as_ref().map(|m| m.token()).unwrap_or_default(),
            cnot_cumulative: l.cnot_cumulative,
            n_params: l.n_params,
            optimizer_evals: l.optimizer_evals,
        })
        .collect()
}
