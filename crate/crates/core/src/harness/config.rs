use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::adapt::{Algorithm, Connectivity, Mode, RunSettings};
use crate::ansatz::DEFAULT_GAMMA0;
use crate::error::{Error, Result};
use crate::optimizer::OptimizerConfig;

pub const DEFAULT_FIELD: f64 = 0.05;
pub const DEFAULT_INSTANCES: usize = 50;
pub const PAPER_INSTANCES: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub n_qubits: usize,
    /// Regular degree; `None` means the complete graph.
    pub degree: Option<usize>,
    pub n_instances: usize,
    pub base_seed: u64,
    pub algo: Algorithm,
    pub mode: Mode,
    pub pool: Connectivity,
    pub delta: f64,
    pub f: f64,
    pub gamma0: f64,
    /// `None` picks 15 layers below 8 qubits and 20 from 8 up.
    pub p_max: Option<usize>,
    pub optimizer: OptimizerConfig,
    /// Where files go; `None` keeps everything in memory.
    pub out: Option<PathBuf>,
    /// Read `instance_NNNN.json` from here instead of generating.
    pub instances_dir: Option<PathBuf>,
    /// Worker threads; `None` lets rayon decide.
    pub jobs: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_qubits: 6,
            degree: None,
            n_instances: DEFAULT_INSTANCES,
            base_seed: 0,
            algo: Algorithm::Adapt,
            mode: Mode::Preserve,
            pool: Connectivity::Full,
            delta: 0.0,
            f: DEFAULT_FIELD,
            gamma0: DEFAULT_GAMMA0,
            p_max: None,
            optimizer: OptimizerConfig::default(),
            out: None,
            instances_dir: None,
            jobs: None,
        }
    }
}

impl ExperimentConfig {
    pub fn degree(&self) -> usize {
        self.degree.unwrap_or(self.n_qubits.saturating_sub(1))
    }

    pub fn layers(&self) -> usize {
        self.p_max
            .unwrap_or(if self.n_qubits >= 8 { 20 } else { 15 })
    }

    pub fn run_settings(&self) -> RunSettings {
        RunSettings {
            mode: self.mode,
            p_max: self.layers(),
            delta: self.delta,
            gamma0: self.gamma0,
            optimizer: self.optimizer.clone(),
        }
    }

    /// Directory name for this algorithm/mode/pool/δ variant.
    pub fn label(&self) -> String {
        match self.algo {
            Algorithm::Qaoa => format!("qaoa-{}", self.mode),
            Algorithm::Adapt => format!("adapt-{}-{}-delta{}", self.mode, self.pool, self.delta),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 2 || self.n_qubits > crate::sim::MAX_QUBITS {
            return Err(Error::Configuration(format!(
                "qubit count {} out of range",
                self.n_qubits
            )));
        }
        if self.algo == Algorithm::Adapt
            && self.pool == Connectivity::Ladder
            && !self.n_qubits.is_multiple_of(2)
        {
            return Err(Error::Configuration(
                "ladder pool needs an even qubit count".into(),
            ));
        }
        if self.delta.is_nan() || self.delta.abs() >= 1.0 {
            return Err(Error::Configuration(format!(
                "|delta| must be < 1, got {}",
                self.delta
            )));
        }
        if !(self.f >= 0.0 && self.f.is_finite()) {
            return Err(Error::Configuration(format!(
                "f must be >= 0, got {}",
                self.f
            )));
        }
        if !self.gamma0.is_finite() {
            return Err(Error::Configuration("gamma0 must be finite".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::Configuration("--jobs must be positive".into()));
        }
        self.optimizer.validate()
    }

    /// Overlays the keys present in a JSON config file onto `self`.
    pub fn overlay_json(&self, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let overrides: serde_json::Value = serde_json::from_str(&text)?;
        let mut base = serde_json::to_value(self)?;
        merge(&mut base, overrides);
        Ok(serde_json::from_value(base)?)
    }
}

fn merge(base: &mut serde_json::Value, over: serde_json::Value) {
    match (base, over) {
        (serde_json::Value::Object(b), serde_json::Value::Object(o)) => {
            for (k, v) in o {
                merge(b.entry(k).or_insert(serde_json::Value::Null), v);
            }
        }
        (b, o) => *b = o,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_protocol() {
        let c = ExperimentConfig::default();
        assert_eq!(c.f, 0.05);
        assert_eq!(c.gamma0, 0.01);
        assert_eq!(c.layers(), 15);
        assert_eq!(c.degree(), 5);
        let c8 = ExperimentConfig {
            n_qubits: 8,
            ..Default::default()
        };
        assert_eq!(c8.layers(), 20);
        assert_eq!(c8.degree(), 7);
    }

    #[test]
    fn validation() {
        let bad = ExperimentConfig {
            n_qubits: 5,
            pool: Connectivity::Ladder,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig {
            delta: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(ExperimentConfig::default().validate().is_ok());
    }

    #[test]
    fn json_overlay_wins() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("cfg.json");
        std::fs::write(
            &p,
            r#"{"n_instances": 7, "pool": "linear", "optimizer": {"x_tolerance": 1e-6}}"#,
        )
        .unwrap();
        let base = ExperimentConfig {
            n_instances: 3,
            base_seed: 99,
            ..Default::default()
        };
        let c = base.overlay_json(&p).unwrap();
        assert_eq!(c.n_instances, 7);
        assert_eq!(c.pool, Connectivity::Linear);
        assert_eq!(c.base_seed, 99);
        assert_eq!(c.optimizer.x_tolerance, 1e-6);
        assert_eq!(c.optimizer.f_tolerance, 1e-4);
    }
}
