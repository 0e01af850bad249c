//! Versioned JSON experiment configuration.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{DynamicsConfig, SymbolVariant};
use crate::error::{Error, Result};
use crate::initial::Component;
use crate::spectral::Grid;
use crate::weights::{AuditConfig, WeightParams};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    LinearModes,
    NonlinearIdeal,
    Dissipative,
    NormInflation,
    ResonanceChain,
    WeightsAudit,
    NlPartition,
}

impl Experiment {
    /// Experiments that evolve a flow field.
    pub fn is_dynamic(self) -> bool {
        !matches!(self, Experiment::ResonanceChain | Experiment::WeightsAudit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    pub ly: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { nx: 64, ny: 64, ly: 1.0 }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.nx, self.ny, self.ly)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    pub alpha: f64,
    pub nu: f64,
    pub kappa: f64,
    pub nonlinear: bool,
    pub symbol: SymbolVariant,
    /// Largest RK4 step.
    pub dt: f64,
    pub t_end: f64,
    /// Time between diagnostic samples.
    pub sample_dt: f64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            nu: 0.0,
            kappa: 0.0,
            nonlinear: true,
            symbol: SymbolVariant::QuarticPlus,
            dt: 0.02,
            t_end: 50.0,
            sample_dt: 0.5,
        }
    }
}

impl EvolutionConfig {
    pub fn dynamics(&self) -> DynamicsConfig {
        DynamicsConfig {
            alpha: self.alpha,
            nu: self.nu,
            kappa: self.kappa,
            nonlinear: self.nonlinear,
            symbol: self.symbol,
            dt: self.dt,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    GevreyRandom { seed: u64, eps: f64, lambda1: f64, s: f64, n: f64 },
    SingleMode { k: i64, j: i64, amplitude: f64, component: Component },
    File { path: String },
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::GevreyRandom { seed: 1, eps: 1e-3, lambda1: 2.0, s: 0.6, n: 5.0 }
    }
}

/// Thresholds used by the stability diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    /// Radius of the Gevrey norm monitored along the run.
    pub lambda2: f64,
    /// `K` in the gate `‖(v,b)_in‖_{H⁻¹} ≥ K c0 ε`.
    pub gate_k: f64,
    /// Reference constant for the bootstrap ratios.
    pub cstar: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { lambda2: 0.2, gate_k: 0.1, cstar: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSweepConfig {
    pub c0: f64,
    pub etas: Vec<f64>,
}

impl Default for ChainSweepConfig {
    fn default() -> Self {
        Self { c0: 0.5, etas: vec![1e2, 1e3, 1e4] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub experiment: Experiment,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub params: WeightParams,
    #[serde(default)]
    pub evolution: EvolutionConfig,
    #[serde(default)]
    pub initial: InitialData,
    #[serde(default)]
    pub checks: CheckConfig,
    #[serde(default)]
    pub audit: AuditConfig,
    #[serde(default)]
    pub chain: ChainSweepConfig,
    /// Output directory; the command line may override it.
    #[serde(default)]
    pub output_dir: Option<String>,
    /// Write every `stride`-th sample to the diagnostics table.
    #[serde(default = "one")]
    pub stride: usize,
}

fn one() -> usize {
    1
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            version: CONFIG_VERSION,
            experiment,
            grid: GridConfig::default(),
            params: WeightParams::default(),
            evolution: EvolutionConfig::default(),
            initial: InitialData::default(),
            checks: CheckConfig::default(),
            audit: AuditConfig::default(),
            chain: ChainSweepConfig::default(),
            output_dir: None,
            stride: 1,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Hex SHA-256 of the compact JSON form.
    pub fn hash(&self) -> String {
        let compact = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(compact.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Every problem is reported as [`Error::Config`].
    pub fn validate(&self) -> Result<()> {
        let cfg_err = |e: Error| Error::Config(e.to_string());
        if self.version != CONFIG_VERSION {
            return Err(Error::Config(format!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                self.version
            )));
        }
        if self.stride == 0 {
            return Err(Error::Config("stride must be positive".into()));
        }
        self.params.validate().map_err(cfg_err)?;
        match self.experiment {
            Experiment::WeightsAudit => {
                if self.audit.eta_max <= 1.0 || self.audit.density == 0 {
                    return Err(Error::Config("audit needs eta_max > 1 and positive density".into()));
                }
                return Ok(());
            }
            Experiment::ResonanceChain => {
                let c = &self.chain;
                if !(c.c0 > 0.0 && c.c0 < 1.0) || c.etas.is_empty() || c.etas.iter().any(|e| !(*e > 0.0)) {
                    return Err(Error::Config("chain needs c0 in (0,1) and positive etas".into()));
                }
                return Ok(());
            }
            _ => {}
        }
        self.grid.build().map_err(cfg_err)?;
        let ev = &self.evolution;
        ev.dynamics().validate().map_err(cfg_err)?;
        if !(ev.t_end > 0.0 && ev.sample_dt > 0.0 && ev.sample_dt <= ev.t_end) {
            return Err(Error::Config("need 0 < sample_dt <= t_end".into()));
        }
        if ev.alpha != self.params.alpha {
            return Err(Error::Config("evolution.alpha and params.alpha differ".into()));
        }
        match self.experiment {
            Experiment::Dissipative if ev.nu <= 0.0 && ev.kappa <= 0.0 => {
                return Err(Error::Config("dissipative run needs nu or kappa positive".into()));
            }
            Experiment::NonlinearIdeal | Experiment::NormInflation if ev.nu != 0.0 || ev.kappa != 0.0 => {
                return Err(Error::Config("ideal run needs nu = kappa = 0".into()));
            }
            _ => {}
        }
        if let InitialData::GevreyRandom { eps, lambda1, s, n, .. } = self.initial {
            if !(eps > 0.0 && lambda1 >= 0.0 && s > 0.0 && n >= 0.0) {
                return Err(Error::Config("gevrey_random needs eps > 0, lambda1 >= 0, s > 0, n >= 0".into()));
            }
            let small_data_run = matches!(
                self.experiment,
                Experiment::NonlinearIdeal | Experiment::Dissipative | Experiment::NormInflation
            );
            if small_data_run && eps >= self.params.c0 {
                return Err(Error::Config(format!("eps = {eps} must be below c0 = {}", self.params.c0)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_roundtrip() {
        for e in [Experiment::NonlinearIdeal, Experiment::WeightsAudit, Experiment::ResonanceChain] {
            let c = ExperimentConfig::new(e);
            c.validate().unwrap();
            assert_eq!(ExperimentConfig::from_json(&c.to_json()).unwrap(), c);
        }
    }

    #[test]
    fn minimal_json_uses_defaults() {
        let c = ExperimentConfig::from_json(r#"{"version":1,"experiment":"weights_audit"}"#).unwrap();
        assert_eq!(c.params, WeightParams::default());
        assert_eq!(c.stride, 1);
    }

    #[test]
    fn rejects_bad_configs() {
        for s in [
            r#"{"version":2,"experiment":"weights_audit"}"#,
            r#"{"version":1,"experiment":"flying"}"#,
            r#"{"version":1,"experiment":"weights_audit","extra":3}"#,
            r#"{"version":1,"experiment":"nonlinear_ideal","grid":{"nx":7,"ny":8,"ly":1}}"#,
            r#"{"version":1,"experiment":"dissipative"}"#,
            r#"{"version":1,"experiment":"nonlinear_ideal","initial":{"kind":"gevrey_random","seed":1,"eps":0.5,"lambda1":1,"s":0.6,"n":5}}"#,
        ] {
            assert!(matches!(ExperimentConfig::from_json(s), Err(Error::Config(_))), "{s}");
        }
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::new(Experiment::NonlinearIdeal);
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        b.stride = 2;
        assert_ne!(a.hash(), b.hash());
    }
}
