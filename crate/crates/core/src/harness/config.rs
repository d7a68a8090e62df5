use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{MobilityParams, PathLossParams, TopologyParams};
use crate::dqn::AgentHyperparams;
use crate::error::{Error, Result};
use crate::numerics::db_to_linear;

use super::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    /// Time correlation; takes precedence over `ue_speed_kmh`.
    pub rho: Option<f64>,
    /// UE speed for the Jakes correlation when `rho` is absent.
    pub ue_speed_kmh: Option<f64>,
    pub carrier_hz: f64,
    pub slot_s: f64,
    pub noise_dbm: f64,
    pub path_loss: PathLossParams,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            rho: Some(0.999),
            ue_speed_kmh: None,
            carrier_hz: 2.5e9,
            slot_s: 5e-3,
            noise_dbm: -114.0,
            path_loss: PathLossParams::default(),
        }
    }
}

impl ChannelConfig {
    pub fn rho(&self) -> Result<f64> {
        let rho = match (self.rho, self.ue_speed_kmh) {
            (Some(rho), _) => rho,
            (None, Some(speed_kmh)) => MobilityParams {
                speed_kmh,
                carrier_hz: self.carrier_hz,
                slot_s: self.slot_s,
            }
            .rho()?,
            (None, None) => return Err(Error::Config("channel needs rho or ue_speed_kmh".into())),
        };
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::Config(format!("rho {rho} outside [0, 1]")));
        }
        Ok(rho)
    }

    /// Noise power in mW.
    pub fn noise(&self) -> f64 {
        db_to_linear(self.noise_dbm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodebookConfig {
    pub power_levels: usize,
    pub p_min_dbm: f64,
    pub p_max_dbm: f64,
    pub combiner_size: usize,
    pub irs_size: usize,
    /// Seed for both codebooks; the global seed when absent.
    pub seed: Option<u64>,
}

impl Default for CodebookConfig {
    fn default() -> Self {
        Self {
            power_levels: 10,
            p_min_dbm: 10.0,
            p_max_dbm: 30.0,
            combiner_size: 30,
            irs_size: 30,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MdpConfig {
    pub b1: usize,
    pub b2: usize,
    /// Neighbor sets are recomputed every this many slots.
    pub neighbor_refresh: usize,
}

impl Default for MdpConfig {
    fn default() -> Self {
        Self {
            b1: 2,
            b2: 2,
            neighbor_refresh: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub dump_topology: bool,
    pub dump_codebooks: bool,
    /// Adds wall time to the summary, which makes it differ between runs.
    pub record_runtime: bool,
    pub ma_window: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: None,
            dump_topology: false,
            dump_codebooks: false,
            record_runtime: false,
            ma_window: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub topology: TopologyParams,
    pub channel: ChannelConfig,
    pub codebooks: CodebookConfig,
    pub mdp: MdpConfig,
    pub agent: AgentHyperparams,
    pub scenario: Scenario,
    /// Per-BS schemes overriding `scenario`, one entry per cell.
    pub policies: Option<Vec<Scenario>>,
    pub horizon: usize,
    pub seed: u64,
    pub output: OutputConfig,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            topology: TopologyParams::default(),
            channel: ChannelConfig::default(),
            codebooks: CodebookConfig::default(),
            mdp: MdpConfig::default(),
            agent: AgentHyperparams::default(),
            scenario: Scenario::Dqn2,
            policies: None,
            horizon: 20_000,
            seed: 0,
            output: OutputConfig::default(),
        }
    }
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Scheme run by each BS.
    pub fn policies(&self) -> Vec<Scenario> {
        self.policies
            .clone()
            .unwrap_or_else(|| vec![self.scenario; self.topology.cells])
    }

    /// Name written to the summary: the common scheme, or `mixed`.
    pub fn scheme_name(&self) -> String {
        let policies = self.policies();
        match policies.first() {
            Some(first) if policies.iter().all(|p| p == first) => first.name().to_string(),
            _ => "mixed".to_string(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |e: Error| match e {
            Error::Config(_) => e,
            other => Error::Config(other.to_string()),
        };
        self.topology.validate().map_err(cfg)?;
        self.channel.path_loss.validate().map_err(cfg)?;
        self.channel.rho()?;
        if !self.channel.noise_dbm.is_finite() {
            return Err(Error::Config("noise_dbm must be finite".into()));
        }
        let cb = &self.codebooks;
        if cb.power_levels < 2 || !(cb.p_min_dbm < cb.p_max_dbm) || !cb.p_max_dbm.is_finite() {
            return Err(Error::Config("need power_levels >= 2 and p_min_dbm < p_max_dbm".into()));
        }
        if cb.combiner_size == 0 || cb.irs_size == 0 {
            return Err(Error::Config("codebooks must be non-empty".into()));
        }
        if self.mdp.neighbor_refresh == 0 {
            return Err(Error::Config("neighbor_refresh must be >= 1".into()));
        }
        self.agent.validate()?;
        if let Some(p) = &self.policies {
            if p.len() != self.topology.cells {
                return Err(Error::Config(format!(
                    "policies lists {} schemes for {} cells",
                    p.len(),
                    self.topology.cells
                )));
            }
        }
        if self.output.ma_window == 0 {
            return Err(Error::Config("ma_window must be >= 1".into()));
        }
        Ok(())
    }

    /// Everything that determines the simulated numbers, i.e. the config
    /// without its output section, as canonical JSON.
    pub fn canonical_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = value.as_object_mut() {
            map.remove("output");
        }
        serde_json::to_string(&value).expect("config serializes")
    }

    /// First 16 hex digits of the SHA-256 of [`Self::canonical_json`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_reproduce_reference_setup() {
        let c = SimConfig::default();
        c.validate().unwrap();
        assert_eq!((c.topology.cells, c.topology.ues_per_cell), (7, 3));
        assert_eq!((c.topology.antennas, c.topology.irs_elements), (5, 5));
        assert_eq!(c.channel.noise_dbm, -114.0);
        assert_eq!((c.mdp.b1, c.mdp.b2), (2, 2));
        assert_eq!((c.codebooks.combiner_size, c.codebooks.irs_size), (30, 30));
        assert_eq!((c.agent.batch, c.agent.pool, c.agent.gamma), (10, 300, 0.7));
    }

    #[test]
    fn empty_json_is_the_default() {
        assert_eq!(SimConfig::from_json("{}").unwrap(), SimConfig::default());
        let round = SimConfig::from_json(&SimConfig::default().to_json_pretty()).unwrap();
        assert_eq!(round, SimConfig::default());
    }

    #[test]
    fn bad_configs_are_config_errors() {
        for text in [
            r#"{"unknown": 1}"#,
            r#"{"topology": {"cells": 0}}"#,
            r#"{"channel": {"rho": 1.5}}"#,
            r#"{"channel": {"rho": null}}"#,
            r#"{"agent": {"batch": 0}}"#,
            r#"{"policies": ["rrr"]}"#,
            r#"{"scenario": "dqn9"}"#,
        ] {
            assert!(matches!(SimConfig::from_json(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn speed_sets_rho_when_rho_is_absent() {
        let c = SimConfig::from_json(r#"{"channel": {"rho": null, "ue_speed_kmh": 3.0}}"#).unwrap();
        let rho = c.channel.rho().unwrap();
        assert!((0.988..=0.992).contains(&rho));
    }

    #[test]
    fn hash_tracks_every_simulated_field() {
        let base = SimConfig::default();
        let mut other = base.clone();
        assert_eq!(base.hash(), other.hash());
        other.seed = 1;
        assert_ne!(base.hash(), other.hash());
        other = base.clone();
        other.agent.learning_rate = 2e-3;
        assert_ne!(base.hash(), other.hash());
        other = base.clone();
        other.output.dir = Some("elsewhere".into());
        assert_eq!(base.hash(), other.hash());
        assert_eq!(base.hash().len(), 16);
    }
}
