use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Real;

use super::mlp::{Dense, Mlp};

pub const CHECKPOINT_FORMAT: &str = "irs-marl-mlp";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Serialized network: layer shapes and row-major weights in `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub layers: Vec<Dense<f64>>,
}

impl Checkpoint {
    pub fn from_network<T: Real>(net: &Mlp<T>) -> Self {
        let layers = net
            .layers()
            .iter()
            .map(|l| Dense {
                inputs: l.inputs,
                outputs: l.outputs,
                weights: l.weights.iter().map(|w| w.to_f64_lossy()).collect(),
                biases: l.biases.iter().map(|b| b.to_f64_lossy()).collect(),
            })
            .collect();
        Self {
            format: CHECKPOINT_FORMAT.to_string(),
            version: CHECKPOINT_VERSION,
            layers,
        }
    }

    pub fn to_network<T: Real>(&self) -> Result<Mlp<T>> {
        if self.format != CHECKPOINT_FORMAT || self.version != CHECKPOINT_VERSION {
            return Err(Error::invalid(format!(
                "unsupported checkpoint {} v{}",
                self.format, self.version
            )));
        }
        Mlp::from_layers(
            self.layers
                .iter()
                .map(|l| Dense {
                    inputs: l.inputs,
                    outputs: l.outputs,
                    weights: l.weights.iter().map(|&w| T::lit(w)).collect(),
                    biases: l.biases.iter().map(|&b| T::lit(b)).collect(),
                })
                .collect(),
        )
    }
}

pub fn save_checkpoint<T: Real>(net: &Mlp<T>, path: &Path) -> Result<()> {
    let text = serde_json::to_string(&Checkpoint::from_network(net))?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_checkpoint<T: Real>(path: &Path) -> Result<Mlp<T>> {
    let ckpt: Checkpoint = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    ckpt.to_network()
}
