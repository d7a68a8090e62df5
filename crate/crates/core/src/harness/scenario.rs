use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Control scheme run by a BS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Learned powers, combiners and IRS from scalar channel powers, binary gradients.
    Dqn1,
    /// Learned powers and IRS with MRC combiners, binary gradients.
    Dqn2,
    /// As `Dqn2` with ternary gradients.
    Dqn3,
    /// Random power, random IRS, random combiner.
    Rrr,
    /// Maximum power, random IRS, random combiner.
    Mrr,
    /// Maximum power, random IRS, MRC.
    Mrm,
    /// Quarter of maximum power, random IRS, MRC.
    Frm,
    /// Random power, random IRS, MRC.
    Rrm,
    /// Maximum power, IRS off, MRC.
    #[serde(rename = "mm-noirs")]
    MmNoIrs,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::Dqn1,
        Scenario::Dqn2,
        Scenario::Dqn3,
        Scenario::Rrr,
        Scenario::Mrr,
        Scenario::Mrm,
        Scenario::Frm,
        Scenario::Rrm,
        Scenario::MmNoIrs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Dqn1 => "dqn1",
            Scenario::Dqn2 => "dqn2",
            Scenario::Dqn3 => "dqn3",
            Scenario::Rrr => "rrr",
            Scenario::Mrr => "mrr",
            Scenario::Mrm => "mrm",
            Scenario::Frm => "frm",
            Scenario::Rrm => "rrm",
            Scenario::MmNoIrs => "mm-noirs",
        }
    }

    pub fn is_learned(self) -> bool {
        matches!(self, Scenario::Dqn1 | Scenario::Dqn2 | Scenario::Dqn3)
    }

    /// Combiners chosen by MRC on the vector effective channel.
    pub fn uses_mrc(self) -> bool {
        !matches!(self, Scenario::Dqn1 | Scenario::Rrr | Scenario::Mrr)
    }

    /// Gradient arity of a learned scheme.
    pub fn arity(self) -> Option<usize> {
        match self {
            Scenario::Dqn1 | Scenario::Dqn2 => Some(2),
            Scenario::Dqn3 => Some(3),
            _ => None,
        }
    }

    /// Widths of the two hidden layers of a learned scheme.
    pub fn hidden_layers(self) -> Option<[usize; 2]> {
        match self {
            Scenario::Dqn1 => Some([70, 100]),
            Scenario::Dqn2 => Some([40, 30]),
            Scenario::Dqn3 => Some([70, 70]),
            _ => None,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown scheme '{s}'")))
    }
}
