use serde::{Deserialize, Serialize};

use crate::channel::UeLayout;
use crate::codebook::{Codebook, PowerSet};
use crate::error::{Error, Result};
use crate::numerics::{CVector, Real};
use crate::signal::IrsBeamformer;

/// The three discrete sets every design variable is drawn from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignSpace<T> {
    pub powers: PowerSet<T>,
    pub combiners: Codebook<T>,
    pub irs: Codebook<T>,
}

impl<T: Real> DesignSpace<T> {
    pub fn sizes(&self) -> SetSizes {
        SetSizes {
            power: self.powers.len(),
            combiner: self.combiners.len(),
            irs: self.irs.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetSizes {
    pub power: usize,
    pub combiner: usize,
    pub irs: usize,
}

/// Index form of every design variable. `irs[r] == None` switches IRS `r` off.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableIndices {
    /// `[cell][k]`
    pub power: Vec<Vec<usize>>,
    /// `[cell][k]`, combiner `k` of BS `cell`
    pub combiner: Vec<Vec<usize>>,
    pub irs: Vec<Option<usize>>,
}

impl VariableIndices {
    pub fn zeros(layout: &UeLayout) -> Self {
        let per_cell = |c| vec![0; layout.ues_in(c)];
        Self {
            power: (0..layout.cells()).map(per_cell).collect(),
            combiner: (0..layout.cells()).map(per_cell).collect(),
            irs: vec![Some(0); layout.cells()],
        }
    }

    pub fn cells(&self) -> usize {
        self.irs.len()
    }

    pub fn check(&self, sizes: SetSizes) -> Result<()> {
        let out = |name: &str, v: usize, n: usize| {
            Error::invalid(format!("{name} index {v} outside [0, {})", n))
        };
        for (p, z) in self.power.iter().zip(&self.combiner) {
            if let Some(&v) = p.iter().find(|&&v| v >= sizes.power) {
                return Err(out("power", v, sizes.power));
            }
            if let Some(&v) = z.iter().find(|&&v| v >= sizes.combiner) {
                return Err(out("combiner", v, sizes.combiner));
            }
        }
        if let Some(v) = self.irs.iter().flatten().find(|&&v| v >= sizes.irs) {
            return Err(out("IRS", *v, sizes.irs));
        }
        Ok(())
    }
}

/// Variable indices together with the values they resolve to.
#[derive(Debug, Clone)]
pub struct NetworkVariables<T> {
    indices: VariableIndices,
    powers: Vec<T>,
    combiners: Vec<Vec<CVector<T>>>,
    beamformers: Vec<IrsBeamformer<T>>,
}

impl<T: Real> NetworkVariables<T> {
    pub fn resolve(indices: VariableIndices, space: &DesignSpace<T>) -> Result<Self> {
        indices.check(space.sizes())?;
        let powers = indices
            .power
            .iter()
            .flat_map(|cell| cell.iter().map(|&i| space.powers.get(i)))
            .collect();
        let combiners = indices
            .combiner
            .iter()
            .map(|cell| cell.iter().map(|&i| space.combiners.get(i).clone()).collect())
            .collect();
        let beamformers = indices
            .irs
            .iter()
            .map(|idx| match idx {
                Some(i) => space.irs.beamformer(*i),
                None => IrsBeamformer::off(space.irs.dim()),
            })
            .collect();
        Ok(Self {
            indices,
            powers,
            combiners,
            beamformers,
        })
    }

    pub fn indices(&self) -> &VariableIndices {
        &self.indices
    }

    /// Transmit powers, flat UE order.
    pub fn powers(&self) -> &[T] {
        &self.powers
    }

    pub fn combiner(&self, cell: usize, k: usize) -> &CVector<T> {
        &self.combiners[cell][k]
    }

    pub fn combiners(&self, cell: usize) -> &[CVector<T>] {
        &self.combiners[cell]
    }

    pub fn beamformers(&self) -> &[IrsBeamformer<T>] {
        &self.beamformers
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{build_combiner_codebook, build_irs_codebook, build_power_set};
    use crate::numerics::RngStream;

    fn space() -> DesignSpace<f64> {
        let mut s = RngStream::from_seed(1);
        DesignSpace {
            powers: build_power_set(10.0, 1000.0, 5).unwrap(),
            combiners: build_combiner_codebook(3, 6, &mut s).unwrap(),
            irs: build_irs_codebook(2, 4, &mut s).unwrap(),
        }
    }

    #[test]
    fn resolved_values_follow_indices() {
        let space = space();
        let layout = UeLayout::uniform(2, 2);
        let mut idx = VariableIndices::zeros(&layout);
        idx.power[1][0] = 4;
        idx.combiner[0][1] = 5;
        idx.irs[1] = None;
        let vars = NetworkVariables::resolve(idx, &space).unwrap();
        assert_eq!(vars.powers(), &[10.0, 10.0, 1000.0, 10.0]);
        assert_eq!(vars.combiner(0, 1), space.combiners.get(5));
        assert_eq!(vars.beamformers()[0].coeffs(), space.irs.get(0));
        assert_eq!(vars.beamformers()[1].coeffs().norm_sqr(), 0.0);
    }

    #[test]
    fn out_of_range_indices_are_rejected() {
        let space = space();
        let layout = UeLayout::uniform(1, 1);
        let mut idx = VariableIndices::zeros(&layout);
        idx.combiner[0][0] = 6;
        assert!(NetworkVariables::resolve(idx, &space).is_err());
    }
}
