use crate::channel::{ChannelSet, UeId};
use crate::error::{Error, Result};
use crate::mdp::{DesignSpace, NetworkVariables, VariableIndices};
use crate::numerics::{Real, RngStream};
use crate::signal::effective_channel;

use super::scenario::Scenario;

/// Sets the power and IRS indices of `cell` for a fixed scheme, and its
/// combiners when the scheme picks them at random. MRC combiners are left to
/// [`apply_mrc`], which needs every BS's new powers and IRS phases.
pub fn baseline_policy<T: Real>(
    kind: Scenario,
    cell: usize,
    vars: &mut VariableIndices,
    space: &DesignSpace<T>,
    stream: &mut RngStream,
) -> Result<()> {
    let powers = &space.powers;
    let k = vars.power[cell].len();
    let power: Vec<usize> = match kind {
        Scenario::Rrr | Scenario::Rrm => (0..k).map(|_| stream.index(powers.len())).collect(),
        Scenario::Mrr | Scenario::Mrm | Scenario::MmNoIrs => vec![powers.max_index(); k],
        Scenario::Frm => vec![powers.nearest_index(T::lit(0.25) * powers.get(powers.max_index())); k],
        other => return Err(Error::invalid(format!("{other} is not a fixed baseline"))),
    };
    vars.power[cell] = power;
    vars.irs[cell] = match kind {
        Scenario::MmNoIrs => None,
        _ => Some(stream.index(space.irs.len())),
    };
    if !kind.uses_mrc() {
        vars.combiner[cell] = (0..k).map(|_| stream.index(space.combiners.len())).collect();
    }
    Ok(())
}

/// MRC combiner index of every UE of `cell` from its vector effective channel
/// under the given variables.
pub fn mrc_indices<T: Real>(
    channels: &ChannelSet<T>,
    vars: &NetworkVariables<T>,
    space: &DesignSpace<T>,
    cell: usize,
) -> Result<Vec<usize>> {
    let layout = channels.layout();
    (0..layout.ues_in(cell))
        .map(|k| {
            let ue = UeId::new(cell, k);
            let h = effective_channel(channels, vars.beamformers(), vars.powers()[layout.flat(ue)], ue, cell)?;
            space.combiners.mrc_select(&h)
        })
        .collect()
}

/// Replaces the combiners of every cell in `cells` by their MRC choice.
pub fn apply_mrc<T: Real>(
    channels: &ChannelSet<T>,
    vars: NetworkVariables<T>,
    space: &DesignSpace<T>,
    cells: &[usize],
) -> Result<NetworkVariables<T>> {
    if cells.is_empty() {
        return Ok(vars);
    }
    let mut indices = vars.indices().clone();
    for &cell in cells {
        indices.combiner[cell] = mrc_indices(channels, &vars, space, cell)?;
    }
    NetworkVariables::resolve(indices, space)
}
