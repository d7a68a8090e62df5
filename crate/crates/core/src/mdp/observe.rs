use crate::channel::{ChannelSet, UeId, UeLayout};
use crate::error::Result;
use crate::numerics::Real;
use crate::signal::{achievable_rate, effective_channel, scalar_effective_power, sinr_from_scalars, EffectiveChannels};

use super::variables::NetworkVariables;

/// Everything the BSs measure in one slot under one set of variables.
#[derive(Debug, Clone)]
pub struct Observation<T> {
    layout: UeLayout,
    effective: EffectiveChannels<T>,
    /// `‖ĥ_{u,ℓ}‖²`, `[ue][bs]`
    norms: Vec<Vec<T>>,
    /// `|z_{ℓ,k}^H ĥ_{u,ℓ}|²`, `[bs][k][ue]`
    scalars: Vec<Vec<Vec<T>>>,
    sinr: Vec<T>,
    rates: Vec<T>,
}

impl<T: Real> Observation<T> {
    pub fn measure(channels: &ChannelSet<T>, vars: &NetworkVariables<T>, noise: T) -> Result<Self> {
        let layout = channels.layout().clone();
        let effective = EffectiveChannels::compute(channels, vars.beamformers(), vars.powers())?;
        let cells = layout.cells();
        let norms = (0..layout.total())
            .map(|u| (0..cells).map(|b| effective.get(u, b).norm_sqr()).collect())
            .collect();
        let scalars = (0..cells)
            .map(|bs| {
                vars.combiners(bs)
                    .iter()
                    .map(|z| {
                        (0..layout.total())
                            .map(|u| scalar_effective_power(z, effective.get(u, bs)))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sinr = Vec::with_capacity(layout.total());
        let mut rates = Vec::with_capacity(layout.total());
        for (flat, ue) in layout.ids().enumerate() {
            let s = sinr_from_scalars(flat, &scalars[ue.cell][ue.index], noise)?;
            rates.push(achievable_rate(s)?);
            sinr.push(s);
        }
        Ok(Self {
            layout,
            effective,
            norms,
            scalars,
            sinr,
            rates,
        })
    }

    pub fn layout(&self) -> &UeLayout {
        &self.layout
    }

    pub fn effective(&self) -> &EffectiveChannels<T> {
        &self.effective
    }

    /// `‖ĥ_{u,ℓ}‖²` table, `[ue][bs]`.
    pub fn norms(&self) -> &[Vec<T>] {
        &self.norms
    }

    /// `|ĥ_{ue,bs,k}|²`.
    pub fn scalar(&self, bs: usize, k: usize, ue: UeId) -> T {
        self.scalars[bs][k][self.layout.flat(ue)]
    }

    /// Scalar powers of every UE after combiner `k` of `bs`, flat UE order.
    pub fn scalars_at(&self, bs: usize, k: usize) -> &[T] {
        &self.scalars[bs][k]
    }

    pub fn sinr(&self) -> &[T] {
        &self.sinr
    }

    pub fn rates(&self) -> &[T] {
        &self.rates
    }

    pub fn cell_rates(&self, cell: usize) -> &[T] {
        &self.rates[self.layout.cell_range(cell)]
    }

    pub fn sum_rate(&self, cell: usize) -> T {
        self.cell_rates(cell).iter().copied().sum()
    }

    pub fn is_finite(&self) -> bool {
        self.rates.iter().chain(&self.sinr).all(|v| v.is_finite())
    }
}

/// `|h̃_{(ℓ,j),ℓ,k}|²` for the local UEs and combiners of `cell`, `[j][k]`
/// flattened row-major: the local block measured with the given variables.
pub fn local_scalars<T: Real>(channels: &ChannelSet<T>, vars: &NetworkVariables<T>, cell: usize) -> Result<Vec<T>> {
    let layout = channels.layout();
    let combiners = vars.combiners(cell);
    let mut out = Vec::with_capacity(layout.ues_in(cell) * combiners.len());
    for j in 0..layout.ues_in(cell) {
        let ue = UeId::new(cell, j);
        let h = effective_channel(channels, vars.beamformers(), vars.powers()[layout.flat(ue)], ue, cell)?;
        for z in combiners {
            out.push(scalar_effective_power(z, &h)?);
        }
    }
    Ok(out)
}
