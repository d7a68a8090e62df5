//! Effective-channel composition through the IRSs, SINR and achievable rate.
//!
//! The effective channel from UE `(i,j)` to BS `ℓ` is
//!
//! ```text
//! ĥ = √p ( h^UB + Σ_r G^IB_{r,ℓ} Φ_r h^UI_r + Σ_{r₂} Σ_{r₁≠r₂} G^IB_{r₂,ℓ} Φ_{r₂} G^II_{r₁,r₂} Φ_{r₁} h^UI_{r₁} )
//! ```
//!
//! with `Φ_r = diag(φ_r)`. Reflections stop at second order and never bounce
//! twice off the same surface.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelSet, UeId};
use crate::error::{Error, Result};
use crate::numerics::{CVector, Real, RngStream};

/// Reflection coefficients `φ_{r,n} = a_{r,n} e^{j2πθ_{r,n}}` of one IRS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrsBeamformer<T> {
    coeffs: CVector<T>,
}

impl<T: Real> IrsBeamformer<T> {
    /// Fails if any element would amplify (`|φ| > 1`).
    pub fn new(coeffs: CVector<T>) -> Result<Self> {
        let tol = T::lit(1e-9);
        if coeffs.iter().any(|c| !(c.norm() <= T::one() + tol)) {
            return Err(Error::invalid("IRS reflection amplitude must lie in [0, 1]"));
        }
        Ok(Self { coeffs })
    }

    /// Switched-off surface: every element reflects nothing.
    pub fn off(elements: usize) -> Self {
        Self {
            coeffs: CVector::zeros(elements),
        }
    }

    pub fn coeffs(&self) -> &CVector<T> {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

fn check_beamformers<T: Real>(channels: &ChannelSet<T>, beamformers: &[IrsBeamformer<T>]) -> Result<()> {
    let dims = channels.dims();
    if beamformers.len() != dims.cells() {
        return Err(Error::dims("IRS beamformer count", dims.cells(), beamformers.len()));
    }
    for (r, bf) in beamformers.iter().enumerate() {
        if bf.len() != dims.irs_elements[r] {
            return Err(Error::dims("IRS beamformer length", dims.irs_elements[r], bf.len()));
        }
    }
    Ok(())
}

/// Per-IRS signal re-radiated toward the BSs for one UE:
/// `x_{r₂} = Φ_{r₂} (h^UI_{r₂} + Σ_{r₁≠r₂} G^II_{r₁,r₂} Φ_{r₁} h^UI_{r₁})`.
fn irs_outputs<T: Real>(channels: &ChannelSet<T>, beamformers: &[IrsBeamformer<T>], ue: UeId) -> Vec<CVector<T>> {
    let cells = channels.num_cells();
    let first: Vec<CVector<T>> = (0..cells)
        .map(|r| beamformers[r].coeffs.diag_mul_unchecked(channels.h_ui(ue, r)))
        .collect();
    (0..cells)
        .map(|r2| {
            let mut incident = channels.h_ui(ue, r2).clone();
            for (r1, reflected) in first.iter().enumerate() {
                if let Some(g) = channels.g_ii(r1, r2) {
                    g.matvec_acc(reflected, &mut incident);
                }
            }
            beamformers[r2].coeffs.diag_mul_unchecked(&incident)
        })
        .collect()
}

fn compose<T: Real>(
    channels: &ChannelSet<T>,
    outputs: &[CVector<T>],
    ue: UeId,
    bs: usize,
    amplitude: T,
) -> CVector<T> {
    let mut h = channels.h_ub(ue, bs).clone();
    for (r, x) in outputs.iter().enumerate() {
        channels.g_ib(r, bs).matvec_acc(x, &mut h);
    }
    h.scale_real(amplitude)
}

/// Effective channel `ĥ_{(i,j),ℓ}` of `ue` at `bs`, including `√p`.
pub fn effective_channel<T: Real>(
    channels: &ChannelSet<T>,
    beamformers: &[IrsBeamformer<T>],
    power: T,
    ue: UeId,
    bs: usize,
) -> Result<CVector<T>> {
    check_beamformers(channels, beamformers)?;
    if !(power >= T::zero()) {
        return Err(Error::invalid("transmit power must be >= 0"));
    }
    if bs >= channels.num_cells() || ue.cell >= channels.num_cells() || ue.index >= channels.layout().ues_in(ue.cell) {
        return Err(Error::invalid(format!("unknown UE {ue:?} or BS {bs}")));
    }
    let outputs = irs_outputs(channels, beamformers, ue);
    Ok(compose(channels, &outputs, ue, bs, power.sqrt()))
}

/// Effective channels of every UE at every BS, `[ue_flat][bs]`.
#[derive(Debug, Clone)]
pub struct EffectiveChannels<T> {
    table: Vec<Vec<CVector<T>>>,
}

impl<T: Real> EffectiveChannels<T> {
    /// `powers` is indexed by flat UE index.
    pub fn compute(channels: &ChannelSet<T>, beamformers: &[IrsBeamformer<T>], powers: &[T]) -> Result<Self> {
        check_beamformers(channels, beamformers)?;
        let layout = channels.layout();
        if powers.len() != layout.total() {
            return Err(Error::dims("power vector", layout.total(), powers.len()));
        }
        let table = layout
            .ids()
            .zip(powers)
            .map(|(ue, &p)| {
                let outputs = irs_outputs(channels, beamformers, ue);
                let amp = p.max(T::zero()).sqrt();
                (0..channels.num_cells())
                    .map(|bs| compose(channels, &outputs, ue, bs, amp))
                    .collect()
            })
            .collect();
        Ok(Self { table })
    }

    pub fn get(&self, ue_flat: usize, bs: usize) -> &CVector<T> {
        &self.table[ue_flat][bs]
    }

    pub fn num_ues(&self) -> usize {
        self.table.len()
    }
}

/// Scalar effective channel power `|z^H ĥ|²`.
pub fn scalar_effective_power<T: Real>(combiner: &CVector<T>, effective: &CVector<T>) -> Result<T> {
    Ok(combiner.dot(effective)?.norm_sqr())
}

/// SINR of UE `target` from the scalar powers `|ĥ_{u,ℓ,k}|²` of every UE `u`
/// (flat-indexed) after the combiner `z_{ℓ,k}`.
pub fn sinr_from_scalars<T: Real>(target: usize, scalars: &[T], noise: T) -> Result<T> {
    if target >= scalars.len() {
        return Err(Error::invalid(format!(
            "target UE {target} missing from {} scalar powers",
            scalars.len()
        )));
    }
    if !(noise > T::zero()) {
        return Err(Error::invalid("noise power must be > 0"));
    }
    if let Some(bad) = scalars.iter().position(|s| !(*s >= T::zero()) || !s.is_finite()) {
        return Err(Error::invalid(format!("scalar power of UE {bad} is missing or invalid")));
    }
    let interference: T = scalars
        .iter()
        .enumerate()
        .filter(|(u, _)| *u != target)
        .map(|(_, s)| *s)
        .sum();
    Ok(scalars[target] / (interference + noise))
}

/// SINR of `target` at its own BS evaluated straight from the channel
/// matrices, every reflection path expanded with explicit `Φ` matrices.
pub fn sinr_direct<T: Real>(
    channels: &ChannelSet<T>,
    beamformers: &[IrsBeamformer<T>],
    powers: &[T],
    combiner: &CVector<T>,
    target: UeId,
    noise: T,
) -> Result<T> {
    check_beamformers(channels, beamformers)?;
    let layout = channels.layout();
    if powers.len() != layout.total() {
        return Err(Error::dims("power vector", layout.total(), powers.len()));
    }
    if !(noise > T::zero()) {
        return Err(Error::invalid("noise power must be > 0"));
    }
    let bs = target.cell;
    let cells = channels.num_cells();
    let phis: Vec<_> = beamformers.iter().map(|b| b.coeffs.to_diag()).collect();
    let mut signal = T::zero();
    let mut interference = T::zero();
    for (flat, ue) in layout.ids().enumerate() {
        let mut composite = channels.h_ub(ue, bs).clone();
        for r in 0..cells {
            let cascade = channels.g_ib(r, bs).matmul(&phis[r])?;
            composite.add_assign(&cascade.matvec(channels.h_ui(ue, r))?)?;
        }
        for r2 in 0..cells {
            for r1 in (0..cells).filter(|&r1| r1 != r2) {
                let g_ii = channels.g_ii(r1, r2).ok_or_else(|| Error::invalid("missing IRS-IRS channel"))?;
                let cascade = channels
                    .g_ib(r2, bs)
                    .matmul(&phis[r2])?
                    .matmul(g_ii)?
                    .matmul(&phis[r1])?;
                composite.add_assign(&cascade.matvec(channels.h_ui(ue, r1))?)?;
            }
        }
        let gain = powers[flat] * combiner.dot(&composite)?.norm_sqr();
        if ue == target {
            signal = gain;
        } else {
            interference += gain;
        }
    }
    Ok(signal / (interference + noise))
}

/// `log₂(1 + SINR)` in bit/s/Hz.
pub fn achievable_rate<T: Real>(sinr: T) -> Result<T> {
    if !(sinr >= T::zero()) {
        return Err(Error::invalid(format!("SINR {sinr} must be >= 0")));
    }
    Ok((T::one() + sinr).log2())
}

/// Received vector `y_ℓ = Σ_{(i,j)} ĥ_{(i,j),ℓ} s_{i,j} + n_ℓ`.
pub fn simulate_received_symbol<T: Real>(
    channels: &ChannelSet<T>,
    beamformers: &[IrsBeamformer<T>],
    powers: &[T],
    symbols: &[Complex<T>],
    noise: &CVector<T>,
    bs: usize,
) -> Result<CVector<T>> {
    let layout = channels.layout();
    if symbols.len() != layout.total() {
        return Err(Error::dims("symbol vector", layout.total(), symbols.len()));
    }
    if noise.len() != channels.dims().antennas[bs] {
        return Err(Error::dims("noise vector", channels.dims().antennas[bs], noise.len()));
    }
    let mut y = noise.clone();
    for (flat, ue) in layout.ids().enumerate() {
        let h = effective_channel(channels, beamformers, powers[flat], ue, bs)?;
        y.axpy(symbols[flat], &h)?;
    }
    Ok(y)
}

/// Combiner output `ŷ = z^H y`.
pub fn combine<T: Real>(combiner: &CVector<T>, received: &CVector<T>) -> Result<Complex<T>> {
    combiner.dot(received)
}

/// Unit-modulus QPSK symbol.
pub fn qpsk_symbol<T: Real>(stream: &mut RngStream) -> Complex<T> {
    let s = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let re = if stream.uniform() < 0.5 { s } else { -s };
    let im = if stream.uniform() < 0.5 { s } else { -s };
    Complex::new(re, im)
}
