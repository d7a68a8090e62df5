use crate::channel::{UeId, UeLayout};
use crate::error::{Error, Result};
use crate::numerics::Real;

use super::neighbors::NeighborSets;
use super::observe::Observation;
use super::reward::ExchangeMessage;
use super::variables::VariableIndices;

/// Channel powers enter the state as `clamp((10·log10 x + 140)/70, 0, 2)`.
pub fn encode_power<T: Real>(x: T) -> T {
    if !(x > T::zero()) {
        return T::zero();
    }
    ((T::lit(10.0) * x.log10() + T::lit(140.0)) / T::lit(70.0)).max(T::zero()).min(T::lit(2.0))
}

/// Sizes of the four state groups for `K` UEs per cell.
///
/// The vector is laid out as:
/// 1. local block at `t−T` then at `t`, each `[j][k]` (`K²` each);
/// 2. `B1` from-neighbor blocks `[j][k]` followed by their `B1` cell indices;
/// 3. `B2` to-neighbor blocks `[k][j]` followed by their `B2` cell indices;
/// 4. `K` power indices, `K` combiner indices, the IRS index, the local sum-rate.
///
/// Missing neighbors are zero blocks with cell index −1; an IRS that is off is −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateLayout {
    pub ues: usize,
    pub b1: usize,
    pub b2: usize,
}

impl StateLayout {
    pub fn new(ues: usize, b1: usize, b2: usize) -> Self {
        Self { ues, b1, b2 }
    }

    pub fn local_len(&self) -> usize {
        2 * self.ues * self.ues
    }

    pub fn from_neighbor_len(&self) -> usize {
        self.b1 * (self.ues * self.ues + 1)
    }

    pub fn to_neighbor_len(&self) -> usize {
        self.b2 * (self.ues * self.ues + 1)
    }

    pub fn variables_len(&self) -> usize {
        2 * self.ues + 2
    }

    pub fn len(&self) -> usize {
        self.local_len() + self.from_neighbor_len() + self.to_neighbor_len() + self.variables_len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Everything BS `cell` knows when forming its state at slot `t`.
#[derive(Debug, Clone, Copy)]
pub struct StateInputs<'a, T> {
    pub cell: usize,
    /// Measurement of slot `t−T`.
    pub previous: &'a Observation<T>,
    /// Local block on the slot-`t` channels with the slot-`t−T` variables, `[j][k]`.
    pub local_now: &'a [T],
    pub neighbors: &'a NeighborSets,
    pub inbox: &'a [ExchangeMessage<T>],
    pub variables: &'a VariableIndices,
}

fn uniform_ues(layout: &UeLayout, k: usize) -> Result<()> {
    for c in 0..layout.cells() {
        if layout.ues_in(c) != k {
            return Err(Error::invalid("state layout needs the same number of UEs in every cell"));
        }
    }
    Ok(())
}

pub fn build_state<T: Real>(shape: StateLayout, input: StateInputs<'_, T>) -> Result<Vec<T>> {
    let k = shape.ues;
    let cell = input.cell;
    let layout = input.previous.layout();
    uniform_ues(layout, k)?;
    if input.local_now.len() != k * k {
        return Err(Error::InvalidState(format!(
            "local measurement has {} entries, expected {}",
            input.local_now.len(),
            k * k
        )));
    }
    let prev = input.previous;
    let mut s = Vec::with_capacity(shape.len());

    for j in 0..k {
        for kk in 0..k {
            s.push(encode_power(prev.scalar(cell, kk, UeId::new(cell, j))));
        }
    }
    s.extend(input.local_now.iter().map(|&x| encode_power(x)));

    for slot in 0..shape.b1 {
        match input.neighbors.interfering.get(slot) {
            Some(&i) => {
                for j in 0..k {
                    for kk in 0..k {
                        s.push(encode_power(prev.scalar(cell, kk, UeId::new(i, j))));
                    }
                }
            }
            None => s.extend(std::iter::repeat_n(T::zero(), k * k)),
        }
    }
    for slot in 0..shape.b1 {
        s.push(input.neighbors.interfering.get(slot).map_or(-T::one(), |&i| T::lit(i as f64)));
    }

    for slot in 0..shape.b2 {
        match input.neighbors.interfered.get(slot) {
            Some(&i) => {
                let msg = input
                    .inbox
                    .iter()
                    .find(|m| m.from == i && m.to == cell)
                    .ok_or_else(|| Error::InvalidState(format!("BS {cell} has no message from BS {i}")))?;
                if msg.to_neighbor.len() != k * k {
                    return Err(Error::InvalidState(format!("message from BS {i} has the wrong size")));
                }
                s.extend(msg.to_neighbor.iter().map(|&x| encode_power(x)));
            }
            None => s.extend(std::iter::repeat_n(T::zero(), k * k)),
        }
    }
    for slot in 0..shape.b2 {
        s.push(input.neighbors.interfered.get(slot).map_or(-T::one(), |&i| T::lit(i as f64)));
    }

    let vars = input.variables;
    s.extend(vars.power[cell].iter().map(|&i| T::lit(i as f64)));
    s.extend(vars.combiner[cell].iter().map(|&i| T::lit(i as f64)));
    s.push(vars.irs[cell].map_or(-T::one(), |i| T::lit(i as f64)));
    s.push(prev.sum_rate(cell));

    debug_assert_eq!(s.len(), shape.len());
    if let Some(pos) = s.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidState(format!("state entry {pos} is not finite")));
    }
    Ok(s)
}
