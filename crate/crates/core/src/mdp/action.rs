use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::variables::{SetSizes, VariableIndices};

/// Shape of one agent's discrete action.
///
/// Slots are ordered as `K` power gradients, then `K` combiner gradients when
/// the agent controls combiners, then one IRS gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpace {
    pub arity: usize,
    pub ues: usize,
    pub combiners: bool,
}

impl ActionSpace {
    pub fn new(arity: usize, ues: usize, combiners: bool) -> Result<Self> {
        if arity != 2 && arity != 3 {
            return Err(Error::invalid(format!("gradient arity must be 2 or 3, got {arity}")));
        }
        if ues == 0 {
            return Err(Error::invalid("action space needs at least one UE"));
        }
        Ok(Self { arity, ues, combiners })
    }

    pub fn slots(&self) -> usize {
        self.ues * if self.combiners { 2 } else { 1 } + 1
    }

    pub fn size(&self) -> usize {
        self.arity.pow(self.slots() as u32)
    }

    pub fn decode(&self, index: usize) -> Result<Vec<i8>> {
        decode_action(index, self.arity, self.slots())
    }
}

fn digit_to_gradient(arity: usize, digit: usize) -> i8 {
    match (arity, digit) {
        (2, 0) | (3, 0) => -1,
        (3, 1) => 0,
        _ => 1,
    }
}

fn gradient_to_digit(arity: usize, gradient: i8) -> Option<usize> {
    match (arity, gradient) {
        (_, -1) => Some(0),
        (3, 0) => Some(1),
        (2, 1) => Some(1),
        (3, 1) => Some(2),
        _ => None,
    }
}

/// Little-endian positional decode of `index` into per-slot gradients.
pub fn decode_action(index: usize, arity: usize, slots: usize) -> Result<Vec<i8>> {
    if arity != 2 && arity != 3 {
        return Err(Error::invalid(format!("gradient arity must be 2 or 3, got {arity}")));
    }
    let size = arity
        .checked_pow(slots as u32)
        .ok_or_else(|| Error::invalid("action space too large"))?;
    if index >= size {
        return Err(Error::invalid(format!("action {index} outside [0, {size})")));
    }
    let mut rest = index;
    Ok((0..slots)
        .map(|_| {
            let d = rest % arity;
            rest /= arity;
            digit_to_gradient(arity, d)
        })
        .collect())
}

pub fn encode_action(gradients: &[i8], arity: usize) -> Result<usize> {
    let mut index = 0;
    for &g in gradients.iter().rev() {
        let d = gradient_to_digit(arity, g)
            .ok_or_else(|| Error::invalid(format!("gradient {g} not valid for arity {arity}")))?;
        index = index * arity + d;
    }
    Ok(index)
}

fn step(index: usize, gradient: i8, size: usize) -> usize {
    (index as i64 + gradient as i64).clamp(0, size as i64 - 1) as usize
}

/// Applies one agent's gradients to its cell's indices with saturating bounds.
/// A switched-off IRS ignores its gradient.
pub fn apply_action(
    vars: &VariableIndices,
    cell: usize,
    gradients: &[i8],
    space: &ActionSpace,
    sizes: SetSizes,
) -> Result<VariableIndices> {
    if gradients.len() != space.slots() {
        return Err(Error::dims("gradient slots", space.slots(), gradients.len()));
    }
    if vars.power[cell].len() != space.ues {
        return Err(Error::dims("UEs in cell", space.ues, vars.power[cell].len()));
    }
    let k = space.ues;
    let mut out = vars.clone();
    for (p, &g) in out.power[cell].iter_mut().zip(&gradients[..k]) {
        *p = step(*p, g, sizes.power);
    }
    if space.combiners {
        for (z, &g) in out.combiner[cell].iter_mut().zip(&gradients[k..2 * k]) {
            *z = step(*z, g, sizes.combiner);
        }
    }
    if let Some(phi) = out.irs[cell].as_mut() {
        *phi = step(*phi, gradients[space.slots() - 1], sizes.irs);
    }
    Ok(out)
}
