use serde::{Deserialize, Serialize};

use crate::channel::{UeId, UeLayout};
use crate::error::{Error, Result};
use crate::numerics::Real;
use crate::signal::achievable_rate;

use super::neighbors::NeighborSets;
use super::observe::Observation;

/// What BS `from` sends to BS `to` after measuring a slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExchangeMessage<T> {
    pub from: usize,
    pub to: usize,
    /// `|ĥ_{(to,k),from,j}|²`, `[k][j]` flattened row-major.
    pub to_neighbor: Vec<T>,
    pub penalty: T,
}

/// SINR of `target` from one combiner's scalar row, skipping the UEs of `skip_cell`.
fn sinr_skipping<T: Real>(layout: &UeLayout, target: usize, row: &[T], noise: T, skip_cell: Option<usize>) -> T {
    let mut interference = T::zero();
    for (u, &v) in row.iter().enumerate() {
        if u != target && skip_cell != Some(layout.id(u).cell) {
            interference += v;
        }
    }
    row[target] / (interference + noise)
}

/// Rate loss that cell `offender` inflicts on cell `interfered`, floored at zero.
///
/// `rows[j]` holds the scalar powers of every UE (flat order) after combiner
/// `j` of the interfered BS; UEs that BS cannot measure must be zero.
/// `rates[j]` is the rate of UE `(interfered, j)` from the same rows.
pub fn compute_penalty<T: Real>(
    layout: &UeLayout,
    interfered: usize,
    offender: usize,
    rows: &[Vec<T>],
    rates: &[T],
    noise: T,
) -> Result<T> {
    let k = layout.ues_in(interfered);
    if rows.len() != k || rates.len() != k {
        return Err(Error::dims("penalty rows", k, rows.len().min(rates.len())));
    }
    let mut total = T::zero();
    for j in 0..k {
        if rows[j].len() != layout.total() {
            return Err(Error::dims("scalar row", layout.total(), rows[j].len()));
        }
        let target = layout.flat(UeId::new(interfered, j));
        let free = achievable_rate(sinr_skipping(layout, target, &rows[j], noise, Some(offender)))?;
        total += free - rates[j];
    }
    Ok(total.max(T::zero()))
}

/// `Σ_k R_k − Σ P`; penalties are summed in sorted order so the result does
/// not depend on message arrival order.
pub fn compute_reward<T: Real>(local_rates: &[T], penalties: &[T]) -> T {
    let mut sorted = penalties.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    local_rates.iter().copied().sum::<T>() - sorted.into_iter().sum::<T>()
}

/// Scalar rows of BS `bs` restricted to the cells in `scope`, with the rates they imply.
fn scoped_rows<T: Real>(obs: &Observation<T>, bs: usize, scope: &[usize], noise: T) -> Result<(Vec<Vec<T>>, Vec<T>)> {
    let layout = obs.layout();
    let mut rows = Vec::with_capacity(layout.ues_in(bs));
    let mut rates = Vec::with_capacity(layout.ues_in(bs));
    for j in 0..layout.ues_in(bs) {
        let row: Vec<T> = obs
            .scalars_at(bs, j)
            .iter()
            .enumerate()
            .map(|(u, &v)| if scope.contains(&layout.id(u).cell) { v } else { T::zero() })
            .collect();
        let target = layout.flat(UeId::new(bs, j));
        rates.push(achievable_rate(sinr_skipping(layout, target, &row, noise, None))?);
        rows.push(row);
    }
    Ok((rows, rates))
}

/// Penalty BS `interfered` charges cell `offender`, computed from what that BS
/// measures: its own UEs, its dominant interferers, and the offender's UEs.
pub fn penalty_at<T: Real>(
    obs: &Observation<T>,
    interfered: usize,
    offender: usize,
    interfered_sets: &NeighborSets,
    noise: T,
) -> Result<T> {
    let mut scope = vec![interfered, offender];
    scope.extend(&interfered_sets.interfering);
    let (rows, rates) = scoped_rows(obs, interfered, &scope, noise)?;
    compute_penalty(obs.layout(), interfered, offender, &rows, &rates, noise)
}

/// Inbox of every BS: one message from each of its dominantly interfered neighbors.
pub fn exchange_messages<T: Real>(
    obs: &Observation<T>,
    sets: &[NeighborSets],
    noise: T,
) -> Result<Vec<Vec<ExchangeMessage<T>>>> {
    let layout = obs.layout();
    if sets.len() != layout.cells() {
        return Err(Error::dims("neighbor sets", layout.cells(), sets.len()));
    }
    (0..layout.cells())
        .map(|to| {
            sets[to]
                .interfered
                .iter()
                .map(|&from| {
                    let mut to_neighbor = Vec::with_capacity(layout.ues_in(to) * layout.ues_in(from));
                    for k in 0..layout.ues_in(to) {
                        for j in 0..layout.ues_in(from) {
                            to_neighbor.push(obs.scalar(from, j, UeId::new(to, k)));
                        }
                    }
                    Ok(ExchangeMessage {
                        from,
                        to,
                        to_neighbor,
                        penalty: penalty_at(obs, from, to, &sets[from], noise)?,
                    })
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hand_penalty_two_cells() {
        let layout = UeLayout::uniform(2, 1);
        let noise = 1e-3;
        // UE (0,0) is served by BS 0, UE (1,0) interferes at equal strength
        let rows = vec![vec![noise, noise]];
        let rate = (1.0f64 + 0.5).log2();
        let p = compute_penalty(&layout, 0, 1, &rows, &[rate], noise).unwrap();
        let expected = 2f64.log2() - 1.5f64.log2();
        assert!((p - expected).abs() < 1e-12);
        assert!((p - 0.415).abs() < 1e-3);
    }

    #[test]
    fn silent_offender_costs_nothing() {
        let layout = UeLayout::uniform(3, 2);
        let rows = vec![vec![1.0, 0.3, 0.0, 0.0, 0.2, 0.1], vec![0.4, 2.0, 0.0, 0.0, 0.3, 0.2]];
        let rates: Vec<f64> = (0..2)
            .map(|j| achievable_rate(sinr_skipping(&layout, j, &rows[j], 0.01, None)).unwrap())
            .collect();
        assert_eq!(compute_penalty(&layout, 0, 1, &rows, &rates, 0.01).unwrap(), 0.0);
        assert!(compute_penalty(&layout, 0, 2, &rows, &rates, 0.01).unwrap() > 0.0);
    }

    #[test]
    fn reward_examples() {
        assert_eq!(compute_reward(&[1.0, 2.0], &[0.5, 0.25]), 2.25);
        assert_eq!(compute_reward(&[1.0, 2.0], &[]), 3.0);
        assert_eq!(compute_reward(&[1.0, 2.0], &[3.0]), 0.0);
    }

    proptest! {
        #[test]
        fn reward_ignores_inbox_order(rates in proptest::collection::vec(0.0f64..10.0, 3), mut p in proptest::collection::vec(0.0f64..1.0, 0..6), seed in 0u64..1000) {
            let before = compute_reward(&rates, &p);
            let mut s = crate::numerics::RngStream::from_seed(seed);
            for i in (1..p.len()).rev() {
                p.swap(i, s.index(i + 1));
            }
            prop_assert_eq!(before, compute_reward(&rates, &p));
        }

        #[test]
        fn penalty_is_nonnegative(vals in proptest::collection::vec(0.0f64..5.0, 8), noise in 1e-4f64..1.0) {
            let layout = UeLayout::uniform(2, 2);
            let rows = vec![vals[..4].to_vec(), vals[4..].to_vec()];
            let rates: Vec<f64> = (0..2)
                .map(|j| achievable_rate(sinr_skipping(&layout, j, &rows[j], noise, None)).unwrap())
                .collect();
            let p = compute_penalty(&layout, 0, 1, &rows, &rates, noise).unwrap();
            prop_assert!(p >= 0.0);
            let silent = rows[0][2] == 0.0 && rows[0][3] == 0.0 && rows[1][2] == 0.0 && rows[1][3] == 0.0;
            prop_assert_eq!(p == 0.0, silent || (rows[0][0] == 0.0 && rows[1][1] == 0.0));
        }
    }
}
