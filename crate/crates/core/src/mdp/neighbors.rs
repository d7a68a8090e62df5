use serde::{Deserialize, Serialize};

use crate::channel::{UeId, UeLayout};
use crate::numerics::Real;

/// Dominant neighbors of one BS.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborSets {
    /// Cells whose UEs interfere most with this BS's uplink.
    pub interfering: Vec<usize>,
    /// Cells whose BSs are hit hardest by this cell's UEs.
    pub interfered: Vec<usize>,
    /// Fewer than the requested number of other cells exist.
    pub degenerate: bool,
}

impl NeighborSets {
    pub fn empty() -> Self {
        Self {
            interfering: Vec::new(),
            interfered: Vec::new(),
            degenerate: false,
        }
    }
}

/// Top-`count` entries of `(cell, score)` by descending score, ties to the lower cell.
fn top_cells<T: Real>(mut scored: Vec<(usize, T)>, count: usize) -> Vec<usize> {
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal).then(a.0.cmp(&b.0)));
    scored.into_iter().take(count).map(|(c, _)| c).collect()
}

/// Neighbor sets of `cell` from the `‖ĥ_{u,b}‖²` table (`[ue][bs]`).
pub fn neighbor_sets<T: Real>(norms: &[Vec<T>], layout: &UeLayout, cell: usize, b1: usize, b2: usize) -> NeighborSets {
    let others: Vec<usize> = (0..layout.cells()).filter(|&i| i != cell).collect();
    let incoming = others
        .iter()
        .map(|&i| {
            let score: T = (0..layout.ues_in(i)).map(|j| norms[layout.flat(UeId::new(i, j))][cell]).sum();
            (i, score)
        })
        .collect();
    let outgoing = others
        .iter()
        .map(|&i| {
            let score: T = layout.cell_range(cell).map(|u| norms[u][i]).sum();
            (i, score)
        })
        .collect();
    NeighborSets {
        interfering: top_cells(incoming, b1),
        interfered: top_cells(outgoing, b2),
        degenerate: others.len() < b1.max(b2),
    }
}

/// Neighbor sets of every cell.
pub fn all_neighbor_sets<T: Real>(norms: &[Vec<T>], layout: &UeLayout, b1: usize, b2: usize) -> Vec<NeighborSets> {
    (0..layout.cells()).map(|c| neighbor_sets(norms, layout, c, b1, b2)).collect()
}
