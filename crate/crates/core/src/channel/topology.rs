use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::RngStream;

pub type Point = [f64; 3];

/// Geometry and per-cell counts used to lay out the network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopologyParams {
    pub cells: usize,
    pub ues_per_cell: usize,
    pub antennas: usize,
    pub irs_elements: usize,
    pub bs_spacing_m: f64,
    pub bs_height_m: f64,
    pub ue_height_m: f64,
    pub irs_offset_m: f64,
    pub irs_height_m: f64,
}

impl Default for TopologyParams {
    fn default() -> Self {
        Self {
            cells: 7,
            ues_per_cell: 3,
            antennas: 5,
            irs_elements: 5,
            bs_spacing_m: 100.0,
            bs_height_m: 10.0,
            ue_height_m: 1.5,
            irs_offset_m: 10.0,
            irs_height_m: 10.0,
        }
    }
}

impl TopologyParams {
    pub fn validate(&self) -> Result<()> {
        if self.cells == 0 {
            return Err(Error::invalid("topology needs at least one cell"));
        }
        if self.ues_per_cell == 0 || self.antennas == 0 || self.irs_elements == 0 {
            return Err(Error::invalid("UE, antenna and IRS element counts must be >= 1"));
        }
        let lengths = [
            self.bs_spacing_m,
            self.bs_height_m,
            self.ue_height_m,
            self.irs_offset_m,
            self.irs_height_m,
        ];
        if lengths.iter().any(|v| !v.is_finite() || *v < 0.0) || self.bs_spacing_m <= 0.0 {
            return Err(Error::invalid("topology lengths must be finite, spacing positive"));
        }
        Ok(())
    }
}

/// Identifies UE `index` of cell `cell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UeId {
    pub cell: usize,
    pub index: usize,
}

impl UeId {
    pub fn new(cell: usize, index: usize) -> Self {
        Self { cell, index }
    }
}

/// Maps `(cell, k)` UE ids onto a dense flat index, cell-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UeLayout {
    offsets: Vec<usize>,
}

impl UeLayout {
    pub fn new(ues_per_cell: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(ues_per_cell.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for &k in ues_per_cell {
            acc += k;
            offsets.push(acc);
        }
        Self { offsets }
    }

    pub fn uniform(cells: usize, ues_per_cell: usize) -> Self {
        Self::new(&vec![ues_per_cell; cells])
    }

    pub fn cells(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn ues_in(&self, cell: usize) -> usize {
        self.offsets[cell + 1] - self.offsets[cell]
    }

    pub fn flat(&self, ue: UeId) -> usize {
        debug_assert!(ue.index < self.ues_in(ue.cell));
        self.offsets[ue.cell] + ue.index
    }

    pub fn cell_range(&self, cell: usize) -> std::ops::Range<usize> {
        self.offsets[cell]..self.offsets[cell + 1]
    }

    pub fn id(&self, flat: usize) -> UeId {
        let cell = self.offsets.partition_point(|&o| o <= flat) - 1;
        UeId::new(cell, flat - self.offsets[cell])
    }

    pub fn ids(&self) -> impl Iterator<Item = UeId> + '_ {
        (0..self.cells()).flat_map(move |c| (0..self.ues_in(c)).map(move |k| UeId::new(c, k)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSite {
    pub bs: Point,
    pub irs: Point,
    pub ues: Vec<Point>,
    pub antennas: usize,
    pub irs_elements: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub bs_spacing_m: f64,
    pub cells: Vec<CellSite>,
}

impl Topology {
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn layout(&self) -> UeLayout {
        UeLayout::new(&self.cells.iter().map(|c| c.ues.len()).collect::<Vec<_>>())
    }

    pub fn ue_position(&self, ue: UeId) -> Point {
        self.cells[ue.cell].ues[ue.index]
    }

    /// Circumradius of every hexagonal cell.
    pub fn cell_radius(&self) -> f64 {
        hex_circumradius(self.bs_spacing_m)
    }
}

pub fn hex_circumradius(spacing: f64) -> f64 {
    spacing / 3f64.sqrt()
}

const AXIAL_DIRECTIONS: [(i64, i64); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

/// Horizontal centers of the first `count` cells of a hexagonal spiral:
/// the origin, then ring 1 (six cells), ring 2 (twelve), and so on.
pub fn hex_spiral_centers(count: usize, spacing: f64) -> Vec<[f64; 2]> {
    let mut axial = Vec::with_capacity(count);
    if count > 0 {
        axial.push((0i64, 0i64));
    }
    let mut ring = 1i64;
    while axial.len() < count {
        let (dq, dr) = AXIAL_DIRECTIONS[4];
        let mut hex = (dq * ring, dr * ring);
        'ring: for &(sq, sr) in &AXIAL_DIRECTIONS {
            for _ in 0..ring {
                if axial.len() == count {
                    break 'ring;
                }
                axial.push(hex);
                hex = (hex.0 + sq, hex.1 + sr);
            }
        }
        ring += 1;
    }
    let h = 3f64.sqrt() / 2.0;
    axial
        .into_iter()
        .map(|(q, r)| {
            let (q, r) = (q as f64, r as f64);
            [spacing * (q + r / 2.0), spacing * h * r]
        })
        .collect()
}

/// Whether horizontal offset `(dx, dy)` from a cell center lies inside that
/// cell's hexagon (pointy-top, apothem `spacing / 2`).
pub fn inside_hexagon(dx: f64, dy: f64, spacing: f64) -> bool {
    let apothem = spacing / 2.0 + 1e-9;
    let h = 3f64.sqrt() / 2.0;
    dx.abs() <= apothem
        && (0.5 * dx + h * dy).abs() <= apothem
        && (-0.5 * dx + h * dy).abs() <= apothem
}

/// Lays out BSs on a hexagonal spiral, IRSs at a fixed horizontal offset from
/// their BS, and UEs uniformly inside each hexagon.
pub fn build_topology(params: &TopologyParams, stream: &mut RngStream) -> Result<Topology> {
    params.validate()?;
    let spacing = params.bs_spacing_m;
    let radius = hex_circumradius(spacing);
    let cells = hex_spiral_centers(params.cells, spacing)
        .into_iter()
        .map(|[x, y]| {
            let ues = (0..params.ues_per_cell)
                .map(|_| loop {
                    let dx = (2.0 * stream.uniform() - 1.0) * radius;
                    let dy = (2.0 * stream.uniform() - 1.0) * radius;
                    if inside_hexagon(dx, dy, spacing) {
                        break [x + dx, y + dy, params.ue_height_m];
                    }
                })
                .collect();
            CellSite {
                bs: [x, y, params.bs_height_m],
                irs: [x + params.irs_offset_m, y, params.irs_height_m],
                ues,
                antennas: params.antennas,
                irs_elements: params.irs_elements,
            }
        })
        .collect();
    Ok(Topology {
        bs_spacing_m: spacing,
        cells,
    })
}

pub fn distance(a: &Point, b: &Point) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn horizontal(a: &Point, b: &Point) -> f64 {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
    }

    #[test]
    fn seven_cells_have_unit_spacing_neighbours() {
        let topo = build_topology(&TopologyParams::default(), &mut RngStream::from_seed(1)).unwrap();
        assert_eq!(topo.num_cells(), 7);
        let center = topo.cells[0].bs;
        for cell in &topo.cells[1..] {
            assert!((horizontal(&center, &cell.bs) - 100.0).abs() < 1e-9);
            assert_eq!(cell.bs[2], 10.0);
        }
        // the ring closes: consecutive ring cells are adjacent too
        for i in 1..7 {
            let j = if i == 6 { 1 } else { i + 1 };
            assert!((horizontal(&topo.cells[i].bs, &topo.cells[j].bs) - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn single_cell() {
        let params = TopologyParams {
            cells: 1,
            ..Default::default()
        };
        let topo = build_topology(&params, &mut RngStream::from_seed(2)).unwrap();
        assert_eq!(topo.num_cells(), 1);
        assert_eq!(topo.cells[0].ues.len(), 3);
    }

    #[test]
    fn zero_cells_rejected() {
        let params = TopologyParams {
            cells: 0,
            ..Default::default()
        };
        assert!(build_topology(&params, &mut RngStream::from_seed(2)).is_err());
    }

    #[test]
    fn ues_stay_inside_their_hexagon() {
        for seed in 0..20 {
            let params = TopologyParams {
                cells: 19,
                ues_per_cell: 5,
                ..Default::default()
            };
            let topo = build_topology(&params, &mut RngStream::from_seed(seed)).unwrap();
            for cell in &topo.cells {
                for ue in &cell.ues {
                    assert!(horizontal(ue, &cell.bs) <= topo.cell_radius() + 1e-9);
                    assert!(inside_hexagon(ue[0] - cell.bs[0], ue[1] - cell.bs[1], 100.0));
                    assert_eq!(ue[2], 1.5);
                }
            }
        }
    }

    #[test]
    fn hexagon_test_matches_voronoi_nearest_center() {
        // A point is inside cell 0's hexagon iff the origin is its nearest lattice center.
        let centers = hex_spiral_centers(19, 100.0);
        let mut s = RngStream::from_seed(9);
        for _ in 0..5000 {
            let p = [(s.uniform() - 0.5) * 160.0, (s.uniform() - 0.5) * 160.0];
            let d0 = (p[0].powi(2) + p[1].powi(2)).sqrt();
            let nearest_other = centers[1..]
                .iter()
                .map(|c| ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            if (d0 - nearest_other).abs() > 1e-6 {
                assert_eq!(inside_hexagon(p[0], p[1], 100.0), d0 < nearest_other, "{p:?}");
            }
        }
    }

    #[test]
    fn spiral_centers_are_distinct() {
        let c = hex_spiral_centers(37, 1.0);
        for i in 0..c.len() {
            for j in 0..i {
                let d = ((c[i][0] - c[j][0]).powi(2) + (c[i][1] - c[j][1]).powi(2)).sqrt();
                assert!(d > 0.99, "cells {i} and {j} overlap");
            }
        }
    }

    #[test]
    fn irs_sits_ten_metres_from_bs() {
        let topo = build_topology(&TopologyParams::default(), &mut RngStream::from_seed(4)).unwrap();
        for cell in &topo.cells {
            assert!((distance(&cell.bs, &cell.irs) - 10.0).abs() < 1e-12);
        }
    }

    #[test]
    fn layout_round_trips() {
        let layout = UeLayout::new(&[2, 0, 3]);
        assert_eq!(layout.total(), 5);
        for (flat, id) in layout.ids().enumerate() {
            assert_eq!(layout.flat(id), flat);
            assert_eq!(layout.id(flat), id);
        }
        assert_eq!(layout.cell_range(2), 2..5);
    }
}
