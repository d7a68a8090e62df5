use serde::{Deserialize, Serialize};

use super::pathloss::{path_loss_db, PathLossParams};
use super::topology::{distance, Point, Topology, UeId, UeLayout};
use crate::error::{Error, Result};
use crate::numerics::{bessel_j0, db_to_linear, CMatrix, CVector, Real, RngStream, SeedTree};

pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// UE mobility model parameters for the Jakes correlation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobilityParams {
    pub speed_kmh: f64,
    pub carrier_hz: f64,
    pub slot_s: f64,
}

impl MobilityParams {
    pub fn rho(&self) -> Result<f64> {
        jakes_rho(self.speed_kmh / 3.6, self.carrier_hz, self.slot_s)
    }
}

/// Jakes time-correlation `J₀(2π v f_c T / c)`; `speed` in m/s.
pub fn jakes_rho(speed: f64, carrier_hz: f64, slot_s: f64) -> Result<f64> {
    if !(speed >= 0.0) {
        return Err(Error::invalid(format!("UE speed {speed} must be >= 0")));
    }
    if !(slot_s > 0.0) || !(carrier_hz > 0.0) {
        return Err(Error::invalid("carrier frequency and slot duration must be > 0"));
    }
    let doppler = speed * carrier_hz / SPEED_OF_LIGHT;
    bessel_j0(2.0 * std::f64::consts::PI * doppler * slot_s)
}

/// Antenna/element counts and UE indexing of a network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkDims {
    pub layout: UeLayout,
    pub antennas: Vec<usize>,
    pub irs_elements: Vec<usize>,
}

impl NetworkDims {
    pub fn uniform(cells: usize, ues_per_cell: usize, antennas: usize, irs_elements: usize) -> Self {
        Self {
            layout: UeLayout::uniform(cells, ues_per_cell),
            antennas: vec![antennas; cells],
            irs_elements: vec![irs_elements; cells],
        }
    }

    pub fn from_topology(topology: &Topology) -> Self {
        Self {
            layout: topology.layout(),
            antennas: topology.cells.iter().map(|c| c.antennas).collect(),
            irs_elements: topology.cells.iter().map(|c| c.irs_elements).collect(),
        }
    }

    pub fn cells(&self) -> usize {
        self.antennas.len()
    }
}

/// Linear large-scale fading coefficients of every link class.
#[derive(Debug, Clone, PartialEq)]
pub struct LargeScale {
    /// `[ue][bs]`
    pub ue_bs: Vec<Vec<f64>>,
    /// `[ue][irs]`
    pub ue_irs: Vec<Vec<f64>>,
    /// `[irs][bs]`
    pub irs_bs: Vec<Vec<f64>>,
    /// `[r1][r2]`, diagonal unused.
    pub irs_irs: Vec<Vec<f64>>,
}

impl LargeScale {
    pub fn from_topology(topology: &Topology, params: &PathLossParams) -> Result<Self> {
        params.validate()?;
        let gain = |a: &Point, b: &Point, alpha: f64| -> Result<f64> {
            Ok(db_to_linear(path_loss_db(distance(a, b), alpha, params)?))
        };
        let layout = topology.layout();
        let cells = &topology.cells;
        let mut ue_bs = Vec::with_capacity(layout.total());
        let mut ue_irs = Vec::with_capacity(layout.total());
        for ue in layout.ids() {
            let pos = topology.ue_position(ue);
            ue_bs.push(
                cells
                    .iter()
                    .map(|c| gain(&pos, &c.bs, params.alpha_ub))
                    .collect::<Result<Vec<_>>>()?,
            );
            ue_irs.push(
                cells
                    .iter()
                    .map(|c| gain(&pos, &c.irs, params.alpha_ui))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let irs_bs = cells
            .iter()
            .map(|r| {
                cells
                    .iter()
                    .map(|b| gain(&r.irs, &b.bs, params.alpha_ib))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let irs_irs = cells
            .iter()
            .enumerate()
            .map(|(i, r1)| {
                cells
                    .iter()
                    .enumerate()
                    .map(|(j, r2)| {
                        if i == j {
                            Ok(0.0)
                        } else {
                            gain(&r1.irs, &r2.irs, params.alpha_ii)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ue_bs,
            ue_irs,
            irs_bs,
            irs_irs,
        })
    }

    /// Every link with the same coefficient; handy for statistical tests.
    pub fn uniform(dims: &NetworkDims, beta: f64) -> Self {
        let cells = dims.cells();
        let ues = dims.layout.total();
        Self {
            ue_bs: vec![vec![beta; cells]; ues],
            ue_irs: vec![vec![beta; cells]; ues],
            irs_bs: vec![vec![beta; cells]; cells],
            irs_irs: vec![vec![beta; cells]; cells],
        }
    }
}

/// Time-varying Rayleigh link: `h = √β · u` with Gauss-Markov `u`.
#[derive(Debug, Clone)]
pub struct FadingLink<T> {
    beta: T,
    state: CVector<T>,
    channel: CVector<T>,
    stream: RngStream,
}

impl<T: Real> FadingLink<T> {
    fn new(beta: f64, len: usize, mut stream: RngStream) -> Result<Self> {
        let beta = T::lit(beta);
        let state = stream.complex_gaussian(len)?;
        let channel = state.scale_real(beta.sqrt());
        Ok(Self {
            beta,
            state,
            channel,
            stream,
        })
    }

    fn advance(&mut self, rho: T, innovation: T) {
        let amp = self.beta.sqrt();
        for (u, h) in self
            .state
            .as_mut_slice()
            .iter_mut()
            .zip(self.channel.as_mut_slice())
        {
            let n = self.stream.complex_normal::<T>();
            *u = *u * rho + n * innovation;
            *h = *u * amp;
        }
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// Normalized fading state `u`.
    pub fn state(&self) -> &CVector<T> {
        &self.state
    }

    pub fn channel(&self) -> &CVector<T> {
        &self.channel
    }
}

/// Every instantaneous channel of the network at one slot.
///
/// UE-BS and UE-IRS links evolve with [`ChannelSet::advance`]; IRS-BS and
/// IRS-IRS matrices are drawn once and stay fixed.
#[derive(Debug, Clone)]
pub struct ChannelSet<T> {
    dims: NetworkDims,
    rho: T,
    ue_bs: Vec<Vec<FadingLink<T>>>,
    ue_irs: Vec<Vec<FadingLink<T>>>,
    irs_bs: Vec<Vec<CMatrix<T>>>,
    irs_irs: Vec<Vec<Option<CMatrix<T>>>>,
}

fn gaussian_matrix<T: Real>(
    rows: usize,
    cols: usize,
    beta: f64,
    stream: &mut RngStream,
) -> Result<CMatrix<T>> {
    let scale = T::lit(beta.sqrt());
    let data = stream.complex_gaussian::<T>(rows * cols)?.scale_real(scale);
    CMatrix::from_row_major(rows, cols, data.into_vec())
}

impl<T: Real> ChannelSet<T> {
    pub fn init(dims: &NetworkDims, large: &LargeScale, rho: f64, seeds: &SeedTree) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::invalid(format!("correlation rho {rho} outside [0, 1]")));
        }
        let cells = dims.cells();
        let layout = &dims.layout;
        if large.ue_bs.len() != layout.total() || large.irs_bs.len() != cells {
            return Err(Error::invalid("large-scale table does not match network dimensions"));
        }
        let mut ue_bs = Vec::with_capacity(layout.total());
        let mut ue_irs = Vec::with_capacity(layout.total());
        for (flat, ue) in layout.ids().enumerate() {
            let tag = format!("{}.{}", ue.cell, ue.index);
            ue_bs.push(
                (0..cells)
                    .map(|b| {
                        let s = seeds.stream(&format!("channel/ub/{tag}/{b}"));
                        FadingLink::new(large.ue_bs[flat][b], dims.antennas[b], s)
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
            ue_irs.push(
                (0..cells)
                    .map(|r| {
                        let s = seeds.stream(&format!("channel/ui/{tag}/{r}"));
                        FadingLink::new(large.ue_irs[flat][r], dims.irs_elements[r], s)
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let irs_bs = (0..cells)
            .map(|r| {
                (0..cells)
                    .map(|b| {
                        let mut s = seeds.stream(&format!("channel/ib/{r}/{b}"));
                        gaussian_matrix(dims.antennas[b], dims.irs_elements[r], large.irs_bs[r][b], &mut s)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let irs_irs = (0..cells)
            .map(|r1| {
                (0..cells)
                    .map(|r2| {
                        if r1 == r2 {
                            return Ok(None);
                        }
                        let mut s = seeds.stream(&format!("channel/ii/{r1}/{r2}"));
                        gaussian_matrix(
                            dims.irs_elements[r2],
                            dims.irs_elements[r1],
                            large.irs_irs[r1][r2],
                            &mut s,
                        )
                        .map(Some)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dims: dims.clone(),
            rho: T::lit(rho),
            ue_bs,
            ue_irs,
            irs_bs,
            irs_irs,
        })
    }

    /// One Gauss-Markov step of every UE-BS and UE-IRS link.
    pub fn advance(&mut self) {
        let rho = self.rho;
        let innovation = (T::one() - rho * rho).max(T::zero()).sqrt();
        for link in self
            .ue_bs
            .iter_mut()
            .chain(self.ue_irs.iter_mut())
            .flat_map(|links| links.iter_mut())
        {
            link.advance(rho, innovation);
        }
    }

    pub fn dims(&self) -> &NetworkDims {
        &self.dims
    }

    pub fn layout(&self) -> &UeLayout {
        &self.dims.layout
    }

    pub fn num_cells(&self) -> usize {
        self.dims.cells()
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn ue_bs_link(&self, ue: UeId, bs: usize) -> &FadingLink<T> {
        &self.ue_bs[self.dims.layout.flat(ue)][bs]
    }

    pub fn ue_irs_link(&self, ue: UeId, irs: usize) -> &FadingLink<T> {
        &self.ue_irs[self.dims.layout.flat(ue)][irs]
    }

    /// Direct channel `h^UB` (length `M_bs`).
    pub fn h_ub(&self, ue: UeId, bs: usize) -> &CVector<T> {
        self.ue_bs_link(ue, bs).channel()
    }

    /// UE-to-IRS channel `h^UI` (length `N_irs`).
    pub fn h_ui(&self, ue: UeId, irs: usize) -> &CVector<T> {
        self.ue_irs_link(ue, irs).channel()
    }

    /// IRS-to-BS channel `G^IB` (`M_bs × N_irs`).
    pub fn g_ib(&self, irs: usize, bs: usize) -> &CMatrix<T> {
        &self.irs_bs[irs][bs]
    }

    /// IRS-to-IRS channel `G^II` from `r1` to `r2` (`N_r2 × N_r1`); `None` when `r1 == r2`.
    pub fn g_ii(&self, r1: usize, r2: usize) -> Option<&CMatrix<T>> {
        self.irs_irs[r1][r2].as_ref()
    }
}

/// Builds the large-scale table from the topology and draws all channels.
pub fn init_channels<T: Real>(
    topology: &Topology,
    params: &PathLossParams,
    rho: f64,
    seeds: &SeedTree,
) -> Result<ChannelSet<T>> {
    let large = LargeScale::from_topology(topology, params)?;
    ChannelSet::init(&NetworkDims::from_topology(topology), &large, rho, seeds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{build_topology, TopologyParams};
    use crate::numerics::Complex;

    fn single_link_set(rho: f64, len: usize, seed: u64) -> ChannelSet<f64> {
        let dims = NetworkDims::uniform(1, 1, len, 1);
        ChannelSet::init(&dims, &LargeScale::uniform(&dims, 1.0), rho, &SeedTree::new(seed)).unwrap()
    }

    #[test]
    fn jakes_reference_points() {
        assert_eq!(jakes_rho(0.0, 2.5e9, 5e-3).unwrap(), 1.0);
        let r1 = jakes_rho(1.0 / 3.6, 2.5e9, 5e-3).unwrap();
        assert!((r1 - 0.9987).abs() < 1e-4, "{r1}");
        let r9 = jakes_rho(9.0 / 3.6, 2.5e9, 5e-3).unwrap();
        assert!((r9 - 0.9).abs() < 0.02, "{r9}");
        assert!(jakes_rho(-1.0, 2.5e9, 5e-3).is_err());
        assert!(jakes_rho(0.01, 2.5e9, 5e-3).unwrap() < 1.0);
    }

    #[test]
    fn deterministic_init() {
        let topo = build_topology(&TopologyParams::default(), &mut RngStream::from_seed(3)).unwrap();
        let seeds = SeedTree::new(42);
        let a: ChannelSet<f64> = init_channels(&topo, &PathLossParams::default(), 0.99, &seeds).unwrap();
        let b: ChannelSet<f64> = init_channels(&topo, &PathLossParams::default(), 0.99, &seeds).unwrap();
        for ue in topo.layout().ids() {
            for bs in 0..7 {
                assert_eq!(a.h_ub(ue, bs), b.h_ub(ue, bs));
                assert_eq!(a.h_ui(ue, bs), b.h_ui(ue, bs));
            }
        }
        assert_eq!(a.g_ib(2, 5), b.g_ib(2, 5));
        assert!(a.g_ii(3, 3).is_none());
        assert_eq!(a.g_ii(1, 4).unwrap().rows(), 5);
    }

    #[test]
    fn own_irs_to_bs_gain_is_minus_forty_db() {
        let topo = build_topology(&TopologyParams::default(), &mut RngStream::from_seed(3)).unwrap();
        let large = LargeScale::from_topology(&topo, &PathLossParams::default()).unwrap();
        for c in 0..7 {
            assert!((large.irs_bs[c][c] / 1e-4 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn direct_channel_power_tracks_large_scale_coefficient() {
        let topo = build_topology(&TopologyParams::default(), &mut RngStream::from_seed(8)).unwrap();
        let ue = UeId::new(2, 1);
        let large = LargeScale::from_topology(&topo, &PathLossParams::default()).unwrap();
        let beta = large.ue_bs[topo.layout().flat(ue)][0];
        let trials = 1000;
        let mean: f64 = (0..trials)
            .map(|s| {
                let set: ChannelSet<f64> = ChannelSet::init(
                    &NetworkDims::from_topology(&topo),
                    &large,
                    0.9,
                    &SeedTree::new(s),
                )
                .unwrap();
                set.h_ub(ue, 0).norm_sqr() / 5.0
            })
            .sum::<f64>()
            / trials as f64;
        assert!((mean / beta - 1.0).abs() < 0.05, "ratio {}", mean / beta);
    }

    #[test]
    fn rho_one_freezes_fading() {
        let mut set = single_link_set(1.0, 4, 5);
        let before = set.h_ub(UeId::new(0, 0), 0).clone();
        for _ in 0..10 {
            set.advance();
        }
        assert_eq!(&before, set.h_ub(UeId::new(0, 0), 0));
    }

    #[test]
    fn rho_zero_decorrelates() {
        let mut set = single_link_set(0.0, 10_000, 6);
        let ue = UeId::new(0, 0);
        let before = set.ue_bs_link(ue, 0).state().clone();
        set.advance();
        let after = set.ue_bs_link(ue, 0).state();
        let corr = before.dot(after).unwrap() / (before.norm() * after.norm());
        assert!(corr.norm() < 0.05, "{corr}");
    }

    #[test]
    fn stationary_matrices_do_not_move() {
        let topo = build_topology(
            &TopologyParams {
                cells: 3,
                ..Default::default()
            },
            &mut RngStream::from_seed(1),
        )
        .unwrap();
        let mut set: ChannelSet<f64> =
            init_channels(&topo, &PathLossParams::default(), 0.5, &SeedTree::new(2)).unwrap();
        let ib = set.g_ib(0, 1).clone();
        let ii = set.g_ii(2, 0).unwrap().clone();
        let ub = set.h_ub(UeId::new(0, 0), 0).clone();
        for _ in 0..50 {
            set.advance();
        }
        assert_eq!(&ib, set.g_ib(0, 1));
        assert_eq!(&ii, set.g_ii(2, 0).unwrap());
        assert_ne!(&ub, set.h_ub(UeId::new(0, 0), 0));
    }

    #[test]
    fn lag_one_autocorrelation_near_rho() {
        let rho = 0.99;
        let mut set = single_link_set(rho, 1, 13);
        let ue = UeId::new(0, 0);
        let mut prev: Complex<f64> = set.ue_bs_link(ue, 0).state()[0];
        let (mut num, mut den) = (Complex::new(0.0, 0.0), 0.0);
        for _ in 0..10_000 {
            set.advance();
            let cur = set.ue_bs_link(ue, 0).state()[0];
            num += prev.conj() * cur;
            den += prev.norm_sqr();
            prev = cur;
        }
        let est = num.re / den;
        assert!((0.98..=1.0).contains(&est), "{est}");
    }
}
