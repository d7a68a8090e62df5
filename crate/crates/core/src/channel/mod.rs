//! Network geometry, large-scale fading and temporally correlated
//! small-scale channels.

mod fading;
mod pathloss;
mod topology;

pub use fading::{
    init_channels, jakes_rho, ChannelSet, FadingLink, LargeScale, MobilityParams, NetworkDims,
    SPEED_OF_LIGHT,
};
pub use pathloss::{path_loss_db, PathLossParams};
pub use topology::{
    build_topology, distance, hex_circumradius, hex_spiral_centers, inside_hexagon, CellSite,
    Point, Topology, TopologyParams, UeId, UeLayout,
};
