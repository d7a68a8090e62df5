//! Per-BS decision process: neighbor discovery, message exchange, state
//! construction, index-gradient actions, and penalized rewards.

mod action;
mod neighbors;
mod observe;
mod reward;
mod state;
mod variables;

pub use action::{apply_action, decode_action, encode_action, ActionSpace};
pub use neighbors::{all_neighbor_sets, neighbor_sets, NeighborSets};
pub use observe::{local_scalars, Observation};
pub use reward::{compute_penalty, compute_reward, exchange_messages, penalty_at, ExchangeMessage};
pub use state::{build_state, encode_power, StateInputs, StateLayout};
pub use variables::{DesignSpace, NetworkVariables, SetSizes, VariableIndices};
