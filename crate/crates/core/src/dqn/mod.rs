//! Deep Q-network learner: dense ReLU network, RMSProp, experience replay,
//! target network and ε-greedy exploration.

mod agent;
mod checkpoint;
mod mlp;
mod replay;
mod rmsprop;

pub use agent::{epsilon_decay, select_action, AgentHyperparams, DqnAgent, QNetwork, Which};
pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use mlp::{argmax, Dense, Gradients, Loss, Mlp, Sample};
pub use replay::{Experience, ExperiencePool};
pub use rmsprop::RmsProp;
