//! Multi-agent deep reinforcement learning for uplink multi-cell networks
//! assisted by intelligent reflecting surfaces.
//!
//! The math layers are generic over the scalar type; the aliases below fix
//! it to `f64`, which is what the simulation harness runs on.

pub mod channel;
pub mod codebook;
pub mod dqn;
pub mod error;
pub mod harness;
pub mod mdp;
pub mod numerics;
pub mod signal;

pub use error::{Error, Result};

pub type Complex64 = numerics::Complex<f64>;
pub type CVec = numerics::CVector<f64>;
pub type CMat = numerics::CMatrix<f64>;
pub type Channels = channel::ChannelSet<f64>;
pub type Beamformer = signal::IrsBeamformer<f64>;
pub type PowerLevels = codebook::PowerSet<f64>;
pub type Codewords = codebook::Codebook<f64>;
pub type Space = mdp::DesignSpace<f64>;
pub type Variables = mdp::NetworkVariables<f64>;
pub type Measurement = mdp::Observation<f64>;
pub type Message = mdp::ExchangeMessage<f64>;
pub type Network = dqn::Mlp<f64>;
pub type QNet = dqn::QNetwork<f64>;
pub type Agent = dqn::DqnAgent<f64>;
pub type Transition = dqn::Experience<f64>;
