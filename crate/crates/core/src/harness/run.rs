use rayon::prelude::*;

use crate::channel::{build_topology, init_channels, ChannelSet, Topology};
use crate::codebook::{build_combiner_codebook, build_irs_codebook, build_power_set};
use crate::dqn::{DqnAgent, Experience};
use crate::error::{Error, Result};
use crate::mdp::{
    all_neighbor_sets, apply_action, build_state, compute_reward, exchange_messages, local_scalars, ActionSpace,
    DesignSpace, ExchangeMessage, NeighborSets, NetworkVariables, Observation, StateInputs, StateLayout,
    VariableIndices,
};
use crate::numerics::{db_to_linear, RngStream, SeedTree};

use super::baseline::{apply_mrc, baseline_policy};
use super::config::SimConfig;
use super::metrics::{rate_statistics, reward_means, BsRecord, SlotRecord, Summary, UeRecord};
use super::scenario::Scenario;

struct Learner {
    agent: DqnAgent<f64>,
    actions: ActionSpace,
    /// State and action of the previous decision, awaiting its successor state.
    pending: Option<(Vec<f64>, usize)>,
}

enum Controller {
    Learned(Box<Learner>),
    Fixed(RngStream),
}

/// Result of one agent's decision in a slot.
struct Decision {
    gradients: Option<Vec<i8>>,
    loss: Option<f64>,
    epsilon: Option<f64>,
}

/// Slot-by-slot multi-cell simulation driven by a [`SimConfig`].
pub struct Simulation {
    config: SimConfig,
    policies: Vec<Scenario>,
    topology: Topology,
    channels: ChannelSet<f64>,
    space: DesignSpace<f64>,
    noise: f64,
    state_layout: StateLayout,
    controllers: Vec<Controller>,
    vars: NetworkVariables<f64>,
    obs: Observation<f64>,
    sets: Vec<NeighborSets>,
    inbox: Vec<Vec<ExchangeMessage<f64>>>,
    rewards: Vec<f64>,
    slot: usize,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let seeds = SeedTree::new(config.seed);
        let topology = build_topology(&config.topology, &mut seeds.stream("topology"))?;
        let rho = config.channel.rho()?;
        let channels = init_channels(&topology, &config.channel.path_loss, rho, &seeds)?;

        let cb = &config.codebooks;
        let cb_seeds = SeedTree::new(cb.seed.unwrap_or(config.seed));
        let space = DesignSpace {
            powers: build_power_set(db_to_linear(cb.p_min_dbm), db_to_linear(cb.p_max_dbm), cb.power_levels)?,
            combiners: build_combiner_codebook(
                config.topology.antennas,
                cb.combiner_size,
                &mut cb_seeds.stream("codebook/combiner"),
            )?,
            irs: build_irs_codebook(config.topology.irs_elements, cb.irs_size, &mut cb_seeds.stream("codebook/irs"))?,
        };
        let sizes = space.sizes();
        let k = config.topology.ues_per_cell;
        let state_layout = StateLayout::new(k, config.mdp.b1, config.mdp.b2);
        let policies = config.policies();
        let noise = config.channel.noise();

        let layout = topology.layout();
        let mut init = seeds.stream("init");
        let mut indices = VariableIndices::zeros(&layout);
        for cell in 0..layout.cells() {
            for v in &mut indices.power[cell] {
                *v = init.index(sizes.power);
            }
            for v in &mut indices.combiner[cell] {
                *v = init.index(sizes.combiner);
            }
            indices.irs[cell] = match policies[cell] {
                Scenario::MmNoIrs => None,
                _ => Some(init.index(sizes.irs)),
            };
        }

        let mut controllers = Vec::with_capacity(layout.cells());
        for (cell, &policy) in policies.iter().enumerate() {
            let controller = match (policy.arity(), policy.hidden_layers()) {
                (Some(arity), Some([h1, h2])) => {
                    let actions = ActionSpace::new(arity, k, !policy.uses_mrc())?;
                    let sizes = [state_layout.len(), h1, h2, actions.size()];
                    let mut agent = DqnAgent::new(&sizes, config.agent.clone(), seeds.stream(&format!("agent/{cell}")))?;
                    let first = actions.decode(agent.random_action())?;
                    indices = apply_action(&indices, cell, &first, &actions, space.sizes())?;
                    Controller::Learned(Box::new(Learner {
                        agent,
                        actions,
                        pending: None,
                    }))
                }
                _ => Controller::Fixed(seeds.stream(&format!("policy/{cell}"))),
            };
            controllers.push(controller);
        }

        let vars = NetworkVariables::resolve(indices, &space)?;
        let mrc_cells: Vec<usize> = (0..layout.cells()).filter(|&c| policies[c].uses_mrc()).collect();
        let vars = apply_mrc(&channels, vars, &space, &mrc_cells)?;
        let obs = Observation::measure(&channels, &vars, noise)?;
        let mut sim = Self {
            config,
            policies,
            topology,
            channels,
            space,
            noise,
            state_layout,
            controllers,
            vars,
            obs,
            sets: Vec::new(),
            inbox: Vec::new(),
            rewards: Vec::new(),
            slot: 0,
        };
        sim.observe_neighbors(true)?;
        Ok(sim)
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn channels(&self) -> &ChannelSet<f64> {
        &self.channels
    }

    pub fn space(&self) -> &DesignSpace<f64> {
        &self.space
    }

    pub fn variables(&self) -> &NetworkVariables<f64> {
        &self.vars
    }

    pub fn observation(&self) -> &Observation<f64> {
        &self.obs
    }

    pub fn neighbor_sets(&self) -> &[NeighborSets] {
        &self.sets
    }

    pub fn inbox(&self, cell: usize) -> &[ExchangeMessage<f64>] {
        &self.inbox[cell]
    }

    pub fn slot(&self) -> usize {
        self.slot
    }

    /// Neighbor sets, message exchange and rewards from the current observation.
    fn observe_neighbors(&mut self, refresh: bool) -> Result<()> {
        let layout = self.obs.layout().clone();
        if refresh {
            self.sets = all_neighbor_sets(self.obs.norms(), &layout, self.config.mdp.b1, self.config.mdp.b2);
        }
        self.inbox = exchange_messages(&self.obs, &self.sets, self.noise)?;
        self.rewards = (0..layout.cells())
            .map(|c| {
                let penalties: Vec<f64> = self.inbox[c].iter().map(|m| m.penalty).collect();
                compute_reward(self.obs.cell_rates(c), &penalties)
            })
            .collect();
        Ok(())
    }

    /// Advances one slot and returns what was measured in it.
    pub fn step(&mut self) -> Result<SlotRecord> {
        let slot = self.slot;
        let numerical = |what: String| Error::Numerical { slot, what };
        self.channels.advance();
        let cells = self.policies.len();

        let local_now: Vec<Option<Vec<f64>>> = (0..cells)
            .map(|c| match self.controllers[c] {
                Controller::Learned(_) => local_scalars(&self.channels, &self.vars, c).map(Some),
                Controller::Fixed(_) => Ok(None),
            })
            .collect::<Result<_>>()?;

        let obs = &self.obs;
        let sets = &self.sets;
        let inbox = &self.inbox;
        let rewards = &self.rewards;
        let indices = self.vars.indices();
        let layout = self.state_layout;
        let decisions: Vec<Decision> = self
            .controllers
            .par_iter_mut()
            .enumerate()
            .map(|(cell, controller)| -> Result<Decision> {
                let Controller::Learned(learner) = controller else {
                    return Ok(Decision {
                        gradients: None,
                        loss: None,
                        epsilon: None,
                    });
                };
                let local = local_now[cell].as_deref().expect("learned cells measure locally");
                let state = build_state(
                    layout,
                    StateInputs {
                        cell,
                        previous: obs,
                        local_now: local,
                        neighbors: &sets[cell],
                        inbox: &inbox[cell],
                        variables: indices,
                    },
                )?;
                if let Some((prev_state, prev_action)) = learner.pending.take() {
                    learner.agent.remember(Experience {
                        state: prev_state,
                        action: prev_action,
                        reward: rewards[cell],
                        next_state: state.clone(),
                    });
                }
                let loss = learner.agent.learn()?;
                let action = learner.agent.act(&state)?;
                let gradients = learner.actions.decode(action)?;
                learner.pending = Some((state, action));
                Ok(Decision {
                    gradients: Some(gradients),
                    loss,
                    epsilon: Some(learner.agent.epsilon()),
                })
            })
            .collect::<Result<_>>()?;

        let mut next = self.vars.indices().clone();
        let sizes = self.space.sizes();
        for cell in 0..cells {
            match (&mut self.controllers[cell], &decisions[cell].gradients) {
                (Controller::Learned(learner), Some(g)) => {
                    next = apply_action(&next, cell, g, &learner.actions, sizes)?;
                }
                (Controller::Fixed(stream), _) => {
                    baseline_policy(self.policies[cell], cell, &mut next, &self.space, stream)?;
                }
                _ => unreachable!("learned cells always decide"),
            }
        }
        let vars = NetworkVariables::resolve(next, &self.space)?;
        let mrc_cells: Vec<usize> = (0..cells).filter(|&c| self.policies[c].uses_mrc()).collect();
        self.vars = apply_mrc(&self.channels, vars, &self.space, &mrc_cells)?;

        self.obs = Observation::measure(&self.channels, &self.vars, self.noise)?;
        if !self.obs.is_finite() {
            return Err(numerical("non-finite SINR or rate".into()));
        }
        let refresh = (slot + 1).is_multiple_of(self.config.mdp.neighbor_refresh);
        self.observe_neighbors(refresh)?;

        let idx = self.vars.indices();
        let ues = self
            .obs
            .layout()
            .ids()
            .enumerate()
            .map(|(flat, ue)| UeRecord {
                cell: ue.cell,
                ue: ue.index,
                sinr_db: 10.0 * self.obs.sinr()[flat].log10(),
                rate: self.obs.rates()[flat],
                power_idx: idx.power[ue.cell][ue.index],
                combiner_idx: idx.combiner[ue.cell][ue.index],
            })
            .collect();
        let bss = (0..cells)
            .map(|cell| {
                let penalty_sum = self.inbox[cell].iter().map(|m| m.penalty).sum();
                let d = &decisions[cell];
                let reward = self.rewards[cell];
                if !reward.is_finite() || d.loss.is_some_and(|l| !l.is_finite()) {
                    return Err(numerical(format!("non-finite reward or loss at BS {cell}")));
                }
                Ok(BsRecord {
                    cell,
                    reward,
                    penalty_sum,
                    epsilon: d.epsilon,
                    loss: d.loss,
                    irs_idx: idx.irs[cell],
                })
            })
            .collect::<Result<_>>()?;
        self.slot += 1;
        Ok(SlotRecord { slot, ues, bss })
    }
}

/// Records and summary of a finished run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<SlotRecord>,
    pub summary: Summary,
    pub topology: Topology,
    pub space: DesignSpace<f64>,
}

pub fn run_scenario(config: &SimConfig) -> Result<RunOutput> {
    let started = std::time::Instant::now();
    let mut sim = Simulation::new(config.clone())?;
    let mut records = Vec::with_capacity(config.horizon);
    for _ in 0..config.horizon {
        records.push(sim.step()?);
    }
    let (final_ma_rate, mean_rate_all_ue) = rate_statistics(&records, config.output.ma_window);
    let mut echo = serde_json::to_value(config)?;
    if let Some(out) = echo.get_mut("output").and_then(|o| o.as_object_mut()) {
        out.remove("dir");
    }
    let summary = Summary {
        scheme: config.scheme_name(),
        slots: records.len(),
        final_ma_rate,
        mean_rate_all_ue,
        config_hash: config.hash(),
        runtime_s: config.output.record_runtime.then(|| started.elapsed().as_secs_f64()),
        ma_window: config.output.ma_window,
        per_cell_reward_mean: reward_means(&records, config.topology.cells),
        config: echo,
    };
    Ok(RunOutput {
        records,
        summary,
        topology: sim.topology,
        space: sim.space,
    })
}
