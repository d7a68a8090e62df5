use irs_marl::channel::{LargeScale, NetworkDims, UeId};
use irs_marl::codebook::{build_combiner_codebook, build_irs_codebook, build_power_set};
use irs_marl::harness::{Scenario, SimConfig, Simulation};
use irs_marl::mdp::{
    all_neighbor_sets, build_state, compute_reward, encode_power, exchange_messages, local_scalars, DesignSpace,
    NetworkVariables, Observation, StateInputs, StateLayout, VariableIndices,
};
use irs_marl::numerics::{RngStream, SeedTree};
use irs_marl::Channels;

fn default_sim() -> Simulation {
    let mut config = SimConfig::default();
    config.scenario = Scenario::Dqn1;
    config.horizon = 2;
    let mut sim = Simulation::new(config).unwrap();
    sim.step().unwrap();
    sim
}

#[test]
fn messages_carry_nine_scalars_and_a_penalty() {
    let sim = default_sim();
    for cell in 0..7 {
        let inbox = sim.inbox(cell);
        assert_eq!(inbox.len(), 2);
        let senders: Vec<usize> = inbox.iter().map(|m| m.from).collect();
        assert_eq!(senders, sim.neighbor_sets()[cell].interfered);
        for m in inbox {
            assert_eq!(m.to, cell);
            assert_eq!(m.to_neighbor.len(), 9);
            assert!(m.to_neighbor.iter().all(|&v| v >= 0.0));
            assert!(m.penalty >= 0.0);
            for k in 0..3 {
                for j in 0..3 {
                    let expected = sim.observation().scalar(m.from, j, UeId::new(cell, k));
                    assert_eq!(m.to_neighbor[k * 3 + j], expected);
                }
            }
        }
    }
}

#[test]
fn neighbor_sets_exclude_self() {
    let sim = default_sim();
    for (cell, sets) in sim.neighbor_sets().iter().enumerate() {
        assert_eq!(sets.interfering.len(), 2);
        assert_eq!(sets.interfered.len(), 2);
        assert!(!sets.interfering.contains(&cell) && !sets.interfered.contains(&cell));
        assert!(!sets.degenerate);
    }
}

#[test]
fn state_layout_is_populated_in_order() {
    let sim = default_sim();
    let layout = StateLayout::new(3, 2, 2);
    let cell = 4;
    let local = local_scalars(sim.channels(), sim.variables(), cell).unwrap();
    let sets = &sim.neighbor_sets()[cell];
    let inbox = sim.inbox(cell);
    let state = build_state(
        layout,
        StateInputs {
            cell,
            previous: sim.observation(),
            local_now: &local,
            neighbors: sets,
            inbox,
            variables: sim.variables().indices(),
        },
    )
    .unwrap();
    let obs = sim.observation();
    assert_eq!(state[0], encode_power(obs.scalar(cell, 0, UeId::new(cell, 0))));
    assert_eq!(state[1], encode_power(obs.scalar(cell, 1, UeId::new(cell, 0))));
    assert_eq!(state[9], encode_power(local[0]));
    let i = sets.interfering[1];
    assert_eq!(state[18 + 9 + 3 + 2], encode_power(obs.scalar(cell, 2, UeId::new(i, 1))));
    assert_eq!(&state[36..38], &[sets.interfering[0] as f64, sets.interfering[1] as f64]);
    assert_eq!(state[38], encode_power(inbox[0].to_neighbor[0]));
    assert_eq!(&state[56..58], &[sets.interfered[0] as f64, sets.interfered[1] as f64]);
    let idx = sim.variables().indices();
    assert_eq!(state[58], idx.power[cell][0] as f64);
    assert_eq!(state[61], idx.combiner[cell][0] as f64);
    assert_eq!(state[64], idx.irs[cell].unwrap() as f64);
    assert_eq!(state[65], obs.sum_rate(cell));
    assert!(state[..56].iter().enumerate().all(|(p, v)| (36..38).contains(&p) || (0.0..=2.0).contains(v)));

    let missing = build_state(
        layout,
        StateInputs {
            cell,
            previous: obs,
            local_now: &local,
            neighbors: sets,
            inbox: &inbox[..1],
            variables: idx,
        },
    );
    assert!(matches!(missing, Err(irs_marl::Error::InvalidState(_))));
}

fn network(cells: usize, beta: f64) -> (Channels, DesignSpace<f64>) {
    let dims = NetworkDims::uniform(cells, 2, 3, 2);
    let channels = Channels::init(&dims, &LargeScale::uniform(&dims, beta), 0.9, &SeedTree::new(5)).unwrap();
    let mut s = RngStream::from_seed(5);
    let space = DesignSpace {
        powers: build_power_set(10.0, 1000.0, 10).unwrap(),
        combiners: build_combiner_codebook(3, 8, &mut s).unwrap(),
        irs: build_irs_codebook(2, 8, &mut s).unwrap(),
    };
    (channels, space)
}

#[test]
fn single_cell_has_empty_inbox_and_padded_state() {
    let (channels, space) = network(1, 1e-9);
    let vars = NetworkVariables::resolve(VariableIndices::zeros(channels.layout()), &space).unwrap();
    let obs = Observation::measure(&channels, &vars, 1e-12).unwrap();
    let sets = all_neighbor_sets(obs.norms(), obs.layout(), 2, 2);
    assert!(sets[0].degenerate);
    let inbox = exchange_messages(&obs, &sets, 1e-12).unwrap();
    assert!(inbox[0].is_empty());
    assert_eq!(compute_reward(obs.cell_rates(0), &[]), obs.sum_rate(0));
    let local = local_scalars(&channels, &vars, 0).unwrap();
    let layout = StateLayout::new(2, 2, 2);
    let state = build_state(
        layout,
        StateInputs {
            cell: 0,
            previous: &obs,
            local_now: &local,
            neighbors: &sets[0],
            inbox: &inbox[0],
            variables: vars.indices(),
        },
    )
    .unwrap();
    assert_eq!(state.len(), 34);
    assert!(state[8..12].iter().all(|&v| v == 0.0));
    assert_eq!(&state[16..18], &[-1.0, -1.0]);
    assert_eq!(&state[26..28], &[-1.0, -1.0]);
}

#[test]
fn vanishing_channels_hit_the_encoding_floor() {
    let (channels, space) = network(2, 0.0);
    let vars = NetworkVariables::resolve(VariableIndices::zeros(channels.layout()), &space).unwrap();
    let local = local_scalars(&channels, &vars, 0).unwrap();
    assert!(local.iter().all(|&v| v == 0.0));
    assert!(local.iter().all(|&v| encode_power(v) == 0.0));
}

#[test]
fn inbox_is_a_pure_function_of_measurements() {
    let (channels, space) = network(4, 1e-9);
    let mut idx = VariableIndices::zeros(channels.layout());
    idx.power[2] = vec![9, 3];
    let vars = NetworkVariables::resolve(idx, &space).unwrap();
    let obs = Observation::measure(&channels, &vars, 1e-12).unwrap();
    let sets = all_neighbor_sets(obs.norms(), obs.layout(), 2, 2);
    let a = exchange_messages(&obs, &sets, 1e-12).unwrap();
    let b = exchange_messages(&obs.clone(), &sets, 1e-12).unwrap();
    assert_eq!(a, b);
    for (cell, inbox) in a.iter().enumerate() {
        let forward: Vec<f64> = inbox.iter().map(|m| m.penalty).collect();
        let backward: Vec<f64> = inbox.iter().rev().map(|m| m.penalty).collect();
        let rates = obs.cell_rates(cell);
        assert_eq!(compute_reward(rates, &forward), compute_reward(rates, &backward));
    }
}
