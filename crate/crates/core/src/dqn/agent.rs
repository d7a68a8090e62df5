use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Real, RngStream};

use super::mlp::{argmax, Loss, Mlp, Sample};
use super::replay::{Experience, ExperiencePool};
use super::rmsprop::RmsProp;

/// Learner settings shared by every agent of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgentHyperparams {
    pub gamma: f64,
    pub epsilon0: f64,
    pub epsilon_min: f64,
    /// Per-epoch multiplicative decay, `1 − 10^{−3.5}` by default.
    pub epsilon_decay: f64,
    pub batch: usize,
    pub pool: usize,
    /// Target network is aligned every this many decision epochs.
    pub align_every: usize,
    pub learning_rate: f64,
    pub rms_decay: f64,
    pub rms_epsilon: f64,
    pub loss: Loss,
}

impl Default for AgentHyperparams {
    fn default() -> Self {
        Self {
            gamma: 0.7,
            epsilon0: 0.6,
            epsilon_min: 0.005,
            epsilon_decay: 1.0 - 10f64.powf(-3.5),
            batch: 10,
            pool: 300,
            align_every: 50,
            learning_rate: 1e-3,
            rms_decay: 0.9,
            rms_epsilon: 1e-8,
            loss: Loss::Mse,
        }
    }
}

impl AgentHyperparams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(0.0..1.0).contains(&self.gamma) {
            return bad("gamma must lie in [0, 1)");
        }
        if !(0.0..=1.0).contains(&self.epsilon_min) || !(self.epsilon_min..=1.0).contains(&self.epsilon0) {
            return bad("need 0 <= epsilon_min <= epsilon0 <= 1");
        }
        if !(0.0..=1.0).contains(&self.epsilon_decay) {
            return bad("epsilon_decay must lie in [0, 1]");
        }
        if self.batch == 0 || self.batch > self.pool {
            return bad("need 1 <= batch <= pool");
        }
        if self.align_every == 0 {
            return bad("align_every must be positive");
        }
        if !(self.learning_rate > 0.0) || !(0.0..1.0).contains(&self.rms_decay) || !(self.rms_epsilon >= 0.0) {
            return bad("invalid optimizer settings");
        }
        Ok(())
    }
}

/// `max(ε_min, decay·ε)`.
pub fn epsilon_decay(prev: f64, hp: &AgentHyperparams) -> f64 {
    (hp.epsilon_decay * prev).max(hp.epsilon_min)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Train,
    Target,
}

/// Train and target networks with the train network's optimizer state.
#[derive(Debug, Clone)]
pub struct QNetwork<T> {
    train: Mlp<T>,
    target: Mlp<T>,
    optimizer: RmsProp<T>,
    loss: Loss,
}

impl<T: Real> QNetwork<T> {
    /// Both networks start from independent random weights.
    pub fn new(sizes: &[usize], hp: &AgentHyperparams, stream: &mut RngStream) -> Result<Self> {
        let train = Mlp::he_uniform(sizes, stream)?;
        let target = Mlp::he_uniform(sizes, stream)?;
        Ok(Self::from_networks(train, target, hp))
    }

    pub fn from_networks(train: Mlp<T>, target: Mlp<T>, hp: &AgentHyperparams) -> Self {
        let optimizer = RmsProp::new(&train, T::lit(hp.learning_rate), T::lit(hp.rms_decay), T::lit(hp.rms_epsilon));
        Self {
            train,
            target,
            optimizer,
            loss: hp.loss,
        }
    }

    pub fn network(&self, which: Which) -> &Mlp<T> {
        match which {
            Which::Train => &self.train,
            Which::Target => &self.target,
        }
    }

    pub fn q_values(&self, which: Which, state: &[T]) -> Result<Vec<T>> {
        self.network(which).forward(state)
    }

    pub fn actions(&self) -> usize {
        self.train.output_len()
    }

    /// One RMSProp step on `(Q(s,a) − (r + γ·max Q⁻(s′,·)))²`; returns the pre-update loss.
    pub fn train_step(&mut self, batch: &[&Experience<T>], gamma: T) -> Result<T> {
        let targets = batch
            .iter()
            .map(|e| {
                let next = self.target.forward(&e.next_state)?;
                let best = next.iter().copied().fold(T::neg_infinity(), T::max);
                Ok(e.reward + gamma * best)
            })
            .collect::<Result<Vec<T>>>()?;
        let samples: Vec<Sample<T>> = batch
            .iter()
            .zip(&targets)
            .map(|(e, &target)| Sample {
                state: &e.state,
                action: e.action,
                target,
            })
            .collect();
        let (loss, grads) = self.train.loss_and_gradients(&samples, self.loss)?;
        self.optimizer.step(&mut self.train, &grads);
        Ok(loss)
    }

    pub fn align_target(&mut self) {
        self.target = self.train.clone();
    }

    pub fn replace_train(&mut self, net: Mlp<T>) -> Result<()> {
        if net.sizes() != self.train.sizes() {
            return Err(Error::invalid("replacement network has a different shape"));
        }
        self.train = net;
        Ok(())
    }
}

/// ε-greedy choice over the train network; greedy ties go to the lowest index.
pub fn select_action<T: Real>(net: &QNetwork<T>, state: &[T], epsilon: f64, stream: &mut RngStream) -> Result<usize> {
    if stream.uniform() < epsilon {
        return Ok(stream.index(net.actions()));
    }
    Ok(argmax(&net.q_values(Which::Train, state)?))
}

/// One BS's learner: networks, replay pool, exploration rate and private RNG.
#[derive(Debug, Clone)]
pub struct DqnAgent<T> {
    net: QNetwork<T>,
    pool: ExperiencePool<T>,
    hp: AgentHyperparams,
    epsilon: f64,
    epochs: usize,
    stream: RngStream,
}

impl<T: Real> DqnAgent<T> {
    pub fn new(sizes: &[usize], hp: AgentHyperparams, mut stream: RngStream) -> Result<Self> {
        hp.validate()?;
        let net = QNetwork::new(sizes, &hp, &mut stream)?;
        Ok(Self {
            net,
            pool: ExperiencePool::new(hp.pool),
            epsilon: hp.epsilon0,
            hp,
            epochs: 0,
            stream,
        })
    }

    pub fn network(&self) -> &QNetwork<T> {
        &self.net
    }

    pub fn network_mut(&mut self) -> &mut QNetwork<T> {
        &mut self.net
    }

    pub fn pool(&self) -> &ExperiencePool<T> {
        &self.pool
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn epochs(&self) -> usize {
        self.epochs
    }

    pub fn remember(&mut self, exp: Experience<T>) {
        self.pool.push(exp);
    }

    /// Trains once if the pool holds a full batch, then counts the epoch and
    /// aligns the target network on schedule. Returns the loss when trained.
    pub fn learn(&mut self) -> Result<Option<T>> {
        let batch = self.pool.sample(self.hp.batch, &mut self.stream);
        let loss = if batch.is_empty() {
            None
        } else {
            Some(self.net.train_step(&batch, T::lit(self.hp.gamma))?)
        };
        self.epochs += 1;
        if self.epochs.is_multiple_of(self.hp.align_every) {
            self.net.align_target();
        }
        Ok(loss)
    }

    /// ε-greedy action with the current ε, which then decays by one epoch.
    pub fn act(&mut self, state: &[T]) -> Result<usize> {
        let a = select_action(&self.net, state, self.epsilon, &mut self.stream)?;
        self.epsilon = epsilon_decay(self.epsilon, &self.hp);
        Ok(a)
    }

    /// Greedy action without exploration or decay.
    pub fn greedy(&self, state: &[T]) -> Result<usize> {
        Ok(argmax(&self.net.q_values(Which::Train, state)?))
    }

    /// A uniformly random action from the agent's own stream.
    pub fn random_action(&mut self) -> usize {
        self.stream.index(self.net.actions())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dqn::mlp::Dense;

    fn hp() -> AgentHyperparams {
        AgentHyperparams::default()
    }

    #[test]
    fn defaults_validate() {
        hp().validate().unwrap();
        let mut bad = hp();
        bad.batch = 301;
        assert!(bad.validate().is_err());
        bad = hp();
        bad.gamma = 1.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn epsilon_schedule() {
        let hp = hp();
        assert!((epsilon_decay(0.6, &hp) - 0.6 * (1.0 - 10f64.powf(-3.5))).abs() < 1e-15);
        assert!((epsilon_decay(0.6, &hp) - 0.59981).abs() < 1e-5);
        assert_eq!(epsilon_decay(hp.epsilon_min, &hp), hp.epsilon_min);
        let mut e = hp.epsilon0;
        for _ in 0..50_000 {
            let next = epsilon_decay(e, &hp);
            assert!(next <= e && next >= hp.epsilon_min);
            e = next;
        }
        assert_eq!(e, hp.epsilon_min);
    }

    fn crafted(dominant: usize) -> QNetwork<f64> {
        let mut out = Dense::zeros(2, 5);
        out.biases[dominant] = 1.0;
        let net = Mlp::from_layers(vec![Dense::zeros(3, 2), out]).unwrap();
        QNetwork::from_networks(net.clone(), net, &hp())
    }

    #[test]
    fn greedy_picks_dominant_action() {
        let net = crafted(3);
        let mut s = RngStream::from_seed(0);
        for _ in 0..100 {
            assert_eq!(select_action(&net, &[0.1, 0.2, 0.3], 0.0, &mut s).unwrap(), 3);
        }
        let flat = QNetwork::from_networks(Mlp::zeros(&[3, 5]).unwrap(), Mlp::zeros(&[3, 5]).unwrap(), &hp());
        assert_eq!(select_action(&flat, &[0.0; 3], 0.0, &mut s).unwrap(), 0);
    }

    #[test]
    fn full_exploration_is_uniform() {
        let net = crafted(3);
        let mut s = RngStream::from_seed(1);
        let mut counts = [0usize; 5];
        let n = 100_000;
        for _ in 0..n {
            counts[select_action(&net, &[0.0; 3], 1.0, &mut s).unwrap()] += 1;
        }
        for c in counts {
            assert!((c as f64 / (n as f64 / 5.0) - 1.0).abs() < 0.02);
        }
    }

    #[test]
    fn bandit_regression_converges_to_reward() {
        let mut hp = hp();
        hp.gamma = 0.0;
        let mut net = QNetwork::<f64>::new(&[4, 8, 8, 3], &hp, &mut RngStream::from_seed(2)).unwrap();
        let exp = Experience {
            state: vec![0.5, -0.2, 1.0, 0.3],
            action: 1,
            reward: 1.7,
            next_state: vec![0.0; 4],
        };
        let batch = vec![&exp];
        for _ in 0..5000 {
            net.train_step(&batch, 0.0).unwrap();
        }
        let q = net.q_values(Which::Train, &exp.state).unwrap()[1];
        assert!((q - 1.7).abs() < 1e-3, "{q}");
    }

    #[test]
    fn identical_batch_loss_does_not_increase() {
        let mut net = QNetwork::<f64>::new(&[4, 8, 8, 3], &hp(), &mut RngStream::from_seed(3)).unwrap();
        let exp = Experience {
            state: vec![0.1, 0.9, -0.4, 0.2],
            action: 2,
            reward: -0.8,
            next_state: vec![0.3, 0.3, 0.3, 0.3],
        };
        let batch = vec![&exp; 10];
        let mut prev = f64::INFINITY;
        for _ in 0..100 {
            let loss = net.train_step(&batch, 0.7).unwrap();
            assert!(loss <= prev + 1e-12, "{loss} > {prev}");
            prev = loss;
        }
    }

    #[test]
    fn alignment_copies_and_then_diverges() {
        let mut net = QNetwork::<f64>::new(&[4, 8, 8, 3], &hp(), &mut RngStream::from_seed(4)).unwrap();
        let x = [0.3, -0.1, 0.7, 0.2];
        assert_ne!(net.q_values(Which::Train, &x).unwrap(), net.q_values(Which::Target, &x).unwrap());
        net.align_target();
        assert_eq!(net.q_values(Which::Train, &x).unwrap(), net.q_values(Which::Target, &x).unwrap());
        let exp = Experience {
            state: x.to_vec(),
            action: 0,
            reward: 1.0,
            next_state: x.to_vec(),
        };
        let target_before = net.network(Which::Target).clone();
        net.train_step(&[&exp], 0.7).unwrap();
        assert_eq!(net.network(Which::Target), &target_before);
        assert_ne!(net.q_values(Which::Train, &x).unwrap(), net.q_values(Which::Target, &x).unwrap());
    }

    #[test]
    fn agent_aligns_every_fifty_epochs() {
        let mut agent = DqnAgent::<f64>::new(&[2, 4, 4, 2], hp(), RngStream::from_seed(5)).unwrap();
        let mut aligned = Vec::new();
        for epoch in 1..=200 {
            agent.remember(Experience {
                state: vec![0.1, 0.2],
                action: epoch % 2,
                reward: 1.0,
                next_state: vec![0.2, 0.1],
            });
            agent.learn().unwrap();
            let net = agent.network();
            if net.network(Which::Train) == net.network(Which::Target) {
                aligned.push(epoch);
            }
        }
        assert_eq!(aligned, vec![50, 100, 150, 200]);
    }

    #[test]
    fn agent_learns_only_with_full_batch() {
        let mut agent = DqnAgent::<f64>::new(&[2, 4, 4, 2], hp(), RngStream::from_seed(6)).unwrap();
        for i in 0..10 {
            agent.remember(Experience {
                state: vec![0.0, 1.0],
                action: 0,
                reward: 0.5,
                next_state: vec![1.0, 0.0],
            });
            let loss = agent.learn().unwrap();
            assert_eq!(loss.is_some(), i == 9);
        }
    }
}
