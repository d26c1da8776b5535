//! n-step Q-learning with experience replay.
//!
//! One fresh instance per episode; episodes run exactly |V| steps under an
//! ε-greedy policy with the step reward being the cut change of the chosen
//! flip. Completed n-step windows are pushed to the replay buffer, and one
//! plain-SGD update runs per environment step once the buffer holds a
//! batch. No target network: bootstrap maxima use the current parameters.
//!
//! Three independent sub-streams keep runs bit-reproducible:
//! parameter init `splitmix64(seed ^ 1)`, action selection
//! `splitmix64(seed ^ 2)`, replay sampling `splitmix64(seed ^ 3)`.

use crate::agent::network::{forward, loss_and_grad};
use crate::agent::params::AgentParams;
use crate::agent::replay::{ReplayBuffer, ReplayTransition};
use crate::error::{Error, Result};
use crate::graph::{SpinConfiguration, WeightedGraph};
use crate::ising::delta_cut_flip;
use crate::rng::{splitmix64, Rng};
use std::collections::VecDeque;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct TrainConfig {
    /// Discount factor in `[0, 1]`.
    pub gamma: f64,
    /// Lookahead steps of the TD target.
    pub n_step: usize,
    pub episodes: usize,
    /// ε decays linearly from `epsilon_start` to `epsilon_end` over
    /// `epsilon_anneal_fraction` of the episodes, then stays flat.
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    pub epsilon_anneal_fraction: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub replay_capacity: usize,
    /// Embedding width `p`.
    pub embedding_dim: usize,
    /// Message-passing rounds `T`.
    pub rounds: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            gamma: 0.90,
            n_step: 1,
            episodes: 1000,
            epsilon_start: 1.0,
            epsilon_end: 0.05,
            epsilon_anneal_fraction: 0.5,
            learning_rate: 1e-3,
            batch_size: 32,
            replay_capacity: 10_000,
            embedding_dim: 64,
            rounds: 3,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Config(format!("gamma {} not in [0, 1]", self.gamma)));
        }
        if self.n_step < 1 {
            return Err(Error::Config("n_step must be ≥ 1".into()));
        }
        if self.episodes < 1 || self.batch_size < 1 || self.replay_capacity < 1 {
            return Err(Error::Config("episode/batch/replay counts must be positive".into()));
        }
        if self.embedding_dim < 1 {
            return Err(Error::Config("embedding width must be ≥ 1".into()));
        }
        if !(self.epsilon_anneal_fraction > 0.0 && self.epsilon_anneal_fraction <= 1.0) {
            return Err(Error::Config("epsilon anneal fraction must be in (0, 1]".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::Config("learning rate must be positive".into()));
        }
        Ok(())
    }

    fn epsilon(&self, episode: usize) -> f64 {
        let horizon = ((self.episodes as f64) * self.epsilon_anneal_fraction).ceil();
        let t = (episode as f64 / horizon).min(1.0);
        self.epsilon_start + t * (self.epsilon_end - self.epsilon_start)
    }
}

/// Trains an agent; `instance_source(episode)` supplies one fresh instance
/// per episode. Returns the final parameters.
pub fn train<F>(config: &TrainConfig, mut instance_source: F) -> Result<AgentParams>
where
    F: FnMut(usize) -> Result<WeightedGraph>,
{
    config.validate()?;
    let mut params = AgentParams::init(
        config.embedding_dim,
        config.rounds,
        splitmix64(config.seed ^ 1),
    )?;
    let mut rng_action = Rng::from_seed(splitmix64(config.seed ^ 2));
    let mut rng_sample = Rng::from_seed(splitmix64(config.seed ^ 3));
    let mut replay = ReplayBuffer::new(config.replay_capacity);

    for episode in 0..config.episodes {
        let graph = Arc::new(instance_source(episode)?);
        let n = graph.node_count();
        let epsilon = config.epsilon(episode);

        let mut flipped = vec![false; n];
        let mut spins = SpinConfiguration::all_plus(n);
        // (state snapshot, action, reward) windows awaiting their successor.
        let mut pending: VecDeque<(Vec<bool>, usize, f64)> = VecDeque::new();

        for step in 0..n {
            let action = if rng_action.next_f64() < epsilon {
                let free: Vec<usize> = (0..n).filter(|&v| !flipped[v]).collect();
                free[rng_action.next_below(free.len() as u64) as usize]
            } else {
                forward(&graph, &flipped, &params)?
                    .argmax_q(&params)
                    .expect("non-terminal state has actions")
            };

            let snapshot = flipped.clone();
            let reward = delta_cut_flip(&graph, &spins, action)?;
            spins.flip(action);
            flipped[action] = true;
            pending.push_back((snapshot, action, reward));

            if pending.len() == config.n_step {
                let ret = discounted_return(&pending, config.gamma);
                let (state, act, _) = pending.pop_front().expect("nonempty");
                let terminal = flipped.iter().all(|&f| f);
                replay.push(ReplayTransition::new(
                    episode as u64,
                    Arc::clone(&graph),
                    state,
                    act,
                    ret,
                    if terminal { None } else { Some(flipped.clone()) },
                    config.n_step as u32,
                ));
            }
            if step == n - 1 {
                // Remaining windows end at the terminal state.
                while !pending.is_empty() {
                    let ret = discounted_return(&pending, config.gamma);
                    let power = pending.len() as u32;
                    let (state, act, _) = pending.pop_front().expect("nonempty");
                    replay.push(ReplayTransition::new(
                        episode as u64,
                        Arc::clone(&graph),
                        state,
                        act,
                        ret,
                        None,
                        power,
                    ));
                }
            }

            if replay.len() >= config.batch_size {
                let batch = replay.sample(config.batch_size, &mut rng_sample);
                let (_, grads) = loss_and_grad(&params, &batch, config.gamma)?;
                params.gradient_step(&grads, config.learning_rate);
            }
        }
    }
    Ok(params)
}

fn discounted_return(pending: &VecDeque<(Vec<bool>, usize, f64)>, gamma: f64) -> f64 {
    let mut ret = 0.0;
    let mut factor = 1.0;
    for (_, _, r) in pending {
        ret += factor * r;
        factor *= gamma;
    }
    ret
}
