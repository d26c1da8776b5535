//! Learned construction heuristic: message-passing embeddings, a Q-value
//! readout, n-step Q-learning with experience replay, greedy rollout, and
//! text-format model persistence.

mod episode;
mod network;
mod params;
mod policy;
mod replay;
mod train;

pub use episode::EpisodeState;
pub use network::{embed, loss_and_grad, loss_and_grad_with_targets, q_values, td_targets};
pub use params::{AgentGrads, AgentParams};
pub use policy::{greedy_construct, greedy_rollout, GreedyPolicy, GreedyRollout};
pub use replay::{ReplayBuffer, ReplayTransition};
pub use train::{train, TrainConfig};
