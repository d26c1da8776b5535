//! Experience replay for n-step Q-learning.

use crate::graph::WeightedGraph;
use crate::rng::Rng;
use std::collections::VecDeque;
use std::sync::Arc;

/// One n-step transition. The stored return already sums the discounted
/// rewards `Σ_{k<steps} γ^k r_{t+k}`; the bootstrap term uses
/// `γ^discount_power · max_a Q(next, a)` and is dropped for terminal
/// successors (`next_flipped == None`).
#[derive(Debug, Clone)]
pub struct ReplayTransition {
    pub instance_id: u64,
    pub graph: Arc<WeightedGraph>,
    pub state_flipped: Vec<bool>,
    pub action: usize,
    pub n_step_return: f64,
    pub next_flipped: Option<Vec<bool>>,
    pub discount_power: u32,
}

impl ReplayTransition {
    pub fn new(
        instance_id: u64,
        graph: Arc<WeightedGraph>,
        state_flipped: Vec<bool>,
        action: usize,
        n_step_return: f64,
        next_flipped: Option<Vec<bool>>,
        discount_power: u32,
    ) -> Self {
        assert!(
            action < state_flipped.len() && !state_flipped[action],
            "action {action} not available in the stored state"
        );
        ReplayTransition {
            instance_id,
            graph,
            state_flipped,
            action,
            n_step_return,
            next_flipped,
            discount_power,
        }
    }
}

/// Bounded FIFO buffer with uniform sampling (with replacement).
#[derive(Debug)]
pub struct ReplayBuffer {
    buf: VecDeque<ReplayTransition>,
    capacity: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        ReplayBuffer {
            buf: VecDeque::with_capacity(capacity.min(1 << 20)),
            capacity,
        }
    }

    pub fn push(&mut self, t: ReplayTransition) {
        if self.buf.len() == self.capacity {
            self.buf.pop_front();
        }
        self.buf.push_back(t);
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn sample<'a>(&'a self, batch: usize, rng: &mut Rng) -> Vec<&'a ReplayTransition> {
        (0..batch)
            .map(|_| &self.buf[rng.next_below(self.buf.len() as u64) as usize])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dummy(id: u64) -> ReplayTransition {
        let g = Arc::new(WeightedGraph::new(2, vec![(0, 1, 1.0)]).unwrap());
        ReplayTransition::new(id, g, vec![false, false], 0, 1.0, None, 1)
    }

    #[test]
    fn capacity_evicts_oldest() {
        let mut rb = ReplayBuffer::new(3);
        for i in 0..5 {
            rb.push(dummy(i));
        }
        assert_eq!(rb.len(), 3);
        let mut rng = Rng::from_seed(1);
        assert!(rb.sample(10, &mut rng).iter().all(|t| t.instance_id >= 2));
    }

    #[test]
    #[should_panic]
    fn action_must_be_available() {
        let g = Arc::new(WeightedGraph::new(2, vec![(0, 1, 1.0)]).unwrap());
        ReplayTransition::new(0, g, vec![true, false], 0, 0.0, None, 1);
    }
}
